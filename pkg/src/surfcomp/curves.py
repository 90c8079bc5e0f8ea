"""Numerical n-complement criteria on proper curves.

A configuration ``(C, B)`` with ``C`` a chain, wheel or irreducible curve is
n-complementary iff ``K + floor(B) + floor((n+1){B})/n`` has non-positive
degree on every component.  Points where a component meets its neighbours
are reduced and counted separately from the listed boundary.
"""
from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .arith import floor_shift, format_rational, in_lattice, multiplicity, to_rational

IRREDUCIBLE = "irreducible"
CHAIN = "chain"
WHEEL = "wheel"
SHAPES = (IRREDUCIBLE, CHAIN, WHEEL)

#: Default search bound for minimal indices; (SM) indices never exceed it.
DEFAULT_BOUND = 66


@dataclass(frozen=True)
class Boundary:
    """Labelled multiplicities at distinct points."""

    entries: tuple[tuple[str, Fraction], ...] = ()

    def __post_init__(self):
        entries = tuple((str(label), multiplicity(b)) for label, b in self.entries)
        labels = [label for label, _ in entries]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate boundary labels: {labels}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, mults: Iterable, prefix: str = "P") -> "Boundary":
        """Boundary with automatic labels ``P1, P2, ...``."""
        return cls(tuple((f"{prefix}{i}", b) for i, b in enumerate(mults, 1)))

    @property
    def mults(self) -> tuple[Fraction, ...]:
        return tuple(b for _, b in self.entries)

    @property
    def degree(self) -> Fraction:
        return sum(self.mults, Fraction(0))

    def __len__(self):
        return len(self.entries)

    def to_json(self):
        return [{"label": label, "mult": format_rational(b)} for label, b in self.entries]


@dataclass(frozen=True)
class CurveComponent:
    genus: int = 0
    boundary: Boundary = field(default_factory=Boundary)

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError("genus must be non-negative")
        if not isinstance(self.boundary, Boundary):
            object.__setattr__(self, "boundary", Boundary.of(self.boundary))


@dataclass(frozen=True)
class CurveConfig:
    shape: str
    components: tuple[CurveComponent, ...]

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ValueError(f"unknown shape {self.shape!r}; expected one of {SHAPES}")
        comps = tuple(self.components)
        if not comps:
            raise ValueError("a curve needs at least one component")
        if self.shape == IRREDUCIBLE and len(comps) != 1:
            raise ValueError("an irreducible curve has exactly one component")
        if self.shape == WHEEL and len(comps) < 2:
            raise ValueError("a wheel needs at least two components; "
                             "model a 1-wheel as an irreducible genus-1 curve")
        object.__setattr__(self, "components", comps)

    @classmethod
    def irreducible(cls, mults=(), genus: int = 0) -> "CurveConfig":
        return cls(IRREDUCIBLE, (CurveComponent(genus, Boundary.of(mults)),))

    @classmethod
    def chain(cls, *boundaries) -> "CurveConfig":
        return cls(CHAIN, tuple(CurveComponent(0, Boundary.of(b)) for b in boundaries))

    @classmethod
    def wheel(cls, *boundaries) -> "CurveConfig":
        return cls(WHEEL, tuple(CurveComponent(0, Boundary.of(b)) for b in boundaries))

    def neighbour_counts(self) -> list[int]:
        """Number of reduced intersection points with other components."""
        k = len(self.components)
        if self.shape == IRREDUCIBLE:
            return [0]
        if self.shape == WHEEL:
            return [2] * k
        if k == 1:
            return [0]
        return [1] + [2] * (k - 2) + [1]

    @classmethod
    def from_dict(cls, data) -> "CurveConfig":
        """Parse ``{shape, components: [{genus, boundary: [{label, mult}]}]}``.

        A bare list of multiplicities is read as an irreducible rational curve.
        """
        if isinstance(data, list):
            return cls.irreducible([to_rational(b) for b in data])
        try:
            comps = []
            for c in data["components"]:
                entries = []
                for i, e in enumerate(c.get("boundary", []), 1):
                    if isinstance(e, dict):
                        entries.append((e.get("label", f"P{i}"), to_rational(e["mult"])))
                    else:
                        entries.append((f"P{i}", to_rational(e)))
                comps.append(CurveComponent(int(c.get("genus", 0)), Boundary(tuple(entries))))
            return cls(data.get("shape", IRREDUCIBLE), tuple(comps))
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValueError(f"malformed curve configuration: {exc}") from exc

    def to_json(self):
        return {
            "shape": self.shape,
            "components": [{"genus": c.genus, "boundary": c.boundary.to_json()}
                           for c in self.components],
        }


OrbitBoundary = tuple  # of (size, mult) pairs


def shifted(b: Fraction, n: int) -> Fraction:
    """Lower bound for a complement multiplicity: reduced points stay reduced."""
    return Fraction(1) if b == 1 else floor_shift(b, n)


def complement_degrees(config: CurveConfig, n: int) -> list[Fraction]:
    """Degree of ``K + floor(B) + floor((n+1){B})/n`` on each component."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    out = []
    for comp, r in zip(config.components, config.neighbour_counts()):
        if comp.genus > 1:
            raise ValueError(f"genus {comp.genus} components are not supported")
        out.append(2 * comp.genus - 2 + r + sum((shifted(b, n) for b in comp.boundary.mults),
                                                Fraction(0)))
    return out


def complement_exists(config: CurveConfig, n: int) -> bool:
    return all(d <= 0 for d in complement_degrees(config, n))


def minimal_complement_index(config: CurveConfig, bound: int = DEFAULT_BOUND) -> int | None:
    if bound < 1:
        raise ValueError("bound must be positive")
    for n in range(1, bound + 1):
        if complement_exists(config, n):
            return n
    return None


OneNotTwo = namedtuple("OneNotTwo", "one_not_two four six shape")
OneNotTwo.__doc__ = """Result of :func:`one_not_two`.

``shape`` records whether all fractional multiplicities sit on one end
component, lie in Z/3 and add up to that component's remaining degree 1.
"""


def _z3_end_shape(config: CurveConfig) -> bool:
    comps = config.components
    counts = config.neighbour_counts()
    carriers = [i for i, c in enumerate(comps) if any(0 < b < 1 for b in c.boundary.mults)]
    if len(carriers) != 1:
        return False
    i = carriers[0]
    if i not in (0, len(comps) - 1):
        return False
    fractional = [b for b in comps[i].boundary.mults if 0 < b < 1]
    reduced = sum(1 for b in comps[i].boundary.mults if b == 1)
    room = 2 - counts[i] - reduced
    return all(in_lattice(b, 3) for b in fractional) and sum(fractional) == room


def one_not_two(config: CurveConfig) -> OneNotTwo:
    """1-complementary but not 2-complementary chains, with 4/6 follow-ups."""
    if config.shape != CHAIN:
        raise ValueError("one_not_two is defined for chains only")
    flag = complement_exists(config, 1) and not complement_exists(config, 2)
    return OneNotTwo(flag, complement_exists(config, 4), complement_exists(config, 6),
                     _z3_end_shape(config))


def _mults(B) -> tuple[Fraction, ...]:
    if isinstance(B, Boundary):
        return B.mults
    return tuple(multiplicity(b) for b in B)


def pd_complement_exists(d: int, B, n: int) -> bool:
    """n-complement criterion on P^d with boundary on generic hyperplanes."""
    mults = _mults(B)
    if any(b >= 1 for b in mults):
        raise ValueError("hyperplane multiplicities must be < 1")
    return sum((floor_shift(b, n) for b in mults), Fraction(0)) <= d + 1


def pd_ec_check(d: int, B) -> bool:
    return sum(_mults(B), Fraction(0)) <= d + 1


def invariant_complement_exists(orbits: Sequence, n: int, exact_degree: bool = True) -> bool:
    """Galois-invariant n-complement on P^1 with the given point orbits.

    Each orbit ``(size, b)`` receives one multiplicity ``b+`` in ``Z/n``
    with ``shifted(b, n) <= b+ <= 1``.  With ``exact_degree`` the total
    ``sum(size * b+)`` must equal 2, otherwise it may be at most 2.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    lows, caps, sizes = [], [], []
    for size, b in orbits:
        size = int(size)
        if size < 1:
            raise ValueError("orbit sizes are positive")
        low = shifted(multiplicity(b), n)
        lows.append(int(low * n))
        caps.append(n)
        sizes.append(size)
    base = sum(s * k for s, k in zip(sizes, lows))
    target = 2 * n
    if base > target:
        return False
    if not exact_degree:
        return True
    # bounded knapsack: raise orbit i by 0..caps-lows steps of size sizes[i]
    reach = {0}
    room = target - base
    for s, lo, cap in zip(sizes, lows, caps):
        reach = {r + s * k for r in reach for k in range(cap - lo + 1) if r + s * k <= room}
    return room in reach


def expand_orbits(orbits: Sequence) -> CurveConfig:
    """The plain (non-equivariant) configuration underlying ``orbits``."""
    mults = []
    for size, b in orbits:
        mults.extend([to_rational(b)] * int(size))
    return CurveConfig.irreducible(mults)
