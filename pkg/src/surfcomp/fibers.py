"""Log minimal models of genus-1 degenerations and their Kodaira labels.

A model is a reduced central curve ``C`` (an irreducible curve, a chain or a
wheel) whose components may pass through marked singular points.  A marked
point is either an ``A(i)`` Du Val point, met by ``C`` at an end of its chain
of (-2)-curves, or a cyclic point resolved by a single (-k)-curve.  The
different of ``K + C`` at such a point is ``i/(i+1)`` or ``(k-1)/k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Mapping

from .arith import format_rational
from .curves import Boundary
from .graph import AMBIENT, EXCEPTIONAL, Curve, DualGraph, intersection_matrix, \
    is_negative_definite, kernel

IRREDUCIBLE, CHAIN, WHEEL = "irreducible", "chain", "wheel"


class FiberError(ValueError):
    """The model does not match any of the recognised degenerations."""


@dataclass(frozen=True)
class Decoration:
    kind: str          # "A" or "curve"
    value: int         # i for A(i), k for a (-k)-curve

    def __post_init__(self):
        if self.kind == "A" and self.value >= 1:
            return
        if self.kind == "curve" and self.value >= 2:
            return
        raise FiberError(f"invalid decoration {self.kind}({self.value})")

    @classmethod
    def from_dict(cls, d: Mapping) -> "Decoration":
        kind = d.get("type")
        if kind == "A":
            return cls("A", int(d["n"]))
        if kind == "curve":
            return cls("curve", int(d["k"]))
        raise FiberError(f"unknown decoration type {kind!r}")

    def to_dict(self) -> dict:
        return {"type": "A", "n": self.value} if self.kind == "A" else \
            {"type": "curve", "k": self.value}

    @property
    def different(self) -> Fraction:
        if self.kind == "A":
            return Fraction(self.value, self.value + 1)
        return Fraction(self.value - 1, self.value)

    @property
    def chain(self) -> list[int]:
        """Self-intersections of the resolving chain, starting where ``C`` meets it."""
        return [-2] * self.value if self.kind == "A" else [-self.value]

    def __str__(self):
        return f"A({self.value})" if self.kind == "A" else f"({-self.value})"


@dataclass(frozen=True)
class FiberComponent:
    genus: int = 0
    nodes: int = 0
    self_int: int | None = None
    decorations: tuple[Decoration, ...] = ()
    multiplicity: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "decorations", tuple(self.decorations))
        if self.genus < 0 or self.nodes < 0:
            raise FiberError("genus and nodes must be non-negative")
        if self.multiplicity is not None and self.multiplicity < 1:
            raise FiberError("component multiplicity must be positive")


@dataclass(frozen=True)
class FiberModel:
    shape: str
    components: tuple[FiberComponent, ...]
    multiplicity: int = 1
    smooth: bool = False   # surface non-singular near C, enabling (-1)-curve contraction

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if self.shape not in (IRREDUCIBLE, CHAIN, WHEEL):
            raise FiberError(f"unknown shape {self.shape!r}")
        if not self.components:
            raise FiberError("empty central curve")
        if self.shape == IRREDUCIBLE and len(self.components) != 1:
            raise FiberError("an irreducible curve has one component")
        if self.shape == WHEEL and len(self.components) < 2:
            raise FiberError("a wheel needs at least two components")
        if self.multiplicity < 1:
            raise FiberError("multiplicity must be positive")

    @classmethod
    def from_dict(cls, d: Mapping) -> "FiberModel":
        try:
            comps = tuple(
                FiberComponent(
                    genus=int(c.get("genus", 0)),
                    nodes=int(c.get("nodes", 0)),
                    self_int=None if c.get("self_int") is None else int(c["self_int"]),
                    decorations=tuple(Decoration.from_dict(x) for x in c.get("decorations", [])),
                    multiplicity=None if c.get("multiplicity") is None else int(c["multiplicity"]),
                )
                for c in d["components"]
            )
            return cls(d.get("shape", IRREDUCIBLE), comps, int(d.get("multiplicity", 1)),
                       bool(d.get("smooth", False)))
        except (KeyError, TypeError) as exc:
            raise FiberError(f"malformed fiber document: {exc}") from exc

    def to_dict(self) -> dict:
        comps = []
        for c in self.components:
            out = {"genus": c.genus, "nodes": c.nodes}
            if c.self_int is not None:
                out["self_int"] = c.self_int
            if c.decorations:
                out["decorations"] = [x.to_dict() for x in c.decorations]
            if c.multiplicity is not None:
                out["multiplicity"] = c.multiplicity
            comps.append(out)
        return {"shape": self.shape, "multiplicity": self.multiplicity,
                "smooth": self.smooth, "components": comps}


@dataclass(frozen=True)
class KodairaType:
    tag: str
    m: int | None = None
    b: int | None = None

    TAGS = ("mI", "Istar", "II", "IIstar", "III", "IIIstar", "IV", "IVstar")

    def __post_init__(self):
        if self.tag not in self.TAGS:
            raise FiberError(f"unknown Kodaira tag {self.tag!r}")
        if self.tag == "mI" and (self.m is None or self.m < 1 or self.b is None or self.b < 0):
            raise FiberError("mI needs m >= 1 and b >= 0")
        if self.tag == "Istar" and (self.b is None or self.b < 0):
            raise FiberError("Istar needs b >= 0")

    @classmethod
    def parse(cls, text: str) -> "KodairaType":
        text = text.strip()
        if text.startswith("mI(") and text.endswith(")"):
            m, b = (int(x) for x in text[3:-1].split(","))
            return cls("mI", m, b)
        if text.startswith("Istar(") and text.endswith(")"):
            return cls("Istar", b=int(text[6:-1]))
        return cls(text)

    def __str__(self):
        if self.tag == "mI":
            return f"mI({self.m},{self.b})"
        if self.tag == "Istar":
            return f"Istar({self.b})"
        return self.tag


_INDEX = {"mI": 1, "Istar": 2, "II": 6, "IIstar": 6, "III": 4, "IIIstar": 4,
          "IV": 3, "IVstar": 3}

_DIFFERENTS = {
    "Istar": (Fraction(1, 2),) * 4,
    "II": (Fraction(1, 2), Fraction(2, 3), Fraction(5, 6)),
    "III": (Fraction(1, 2), Fraction(3, 4), Fraction(3, 4)),
    "IV": (Fraction(2, 3),) * 3,
}
_BY_DIFFERENT = {tuple(sorted(v)): k for k, v in _DIFFERENTS.items()}


def complement_index(t: KodairaType) -> int:
    return _INDEX[t.tag]


def fiber_different(t: KodairaType) -> Boundary:
    if t.tag == "mI":
        return Boundary()
    base = t.tag if t.tag == "Istar" else t.tag.removesuffix("star")
    return Boundary.of(_DIFFERENTS[base])


def normalize(f: FiberModel) -> FiberModel:
    """Contract interior (-1)-curves of a chain on a smooth surface."""
    if not (f.smooth and f.shape == CHAIN):
        return f
    comps = list(f.components)
    changed = True
    while changed:
        changed = False
        for i in range(1, len(comps) - 1):
            c = comps[i]
            if c.self_int == -1 and not c.decorations and c.genus == 0 and c.nodes == 0:
                left, right = comps[i - 1], comps[i + 1]
                if left.self_int is None or right.self_int is None:
                    continue
                comps[i - 1:i + 2] = [
                    FiberComponent(left.genus, left.nodes, left.self_int + 1,
                                   left.decorations, left.multiplicity),
                    FiberComponent(right.genus, right.nodes, right.self_int + 1,
                                   right.decorations, right.multiplicity),
                ]
                changed = True
                break
    return FiberModel(CHAIN, tuple(comps), f.multiplicity, f.smooth)


def _uniform_multiplicity(f: FiberModel) -> int:
    declared = {c.multiplicity for c in f.components if c.multiplicity is not None}
    if len(declared) > 1:
        raise FiberError(f"non-uniform multiplicities {sorted(declared)}: "
                         "a multiplicative fibre is m times a reduced cycle")
    if declared:
        (m,) = declared
        if f.multiplicity not in (1, m):
            raise FiberError(f"model multiplicity {f.multiplicity} disagrees with "
                             f"component multiplicity {m}")
        return m
    return f.multiplicity


def classify_fiber(f: FiberModel) -> KodairaType:
    f = normalize(f)
    comps = f.components
    decorated = any(c.decorations for c in comps)
    if f.shape == WHEEL:
        if decorated or any(c.genus or c.nodes for c in comps):
            raise FiberError("a wheel fibre has smooth rational undecorated components")
        return KodairaType("mI", _uniform_multiplicity(f), len(comps))
    if f.shape == IRREDUCIBLE and not decorated:
        c = comps[0]
        m = _uniform_multiplicity(f)
        if c.genus == 1 and c.nodes == 0:
            return KodairaType("mI", m, 0)
        if c.genus == 0 and c.nodes == 1:
            return KodairaType("mI", m, 1)
        raise FiberError(f"undecorated curve of genus {c.genus} with {c.nodes} nodes "
                         "has arithmetic genus other than 1")
    if any(c.genus or c.nodes for c in comps):
        raise FiberError("decorations sit on smooth rational curves only")
    if f.shape == CHAIN and len(comps) > 1:
        ends_ok = all(sorted(x.different for x in comps[i].decorations) == [Fraction(1, 2)] * 2
                      for i in (0, -1))
        if not ends_ok or any(c.decorations for c in comps[1:-1]):
            raise FiberError("a reducible chain fibre needs two A(1) points on each end "
                             "and none inside")
        if any(c.self_int not in (None, -2) for c in comps):
            raise FiberError("a reducible chain fibre consists of (-2)-curves")
        return KodairaType("Istar", b=len(comps) - 1)
    c = comps[0]
    key = tuple(sorted(x.different for x in c.decorations))
    tag = _BY_DIFFERENT.get(key)
    if tag is None:
        shown = ", ".join(str(x) for x in c.decorations)
        raise FiberError(f"unrecognised decoration pattern {{{shown}}}")
    if tag == "Istar":
        return KodairaType("Istar", b=0)
    if c.self_int == -1:
        return KodairaType(tag)
    if c.self_int == -2:
        return KodairaType(tag + "star")
    raise FiberError(f"central curve of type {tag} must be a (-1)- or (-2)-curve, "
                     f"got self-intersection {c.self_int}")


_DEFAULT_SELF_INT = {WHEEL: -2, CHAIN: -2}


def resolved_graph(f: FiberModel) -> DualGraph:
    """Dual graph of the minimal resolution near the fibre.

    Central curves are ``ambient`` vertices ``C1, C2, ...``; the chain
    resolving the j-th marked point on ``Ci`` is ``Ci.Pj.E1, ...``.
    """
    f = normalize(f)
    vertices, edges = [], []
    k = len(f.components)
    for i, c in enumerate(f.components, 1):
        s = c.self_int
        if s is None:
            s = _DEFAULT_SELF_INT.get(f.shape, -2 if c.decorations else 0)
        vertices.append(Curve(f"C{i}", AMBIENT, s, c.genus, c.nodes, Fraction(1)))
        for j, dec in enumerate(c.decorations, 1):
            prev = f"C{i}"
            for t, e in enumerate(dec.chain, 1):
                vid = f"C{i}.P{j}.E{t}"
                vertices.append(Curve(vid, EXCEPTIONAL, e))
                edges.append((prev, vid, 1))
                prev = vid
    if f.shape in (CHAIN, WHEEL):
        edges += [(f"C{i}", f"C{i + 1}", 1) for i in range(1, k)]
    if f.shape == WHEEL:
        edges.append((f"C{k}", "C1", 1))
    return DualGraph(tuple(vertices), tuple(edges))


@dataclass(frozen=True)
class FiberCheck:
    """Whether the resolved configuration supports a fibre class."""

    is_fibre: bool
    multiplicities: dict = field(default_factory=dict)


def fiber_kernel(g: DualGraph) -> FiberCheck:
    """Negative semi-definite with a one-dimensional kernel spanned by a positive vector."""
    idx = list(range(len(g.vertices)))
    m = intersection_matrix(g, idx)
    ker = kernel(m)
    if len(ker) != 1:
        return FiberCheck(False)
    v = ker[0]
    if v[0] < 0:
        v = [-x for x in v]
    if any(x <= 0 for x in v):
        return FiberCheck(False)
    if len(idx) > 1 and not is_negative_definite([row[1:] for row in m[1:]]):
        return FiberCheck(False)
    scale = lcm(*(x.denominator for x in v))
    ints = [int(x * scale) for x in v]
    g0 = 0
    for x in ints:
        g0 = gcd(g0, x)
    return FiberCheck(True, {g.vertices[i].id: x // g0 for i, x in zip(idx, ints)})


@dataclass(frozen=True)
class FiberReport:
    type: KodairaType
    index: int
    different: Boundary
    graph: DualGraph
    check: FiberCheck

    def to_dict(self) -> dict:
        return {
            "type": str(self.type),
            "index": self.index,
            "different": [format_rational(b) for b in self.different.mults],
            "resolved_graph": self.graph.to_dict(),
            "fibre_class": self.check.is_fibre,
            "fibre_multiplicities": dict(self.check.multiplicities),
        }


def fiber_report(f: FiberModel) -> FiberReport:
    t = classify_fiber(f)
    g = resolved_graph(f)
    return FiberReport(t, complement_index(t), fiber_different(t), g, fiber_kernel(g))


def central_different(f: FiberModel) -> tuple[Fraction, ...]:
    """Different of ``K + C`` read off the decorations, sorted."""
    return tuple(sorted(x.different for c in f.components for x in c.decorations))

