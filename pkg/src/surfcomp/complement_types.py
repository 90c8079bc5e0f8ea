"""Complement type labels, the toric criterion and the exceptional configurations.

Type labels are written ``family_m^n``: ``n`` counts reduced components of the
boundary, ``m`` reduced exceptional divisors on the minimal resolution.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Mapping

from .arith import RN2, format_rational, lcm, to_rational
from .graph import AMBIENT, Curve, DualGraph, coefficients, crepant_discrepancies, \
    delta_invariant, pairing, rank

REGULAR = "Regular"
EXCEPTIONAL = "Exceptional"

FAMILIES = ("A", "D", "E1", "E2", "E3", "E4", "E6")
_EXCEPTIONAL_FAMILIES = {"E1", "E2", "E3", "E4", "E6"}


class LabelError(ValueError):
    """A complement datum violates one of the structural constraints."""

    def __init__(self, clause: str, message: str):
        super().__init__(f"[{clause}] {message}")
        self.clause = clause


class ModelingError(ValueError):
    """Inputs that cannot come from a log canonical pair with the stated data."""


@dataclass(frozen=True)
class ComplementDatum:
    index: int
    n_reduced: int
    m_exceptional: int
    lcs_connected: bool = True
    lcs_genus: int | None = None
    support_singular_connected: bool = False
    is_global: bool = False
    klt: bool = False

    @classmethod
    def from_dict(cls, d: Mapping) -> "ComplementDatum":
        try:
            return cls(
                index=int(d["index"]),
                n_reduced=int(d["n_reduced"]),
                m_exceptional=int(d["m_exceptional"]),
                lcs_connected=bool(d.get("lcs_connected", True)),
                lcs_genus=None if d.get("lcs_genus") is None else int(d["lcs_genus"]),
                support_singular_connected=bool(d.get("support_singular_connected", False)),
                is_global=bool(d.get("global", False)),
                klt=bool(d.get("klt", False)),
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed complement datum: {exc}") from exc


@dataclass(frozen=True)
class TypeLabel:
    family: str
    m: int
    n: int

    @property
    def exceptional(self) -> bool:
        return self.family in _EXCEPTIONAL_FAMILIES

    def __str__(self):
        return f"{self.family}_{self.m}^{self.n}"


_FAMILY_BY_INDEX = {3: "E3", 4: "E4", 6: "E6"}


def type_label(d: ComplementDatum) -> TypeLabel:
    """Label a complement and check it against the structure theorem."""
    r, n, m = d.index, d.n_reduced, d.m_exceptional
    if r not in RN2:
        raise LabelError("index", f"index {r} is not regular; expected one of {sorted(RN2)}")
    if n < 0 or m < 0:
        raise LabelError("counts", "n and m are non-negative")
    if d.klt and (n or m):
        raise LabelError("klt", "a Kawamata log terminal complement has n = m = 0")
    if n == m == 0 and not d.klt:
        raise LabelError("klt", "n = m = 0 means the complement is Kawamata log terminal")
    if r == 1:
        family = "A" if d.support_singular_connected else "E1"
    elif r == 2:
        family = "D" if d.support_singular_connected else "E2"
    else:
        family = _FAMILY_BY_INDEX[r]
    label = TypeLabel(family, m, n)
    if n == m == 0 and not label.exceptional:
        raise LabelError("klt", "Kawamata log terminal complements only have types Er_0^0")
    if label.exceptional:
        if n + m > 2:
            raise LabelError("n+m", f"{label}: exceptional types have n + m <= 2")
        if n + m == 2 and not d.is_global:
            raise LabelError("n+m=2", f"{label}: n + m = 2 only occurs globally")
        if n + m >= 1 and d.lcs_connected != (n + m == 1):
            raise LabelError("lcs-components",
                             f"{label}: the non-klt locus has n + m = {n + m} components")
    elif not d.lcs_connected:
        raise LabelError("lcs-components", f"{label}: the non-klt locus is connected")
    if d.lcs_genus not in (None, 0, 1):
        raise LabelError("lcs-genus", "the non-klt locus has arithmetic genus 0 or 1")
    if d.lcs_genus == 1 and not ((family == "E1" and (m, n) == (1, 0))
                                 or (family == "A" and n >= 1)):
        raise LabelError("lcs-genus", f"{label}: a genus-1 non-klt locus only occurs for "
                                      "E1_1^0 and for A_m^n with n >= 1")
    return label


def regular_or_exceptional(min_index: int) -> str:
    if min_index < 1:
        raise ValueError("indices are positive")
    return REGULAR if min_index in RN2 else EXCEPTIONAL


# toric criterion ----------------------------------------------------------

def toric_defect(rho: int, mults) -> Fraction:
    """``rho - (sum b - 2)``; zero exactly for formally toric pairs."""
    if rho < 0:
        raise ValueError("rho is non-negative")
    value = rho - (sum((to_rational(b) for b in mults), Fraction(0)) - 2)
    if value < 0:
        raise ModelingError(f"defect {format_rational(value)} < 0: no log canonical pair "
                            "with K + B numerically trivial has this Picard number and boundary")
    return value


def is_formally_toric(rho: int, mults) -> bool:
    return toric_defect(rho, mults) == 0


def fan_self_intersections(rays) -> list[int]:
    """Self-intersections of the boundary curves of a smooth complete toric surface.

    ``rays`` are primitive vectors in cyclic order; ``v[i-1] + v[i+1] = a_i v[i]``
    gives ``D_i^2 = -a_i``.
    """
    k = len(rays)
    out = []
    for i in range(k):
        (x0, y0), (x1, y1), (x2, y2) = rays[i - 1], rays[i], rays[(i + 1) % k]
        if x0 * y1 - y0 * x1 != 1 or x1 * y2 - y1 * x2 != 1:
            raise ValueError("rays must be counter-clockwise with unimodular cones")
        sx, sy = x0 + x2, y0 + y2
        a = sx // x1 if x1 else sy // y1
        if (sx, sy) != (a * x1, a * y1):
            raise ValueError("fan is not smooth")
        out.append(-a)
    return out


def toric_fan(n: int) -> list[tuple[int, int]]:
    """A smooth complete fan with ``n >= 3`` rays (plane, then blow-ups of a Hirzebruch fan)."""
    if n < 3:
        raise ValueError("a complete fan has at least 3 rays")
    if n == 3:
        return [(1, 0), (0, 1), (-1, -1)]
    rays = [(1, 0), (0, 1), (-1, 1), (0, -1)]
    while len(rays) < n:
        # blow up the cone after the longest-standing ray to keep the fan smooth
        i = (len(rays) - 4) % len(rays)
        a, b = rays[i], rays[(i + 1) % len(rays)]
        rays.insert(i + 1, (a[0] + b[0], a[1] + b[1]))
    return rays


def toric_wheel(rays) -> DualGraph:
    """Boundary wheel of a toric surface, every curve reduced."""
    selfs = fan_self_intersections(rays)
    k = len(selfs)
    vs = tuple(Curve(f"D{i + 1}", AMBIENT, s, mult=Fraction(1)) for i, s in enumerate(selfs))
    edges = tuple((f"D{i + 1}", f"D{(i + 1) % k + 1}", 1) for i in range(k))
    return DualGraph(vs, edges)


def boundary_rank(g: DualGraph) -> int:
    """Rank of the intersection form on the ambient curves."""
    idx = g.ambient
    return rank([[g.intersection(i, j) for j in idx] for i in idx])


# exceptional configurations -----------------------------------------------

CASES = ("A21", "A22", "A23", "A24", "A25", "A26", "I21", "I22")
M_LOWER = Fraction(6, 7)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ReadingReport:
    reading: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


@dataclass
class ExceptionalReport:
    name: str
    readings: list

    @property
    def passed(self) -> bool:
        return any(r.passed for r in self.readings)

    @property
    def consistent_readings(self) -> list[str]:
        return [r.reading for r in self.readings if r.passed]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "consistent_readings": self.consistent_readings,
            "readings": [
                {"reading": r.reading, "passed": r.passed,
                 "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail}
                            for c in r.checks]}
                for r in self.readings
            ],
        }


def load_case(name: str) -> dict:
    if name not in CASES:
        raise ValueError(f"unknown configuration {name!r}; expected one of {CASES}")
    text = resources.files("surfcomp").joinpath(f"data/v1/exceptional/{name}.json").read_text()
    return json.loads(text)


def _affine_pairing(g: DualGraph, variables, test) -> tuple[Fraction, dict]:
    """``(K+B).test`` as ``p0 + sum p_i b_i`` in the ambient multiplicities ``variables``."""
    def value(point):
        h = g.with_mults(point)
        return pairing(h, coefficients(h), test)

    zero = {v: 0 for v in variables}
    p0 = value(zero)
    slopes = {v: value({**zero, v: 1}) - p0 for v in variables}
    return p0, slopes


def _max_on_polygon(coeffs: Mapping[str, Fraction], bound: Fraction, lower: Fraction):
    """Largest single multiplicity on ``{lower <= b_i <= 1, sum c_i b_i <= bound}``."""
    best = None
    for v, c in coeffs.items():
        rest = sum((coeffs[w] * lower for w in coeffs if w != v), Fraction(0))
        top = min(Fraction(1), (bound - rest) / c)
        if top < lower:
            return None
        best = top if best is None else max(best, top)
    return best


def _check_reading(graph: DualGraph, claims: Mapping) -> list[Check]:
    checks = []
    res = crepant_discrepancies(graph) if graph.exceptional else None
    coeffs = coefficients(graph, res)
    if "delta" in claims:
        got = delta_invariant(graph)
        checks.append(Check("delta", got == claims["delta"], f"delta = {got}"))
    for vid, want in claims.get("crepant", {}).items():
        got = coeffs[vid]
        checks.append(Check(f"crepant {vid}", got == to_rational(want),
                            f"d = {format_rational(got)}, expected {want}"))
    for vid in claims.get("pairing_zero", []):
        got = pairing(graph, coeffs, vid)
        checks.append(Check(f"(K+B).{vid} = 0", got == 0, f"pairing = {format_rational(got)}"))
    for vid in claims.get("pairing_nonpositive", []):
        got = pairing(graph, coeffs, vid)
        checks.append(Check(f"(K+B).{vid} <= 0", got <= 0, f"pairing = {format_rational(got)}"))
    if "sum_bound" in claims:
        b = [graph[v].mult for v in claims["curves"]]
        ok = sum(b) < to_rational(claims["sum_bound"])
        checks.append(Check("b1 + b2 bound", ok, f"b1 + b2 = {format_rational(sum(b))}"))
    if "complement_index" in claims:
        want = int(claims["complement_index"])
        zero = all(pairing(graph, coeffs, v.id) == 0 for v in graph.vertices)
        index = lcm(*(c.denominator for c in coeffs.values()))
        checks.append(Check("trivial complement", zero,
                            "K + B is numerically trivial on every curve" if zero
                            else "K + B pairs non-trivially with some curve"))
        checks.append(Check("complement index", index == want,
                            f"least common denominator {index}, expected {want}"))
        kind = regular_or_exceptional(index)
        checks.append(Check("exceptional index", kind == EXCEPTIONAL, f"index {index} is {kind}"))
    constraint = claims.get("constraint")
    if constraint:
        variables = list(constraint["coeffs"])
        want = {v: to_rational(c) for v, c in constraint["coeffs"].items()}
        bound = to_rational(constraint["bound"])
        p0, slopes = _affine_pairing(graph, variables, constraint["test"])
        # pairing = lam * (sum want_i b_i - bound) with lam > 0
        lam = slopes[variables[0]] / want[variables[0]]
        ok = lam > 0 and all(slopes[v] == lam * want[v] for v in variables) and p0 == -lam * bound
        shown = " + ".join(f"{format_rational(slopes[v])}*{v}" for v in variables)
        checks.append(Check("constraint", ok,
                            f"(K+B).{constraint['test']} = {format_rational(p0)} + {shown}"))
    if "c" in claims:
        want = to_rational(claims["c"])
        if constraint:
            top = _max_on_polygon({v: to_rational(c) for v, c in constraint["coeffs"].items()},
                                  to_rational(constraint["bound"]), M_LOWER)
        else:
            top = max(graph[v].mult for v in claims["curves"])
        got = None if top is None else 1 - top
        checks.append(Check("c", got == want,
                            f"c = {'empty region' if got is None else format_rational(got)}"))
    return checks


def verify_exceptional_config(name: str, data: Mapping | None = None) -> ExceptionalReport:
    """Check the numeric claims of a named configuration on each of its readings."""
    data = load_case(name) if data is None else data
    claims = data["claims"]
    readings = []
    for reading in data["readings"]:
        graph = DualGraph.from_dict(reading["graph"])
        readings.append(ReadingReport(reading["name"], _check_reading(graph, claims)))
    return ExceptionalReport(name, readings)
