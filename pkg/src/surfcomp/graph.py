"""Weighted dual graphs of curves on a resolved surface.

Vertices are curves with a self-intersection, geometric genus and number of
nodes; the role says whether the curve is contracted (``exceptional``) or a
curve of the surface itself (``ambient``, carrying its boundary multiplicity).
Edges ``(i, j, k)`` record one intersection point of local intersection
number ``k``; repeat an edge for several points.  All computations are exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .arith import format_rational, multiplicity, to_rational

EXCEPTIONAL = "exceptional"
AMBIENT = "ambient"
ROLES = (EXCEPTIONAL, AMBIENT)

#: Log discrepancy threshold for the delta invariant.
DELTA_THRESHOLD = Fraction(1, 7)


class GraphError(ValueError):
    """Malformed or unsupported graph input."""


class SingularGraphError(GraphError):
    """The exceptional locus is not contractible (singular or indefinite form)."""


@dataclass(frozen=True)
class Curve:
    id: str
    role: str
    self_int: int
    genus: int = 0
    nodes: int = 0
    mult: Fraction | None = None

    def __post_init__(self):
        if self.role not in ROLES:
            raise GraphError(f"curve {self.id}: unknown role {self.role!r}")
        if self.genus < 0 or self.nodes < 0:
            raise GraphError(f"curve {self.id}: genus and nodes must be non-negative")
        if self.role == AMBIENT:
            object.__setattr__(self, "mult", multiplicity(0 if self.mult is None else self.mult))
        elif self.mult is not None:
            raise GraphError(f"exceptional curve {self.id} takes its multiplicity from the solver")

    @property
    def arithmetic_genus(self) -> int:
        return self.genus + self.nodes

    @property
    def canonical_degree(self) -> int:
        """``K.E`` by adjunction."""
        return 2 * self.arithmetic_genus - 2 - self.self_int


@dataclass(frozen=True)
class DualGraph:
    vertices: tuple[Curve, ...]
    edges: tuple[tuple[int, int, int], ...] = ()
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        vertices = tuple(self.vertices)
        index = {}
        for k, v in enumerate(vertices):
            if v.id in index:
                raise GraphError(f"duplicate vertex id {v.id!r}")
            index[v.id] = k
        edges = []
        for e in self.edges:
            if len(e) not in (2, 3):
                raise GraphError(f"edge {e!r} must be (i, j) or (i, j, k)")
            i, j, k = (*e, 1) if len(e) == 2 else e
            # endpoints are vertex ids, or positions when given as ints
            i, j = (x if isinstance(x, int) else index.get(str(x)) for x in (i, j))
            if not all(isinstance(x, int) and 0 <= x < len(vertices) for x in (i, j)):
                raise GraphError(f"edge {e!r} references an unknown vertex")
            if i == j:
                raise GraphError(f"self-loop on {vertices[i].id}; encode nodes on the curve")
            if int(k) < 1:
                raise GraphError(f"edge {e!r} needs a positive intersection multiplicity")
            edges.append((i, j, int(k)))
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "_index", index)

    # construction ---------------------------------------------------------

    @classmethod
    def from_dict(cls, data: Mapping) -> "DualGraph":
        try:
            vertices = [
                Curve(
                    id=str(v["id"]),
                    role=v["role"],
                    self_int=int(v["self_int"]),
                    genus=int(v.get("genus", 0)),
                    nodes=int(v.get("nodes", 0)),
                    mult=None if v.get("mult") is None else to_rational(v["mult"]),
                )
                for v in data["vertices"]
            ]
            ids = {v.id for v in vertices}
            edges = []
            for e in data.get("edges", []):
                if len(e) not in (2, 3):
                    raise GraphError(f"edge {e!r} must be [i, j] or [i, j, k]")
                i, j = str(e[0]), str(e[1])
                if i not in ids or j not in ids:
                    raise GraphError(f"edge {e!r} references an unknown vertex")
                edges.append((i, j, int(e[2]) if len(e) == 3 else 1))
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed graph document: {exc}") from exc
        return cls(tuple(vertices), tuple(edges))

    def to_dict(self) -> dict:
        out = []
        for v in self.vertices:
            d = {"id": v.id, "role": v.role, "self_int": v.self_int,
                 "genus": v.genus, "nodes": v.nodes}
            if v.role == AMBIENT:
                d["mult"] = format_rational(v.mult)
            out.append(d)
        return {"vertices": out,
                "edges": [[self.vertices[i].id, self.vertices[j].id, k]
                          for i, j, k in self.edges]}

    def with_mults(self, mults: Mapping[str, object]) -> "DualGraph":
        """Copy with some ambient multiplicities replaced."""
        vs = []
        for v in self.vertices:
            if v.id in mults:
                if v.role != AMBIENT:
                    raise GraphError(f"{v.id} is not an ambient curve")
                v = Curve(v.id, v.role, v.self_int, v.genus, v.nodes, to_rational(mults[v.id]))
            vs.append(v)
        return DualGraph(tuple(vs), self.edges)

    # queries --------------------------------------------------------------

    def index(self, vid) -> int:
        try:
            return self._index[str(vid)]
        except KeyError:
            raise GraphError(f"no vertex {vid!r}") from None

    def __getitem__(self, vid) -> Curve:
        return self.vertices[self.index(vid)]

    @property
    def exceptional(self) -> list[int]:
        return [k for k, v in enumerate(self.vertices) if v.role == EXCEPTIONAL]

    @property
    def ambient(self) -> list[int]:
        return [k for k, v in enumerate(self.vertices) if v.role == AMBIENT]

    def intersection(self, i: int, j: int) -> int:
        if i == j:
            return self.vertices[i].self_int
        return sum(k for a, b, k in self.edges if {a, b} == {i, j})

    def neighbours(self, i: int) -> list[int]:
        out = []
        for a, b, _ in self.edges:
            if a == i:
                out.append(b)
            elif b == i:
                out.append(a)
        return out

    def is_snc(self) -> bool:
        return all(k == 1 for _, _, k in self.edges)

    def components(self, subset) -> list[list[int]]:
        """Connected components of the subgraph induced on ``subset``."""
        subset = set(subset)
        seen, out = set(), []
        for s in sorted(subset):
            if s in seen:
                continue
            stack, comp = [s], []
            seen.add(s)
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in self.neighbours(v):
                    if w in subset and w not in seen:
                        seen.add(w)
                        stack.append(w)
            out.append(sorted(comp))
        return out


# linear algebra over Q -------------------------------------------------------

def leading_minors(matrix) -> list[Fraction]:
    a = [[Fraction(x) for x in row] for row in matrix]
    return [_det([row[:k] for row in a[:k]]) for k in range(1, len(a) + 1)]


def _det(a) -> Fraction:
    a = [list(row) for row in a]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                for j in range(c, n):
                    a[r][j] -= f * a[c][j]
    return det


def determinant(matrix) -> Fraction:
    return _det([[Fraction(x) for x in row] for row in matrix])


def is_negative_definite(matrix) -> bool:
    """Sylvester's criterion: the k-th leading minor has sign (-1)^k."""
    if not matrix:
        raise ValueError("empty matrix")
    return all((m < 0 if k % 2 == 0 else m > 0)
               for k, m in enumerate(leading_minors(matrix)))


def rank(matrix) -> int:
    a = [[Fraction(x) for x in row] for row in matrix]
    rows = len(a)
    cols = len(a[0]) if a else 0
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def kernel(matrix) -> list[list[Fraction]]:
    """A basis of the right kernel."""
    a = [[Fraction(x) for x in row] for row in matrix]
    rows = len(a)
    cols = len(a[0]) if a else 0
    pivots, r = [], 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        a[r] = [x / a[r][c] for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for row, c in zip(a, pivots):
            v[c] = -row[f]
        basis.append(v)
    return basis


def solve(matrix, rhs) -> list[Fraction]:
    a = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(matrix, rhs)]
    n = len(a)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise SingularGraphError("intersection matrix is singular")
        a[c], a[p] = a[p], a[c]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c] / a[c][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [a[i][n] / a[i][i] for i in range(n)]


# intersection theory ---------------------------------------------------------

def intersection_matrix(g: DualGraph, subset=None) -> list[list[int]]:
    """Intersection form on the exceptional curves (or on ``subset``)."""
    idx = g.exceptional if subset is None else list(subset)
    if not idx:
        raise GraphError("graph has no exceptional curves")
    return [[g.intersection(i, j) for j in idx] for i in idx]


def is_contractible(g: DualGraph) -> bool:
    return is_negative_definite(intersection_matrix(g))


@dataclass(frozen=True)
class CrepantResult:
    """Crepant pull-back coefficients ``d`` and log discrepancies ``a = 1 - d``."""

    d: dict
    a: dict

    @property
    def sub_boundary(self) -> tuple[str, ...]:
        """Exceptional curves with negative coefficient."""
        return tuple(k for k, v in self.d.items() if v < 0)

    def to_dict(self) -> dict:
        return {
            "d": {k: format_rational(v) for k, v in self.d.items()},
            "a": {k: format_rational(v) for k, v in self.a.items()},
            "sub_boundary": list(self.sub_boundary),
        }


def crepant_discrepancies(g: DualGraph) -> CrepantResult:
    """Solve ``(K + sum d_j E_j + sum b_k C_k) . E_i = 0`` over exceptional ``E_i``."""
    exc = g.exceptional
    m = intersection_matrix(g)
    if not is_negative_definite(m):
        raise SingularGraphError("exceptional curves are not contractible "
                                 "(intersection form is not negative definite)")
    rhs = []
    for i in exc:
        v = g.vertices[i]
        s = Fraction(-v.canonical_degree)
        for k in g.ambient:
            s -= g.vertices[k].mult * g.intersection(k, i)
        rhs.append(s)
    d = solve(m, rhs)
    ids = [g.vertices[i].id for i in exc]
    return CrepantResult(dict(zip(ids, d)), {k: 1 - x for k, x in zip(ids, d)})


def coefficients(g: DualGraph, result: CrepantResult | None = None) -> dict[str, Fraction]:
    """Coefficient of every curve in the crepant pull-back boundary."""
    if result is None:
        result = crepant_discrepancies(g) if g.exceptional else CrepantResult({}, {})
    out = {}
    for v in g.vertices:
        out[v.id] = v.mult if v.role == AMBIENT else result.d[v.id]
    return out


def pairing(g: DualGraph, divisor_coeffs: Mapping, test_vertex) -> Fraction:
    """``(K + sum c_j V_j) . V_test``."""
    t = g.index(test_vertex)
    total = Fraction(g.vertices[t].canonical_degree)
    for vid, c in divisor_coeffs.items():
        total += to_rational(c) * g.intersection(g.index(vid), t)
    return total


def log_discrepancies(g: DualGraph) -> dict[str, Fraction]:
    """Log discrepancies of the boundary and exceptional curves of the model.

    Ambient curves outside the support of the boundary are omitted.
    """
    res = crepant_discrepancies(g) if g.exceptional else CrepantResult({}, {})
    out = {}
    for v in g.vertices:
        if v.role == EXCEPTIONAL:
            out[v.id] = res.a[v.id]
        elif v.mult > 0:
            out[v.id] = 1 - v.mult
    return out


def _crossings(g: DualGraph, a: Mapping[str, Fraction]) -> list[tuple[Fraction, Fraction]]:
    """Pairs of log discrepancies at every node of the configuration."""
    def disc(i):
        return a.get(g.vertices[i].id, Fraction(1))

    pairs = [(disc(i), disc(j)) for i, j, _ in g.edges]
    for i, v in enumerate(g.vertices):
        pairs.extend([(disc(i), disc(i))] * v.nodes)
    return pairs


def _require_snc(g: DualGraph):
    if not g.is_snc():
        raise GraphError("configuration is not simple normal crossing: "
                         "resolve tangencies before asking for discrepancies")


def mld(g: DualGraph):
    """Minimal log discrepancy over the model and its toroidal blow-ups.

    Returns ``-math.inf`` when the pair is not log canonical.
    """
    _require_snc(g)
    a = log_discrepancies(g)
    if any(x < 0 for x in a.values()):
        return -math.inf
    candidates = [Fraction(2)] + list(a.values())
    candidates += [x + y for x, y in _crossings(g, a)]
    return min(candidates)


KAWAMATA_LT = "KawamataLT"
LC_NOT_KLT = "LogCanonicalNotKLT"
NOT_LC = "NotLogCanonical"


@dataclass(frozen=True)
class LCStatus:
    kind: str
    epsilon: Fraction | None = None

    def __str__(self):
        if self.kind == KAWAMATA_LT:
            return f"{self.kind}({format_rational(self.epsilon)})"
        return self.kind


def log_canonical_status(g: DualGraph) -> LCStatus:
    value = mld(g)
    if value == -math.inf:
        return LCStatus(NOT_LC)
    if value == 0:
        return LCStatus(LC_NOT_KLT)
    return LCStatus(KAWAMATA_LT, value)


def _count_toroidal(a1: Fraction, a2: Fraction, t: Fraction):
    """Number of divisors over a node with discrepancy at most ``t``."""
    if a1 + a2 > t:
        return 0
    if a1 == 0 or a2 == 0:
        return math.inf
    count = 0
    k1 = 1
    while k1 * a1 + a2 <= t:
        k2 = 1
        while k1 * a1 + k2 * a2 <= t:
            if math.gcd(k1, k2) == 1:
                count += 1
            k2 += 1
        k1 += 1
    return count


def delta_invariant(g: DualGraph, threshold: Fraction = DELTA_THRESHOLD):
    """Number of divisors with log discrepancy at most ``threshold``.

    Counts curves of the model and the divisors over its nodes; returns
    ``math.inf`` when a node of log discrepancy 0 generates infinitely many.
    """
    _require_snc(g)
    a = log_discrepancies(g)
    if any(x < 0 for x in a.values()):
        raise GraphError("delta is defined for log canonical pairs only")
    total = sum(1 for x in a.values() if x <= threshold)
    for x, y in _crossings(g, a):
        total += _count_toroidal(x, y, threshold)
    return total


# Du Val classification -------------------------------------------------------

@dataclass(frozen=True)
class SingularityClass:
    kind: str              # "A", "D", "E6", "E7", "E8" or "NonDuVal"
    rank: int | None = None

    @property
    def exceptional_flag(self) -> bool:
        return self.kind in ("E6", "E7", "E8")

    @property
    def is_du_val(self) -> bool:
        return self.kind != "NonDuVal"

    def __str__(self):
        if self.kind in ("A", "D"):
            return f"{self.kind}({self.rank})"
        return self.kind


NON_DU_VAL = SingularityClass("NonDuVal")

_E_ARMS = {(1, 2, 2): "E6", (1, 2, 3): "E7", (1, 2, 4): "E8"}


def _classify_tree(g: DualGraph, comp: list[int]) -> SingularityClass:
    vs = [g.vertices[i] for i in comp]
    if any(v.self_int != -2 or v.genus or v.nodes for v in vs):
        return NON_DU_VAL
    inner = [(i, j, k) for i, j, k in g.edges if i in comp and j in comp]
    if any(k != 1 for *_, k in inner) or len(inner) != len(comp) - 1:
        return NON_DU_VAL
    pairs = {frozenset((i, j)) for i, j, _ in inner}
    if len(pairs) != len(inner):
        return NON_DU_VAL
    deg = {i: sum(1 for e in inner if i in e[:2]) for i in comp}
    branch = [i for i in comp if deg[i] >= 3]
    if not branch:
        return SingularityClass("A", len(comp))
    if len(branch) > 1 or deg[branch[0]] != 3:
        return NON_DU_VAL
    centre = branch[0]
    arms = []
    for start in (j for i, j, _ in inner for i, j in ((i, j), (j, i)) if i == centre):
        length, prev, cur = 1, centre, start
        while True:
            nxt = [w for i, j, _ in inner for v, w in ((i, j), (j, i))
                   if v == cur and w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms = tuple(sorted(arms))
    if arms[:2] == (1, 1):
        return SingularityClass("D", len(comp))
    kind = _E_ARMS.get(arms)
    return SingularityClass(kind, len(comp)) if kind else NON_DU_VAL


def classify_duval(g: DualGraph) -> SingularityClass:
    """ADE type of a connected exceptional locus."""
    comps = g.components(g.exceptional)
    if len(comps) != 1:
        raise GraphError(f"expected one connected exceptional locus, found {len(comps)}")
    return _classify_tree(g, comps[0])


def singular_points(g: DualGraph) -> list[tuple[list[str], SingularityClass]]:
    """ADE type of every connected component of the exceptional locus."""
    return [([g.vertices[i].id for i in c], _classify_tree(g, c))
            for c in g.components(g.exceptional)]


# adjunction ------------------------------------------------------------------

def adjunction_mult(l: int, m: int) -> Fraction:
    """Different at a point of index ``l`` met by a divisor of multiplicity ``(m-1)/m``."""
    if l < 1 or m < 1:
        raise ValueError("l and m must be positive")
    return Fraction(l * m - 1, l * m)


def different_at_point(m: int, crossings=()) -> Fraction:
    """``(m-1)/m + sum k_i d_i / m`` for a cyclic point of index ``m``.

    ``crossings`` lists ``(k_i, d_i)``.  A value above 1 means the adjunction
    is not log canonical; callers decide what to do with it.
    """
    if m < 1:
        raise ValueError("m must be positive")
    value = Fraction(m - 1, m)
    items = [(int(k), multiplicity(d)) for k, d in crossings]
    for k, d in items:
        value += Fraction(k) * d / m
    for k, d in items:
        if k >= 1:
            assert value >= d
            if m >= 2 and d < 1:
                assert value > d
    return value


def hirzebruch_jung(n: int, q: int) -> list[int]:
    """Continued fraction ``n/q = b1 - 1/(b2 - ...)`` with all ``b_i >= 2``."""
    if not 0 < q < n or math.gcd(n, q) != 1:
        raise ValueError("need 0 < q < n coprime")
    out = []
    num, den = n, q
    while den:
        b = -(-num // den)
        out.append(b)
        num, den = den, b * den - num
    return out


def cyclic_quotient_chain(n: int, q: int, prefix: str = "E") -> list[Curve]:
    """Exceptional chain resolving the cyclic quotient singularity ``1/n(1, q)``."""
    return [Curve(f"{prefix}{i}", EXCEPTIONAL, -b)
            for i, b in enumerate(hirzebruch_jung(n, q), 1)]
