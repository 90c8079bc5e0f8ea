"""The incidence space of reduced boundary strata.

Every reduced divisor is a vertex, and every irreducible component of an
intersection of ``l+1`` divisors is an ``l``-simplex.  Several components of
one intersection give distinct simplices on the same vertex set, so the space
is a Delta-complex; faces that cannot be read off the vertex sets must be
named explicitly through component tags.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence


class ComplexError(ValueError):
    """Malformed stratification: missing or ambiguous faces."""


@dataclass(frozen=True)
class Stratum:
    divisors: frozenset
    tag: str | None = None
    faces: tuple | None = None   # tags of codimension-one faces, when ambiguous

    @property
    def key(self) -> str:
        base = "|".join(sorted(self.divisors))
        return base if self.tag is None else f"{base}#{self.tag}"


@dataclass(frozen=True)
class Stratification:
    divisors: tuple[str, ...]
    strata: tuple[Stratum, ...] = ()
    ambient_dim: int | None = None

    @classmethod
    def from_dict(cls, d: Mapping) -> "Stratification":
        try:
            strata = []
            for s in d.get("strata", []):
                if isinstance(s, Mapping):
                    divs, tag, faces = s["divisors"], s.get("tag"), s.get("faces")
                else:
                    divs, tag, faces = s, None, None
                strata.append(Stratum(frozenset(str(x) for x in divs),
                                      None if tag is None else str(tag),
                                      None if faces is None else tuple(faces)))
            dim = d.get("ambient_dim")
            return cls(tuple(str(x) for x in d["divisors"]), tuple(strata),
                       None if dim is None else int(dim))
        except (KeyError, TypeError) as exc:
            raise ComplexError(f"malformed stratification: {exc}") from exc

    def to_dict(self) -> dict:
        out = []
        for s in self.strata:
            item = {"divisors": sorted(s.divisors)}
            if s.tag is not None:
                item["tag"] = s.tag
            if s.faces is not None:
                item["faces"] = list(s.faces)
            out.append(item)
        d = {"divisors": list(self.divisors), "strata": out}
        if self.ambient_dim is not None:
            d["ambient_dim"] = self.ambient_dim
        return d


@dataclass(frozen=True)
class Simplex:
    key: str
    vertices: frozenset
    faces: tuple[str, ...] = ()

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True)
class SimplicialSpace:
    simplices: Mapping[str, Simplex]
    ambient_dim: int | None = None
    by_dim: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        by_dim: dict[int, list[Simplex]] = {}
        for s in self.simplices.values():
            by_dim.setdefault(s.dim, []).append(s)
        object.__setattr__(self, "by_dim", by_dim)

    def count(self, dim: int) -> int:
        return len(self.by_dim.get(dim, ()))

    @property
    def dim(self) -> int:
        return max(self.by_dim, default=-1)

    def cofaces(self, key: str) -> list[Simplex]:
        return [s for s in self.simplices.values() if key in s.faces]


def build_complex(s: Stratification) -> SimplicialSpace:
    if len(set(s.divisors)) != len(s.divisors):
        raise ComplexError("duplicate divisor ids")
    simplices: dict[str, Simplex] = {}
    for d in s.divisors:
        simplices[d] = Simplex(d, frozenset([d]))
    by_set: dict[frozenset, list[Stratum]] = {}
    for st in s.strata:
        unknown = st.divisors - set(s.divisors)
        if unknown:
            raise ComplexError(f"stratum {st.key} uses unknown divisors {sorted(unknown)}")
        if len(st.divisors) < 2:
            raise ComplexError(f"stratum {st.key}: single divisors are the vertices")
        if st.key in {x.key for x in by_set.get(st.divisors, [])}:
            raise ComplexError(f"duplicate stratum {st.key}")
        by_set.setdefault(st.divisors, []).append(st)
    tag_index = {st.tag: st for st in s.strata if st.tag is not None}
    for st in sorted(s.strata, key=lambda x: len(x.divisors)):
        faces = []
        if st.faces is not None:
            for t in st.faces:
                if t in s.divisors:
                    faces.append(t)
                    continue
                f = tag_index.get(t)
                if f is None or len(f.divisors) != len(st.divisors) - 1 \
                        or not f.divisors < st.divisors:
                    raise ComplexError(f"stratum {st.key}: {t!r} is not a facet")
                faces.append(f.key)
            got = sorted(sorted(simplices[f].vertices) for f in faces)
            want = sorted(sorted(st.divisors - {d}) for d in st.divisors)
            if got != want:
                raise ComplexError(f"stratum {st.key}: faces {faces} do not cover its boundary")
        else:
            for drop in sorted(st.divisors):
                sub = st.divisors - {drop}
                if len(sub) == 1:
                    faces.append(next(iter(sub)))
                    continue
                cands = by_set.get(sub, [])
                if not cands:
                    raise ComplexError(f"stratum {st.key}: face {'|'.join(sorted(sub))} "
                                       "is missing")
                if len(cands) > 1:
                    raise ComplexError(f"stratum {st.key}: face {'|'.join(sorted(sub))} has "
                                       f"{len(cands)} components; name it with 'faces'")
                faces.append(cands[0].key)
        simplices[st.key] = Simplex(st.key, st.divisors, tuple(faces))
    space = SimplicialSpace(simplices, s.ambient_dim)
    if s.ambient_dim is not None and space.dim > s.ambient_dim - 1:
        raise ComplexError(f"a {space.dim}-simplex cannot occur in dimension {s.ambient_dim}")
    return space


def reg(c: SimplicialSpace):
    """Top dimension of a simplex, ``-math.inf`` for the empty space."""
    return c.dim if c.simplices else -math.inf


def euler_genus(c: SimplicialSpace) -> tuple[int, int]:
    chi = sum((-1) ** s.dim for s in c.simplices.values())
    return chi, 2 - chi


def connected_components(c: SimplicialSpace) -> int:
    parent = {v: v for s in c.simplices.values() if s.dim == 0 for v in s.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s in c.simplices.values():
        vs = sorted(s.vertices)
        for v in vs[1:]:
            parent[find(v)] = find(vs[0])
    return len({find(v) for v in parent})


def _is_path_or_cycle(nodes: Sequence, edges: Sequence[tuple]) -> bool:
    if not nodes or not edges:
        return False
    deg = {n: 0 for n in nodes}
    adj = {n: [] for n in nodes}
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
        adj[a].append(b)
        adj[b].append(a)
    if max(deg.values()) > 2:
        return False
    seen, stack = {nodes[0]}, [nodes[0]]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != len(nodes):
        return False
    return len(edges) in (len(nodes) - 1, len(nodes))


def is_manifold_with_boundary(c: SimplicialSpace) -> bool:
    """Local manifold test; connectivity is not required."""
    if c.dim > 2:
        raise ValueError("manifold checks are implemented up to dimension 2")
    if c.dim <= 0:
        return True
    edges = c.by_dim.get(1, [])
    if c.dim == 1:
        deg: dict = {}
        for e in edges:
            for v in e.vertices:
                deg[v] = deg.get(v, 0) + 1
        return all(d <= 2 for d in deg.values())
    triangles = c.by_dim.get(2, [])
    uses = {e.key: 0 for e in edges}
    for t in triangles:
        for f in t.faces:
            uses[f] += 1
    if any(u > 2 for u in uses.values()):
        return False
    for v in (s.key for s in c.by_dim[0]):
        star_edges = [e.key for e in edges if v in e.faces]
        link_edges = [tuple(f for f in t.faces if v in c.simplices[f].faces)
                      for t in triangles if v in t.vertices]
        if not _is_path_or_cycle(star_edges, link_edges):
            return False
    return True


@dataclass(frozen=True)
class Summary:
    reg: object
    chi: int
    q: int
    components: int
    manifold: bool | None

    def to_dict(self) -> dict:
        return {"reg": "MinusInfinity" if self.reg == -math.inf else self.reg,
                "chi": self.chi, "q": self.q, "components": self.components,
                "manifold": self.manifold}


def summarize(c: SimplicialSpace) -> Summary:
    chi, q = euler_genus(c)
    manifold = is_manifold_with_boundary(c) if c.dim <= 2 else None
    return Summary(reg(c), chi, q, connected_components(c), manifold)


# builders and subdivision ----------------------------------------------------

def complete_graph(n: int) -> Stratification:
    """``n`` divisors meeting pairwise in one point each, no triple points."""
    ds = tuple(f"L{i}" for i in range(1, n + 1))
    return Stratification(ds, tuple(Stratum(frozenset(p)) for p in combinations(ds, 2)), 2)


def cycle(n: int) -> Stratification:
    """A wheel of ``n >= 2`` curves; two curves of a 2-wheel meet in two points."""
    if n < 2:
        raise ValueError("a cycle needs at least two divisors")
    ds = tuple(f"C{i}" for i in range(1, n + 1))
    if n == 2:
        strata = (Stratum(frozenset(ds), "p"), Stratum(frozenset(ds), "q"))
    else:
        strata = tuple(Stratum(frozenset((ds[i], ds[(i + 1) % n]))) for i in range(n))
    return Stratification(ds, strata, 2)


def path(n: int) -> Stratification:
    ds = tuple(f"C{i}" for i in range(1, n + 1))
    return Stratification(ds, tuple(Stratum(frozenset((ds[i], ds[i + 1])))
                                    for i in range(n - 1)), 2)


def from_facets(facets, ambient_dim: int | None = None) -> Stratification:
    """The simplicial complex generated by ``facets`` (vertex sets)."""
    sets = set()
    for f in facets:
        f = frozenset(str(x) for x in f)
        for k in range(1, len(f) + 1):
            sets.update(frozenset(c) for c in combinations(sorted(f), k))
    divisors = tuple(sorted(next(iter(s)) for s in sets if len(s) == 1))
    strata = tuple(Stratum(s) for s in sorted(sets, key=lambda s: (len(s), sorted(s)))
                   if len(s) > 1)
    return Stratification(divisors, strata, ambient_dim)


def stellar_subdivision(s: Stratification, simplex: Sequence[str],
                        new_vertex: str | None = None) -> Stratification:
    """Subdivide ``simplex`` at a new vertex joined to everything around it.

    Needs a complex whose simplices are determined by their vertex sets.
    """
    keys = [st.divisors for st in s.strata]
    if len(set(keys)) != len(keys) or any(st.faces for st in s.strata):
        raise ComplexError("stellar subdivision needs simplices with distinct vertex sets")
    sigma = frozenset(simplex)
    all_sets = {frozenset([d]) for d in s.divisors} | set(keys)
    if sigma not in all_sets:
        raise ComplexError(f"{sorted(sigma)} is not a simplex")
    w = new_vertex or "w:" + "|".join(sorted(sigma))
    if w in s.divisors:
        raise ComplexError(f"vertex {w!r} exists already")
    keep = {t for t in all_sets if not sigma <= t}
    for t in all_sets:
        if sigma <= t:
            for k in range(len(t)):
                for rho in combinations(sorted(t), k):
                    rho = frozenset(rho)
                    if not sigma <= rho:
                        keep.add(rho | {w})
    divisors = tuple(sorted(next(iter(t)) for t in keep if len(t) == 1))
    strata = tuple(Stratum(t) for t in sorted(keep, key=lambda t: (len(t), sorted(t)))
                   if len(t) > 1)
    return Stratification(divisors, strata, s.ambient_dim)


def barycentric_subdivision(s: Stratification) -> Stratification:
    """Stellar subdivision of every simplex, top dimension first."""
    sets = sorted({st.divisors for st in s.strata} | {frozenset([d]) for d in s.divisors},
                  key=lambda t: (-len(t), sorted(t)))
    out = s
    for t in sets:
        if len(t) > 1:
            out = stellar_subdivision(out, sorted(t))
    return out
