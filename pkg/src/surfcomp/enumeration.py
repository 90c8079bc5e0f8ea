"""Brute-force enumerators over boundaries on P^1.

The complement criterion at index N only sees ``floor((N+1) b)`` for each
point, so a boundary is summarised by the integer vector of these floors over
a fixed set of indices.  Points are grouped into classes with equal vectors
(keeping the smallest multiplicity of each class, which is what the degree
constraint cares about), multisets are assembled from two halves whose
vectors add, and the final half-by-half merge is vectorised with numpy.
The result is exact: every boundary in the search grid is represented by a
class representative with the same floors and no larger degree.
"""
from __future__ import annotations

import bisect
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .arith import N1, farey, format_rational, is_standard

DEFAULT_MAX_DEN = 60
DEFAULT_MAX_COMP = 4


def _floor_vector(b: Fraction, columns: Sequence[int]) -> tuple[int, ...]:
    # scaled degree N*(floor(b) + floor((N+1){b})/N), integer valued
    if b == 1:
        return tuple(columns)
    return tuple(((N + 1) * b.numerator) // b.denominator for N in columns)


@dataclass
class _Level:
    vecs: np.ndarray                     # (rows, columns) int64
    sums: list                           # exact degree of each representative
    members: list                        # representative multiplicities per row


def _classes(values, columns) -> _Level:
    reps: dict[tuple, Fraction] = {}
    for b in values:
        if b == 0:
            continue
        v = _floor_vector(b, columns)
        if v not in reps or b < reps[v]:
            reps[v] = b
    zero = (0,) * len(columns)
    keys = [zero] + list(reps)
    sums = [Fraction(0)] + list(reps.values())
    members = [()] + [(b,) for b in reps.values()]
    return _Level(np.array(keys, dtype=np.int64), sums, members)


def _admissible(total: Fraction, max_degree: Fraction, strict: bool) -> bool:
    return total < max_degree if strict else total <= max_degree


def _merge(a: _Level, b: _Level, same: bool, max_degree, strict) -> _Level:
    """All sums of one row of ``a`` and one row of ``b``, deduplicated by vector."""
    rows, cols = [], []
    for i in range(len(a.sums)):
        start = i if same else 0
        for j in range(start, len(b.sums)):
            if _admissible(a.sums[i] + b.sums[j], max_degree, strict):
                rows.append(i)
                cols.append(j)
    rows = np.array(rows, dtype=np.int64)
    cols = np.array(cols, dtype=np.int64)
    sums = [a.sums[i] + b.sums[j] for i, j in zip(rows.tolist(), cols.tolist())]
    order = sorted(range(len(sums)), key=sums.__getitem__)
    rows, cols = rows[order], cols[order]
    vecs = a.vecs[rows] + b.vecs[cols]
    # np.unique keeps the first occurrence, i.e. the smallest degree
    _, first = np.unique(vecs, axis=0, return_index=True)
    first.sort()
    keep = [order[k] for k in first.tolist()]
    return _Level(
        vecs[first],
        [sums[k] for k in keep],
        [tuple(sorted(a.members[i] + b.members[j], reverse=True))
         for i, j in zip(rows[first].tolist(), cols[first].tolist())],
    )


def _levels(values, columns, max_points, max_degree, strict) -> tuple[_Level, _Level, bool]:
    base = _classes(values, columns)
    built = {0: _Level(base.vecs[:1], base.sums[:1], base.members[:1]), 1: base}

    def level(k):
        if k not in built:
            h = (k + 1) // 2
            built[k] = _merge(level(h), level(k - h), h == k - h, max_degree, strict)
        return built[k]

    def by_degree(lv):
        order = sorted(range(len(lv.sums)), key=lv.sums.__getitem__)
        return _Level(lv.vecs[order], [lv.sums[k] for k in order],
                      [lv.members[k] for k in order])

    h = (max_points + 1) // 2
    right = by_degree(level(max_points - h))
    same = h == max_points - h
    left = right if same else by_degree(level(h))
    return left, right, same


# worker state, installed once per process
_STATE: dict = {}


def _install(state):
    _STATE.clear()
    _STATE.update(state)


def _scan_rows(row_ids):
    left, right, same = _STATE["left"], _STATE["right"], _STATE["same"]
    caps, outcome = _STATE["caps"], _STATE["outcome"]
    max_degree, strict = _STATE["max_degree"], _STATE["strict"]
    found: dict = {}
    for a in row_ids:
        room = max_degree - left.sums[a]
        hi = (bisect.bisect_left if strict else bisect.bisect_right)(right.sums, room)
        start = a if same else 0
        if hi <= start:
            # left rows are sorted by degree, so later rows have even less room
            if same or hi == 0:
                break
            continue
        for key, j in outcome(left.vecs[a], right.vecs[start:hi], caps):
            if key not in found:
                found[key] = (a, start + j)
    return found


def _run(values, columns, max_points, max_degree, strict, outcome, workers):
    left, right, same = _levels(values, columns, max_points, max_degree, strict)
    state = dict(left=left, right=right, same=same, outcome=outcome,
                 caps=2 * np.array(columns, dtype=np.int64),
                 max_degree=Fraction(max_degree), strict=strict)
    rows = list(range(len(left.sums)))
    workers = workers or os.cpu_count() or 1
    if workers <= 1:
        _install(state)
        shards = [_scan_rows(rows)]
    else:
        chunks = [rows[k::workers * 4] for k in range(workers * 4)]
        with ProcessPoolExecutor(workers, initializer=_install, initargs=(state,)) as pool:
            shards = list(pool.map(_scan_rows, chunks))
    merged: dict = {}
    for shard in shards:
        for key, pair in shard.items():
            if key not in merged or pair < merged[key]:
                merged[key] = pair
    return {key: tuple(sorted(left.members[a] + right.members[b], reverse=True))
            for key, (a, b) in merged.items()}


def _first_true(ok: np.ndarray) -> np.ndarray:
    """Index of the first True per row, -1 where the row has none."""
    return np.where(ok.any(axis=1), ok.argmax(axis=1), -1)


class _MultiplierOutcome:
    """Picklable outcome: minimal multiplier m for rows of minimal index n."""

    def __init__(self, n, m_bound):
        self.n, self.m_bound = n, m_bound
        columns = multiplier_columns(n, m_bound)
        pos = {N: k for k, N in enumerate(columns)}
        self.index_cols = [pos[N] for N in range(1, 7)]
        self.m_cols = [pos[(n + 1) * m] for m in range(1, m_bound + 1)]

    def __call__(self, vec, block, caps):
        ic = self.index_cols
        ok = (vec[ic] + block[:, ic]) <= caps[ic]
        first = _first_true(ok) + 1
        rows = np.nonzero(first == self.n)[0]
        if rows.size == 0:
            return []
        mc = self.m_cols
        m = _first_true((vec[mc] + block[rows][:, mc]) <= caps[mc]) + 1
        out = []
        for value in np.unique(m).tolist():
            j = int(rows[np.nonzero(m == value)[0][0]])
            out.append((value if value > 0 else None, j))
        return out


def multiplier_columns(n: int, m_bound: int) -> list[int]:
    return sorted(set(range(1, 7)) | {(n + 1) * m for m in range(1, m_bound + 1)})


def multiplier_witnesses(n: int, max_components: int = DEFAULT_MAX_COMP,
                         max_denominator: int = DEFAULT_MAX_DEN, *,
                         workers: int | None = None, m_bound: int = 8) -> dict[int, tuple]:
    """Map each multiplier m to a boundary realising it.

    Scans boundaries on P^1 with ``deg B < 2``, at most ``max_components``
    points and denominators at most ``max_denominator`` whose minimal
    complementary index is ``n``; for each, m is the least positive integer
    with an ``(n+1)m``-complement.  ``m_bound`` is only the initial search
    window; it grows until every boundary is resolved.
    """
    if n not in N1:
        raise ValueError(f"n must be one of {sorted(N1)}")
    if max_components < 1 or max_denominator < 1:
        raise ValueError("caps must be positive")
    values = farey(max_denominator)
    while True:
        found = _run(values, multiplier_columns(n, m_bound), max_components, 2, True,
                     _MultiplierOutcome(n, m_bound), workers)
        if None not in found:
            return dict(sorted(found.items()))
        m_bound += 4


def multiplier_table(n: int, max_components: int = DEFAULT_MAX_COMP,
                     max_denominator: int = DEFAULT_MAX_DEN, *,
                     workers: int | None = None) -> frozenset[int]:
    return frozenset(multiplier_witnesses(n, max_components, max_denominator,
                                          workers=workers))


class _IndexOutcome:
    def __call__(self, vec, block, caps):
        first = _first_true((vec + block) <= caps)
        out = []
        for value in np.unique(first).tolist():
            j = int(np.nonzero(first == value)[0][0])
            out.append((value + 1 if value >= 0 else None, j))
        return out


def minimal_index_census(values, max_points: int, bound: int = 66, *,
                         max_degree=2, strict: bool = False,
                         workers: int | None = None) -> dict[int | None, tuple]:
    """Minimal complementary indices (up to ``bound``) over all multisets of
    at most ``max_points`` values on P^1 with bounded degree, each with a
    witness boundary.  ``None`` collects boundaries with no index <= bound.
    """
    columns = list(range(1, bound + 1))
    return dict(sorted(_run(sorted(set(values)), columns, max_points, max_degree, strict,
                            _IndexOutcome(), workers).items(),
                       key=lambda kv: (kv[0] is None, kv[0] or 0)))


def standard_values(max_den: int, *, include_reduced: bool = True) -> list[Fraction]:
    out = [Fraction(m - 1, m) for m in range(2, max_den + 1)]
    if include_reduced:
        out.append(Fraction(1))
    assert all(is_standard(b) for b in out)
    return out


def format_boundary(mults) -> str:
    return "{" + ", ".join(format_rational(b) for b in mults) + "}"
