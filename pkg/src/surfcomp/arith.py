"""Exact boundary arithmetic.

Every multiplicity, discrepancy and degree in the package is a
:class:`fractions.Fraction`.  This module holds the conversions used at the
package boundary (parsing ``"p/q"`` strings, validating multiplicities) and
the floor-shift operator ``floor((n+1) b) / n`` that drives all complement
criteria.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational as _RationalABC

Rational = Fraction

#: Regular complementary indices on curves and surfaces.
RN1 = frozenset({1, 2})
RN2 = frozenset({1, 2, 3, 4, 6})
N1 = RN2
EN1 = N1 - RN1

INDEX_SETS = {"RN1": RN1, "RN2": RN2, "N1": N1}

#: Multiplicities at least this large satisfy (M) regardless of their form.
M_THRESHOLD = Fraction(6, 7)


def to_rational(x) -> Fraction:
    """Coerce ``x`` to an exact fraction.

    Accepts ints, Fractions and strings such as ``"5/6"`` or ``"2"``.
    Floats are refused: a float has already lost the exact value.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, _RationalABC):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip()
        if not s or any(c in s for c in ".eE"):
            raise ValueError(f"not an exact rational: {x!r}")
        return Fraction(s)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def format_rational(q) -> str:
    """Serialize as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    q = to_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def multiplicity(x) -> Fraction:
    """Validate a boundary multiplicity, which must lie in [0, 1]."""
    b = to_rational(x)
    if b < 0 or b > 1:
        raise ValueError(f"multiplicity {format_rational(b)} is outside [0, 1]")
    return b


def floor_shift(b, n: int) -> Fraction:
    """Return ``floor((n+1) b) / n`` exactly."""
    b = multiplicity(b)
    if n < 1:
        raise ValueError("n must be a positive integer")
    return Fraction(((n + 1) * b.numerator) // b.denominator, n)


def is_standard(b) -> bool:
    """True for ``b = 1`` or ``b = (m-1)/m`` with ``m >= 1``."""
    b = to_rational(b)
    if b == 1:
        return True
    # (m-1)/m is already in lowest terms, so the numerator is den - 1
    return 0 <= b < 1 and b.numerator == b.denominator - 1


def satisfies_M(b) -> bool:
    return is_standard(b) or to_rational(b) >= M_THRESHOLD


def in_lattice(r, k: int) -> bool:
    """True iff ``r`` lies in ``Z/k``."""
    r = to_rational(r)
    return k % r.denominator == 0


def monotonicity_drop_stable(r, n: int) -> bool:
    """Whether lowering ``r`` infinitesimally leaves ``floor_shift(r, n)`` unchanged.

    This happens exactly when ``r`` is not in ``Z/(n+1)``.
    """
    r = multiplicity(r)
    if n < 1:
        raise ValueError("n must be a positive integer")
    return not in_lattice(r, n + 1)


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def common_denominator(values) -> int:
    return lcm(*(to_rational(v).denominator for v in values))


def farey(max_den: int, *, include_one: bool = False) -> list[Fraction]:
    """All fractions in [0, 1) with denominator at most ``max_den``, sorted."""
    out = {Fraction(p, q) for q in range(1, max_den + 1) for p in range(q)}
    if include_one:
        out.add(Fraction(1))
    return sorted(out)
