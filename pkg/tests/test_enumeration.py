from fractions import Fraction as F

import pytest

from surfcomp.arith import farey
from surfcomp.enumeration import (format_boundary, minimal_index_census, multiplier_table,
                                  multiplier_witnesses, standard_values)

import oracles

SMALL_POINTS, SMALL_DEN = 3, 10


@pytest.fixture(scope="module")
def oracle_tables():
    return oracles.multiplier_tables(SMALL_POINTS, SMALL_DEN)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6])
def test_small_tables_match_brute_force(n, oracle_tables):
    got = multiplier_table(n, SMALL_POINTS, SMALL_DEN, workers=1)
    assert got == frozenset(oracle_tables.get(n, set()))


@pytest.mark.parametrize("n", [1, 3, 6])
def test_witnesses_realise_their_multiplier(n):
    for m, witness in multiplier_witnesses(n, SMALL_POINTS, 12, workers=1).items():
        assert len(witness) <= SMALL_POINTS and sum(witness) < 2
        assert all(b.denominator <= 12 for b in witness)
        assert oracles.min_index(witness) == n
        assert oracles.curve_ok(witness, (n + 1) * m)
        assert not any(oracles.curve_ok(witness, (n + 1) * k) for k in range(1, m))


def test_small_m_window_grows():
    # a starting window of 1 must still find every multiplier
    wide = multiplier_witnesses(1, SMALL_POINTS, SMALL_DEN, workers=1)
    narrow = multiplier_witnesses(1, SMALL_POINTS, SMALL_DEN, workers=1, m_bound=1)
    assert set(wide) == set(narrow)


def test_multiplier_table_rejects_irregular_index():
    with pytest.raises(ValueError):
        multiplier_table(5)
    with pytest.raises(ValueError):
        multiplier_table(1, 0, 10)


def test_census_matches_brute_force():
    values = farey(9, include_one=True)[1:]
    census = minimal_index_census(values, 3, 66, workers=1)
    want = {oracles.min_index(c) for c in oracles.boundaries(values, 3, F(2), strict=False)}
    assert set(census) == want
    for n, witness in census.items():
        assert oracles.min_index(witness) == n


def test_census_on_standard_values_small():
    census = minimal_index_census(standard_values(12), 4, 66, workers=1)
    assert set(census) <= {1, 2, 3, 4, 6}


def test_parallel_run_agrees_with_serial():
    serial = multiplier_table(2, SMALL_POINTS, SMALL_DEN, workers=1)
    assert multiplier_table(2, SMALL_POINTS, SMALL_DEN, workers=2) == serial


def test_helpers():
    assert standard_values(3) == [F(1, 2), F(2, 3), F(1)]
    assert standard_values(3, include_reduced=False) == [F(1, 2), F(2, 3)]
    assert format_boundary([F(1, 2), 1]) == "{1/2, 1}"
