import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from surfcomp.complement_types import load_case
from surfcomp.graph import (AMBIENT, EXCEPTIONAL, KAWAMATA_LT, LC_NOT_KLT, NOT_LC, Curve,
                            DualGraph, GraphError, SingularGraphError, adjunction_mult,
                            classify_duval, coefficients, crepant_discrepancies,
                            cyclic_quotient_chain, delta_invariant, determinant,
                            different_at_point, hirzebruch_jung, intersection_matrix,
                            is_contractible, is_negative_definite, kernel, leading_minors,
                            log_canonical_status, mld, pairing, rank, singular_points, solve)

import oracles


def E(i, s=-2):
    return Curve(f"E{i}", EXCEPTIONAL, s)


def amb(name, b, s=0, **kw):
    return Curve(name, AMBIENT, s, mult=b, **kw)


def chain(selfs, extra=(), extra_edges=()):
    vs = tuple(E(i, s) for i, s in enumerate(selfs, 1)) + tuple(extra)
    edges = tuple((f"E{i}", f"E{i + 1}", 1) for i in range(1, len(selfs))) + tuple(extra_edges)
    return DualGraph(vs, edges)


def tree(n, arms):
    """(-2)-tree with a centre E1 and arms of the given lengths."""
    vs, edges, k = [E(1)], [], 1
    for length in arms:
        prev = "E1"
        for _ in range(length):
            k += 1
            vs.append(E(k))
            edges.append((prev, f"E{k}", 1))
            prev = f"E{k}"
    assert len(vs) == n
    return DualGraph(tuple(vs), tuple(edges))


def ade_graphs():
    out = [(f"A({n})", chain([-2] * n)) for n in range(1, 9)]
    out += [(f"D({n})", tree(n, (1, 1, n - 3))) for n in range(4, 9)]
    out += [("E6", tree(6, (1, 2, 2))), ("E7", tree(7, (1, 2, 3))), ("E8", tree(8, (1, 2, 4)))]
    return out


def single(m, b):
    return DualGraph((E(1, -m), amb("C", b)), (("E1", "C", 1),))


def a2_with_boundary(b=F(6, 7)):
    return chain([-2, -2], [amb("C", b)], [("C", "E1", 1)])


def d_tilde_4():
    return tree(5, (1, 1, 1, 1))


def a26():
    return DualGraph.from_dict(load_case("A26")["readings"][0]["graph"])


# matrices

def test_intersection_matrix_examples():
    assert intersection_matrix(chain([-2])) == [[-2]]
    assert intersection_matrix(chain([-2, -2])) == [[-2, 1], [1, -2]]
    m = intersection_matrix(d_tilde_4())
    assert [sum(r) for r in m] == [2, -1, -1, -1, -1]


def test_contractibility_examples():
    for _, g in ade_graphs():
        assert is_contractible(g)
    assert not is_contractible(chain([0]))
    assert not is_contractible(d_tilde_4())
    assert determinant(intersection_matrix(d_tilde_4())) == 0
    assert rank(intersection_matrix(d_tilde_4())) == 4


@pytest.mark.parametrize("name, g", ade_graphs())
def test_ade_determinants(name, g):
    # |det| of the ADE Cartan matrices: n+1, 4, 3, 2, 1
    m = intersection_matrix(g)
    n = len(m)
    want = {"A": n + 1, "D": 4}.get(name[0], {"E6": 3, "E7": 2, "E8": 1}.get(name))
    assert abs(determinant(m)) == want == abs(oracles.det(m))
    minors = leading_minors(m)
    assert all((-1) ** (k + 1) * x > 0 for k, x in enumerate(minors))


def test_linear_algebra_helpers():
    m = [[F(-2), F(1)], [F(1), F(-2)]]
    assert solve(m, [F(-1), F(0)]) == [F(2, 3), F(1, 3)]
    assert is_negative_definite(m)
    assert not is_negative_definite([[F(-1), F(2)], [F(2), F(-1)]])
    (v,) = kernel(intersection_matrix(d_tilde_4()))
    assert sorted(abs(x) / abs(v[1]) for x in v) == [1, 1, 1, 1, 2]


# crepant solver

def test_crepant_single_curve_example():
    res = crepant_discrepancies(single(3, F(6, 7)))
    assert res.d["E1"] == F(13, 21) and res.a["E1"] == F(8, 21)
    assert res.d["E1"] >= F(4, 7)


def test_crepant_a2_example():
    res = crepant_discrepancies(a2_with_boundary())
    assert (res.d["E1"], res.d["E2"]) == (F(4, 7), F(2, 7))


def test_crepant_du_val_is_crepant():
    res = crepant_discrepancies(chain([-2]))
    assert res.d["E1"] == 0 and res.a["E1"] == 1


@pytest.mark.parametrize("name, g", ade_graphs())
def test_du_val_crepancy(name, g):
    res = crepant_discrepancies(g)
    assert set(res.d.values()) == {0} and set(res.a.values()) == {1}


def test_crepant_rejects_non_contractible():
    with pytest.raises(SingularGraphError):
        crepant_discrepancies(d_tilde_4())


def test_sub_boundary_is_flagged():
    # a (-1)-curve pulls back with a negative coefficient
    res = crepant_discrepancies(chain([-1]))
    assert res.d["E1"] == -1 and res.sub_boundary == ("E1",)


def random_graph(rng):
    """Hirzebruch-Jung chain with random ambient curves attached."""
    n = rng.randint(2, 30)
    q = rng.choice([q for q in range(1, n) if math.gcd(n, q) == 1])
    vs = cyclic_quotient_chain(n, q)
    edges = [(f"E{i}", f"E{i + 1}", 1) for i in range(1, len(vs))]
    extra = []
    for k in range(rng.randint(0, 3)):
        den = rng.randint(1, 14)
        extra.append(amb(f"C{k}", F(rng.randint(0, den), den), rng.randint(-3, 3)))
        edges.append((f"C{k}", rng.choice(vs).id, 1))
    return DualGraph(tuple(vs) + tuple(extra), tuple(edges))


def test_crepant_exactness():
    rng = random.Random(7)
    for _ in range(200):
        g = random_graph(rng)
        coeffs = coefficients(g)
        for i in g.exceptional:
            assert pairing(g, coeffs, g.vertices[i].id) == 0


# the single-curve inequalities: d - (m-1)b/m = (m-2)(1-b)/m and d - b/2 = (m-2)(2-b)/(2m)

def grid():
    return sorted({F(p, q) for q in range(1, 15) for p in range(q + 1)})


def test_single_curve_formula():
    for m in range(2, 13):
        for b in grid():
            assert crepant_discrepancies(single(m, b)).d["E1"] == oracles.single_curve_d(m, b)


def test_index_bound_with_equality_cases():
    for m in range(2, 13):
        for b in grid():
            d = crepant_discrepancies(single(m, b)).d["E1"]
            bound = F(m - 1, m) * b
            assert d >= bound
            assert (d == bound) == (m == 2 or b == 1)


def test_index_bound_is_attained_by_reduced_boundary():
    assert crepant_discrepancies(single(5, F(1))).d["E1"] == F(4, 5)


def test_half_bound_with_equality_only_for_a1():
    for m in range(2, 13):
        for b in grid():
            d = crepant_discrepancies(single(m, b)).d["E1"]
            assert d >= b / 2
            assert (d == b / 2) == (m == 2)


@given(st.integers(2, 40), st.fractions(0, 1, max_denominator=60), st.integers(0, 3))
def test_index_bound_survives_disjoint_curves(m, b, extra):
    vs = (E(1, -m), amb("C", b)) + tuple(amb(f"D{k}", F(1, 2), 1) for k in range(extra))
    g = DualGraph(vs, (("E1", "C", 1),))
    d = crepant_discrepancies(g).d["E1"]
    assert d >= F(m - 1, m) * b and d >= b / 2


# log canonicity, mld, delta

def test_status_examples():
    assert str(log_canonical_status(chain([-2]))) == "KawamataLT(1)"
    reduced = chain([-2], [amb("C", 1)], [("C", "E1", 1)])
    assert log_canonical_status(reduced).kind == LC_NOT_KLT
    s = log_canonical_status(a2_with_boundary())
    assert s.kind == KAWAMATA_LT and s.epsilon == F(1, 7)
    bad = chain([-2], [amb("C", 1), amb("D", 1)], [("C", "E1", 1), ("D", "E1", 1)])
    # E1 is forced to coefficient 1, then a node of two a = 0 divisors is still lc
    assert log_canonical_status(bad).kind == LC_NOT_KLT
    worse = chain([-3], [amb("C", 1), amb("D", 1), amb("F", 1)],
                  [("C", "E1", 1), ("D", "E1", 1), ("F", "E1", 1)])
    assert log_canonical_status(worse).kind == NOT_LC


def test_mld_examples():
    assert mld(DualGraph((amb("C", 0, 1),))) == 2
    assert mld(DualGraph((amb("C", F(6, 7), 1),))) == F(1, 7)
    assert mld(a2_with_boundary()) == F(1, 7)


def test_mld_rejects_tangency():
    g = DualGraph((amb("C", F(1, 2), 1), amb("D", F(1, 2), 1)), (("C", "D", 2),))
    with pytest.raises(GraphError):
        mld(g)


def test_mld_not_log_canonical_sentinel():
    worse = chain([-3], [amb("C", 1), amb("D", 1), amb("F", 1)],
                  [("C", "E1", 1), ("D", "E1", 1), ("F", "E1", 1)])
    assert mld(worse) == -math.inf


@given(st.integers(0, 10**6), st.fractions(0, 1, max_denominator=30))
def test_mld_is_monotone_in_the_boundary(seed, raise_to):
    rng = random.Random(seed)
    g = random_graph(rng)
    amb_ids = [g.vertices[i].id for i in g.ambient]
    if not amb_ids:
        return
    target = rng.choice(amb_ids)
    vs = tuple(Curve(v.id, v.role, v.self_int, v.genus, v.nodes,
                     max(v.mult, raise_to) if v.id == target else v.mult)
               for v in g.vertices)
    bigger = DualGraph(vs, g.edges)
    assert mld(bigger) <= mld(g)


def test_delta_examples():
    assert delta_invariant(a26()) == 2
    assert delta_invariant(chain([-2, -2, -2])) == 0
    touching = DualGraph((amb("C1", 1, 1), amb("C2", 1, 1)), (("C1", "C2", 1),))
    assert delta_invariant(touching) == math.inf


def test_delta_counts_divisors_over_nodes():
    # two curves with a = 1/14 meet: 1/14 + 1/14 = 1/7 adds one more divisor
    g = DualGraph((amb("C1", F(13, 14), 1), amb("C2", F(13, 14), 1)), (("C1", "C2", 1),))
    assert delta_invariant(g) == 3


def test_delta_vanishes_above_one_seventh():
    rng = random.Random(11)
    seen = 0
    for _ in range(300):
        g = random_graph(rng)
        status = log_canonical_status(g)
        if status.kind == KAWAMATA_LT and status.epsilon > F(1, 7):
            seen += 1
            assert delta_invariant(g) == 0
    assert seen > 50


def test_pairing_examples():
    g = a26()
    coeffs = coefficients(g)
    assert (coeffs["P1"], coeffs["Q1"]) == (F(3, 7), F(4, 7))
    assert pairing(g, coeffs, "C2") == 0
    assert pairing(chain([-2]), {}, "E1") == 0
    assert pairing(DualGraph((amb("C", 0, 0),)), {}, "C") == -2


# Du Val classification

def test_classify_examples():
    a3 = classify_duval(chain([-2, -2, -2]))
    assert str(a3) == "A(3)" and not a3.exceptional_flag
    e8 = classify_duval(tree(8, (1, 2, 4)))
    assert str(e8) == "E8" and e8.exceptional_flag
    assert not classify_duval(chain([-2, -3, -2])).is_du_val


@pytest.mark.parametrize("name, g", ade_graphs())
def test_classify_all_ade(name, g):
    assert str(classify_duval(g)) == name


def test_classify_rejects_other_trees():
    assert not classify_duval(tree(7, (2, 2, 2))).is_du_val   # affine E6
    assert not classify_duval(d_tilde_4()).is_du_val
    with pytest.raises(GraphError):
        classify_duval(DualGraph((E(1), E(2))))


def test_singular_points_on_a26():
    points = {tuple(ids): str(c) for ids, c in singular_points(a26())}
    assert points == {("P1",): "A(1)", ("Q1", "Q2"): "A(2)"}


# adjunction

@pytest.mark.parametrize("l, m, want", [(1, 1, 0), (2, 1, F(1, 2)), (3, 2, F(5, 6))])
def test_adjunction_mult(l, m, want):
    assert adjunction_mult(l, m) == want


@pytest.mark.parametrize("m, crossings, want", [(1, [], 0), (2, [(1, 0)], F(1, 2)),
                                                (2, [(1, F(6, 7))], F(13, 14))])
def test_different_at_point(m, crossings, want):
    assert different_at_point(m, crossings) == want


@given(st.integers(1, 30), st.lists(st.tuples(st.integers(1, 3), st.fractions(0, 1, max_denominator=20)),
                                    max_size=3))
def test_different_dominates_crossings(m, crossings):
    value = different_at_point(m, crossings)
    for k, d in crossings:
        assert value >= d
        if m >= 2 and d < 1:
            assert value > d


def test_adjunction_rejects_bad_input():
    with pytest.raises(ValueError):
        adjunction_mult(0, 1)
    with pytest.raises(ValueError):
        different_at_point(0)


@given(st.integers(2, 60), st.data())
def test_hirzebruch_jung(n, data):
    q = data.draw(st.sampled_from([q for q in range(1, n) if math.gcd(n, q) == 1]))
    bs = hirzebruch_jung(n, q)
    assert all(b >= 2 for b in bs)
    # the continued fraction evaluates back to n/q
    value = F(bs[-1])
    for b in reversed(bs[:-1]):
        value = b - 1 / value
    assert value == F(n, q)
    m = intersection_matrix(chain([-b for b in bs]))
    assert abs(determinant(m)) == n


def test_graph_validation():
    with pytest.raises(GraphError):
        DualGraph((E(1), E(1)))
    with pytest.raises(GraphError):
        DualGraph((E(1),), (("E1", "E1", 1),))
    with pytest.raises(GraphError):
        DualGraph((E(1),), (("E1", "X", 1),))
    with pytest.raises(GraphError):
        Curve("E", EXCEPTIONAL, -2, mult=F(1, 2))
    with pytest.raises(GraphError):
        DualGraph.from_dict({"edges": []})
    with pytest.raises(ValueError):
        amb("C", F(3, 2))


def test_graph_dict_round_trip():
    g = a26()
    assert DualGraph.from_dict(g.to_dict()) == g
