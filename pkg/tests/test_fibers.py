from fractions import Fraction as F

import pytest

from surfcomp.curves import CurveConfig, minimal_complement_index
from surfcomp.fibers import (Decoration, FiberComponent, FiberError, FiberModel, KodairaType,
                             central_different, classify_fiber, complement_index, fiber_different,
                             fiber_kernel, fiber_report, normalize, resolved_graph)
from surfcomp.goldens import load_json
from surfcomp.graph import intersection_matrix, is_negative_definite

TYPES = ["mI(1,0)", "Istar(0)", "II", "IIstar", "III", "IIIstar", "IV", "IVstar"]
FIXTURES = load_json("fibers", "fixtures.json")["cases"]


def decorated(self_int, *decs):
    return FiberModel("irreducible", (FiberComponent(0, 0, self_int, tuple(decs)),))


def A(n):
    return Decoration("A", n)


def k_curve(k):
    return Decoration("curve", k)


def test_classify_examples():
    wheel = FiberModel("wheel", (FiberComponent(),) * 3, multiplicity=2)
    assert str(classify_fiber(wheel)) == "mI(2,3)"
    assert classify_fiber(decorated(-1, A(1), A(2), A(5))) == KodairaType("II")
    assert str(classify_fiber(decorated(-2, A(1), A(1), A(1), A(1)))) == "Istar(0)"


def test_star_split_follows_self_intersection():
    assert str(classify_fiber(decorated(-2, A(1), A(2), A(5)))) == "IIstar"
    assert str(classify_fiber(decorated(-1, k_curve(2), k_curve(4), k_curve(4)))) == "III"
    with pytest.raises(FiberError):
        classify_fiber(decorated(-3, A(2), A(2), A(2)))


@pytest.mark.parametrize("text, index", [("mI(5,2)", 1), ("IIIstar", 4), ("IV", 3),
                                         ("Istar(3)", 2), ("II", 6)])
def test_complement_index(text, index):
    assert complement_index(KodairaType.parse(text)) == index


def test_fiber_different_examples():
    assert fiber_different(KodairaType.parse("Istar(4)")).mults == (F(1, 2),) * 4
    assert fiber_different(KodairaType.parse("IV")).mults == (F(2, 3),) * 3
    assert fiber_different(KodairaType.parse("mI(1,0)")).mults == ()


@pytest.mark.parametrize("text", TYPES)
def test_index_coherence(text):
    t = KodairaType.parse(text)
    if t.tag == "mI":
        config = CurveConfig.irreducible([], genus=1)
    else:
        config = CurveConfig.irreducible(fiber_different(t).mults)
        assert sum(fiber_different(t).mults) == 2
    assert minimal_complement_index(config) == complement_index(t)


def test_wheel_and_nodal_index_one():
    assert minimal_complement_index(CurveConfig.wheel([], [], [])) == 1
    assert minimal_complement_index(CurveConfig.irreducible([], genus=1)) == 1


@pytest.mark.parametrize("case", FIXTURES, ids=[c["name"] for c in FIXTURES])
def test_fixtures(case):
    model = FiberModel.from_dict(case["model"])
    report = fiber_report(model)
    assert str(report.type) == case["type"]
    assert report.check.is_fibre == case["fibre_class"]
    m = intersection_matrix(report.graph, range(len(report.graph.vertices)))
    assert not is_negative_definite(m)
    if t_dec := central_different(model):
        assert t_dec == tuple(sorted(fiber_different(report.type).mults))


def test_kernel_multiplicities():
    g = resolved_graph(decorated(-2, A(1), A(1), A(1), A(1)))
    check = fiber_kernel(g)
    assert check.is_fibre and check.multiplicities["C1"] == 2
    e8 = fiber_kernel(resolved_graph(decorated(-2, A(1), A(2), A(5))))
    assert max(e8.multiplicities.values()) == 6 == e8.multiplicities["C1"]
    ii = fiber_kernel(resolved_graph(decorated(-1, k_curve(2), k_curve(3), k_curve(6))))
    assert ii.multiplicities["C1"] == 6


def test_du_val_reading_of_ii_is_not_a_fibre():
    g = resolved_graph(decorated(-1, A(1), A(2), A(5)))
    assert not fiber_kernel(g).is_fibre


def test_istar_chain_length():
    ends = (A(1), A(1))
    model = FiberModel("chain", (FiberComponent(0, 0, -2, ends), FiberComponent(0, 0, -2),
                                 FiberComponent(0, 0, -2), FiberComponent(0, 0, -2, ends)))
    assert str(classify_fiber(model)) == "Istar(3)"
    assert fiber_kernel(resolved_graph(model)).is_fibre


def test_normalize_contracts_interior_minus_one():
    ends = (A(1), A(1))
    model = FiberModel("chain", (FiberComponent(0, 0, -3, ends), FiberComponent(0, 0, -1),
                                 FiberComponent(0, 0, -3, ends)), smooth=True)
    n = normalize(model)
    assert [c.self_int for c in n.components] == [-2, -2]
    assert str(classify_fiber(model)) == "Istar(1)"
    # without smoothness the (-1)-curve stays and the chain is rejected
    with pytest.raises(FiberError):
        classify_fiber(FiberModel("chain", model.components))


def test_wheel_needs_uniform_multiplicity():
    comps = (FiberComponent(multiplicity=2), FiberComponent(multiplicity=3))
    with pytest.raises(FiberError):
        classify_fiber(FiberModel("wheel", comps))
    ok = (FiberComponent(multiplicity=2),) * 2
    assert str(classify_fiber(FiberModel("wheel", ok))) == "mI(2,2)"


def test_errors():
    with pytest.raises(FiberError):
        classify_fiber(decorated(-1, A(1), A(1)))
    with pytest.raises(FiberError):
        classify_fiber(FiberModel("irreducible", (FiberComponent(genus=2),)))
    with pytest.raises(FiberError):
        Decoration("A", 0)
    with pytest.raises(FiberError):
        Decoration.from_dict({"type": "E", "n": 6})
    with pytest.raises(FiberError):
        FiberModel("wheel", (FiberComponent(),))
    with pytest.raises(ValueError):
        KodairaType.parse("V")


def test_type_parse_round_trip():
    for text in TYPES + ["mI(3,7)", "Istar(5)"]:
        assert str(KodairaType.parse(text)) == text


def test_model_dict_round_trip():
    for case in FIXTURES:
        model = FiberModel.from_dict(case["model"])
        assert FiberModel.from_dict(model.to_dict()) == model
