"""Golden comparisons against published values, run by ``surfcomp reproduce-tables``."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Callable

from .arith import RN2
from .complement_types import CASES, toric_defect, verify_exceptional_config
from .curves import CurveConfig, complement_exists, invariant_complement_exists, \
    minimal_complement_index
from .enumeration import minimal_index_census, multiplier_table, standard_values
from .fibers import FiberModel, KodairaType, classify_fiber, complement_index, fiber_different
from .graph import AMBIENT, EXCEPTIONAL, Curve, DualGraph, crepant_discrepancies, \
    delta_invariant, different_at_point, mld
from .simplicial import build_complex, complete_graph, cycle, euler_genus, \
    is_manifold_with_boundary, path

MULTIPLIER_TABLES = {
    1: frozenset({1, 2, 3, 4, 5, 6, 7, 8, 9, 11}),
    2: frozenset({1, 2, 3, 4, 5, 6, 7, 8, 10}),
    3: frozenset({1, 3, 4, 5, 6}),
    4: frozenset({2, 3, 4, 5, 6, 8}),
    6: frozenset({3, 4, 5, 6, 8}),
}

KODAIRA_INDEX = {"mI(1,0)": 1, "Istar(0)": 2, "II": 6, "IIstar": 6, "III": 4,
                 "IIIstar": 4, "IV": 3, "IVstar": 3}


@dataclass(frozen=True)
class Golden:
    name: str
    run: Callable[[], tuple[bool, str]]
    slow: bool = False


def data_file(*parts: str):
    return resources.files("surfcomp").joinpath("data", "v1", *parts)


def load_json(*parts: str):
    return json.loads(data_file(*parts).read_text())


def _multiplier(n, workers):
    def run():
        got = multiplier_table(n, workers=workers)
        want = MULTIPLIER_TABLES[n]
        return got == want, f"n={n}: {sorted(got)}"
    return run


def _closure(workers):
    def run():
        census = minimal_index_census(standard_values(50), 5, 66, workers=workers)
        got = set(census)
        return got <= set(RN2), f"minimal indices {sorted(got, key=lambda x: x or 0)}"
    return run


def _fiber_coherence():
    bad = []
    for text, want in KODAIRA_INDEX.items():
        t = KodairaType.parse(text)
        diff = fiber_different(t)
        if t.tag == "mI":
            config = CurveConfig.irreducible((), genus=1)
        else:
            config = CurveConfig.irreducible(diff.mults)
        got = minimal_complement_index(config)
        if not (got == complement_index(t) == want):
            bad.append(f"{text}: {got}")
    return not bad, "; ".join(bad) or "indices 1, 2, 6, 6, 4, 4, 3, 3"


def _fiber_fixtures():
    bad = []
    for case in load_json("fibers", "fixtures.json")["cases"]:
        got = str(classify_fiber(FiberModel.from_dict(case["model"])))
        if got != case["type"]:
            bad.append(f"{case['name']}: {got}")
    return not bad, "; ".join(bad) or "all fixtures classified"


def _single_curve(m: int, b: Fraction) -> DualGraph:
    return DualGraph((Curve("E", EXCEPTIONAL, -m), Curve("C", AMBIENT, 0, mult=b)),
                     (("E", "C", 1),))


def _crepant():
    for m in range(2, 13):
        for den in range(1, 15):
            for num in range(den + 1):
                b = Fraction(num, den)
                d = crepant_discrepancies(_single_curve(m, b)).d["E"]
                if d != Fraction(m - 2, m) + b / m:
                    return False, f"m={m}, b={b}: d={d}"
    g = DualGraph((Curve("E1", EXCEPTIONAL, -2), Curve("E2", EXCEPTIONAL, -2),
                   Curve("C", AMBIENT, 0, mult=Fraction(6, 7))),
                  (("E1", "E2", 1), ("C", "E1", 1)))
    d = crepant_discrepancies(g).d
    ok = (d["E1"], d["E2"]) == (Fraction(4, 7), Fraction(2, 7))
    return ok, "single (-m)-curves m<=12; A2 chain gives 4/7, 2/7"


def _delta():
    a26 = verify_exceptional_config("A26")
    duval = DualGraph(tuple(Curve(f"E{i}", EXCEPTIONAL, -2) for i in range(1, 4)),
                      (("E1", "E2", 1), ("E2", "E3", 1)))
    touching = DualGraph((Curve("C1", AMBIENT, 1, mult=1), Curve("C2", AMBIENT, 1, mult=1)),
                         (("C1", "C2", 1),))
    results = (a26.passed, delta_invariant(duval) == 0,
               delta_invariant(touching) == float("inf"))
    return all(results), f"A26 {results[0]}, Du Val {results[1]}, reduced crossing {results[2]}"


def _exceptional():
    bad = [n for n in CASES if not verify_exceptional_config(n).passed]
    return not bad, f"failing: {bad}" if bad else f"{len(CASES)} configurations"


def _toric():
    bad = []
    for case in load_json("toric", "fixtures.json")["cases"]:
        mults = [v.get("mult", "0") for v in case["graph"]["vertices"]]
        defect = toric_defect(case["rho"], mults)
        if (defect == 0) != case["toric"]:
            bad.append(f"{case['name']}: {defect}")
    return not bad, "; ".join(bad) or "toric wheels n=3..12 and non-toric fixtures"


def _simplicial():
    kn = all(is_manifold_with_boundary(build_complex(complete_graph(n))) == (n <= 3)
             for n in range(2, 9))
    wheel = euler_genus(build_complex(cycle(5))) == (0, 2)
    chain = euler_genus(build_complex(path(4))) == (1, 1)
    return kn and wheel and chain, f"K_n {kn}, wheel {wheel}, chain {chain}"


def _invariant():
    orbits = [(2, Fraction(1, 3)), (3, Fraction(1, 3))]
    eq = invariant_complement_exists(orbits, 3)
    plain = complement_exists(CurveConfig.irreducible([Fraction(1, 3)] * 5), 3)
    return (not eq) and plain, f"invariant {eq}, plain {plain}"


def _curve_examples():
    checks = [
        complement_exists(CurveConfig.irreducible([Fraction(1, 2)] * 4), 2),
        minimal_complement_index(CurveConfig.irreducible(
            [Fraction(1, 2), Fraction(2, 3), Fraction(5, 6)])) == 6,
        minimal_complement_index(CurveConfig.irreducible([Fraction(2, 3)] * 3)) == 3,
    ]
    return all(checks), f"{sum(checks)}/{len(checks)}"


def _discrepancy_examples():
    single = DualGraph((Curve("C", AMBIENT, 1, mult=Fraction(6, 7)),))
    checks = [mld(single) == Fraction(1, 7),
              different_at_point(2, [(1, Fraction(6, 7))]) == Fraction(13, 14)]
    return all(checks), f"{sum(checks)}/{len(checks)}"


def goldens(workers: int | None = None) -> list[Golden]:
    out = [Golden(f"multiplier table n={n}", _multiplier(n, workers), slow=True)
           for n in sorted(MULTIPLIER_TABLES)]
    out += [
        Golden("regular-index closure", _closure(workers)),
        Golden("fiber index coherence", _fiber_coherence),
        Golden("fiber fixtures", _fiber_fixtures),
        Golden("crepant solver", _crepant),
        Golden("delta invariant", _delta),
        Golden("exceptional configurations", _exceptional),
        Golden("toric criterion", _toric),
        Golden("incidence spaces", _simplicial),
        Golden("invariant complements", _invariant),
        Golden("curve complements", _curve_examples),
        Golden("discrepancies", _discrepancy_examples),
    ]
    return out
