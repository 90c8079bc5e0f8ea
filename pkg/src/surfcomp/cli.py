"""Command-line entry point: ``surfcomp <subcommand> [--in FILE] [--json]``.

Inputs are JSON documents read from ``--in`` or standard input.  Exit status
is 0 on success, 1 when a golden comparison fails and 2 on malformed input.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time

from . import complement_types as ct
from . import curves, enumeration, fibers, graph, simplicial
from .arith import format_rational, to_rational
from .goldens import goldens

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


class GoldenFailure(Exception):
    def __init__(self, report):
        super().__init__("golden comparison failed")
        self.report = report


def _q(x) -> str:
    return format_rational(x)


def _read(args, required=True):
    if args.input is not None:
        try:
            with open(args.input) as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {args.input}: {exc.strerror}") from exc
    elif required:
        text = sys.stdin.read()
    else:
        return None
    try:
        return json.loads(text, parse_float=_no_float)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc


def _no_float(text):
    raise InputError(f"decimal number {text} in input; write rationals as \"p/q\" strings")


def _field(doc, key, default=None):
    if not isinstance(doc, dict):
        raise InputError(f"expected a JSON object with {key!r}")
    if key not in doc:
        if default is not None:
            return default
        raise InputError(f"missing field {key!r}")
    return doc[key]


def _mults(seq):
    if not isinstance(seq, list):
        raise InputError("boundary must be a list of multiplicities")
    return [to_rational(x["mult"] if isinstance(x, dict) else x) for x in seq]


# subcommand handlers: each returns (report dict, human text)

def cmd_curve_complement(args):
    doc = _read(args)
    n = args.n
    if isinstance(doc, dict) and "config" in doc:
        n = int(doc["n"]) if n is None and "n" in doc else n
        doc = doc["config"]
    if n is None:
        raise InputError("give --n or wrap the curve as {\"config\": ..., \"n\": ...}")
    config = curves.CurveConfig.from_dict(doc)
    degrees = curves.complement_degrees(config, n)
    ok = all(d <= 0 for d in degrees)
    return ({"n": n, "complementary": ok, "degrees": [_q(d) for d in degrees]},
            f"{n}-complement: {'yes' if ok else 'no'} (degrees {', '.join(map(_q, degrees))})")


def cmd_min_index(args):
    doc = _read(args)
    config = curves.CurveConfig.from_dict(doc)
    n = curves.minimal_complement_index(config, args.bound)
    return {"bound": args.bound, "min_index": n}, str(n) if n else f"none <= {args.bound}"


def cmd_multiplier_table(args):
    ns = [args.n] if args.n is not None else sorted(enumeration.N1)
    report, lines = {}, []
    for n in ns:
        w = enumeration.multiplier_witnesses(n, args.max_comp, args.max_den,
                                             workers=args.workers)
        report[str(n)] = {"m": sorted(w),
                          "witnesses": {str(m): [_q(b) for b in w[m]] for m in sorted(w)}}
        lines.append(f"n={n}: m in {{{', '.join(map(str, sorted(w)))}}}")
    return {"max_denominator": args.max_den, "max_components": args.max_comp,
            "tables": report}, "\n".join(lines)


def cmd_pd_check(args):
    doc = _read(args)
    d = int(_field(doc, "d"))
    mults = _mults(_field(doc, "boundary"))
    n = args.n if args.n is not None else int(_field(doc, "n"))
    ok = curves.pd_complement_exists(d, mults, n)
    ec = curves.pd_ec_check(d, mults)
    return ({"d": d, "n": n, "complementary": ok, "ec": ec},
            f"P^{d}, n={n}: {'complementary' if ok else 'not complementary'}; "
            f"sum b <= d+1: {ec}")


def cmd_invariant_complement(args):
    doc = _read(args)
    orbits = [(int(s), to_rational(b)) for s, b in _field(doc, "orbits")]
    n = args.n if args.n is not None else int(_field(doc, "n"))
    exact = bool(doc.get("exact_degree", True))
    inv = curves.invariant_complement_exists(orbits, n, exact)
    plain = curves.complement_exists(curves.expand_orbits(orbits), n)
    return ({"n": n, "exact_degree": exact, "invariant": inv, "plain": plain},
            f"invariant {n}-complement: {inv}; plain {n}-complement: {plain}")


def _graph(args):
    return graph.DualGraph.from_dict(_read(args))


def cmd_crepant(args):
    g = _graph(args)
    res = graph.crepant_discrepancies(g)
    lines = [f"{k}: d = {_q(res.d[k])}, a = {_q(res.a[k])}" for k in res.d]
    if res.sub_boundary:
        lines.append(f"negative coefficients: {', '.join(res.sub_boundary)}")
    return res.to_dict(), "\n".join(lines)


def cmd_mld(args):
    g = _graph(args)
    value = graph.mld(g)
    status = graph.log_canonical_status(g)
    shown = "NotLogCanonical" if value == -math.inf else _q(value)
    return {"mld": shown, "status": str(status)}, f"mld = {shown} ({status})"


def cmd_delta(args):
    g = _graph(args)
    value = graph.delta_invariant(g)
    shown = "Infinite" if value == math.inf else value
    return {"delta": shown}, f"delta = {shown}"


def cmd_classify_duval(args):
    g = _graph(args)
    points = graph.singular_points(g)
    report = [{"curves": ids, "kind": str(c), "exceptional": c.exceptional_flag}
              for ids, c in points]
    return ({"points": report},
            "\n".join(f"{r['kind']}{' (exceptional)' if r['exceptional'] else ''}: "
                      f"{', '.join(r['curves'])}" for r in report))


def cmd_contractible(args):
    g = _graph(args)
    m = graph.intersection_matrix(g)
    ok = graph.is_negative_definite(m)
    return ({"contractible": ok, "leading_minors": [_q(x) for x in graph.leading_minors(m)]},
            f"contractible: {ok}")


def cmd_classify_fiber(args):
    report = fibers.fiber_report(fibers.FiberModel.from_dict(_read(args)))
    d = report.to_dict()
    diff = ", ".join(d["different"]) or "empty"
    return d, f"{d['type']}, index {d['index']}, different {diff}"


def cmd_type_label(args):
    label = ct.type_label(ct.ComplementDatum.from_dict(_read(args)))
    return {"label": str(label), "family": label.family, "m": label.m, "n": label.n}, str(label)


def cmd_toric_check(args):
    doc = _read(args)
    rho = int(_field(doc, "rho"))
    if "graph" in doc:
        g = graph.DualGraph.from_dict(doc["graph"])
        mults = [g.vertices[i].mult for i in g.ambient]
    else:
        mults = _mults(_field(doc, "boundary"))
    defect = ct.toric_defect(rho, mults)
    return ({"rho": rho, "defect": _q(defect), "formally_toric": defect == 0},
            f"defect {_q(defect)}{' (formally toric)' if defect == 0 else ''}")


def cmd_verify_exceptional(args):
    doc = _read(args, required=False)
    report = ct.verify_exceptional_config(args.case, doc)
    d = report.to_dict()
    lines = [f"{args.case}: {'pass' if report.passed else 'FAIL'}"]
    for r in report.readings:
        lines.append(f"  reading '{r.reading}': {'consistent' if r.passed else 'inconsistent'}")
        for c in r.checks:
            lines.append(f"    [{'ok' if c.passed else '!!'}] {c.name}: {c.detail}")
    if not report.passed:
        raise GoldenFailure((d, "\n".join(lines)))
    return d, "\n".join(lines)


def cmd_rxb(args):
    space = simplicial.build_complex(simplicial.Stratification.from_dict(_read(args)))
    s = simplicial.summarize(space)
    d = s.to_dict()
    return d, (f"reg {d['reg']}, chi {d['chi']}, q {d['q']}, "
               f"components {d['components']}, manifold {d['manifold']}")


def cmd_reproduce_tables(args):
    rows, lines = [], []
    for g in goldens(args.workers):
        if g.slow and args.quick:
            continue
        start = time.monotonic()
        try:
            ok, detail = g.run()
        except Exception as exc:  # a crash is a failed comparison, not bad input
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        elapsed = round(time.monotonic() - start)
        rows.append({"name": g.name, "passed": ok, "detail": detail, "seconds": elapsed})
        lines.append(f"{'PASS' if ok else 'FAIL'}  {g.name}: {detail}")
    report = {"passed": all(r["passed"] for r in rows), "results": rows}
    if not report["passed"]:
        raise GoldenFailure((report, "\n".join(lines)))
    return report, "\n".join(lines)


COMMANDS = {
    "curve-complement": (cmd_curve_complement, "n-complement criterion on a curve"),
    "min-index": (cmd_min_index, "minimal complementary index"),
    "multiplier-table": (cmd_multiplier_table, "multipliers m with (n+1)m-complements"),
    "pd-check": (cmd_pd_check, "complements on P^d with generic hyperplanes"),
    "invariant-complement": (cmd_invariant_complement, "Galois-invariant complements on P^1"),
    "crepant": (cmd_crepant, "crepant pull-back coefficients"),
    "mld": (cmd_mld, "minimal log discrepancy"),
    "delta": (cmd_delta, "number of divisors with log discrepancy <= 1/7"),
    "classify-duval": (cmd_classify_duval, "ADE type of the exceptional locus"),
    "contractible": (cmd_contractible, "negative definiteness of the exceptional locus"),
    "classify-fiber": (cmd_classify_fiber, "Kodaira type of a genus-1 degeneration"),
    "type-label": (cmd_type_label, "complement type label"),
    "toric-check": (cmd_toric_check, "Picard number versus boundary degree"),
    "verify-exceptional": (cmd_verify_exceptional, "check a named exceptional configuration"),
    "rxb": (cmd_rxb, "incidence space of boundary strata"),
    "reproduce-tables": (cmd_reproduce_tables, "run every golden comparison"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="surfcomp", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="input", metavar="FILE",
                        help="JSON input (default: standard input)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--bound", type=int, default=curves.DEFAULT_BOUND)
    common.add_argument("--max-den", type=int, default=enumeration.DEFAULT_MAX_DEN)
    common.add_argument("--max-comp", type=int, default=enumeration.DEFAULT_MAX_COMP)
    common.add_argument("--workers", type=int, default=None,
                        help="worker processes for enumerations (default: all CPUs)")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name in ("curve-complement", "multiplier-table", "pd-check", "invariant-complement"):
            p.add_argument("--n", type=int, default=None)
        if name == "verify-exceptional":
            p.add_argument("case", choices=ct.CASES)
        if name == "reproduce-tables":
            p.add_argument("--quick", action="store_true",
                           help="skip the multiplier-table enumerations")
    return parser


def _emit(args, report, text):
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = COMMANDS[args.command][0]
    try:
        report, text = handler(args)
    except GoldenFailure as exc:
        _emit(args, *exc.report)
        return EXIT_FAILED
    except (InputError, ValueError, TypeError, KeyError, ZeroDivisionError) as exc:
        print(f"surfcomp {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(args, report, text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
