"""Command-line front end.

Subcommands: families list, flow eval, conj build, classify, check-ac,
flowvar, asymptote, selftest.  Output is CSV (header row, comma separator,
LF endings) or JSON (stable key order); floats are printed with 17
significant digits, so identical argv gives byte-identical output.  Exit
codes: 0 success, 2 parse/domain error, 3 numerical failure, 4 inconclusive
classification under --strict.
"""

import argparse
import json
import math
import sys

import numpy as np

from .acceptance import selftest_text
from .conjugacy import ConjugacyMap
from .errors import (
    BoundViolation,
    BudgetExceeded,
    DegeneracyError,
    DomainError,
    GermflowError,
    NonConvergence,
    NonFiniteError,
    ParseError,
    RangeExceeded,
)
from .fields import (
    DEFAULT_DELTAS,
    FAMILIES,
    FORMULA_CAPS,
    SGenSpec,
    format_field_spec,
    parse_field_spec,
)
from .logcoord import LogCoord
from .regularity import ClassifyParams, check_ac_conditions, classify_pair, flow_ac_bound_check
from .timemap import TimeMapCache
from .variation import asymptote_fit, conjugacy_variation_curve

_PARSE_ERRORS = (ParseError, DomainError, DegeneracyError, ValueError)
_NUMERIC_ERRORS = (NonConvergence, BudgetExceeded, NonFiniteError, RangeExceeded, BoundViolation)


def g17(v):
    return format(float(v), ".17g")


def parse_point(text):
    """A point given as an x value, `z=<z>` or `w=<w>`."""
    text = text.strip()
    try:
        if text.startswith("z="):
            return LogCoord(float(text[2:]))
        if text.startswith("w="):
            return LogCoord.from_w(float(text[2:]))
        if text.startswith("x="):
            return LogCoord.from_x(float(text[2:]))
        return LogCoord.from_x(float(text))
    except ValueError as e:
        raise ParseError(f"bad point {text!r}: {e}") from None


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows, header):
    lines = [",".join(header)]
    lines += [",".join(cells) for cells in rows]
    return "\n".join(lines) + "\n"


def _json(obj):
    return json.dumps(obj, indent=2) + "\n"


def _tail_behavior_json(tb):
    out = {"label": tb.label}
    if tb.limit is not None:
        out["limit"] = tb.limit
    if tb.bounds is not None:
        out["bounds"] = list(tb.bounds)
    if tb.growth_fit is not None:
        out["fit"] = {
            "gauge": tb.growth_fit.gauge,
            "slope": tb.growth_fit.slope,
            "r2": tb.growth_fit.r2,
        }
    return out


def cmd_families(args):
    header = ["family", "lambda_default", "delta_default", "delta_cap", "takes_alpha", "takes_base"]
    rows = []
    for fam in FAMILIES:
        rows.append([
            fam,
            g17(-1.0),
            g17(DEFAULT_DELTAS[fam]),
            g17(FORMULA_CAPS[fam]),
            "no" if fam == "linear" else "yes",
            "yes" if fam.startswith("perturb") else "no",
        ])
    _emit(_csv(rows, header), args.out)
    return 0


def cmd_flow_eval(args):
    spec = parse_field_spec(args.field)
    points = [parse_point(tok) for tok in args.x.split(",")]
    tm = TimeMapCache(spec)
    rows = []
    for p in points:
        zf = tm.flow(args.t, p)
        df = tm.flow_derivative(args.t, p)
        rows.append([g17(p.x), g17(p.z), g17(zf.x), g17(df)])
    _emit(_csv(rows, ["x", "z", "f_t", "df_t"]), args.out)
    return 0


def cmd_conj_build(args):
    src = parse_field_spec(args.frm)
    dst = parse_field_spec(args.to)
    anchor = parse_point(args.anchor) if args.anchor else None
    cm = ConjugacyMap(TimeMapCache(src), TimeMapCache(dst), anchor=anchor)
    rows = []
    for tok in args.at.split(","):
        p = parse_point(tok)
        h = cm.apply(p)
        rows.append([g17(p.x), g17(h.x), g17(cm.derivative(p)), g17(cm.time_shift(p))])
    _emit(_csv(rows, ["x", "h", "dh", "s"]), args.out)
    return 0


def cmd_classify(args):
    fx = parse_field_spec(args.x)
    fy = parse_field_spec(args.y)
    params = ClassifyParams(conv_tol=args.conv_tol, samples=args.samples)
    if args.wmax is not None:
        w0 = LogCoord(min(fx.z_delta, fy.z_delta)).w
        if args.wmax <= w0:
            raise ParseError(f"--wmax must exceed w(delta) = {w0:.6g}")
        params = ClassifyParams(
            w_span=args.wmax - w0, samples=args.samples, conv_tol=args.conv_tol
        )
    verdict = classify_pair(fx, fy, params)
    obj = {
        "x": format_field_spec(fx),
        "y": format_field_spec(fy),
        "log_ratio": _tail_behavior_json(verdict.log_ratio),
        "time_integral": _tail_behavior_json(verdict.time_integral),
        "bilipschitz": verdict.bilipschitz,
        "c1": verdict.c1,
        "multiplier_x": verdict.multiplier_x,
        "multiplier_y": verdict.multiplier_y,
    }
    _emit(_json(obj), args.out)
    if args.strict and "inconclusive" in (verdict.bilipschitz, verdict.c1):
        return 4
    return 0


def cmd_check_ac(args):
    rep = check_ac_conditions(SGenSpec(args.alpha))
    obj = {"alpha": args.alpha, "conditions": {}}
    for key, cond in rep.conditions.items():
        obj["conditions"][key] = {
            "passed": cond.passed,
            "note": cond.note,
            "behavior": _tail_behavior_json(cond.behavior),
        }
    obj["c_floor"] = rep.c_floor
    obj["all_pass"] = rep.all_pass
    obj["degenerate"] = rep.degenerate
    _emit(_json(obj), args.out)
    return 0


def cmd_flowvar(args):
    spec = parse_field_spec(args.field)
    a = parse_point(args.a) if args.a else LogCoord(spec.z_delta)
    if args.eps:
        eps_list = [parse_point(tok) for tok in args.eps.split(",")]
    else:
        eps_list = [LogCoord.from_w(w) for w in (1.5, 2.0, 2.5, 3.0)]
    tm = TimeMapCache(spec)
    rows = []
    for eps in eps_list:
        lhs, rhs = flow_ac_bound_check(spec, args.t, a, eps, check=False, cache=tm)
        rows.append([g17(eps.x), g17(lhs), g17(rhs)])
    _emit(_csv(rows, ["eps", "lhs", "rhs"]), args.out)
    return 0


def _parse_grid(text):
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise ParseError(f"bad grid {text!r}; expected a_min:a_max:n") from None
    if not (0 < lo < hi and n >= 8):
        raise ParseError("grid needs 0 < a_min < a_max and n >= 8")
    return np.geomspace(lo, hi, n)


def cmd_asymptote(args):
    grid = _parse_grid(args.grid)
    curve = conjugacy_variation_curve(args.alpha, args.beta, grid)
    fit = asymptote_fit(curve.upper_half())
    csv_text = _csv(
        [[g17(A), g17(V)] for A, V in zip(curve.thresholds, curve.values)], ["A", "V"]
    )
    fit_json = _json({
        "alpha": args.alpha,
        "beta": args.beta,
        "gauge": "ln_A",
        "fit_points": "upper_half",
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r2": fit.r2,
    })
    if args.out:
        _emit(csv_text, args.out)
        sys.stdout.write(fit_json)
    else:
        sys.stdout.write(csv_text)
        sys.stdout.write(fit_json)
    return 0


def cmd_selftest(args):
    text, all_passed = selftest_text()
    _emit(text, args.out)
    return 0 if all_passed else 3


def build_parser():
    ap = argparse.ArgumentParser(
        prog="germflow",
        description="Contracting 1-d flows: time maps, conjugacies, regularity classification.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("families", help="list built-in field families")
    fam_sub = p.add_subparsers(dest="families_command", required=True)
    pl = fam_sub.add_parser("list", help="CSV table of families")
    pl.add_argument("--out")
    pl.set_defaults(func=cmd_families)

    p = sub.add_parser("flow", help="flow evaluation")
    flow_sub = p.add_subparsers(dest="flow_command", required=True)
    pe = flow_sub.add_parser("eval", help="evaluate f^t and Df^t at points")
    pe.add_argument("--field", required=True)
    pe.add_argument("--t", type=float, required=True)
    pe.add_argument("--x", required=True, help="comma list of points (x, z=<z> or w=<w>)")
    pe.add_argument("--out")
    pe.set_defaults(func=cmd_flow_eval)

    p = sub.add_parser("conj", help="conjugacy between two flows")
    conj_sub = p.add_subparsers(dest="conj_command", required=True)
    pb = conj_sub.add_parser("build", help="evaluate the canonical conjugacy")
    pb.add_argument("--from", dest="frm", required=True)
    pb.add_argument("--to", required=True)
    pb.add_argument("--anchor", default=None)
    pb.add_argument("--at", required=True, help="comma list of points")
    pb.add_argument("--out")
    pb.set_defaults(func=cmd_conj_build)

    p = sub.add_parser("classify", help="bi-Lipschitz / C1 classification of a pair")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--wmax", type=float, default=None)
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--conv-tol", dest="conv_tol", type=float, default=1e-3)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("check-ac", help="audit the seven profile conditions")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_check_ac)

    p = sub.add_parser("flowvar", help="flow-variation bound lhs/rhs")
    p.add_argument("--field", required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--a", default=None)
    p.add_argument("--eps", default=None, help="comma list of lower endpoints")
    p.add_argument("--out")
    p.set_defaults(func=cmd_flowvar)

    p = sub.add_parser("asymptote", help="variation curve of a cross-conjugacy and its fit")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--grid", required=True, help="a_min:a_max:n (geometric)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_asymptote)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.add_argument("--out")
    p.set_defaults(func=cmd_selftest)

    return ap


def run(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code else 0
    try:
        return args.func(args)
    except _PARSE_ERRORS as e:
        print(f"germflow: error: {e}", file=sys.stderr)
        return 2
    except _NUMERIC_ERRORS as e:
        print(f"germflow: numerical failure: {e}", file=sys.stderr)
        return 3
    except GermflowError as e:
        print(f"germflow: error: {e}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
