"""Command-line front end.

Exit codes: 0 when every report passes, 1 when any verification fails,
2 for usage, parse or hypothesis errors.  Records go to stdout as JSON
lines with sorted keys; the summary line goes to stderr.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import sys

import numpy as np

from . import bounds, counterexample, specs, suites
from .errors import CapacityError, ConditioningError, ConstraintError, DomainError, SpecError
from .projection import project_fourier, project_quadrature

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
ORACLE_TOL = 1e-7
DEFAULT_ORACLE_POINTS = (0.0, 0.5, 0.5j, -0.3 + 0.4j, 0.7 - 0.2j)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- parsing helpers


def parse_number(text: str) -> float:
    t = text.strip().lower()
    if t in ("inf", "infinity", "+inf"):
        return math.inf
    try:
        return float(t)
    except ValueError:
        raise UsageError(f"not a number: {text!r}") from None


def parse_grid(text: str) -> tuple:
    """``"1,2.5,inf"`` or ``"start:stop:step"`` (stop included up to rounding), or a mix."""
    if text.strip() == "":
        return ()
    out = []
    for part in text.split(","):
        part = part.strip()
        if ":" in part:
            bits = part.split(":")
            if len(bits) != 3:
                raise UsageError(f"range {part!r} must be start:stop:step")
            a, b, h = (parse_number(x) for x in bits)
            if h <= 0:
                raise UsageError(f"range step must be positive in {part!r}")
            count = int(math.floor((b - a) / h + 1e-9)) + 1
            out.extend(round(a + i * h, 12) for i in range(max(count, 0)))
        else:
            out.append(parse_number(part))
    return tuple(out)


def _int_grid(values) -> tuple:
    out = []
    for v in values:
        if v != int(v):
            raise UsageError(f"expected an integer, got {v}")
        out.append(int(v))
    return tuple(out)


def parse_complex_list(text: str) -> list:
    try:
        return [complex(t.strip().replace(" ", "")) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"bad complex point list {text!r}") from exc


def _dump(rec) -> str:
    return json.dumps(rec, sort_keys=True, allow_nan=False)


def _emit_records(records, fmt, out):
    if fmt == "table":
        _table(records, out)
    else:
        for r in records:
            out.write(_dump(r) + "\n")


def _table(records, out):
    cols = ("suite", "case", "tag", "status", "lhs", "rhs", "margin")
    out.write("  ".join(f"{c:>12s}" for c in cols) + "\n")
    for r in records:
        cells = []
        for c in cols:
            v = r.get(c, "")
            cells.append(f"{v:>12.6g}" if isinstance(v, float) else f"{str(v):>12s}")
        out.write("  ".join(cells) + "\n")


def _finish(records, fmt, out, err) -> int:
    _emit_records(records, fmt, out)
    summ = suites.summarize(records)
    err.write(_dump(summ) + "\n")
    return EXIT_OK if summ["failed"] == 0 and summ["errors"] == 0 else EXIT_FAIL


# ---------------------------------------------------------------- commands


def cmd_constants(args, out, err) -> int:
    rows = []
    for p in args.lemma1 or []:
        rows.append({"constant": "lemma1", "args": [p], "value": bounds.lemma1_sharp_constant(p),
                     "branch": "closed-form"})
    for s, m, k in args.c1 or []:
        rows.append({"constant": "c1", "args": [s, m, k], "value": bounds.c1_constant(s, m, k, method=args.method),
                     "branch": bounds.c1_branch(s, m, k) if args.method == "closed" else "grid"})
    for p in args.c2_special or []:
        res = bounds.c2_constant(bounds.C2Params(p, 1.0, 1.0, 1.0, 0.0), "recipe")
        rows.append({"constant": "c2-special", "args": [p], "value": res.value, "branch": "closed-form",
                     "a": res.a, "b": res.b})
    for vals in args.c2 or []:
        P = bounds.C2Params(*vals)
        res = bounds.c2_constant(P, "grid" if args.method == "grid" else "recipe")
        rows.append({"constant": "c2", "args": list(vals), "value": res.value, "branch": res.mode,
                     "a": res.a, "b": res.b})
    for s, d, jk, u in args.c3 or []:
        if d != int(d) or d < 0:
            raise ConstraintError("n - k >= 0 integer", f"got {d}")
        rows.append({"constant": "c3", "args": [s, int(d), jk, u],
                     "value": bounds.c3_constant(s, int(d), jk, u), "branch": "grid"})
    if not rows:
        raise UsageError("no constant requested")
    if args.format == "records":
        for r in rows:
            out.write(_dump(bounds._jsonable(r)) + "\n")
    else:
        out.write(f"{'constant':>12s}  {'args':>28s}  {'value':>24s}  branch\n")
        for r in rows:
            a = ",".join(repr(x) for x in r["args"])
            out.write(f"{r['constant']:>12s}  {a:>28s}  {r['value']!r:>24}  {r['branch']}\n")
    return EXIT_OK


def _config(args) -> suites.SuiteConfig:
    grids = {}
    for name in ("p", "s", "r", "u", "j", "m"):
        v = getattr(args, name, None)
        if v is not None:
            grids[name] = parse_grid(v)
    for name in ("n", "k"):
        v = getattr(args, name, None)
        if v is not None:
            grids[name] = _int_grid(parse_grid(v))
    jobs = args.jobs if args.jobs is not None else suites.default_jobs()
    if jobs < 1:
        raise UsageError("--jobs must be >= 1")
    return suites.SuiteConfig(suite=args.suite if hasattr(args, "suite") else "sweep", seed=args.seed,
                              cases=getattr(args, "cases", None), grids=grids, eps=args.eps, jobs=jobs,
                              fmt=args.format)


def cmd_verify(args, out, err) -> int:
    cfg = _config(args)
    return _finish(suites.run_suite(cfg), cfg.fmt, out, err)


def cmd_project(args, out, err) -> int:
    doc = specs.load(args.spec)
    f = specs.build(doc)
    if not hasattr(f, "modes"):
        raise SpecError("project needs a disc function, not circle samples", path="$.samples")
    res = project_fourier(f)
    rec = {
        "command": "project",
        "normalization_constant": res.normalization_constant_used,
        "coefficients": [specs.complex_json(c) for c in res.coefficients],
    }
    points = parse_complex_list(args.z) if args.z else []
    if points:
        vals = res.analytic.evaluate(np.array(points))
        rec["z"] = [specs.complex_json(z) for z in points]
        rec["values"] = [specs.complex_json(v) for v in vals]
    status = EXIT_OK
    if args.oracle == "on":
        zs = np.array(points or DEFAULT_ORACLE_POINTS, dtype=complex)
        spectral = res.analytic.evaluate(zs)
        quad = project_quadrature(f, zs)
        resid = np.abs(spectral - quad)
        rec["oracle_points"] = [specs.complex_json(z) for z in zs]
        rec["oracle_residuals"] = [float(x) for x in resid]
        ok = bool(np.all(resid <= ORACLE_TOL * np.maximum(1.0, np.abs(spectral))))
        rec["oracle_pass"] = ok
        if not ok:
            rec["flag"] = "oracle-disagreement"
            status = EXIT_FAIL
    out.write(_dump(rec) + "\n")
    return status


def cmd_counterexample(args, out, err) -> int:
    if args.depth < 1:
        raise UsageError("--depth must be >= 1")
    try:
        sched = counterexample.build_schedule(args.depth)
    except CapacityError as exc:
        err.write(_dump({"error": "capacity", "detail": str(exc), "depth": exc.depth}) + "\n")
        return EXIT_FAIL
    f = counterexample.build_function(sched, args.amplitude)
    if args.kind == "smooth":
        f = counterexample.smooth_variant(sched, args.amplitude)
    coef = counterexample.projection_coefficients(f)
    div = counterexample.divergence_report(f)
    shown = sched.depth if args.report_depth is None else min(args.report_depth, sched.depth)
    rows = []
    for n in range(1, shown + 1):
        row = {"n": n, "b": float(sched.radii[n]), "one_minus_b": float(sched.complements[n]),
               "m": int(sched.modes[n - 1]), "mu": float(sched.masses[n - 1]),
               "amplitude": abs(f.amplitudes[n - 1]), "coefficient": abs(coef.coefficients[n - 1]),
               "S_N": float(div.partial_sums[n - 1]), "H_N_over_16": float(div.harmonic_envelope[n - 1])}
        if f.kind == "smooth-bump":
            row["plateau_ratio"] = f.plateau_ratios[n - 1]
        rows.append(row)
    complements = [float(x) for x in np.logspace(0, math.log10(max(float(sched.complements[-1]), 1e-300)), 12)]
    profile = None
    if f.kind == "indicator":
        profile = [{"one_minus_r": d, "M_inf": float(v)} for d, v in zip(complements, f.sup_profile(complements))]
    summary = {"command": "counterexample", "depth": sched.depth, "amplitude": f.rule, "kind": f.kind,
               "normalization_constant": coef.normalization, "ever_enforced": sched.ever_enforced,
               "meets_quarter_bound": coef.meets_printed_bound, "S_N": float(div.partial_sums[-1]),
               "dominates_harmonic": div.dominates_harmonic}
    if args.format == "records":
        for r in rows:
            out.write(_dump(r) + "\n")
        if profile:
            for r in profile:
                out.write(_dump(r) + "\n")
        out.write(_dump(summary) + "\n")
    else:
        out.write(f"{'n':>4s} {'b_n':>20s} {'1-b_n':>12s} {'m_n':>10s} {'mu_n':>20s} {'|coef|':>12s} {'S_N':>12s}\n")
        for r in rows:
            m = f"{r['m']:.4g}" if r["m"] >= 10**10 else str(r["m"])
            out.write(f"{r['n']:>4d} {r['b']!r:>20} {r['one_minus_b']:>12.4e} {m:>10s} {r['mu']!r:>20} "
                      f"{r['coefficient']:>12.6g} {r['S_N']:>12.6g}\n")
        if profile:
            out.write("\n  1-r            M_inf(r,f)\n")
            for r in profile:
                out.write(f"  {r['one_minus_r']:<12.4e}  {r['M_inf']!r}\n")
        out.write(_dump(summary) + "\n")
    return EXIT_OK


SWEEP_CHECKS = {
    "lemma1-identity": ("p", "r"),
    "c1-bound": ("s", "m", "k"),
    "prn-bound": ("p", "n", "k", "r"),
    "bpn-bound": ("p", "n", "k", "r"),
    "weighted-norm": ("p", "s", "n", "k", "j", "u"),
    "sobolev-corollary": ("p", "n"),
    "second-corollary": ("p", "n", "k"),
}
_INT_AXES = ("n", "k")


def _sweep_case(index, check, params, doc) -> suites.Case:
    args = dict(params)
    if check == "c1-bound":
        return suites.Case("sweep", index, "c1-bound", args)
    if check == "lemma1-identity":
        return suites.Case("sweep", index, "lemma1-identity", args)
    args["spec"] = doc
    return suites.Case("sweep", index, check, args)


def cmd_sweep(args, out, err) -> int:
    check = args.check.replace("check_", "").replace("_", "-")
    aliases = {"weighted": "weighted-norm", "prn": "prn-bound", "bpn": "bpn-bound", "sobolev": "sobolev-corollary"}
    check = aliases.get(check, check)
    if check not in SWEEP_CHECKS:
        raise UsageError(f"unknown check {args.check!r}; choose from {', '.join(SWEEP_CHECKS)}")
    cfg = _config(args)
    axes = SWEEP_CHECKS[check]
    missing = [a for a in axes if a not in cfg.grids]
    if missing:
        raise UsageError(f"{check} needs grids for: {', '.join('--' + m for m in missing)}")
    doc = None
    if check not in ("c1-bound", "lemma1-identity"):
        if not args.spec:
            raise UsageError(f"{check} needs --spec")
        doc = specs.load(args.spec)
        if check == "prn-bound":
            specs.circle_from_spec(doc)
        else:
            specs.build(doc)
    cases = []
    for i, combo in enumerate(itertools.product(*(cfg.grids[a] for a in axes))):
        params = dict(zip(axes, combo))
        if cfg.eps is not None:
            params["eps"] = cfg.eps
        cases.append(_sweep_case(i, check, params, doc))
    records = []
    for recs in suites.run_cases(cases, cfg.jobs):
        for r in recs:
            r.pop("suite", None)
            r["check"] = check
            records.append(r)
    return _finish(records, cfg.fmt, out, err)


# ---------------------------------------------------------------- argparse


def _add_grid_flags(p, names):
    for name in names:
        p.add_argument(f"--{name}", default=None, metavar="GRID",
                       help=f"values for {name}: comma list and/or start:stop:step")


def _add_run_flags(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps", type=float, default=None, help="tolerance override for identity checks")
    p.add_argument("--jobs", type=int, default=None, help=f"worker processes (default ${suites.JOBS_ENV} or 1)")
    p.add_argument("--format", choices=("records", "table"), default="records")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bergman-means", description="Integral-mean bounds for the Bergman projection.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("constants", help="sharp and Hoelder-split constants")
    p.add_argument("--lemma1", type=parse_number, action="append", metavar="P")
    p.add_argument("--c1", type=float, nargs=3, action="append", metavar=("S", "M", "K"))
    p.add_argument("--c2-special", type=parse_number, action="append", metavar="P")
    p.add_argument("--c2", type=float, nargs=5, action="append", metavar=("P", "M", "K", "J", "U"))
    p.add_argument("--c3", type=float, nargs=4, action="append", metavar=("S", "N_MINUS_K", "J_MINUS_K", "U"))
    p.add_argument("--method", choices=("closed", "grid"), default="closed")
    p.add_argument("--format", choices=("records", "table"), default="table")

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", choices=("all",) + suites.SUITES, default="all")
    v.add_argument("--cases", type=int, default=None, help="random cases per suite (overrides defaults)")
    _add_grid_flags(v, ("p", "s", "n", "k", "r", "u", "j"))
    _add_run_flags(v)

    pr = sub.add_parser("project", help="Bergman projection of a function spec")
    pr.add_argument("spec")
    pr.add_argument("--z", default=None, help="comma-separated evaluation points, e.g. 0.3+0.1j,-0.5")
    pr.add_argument("--oracle", choices=("on", "off"), default="on")

    c = sub.add_parser("counterexample", help="breakpoint schedule and divergence report")
    c.add_argument("--depth", "-N", type=int, default=20)
    c.add_argument("--amplitude", choices=tuple(counterexample.AMPLITUDE_RULES), default="harmonic")
    c.add_argument("--kind", choices=("indicator", "smooth"), default="indicator")
    c.add_argument("--report-depth", type=int, default=None)
    c.add_argument("--format", choices=("records", "table"), default="table")

    s = sub.add_parser("sweep", help="cartesian-product sweep of one check")
    s.add_argument("--check", required=True)
    s.add_argument("--spec", default=None)
    _add_grid_flags(s, ("p", "s", "n", "k", "r", "u", "j", "m"))
    _add_run_flags(s)
    return parser


COMMANDS = {
    "constants": cmd_constants,
    "verify": cmd_verify,
    "project": cmd_project,
    "counterexample": cmd_counterexample,
    "sweep": cmd_sweep,
}


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out, err)
    except ConstraintError as exc:
        err.write(f"usage error: constraint {exc.constraint} violated ({exc})\n")
    except (UsageError, SpecError, ConditioningError, DomainError) as exc:
        err.write(f"usage error: {exc}\n")
    except OSError as exc:
        err.write(f"usage error: {exc}\n")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
