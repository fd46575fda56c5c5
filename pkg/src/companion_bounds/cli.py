"""companion-bounds command line.

Exit codes: 0 every check held, 1 a bound or identity was violated,
2 usage or config error, 3 a numerical failure occurred.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import companions as cp
from . import means
from . import report as rp
from .config import ConfigError, load_config
from .core import Interval, Verdict
from .errors import DomainError, HypothesisViolated, InvalidParameter, NumericalFailure, UnknownFunction
from .funcat import DEFAULT_SAMPLES, check_s_concavity, check_s_convexity, curvature_power, estimate_max_s, resolve
from .sweep import THEOREMS, Evaluator, InequalityCase, SweepConfig, SweepReport, run_sweep

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _interval(text: str) -> Interval:
    try:
        return Interval.parse(text)
    except (InvalidParameter, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")
    common.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=None, help="certifier sampling seed (default 0)")
    common.add_argument("--tol", type=float, default=None, help="relative slack tolerance (default 1e-9)")

    p = argparse.ArgumentParser(prog="companion-bounds",
                                description="Check companion-of-Ostrowski bounds against quadrature.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="evaluate a single case")
    v.add_argument("--theorem", required=True, choices=sorted(THEOREMS))
    v.add_argument("--function", default=None, help="catalog name, e.g. pow:2 (props use pow:s)")
    v.add_argument("--interval", type=_interval, required=True, metavar="A,B")
    v.add_argument("--x", type=float, default=None, help="evaluation point (defaults per theorem)")
    v.add_argument("--s", type=float, default=1.0)
    v.add_argument("--q", type=float, default=None)
    v.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)

    s = sub.add_parser("sweep", parents=[common], help="run grid sweeps from a config file")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", metavar="PATH")
    src.add_argument("--default", action="store_true", help="run the built-in default grid")
    s.add_argument("--section", action="append", help="run only these config sections")
    s.add_argument("--workers", type=int, default=1)

    i = sub.add_parser("identity", parents=[common], help="identity residuals over x")
    i.add_argument("--form", choices=cp.IDENTITY_FORMS, default="companion")
    i.add_argument("--function", required=True)
    i.add_argument("--interval", type=_interval, required=True, metavar="A,B")
    i.add_argument("--x", type=float, action="append", help="repeatable; default is an even grid")
    i.add_argument("--x-count", type=int, default=9)

    c = sub.add_parser("convexity", parents=[common], help="certify or estimate s")
    c.add_argument("--function", required=True)
    c.add_argument("--interval", type=_interval, required=True, metavar="A,B")
    c.add_argument("--s", type=float, default=None, help="certify at this s; omit to estimate the largest s")
    c.add_argument("--concave", action="store_true")
    c.add_argument("--curvature-power", type=float, default=None, metavar="Q",
                   help="test |f''|^Q instead of f")
    c.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)

    m = sub.add_parser("means", parents=[common], help="mean inequalities for f(x) = x^s")
    m.add_argument("--prop", required=True, choices=means.PROPOSITIONS)
    m.add_argument("--a", type=float, required=True)
    m.add_argument("--b", type=float, required=True)
    m.add_argument("--s", type=float, required=True)
    m.add_argument("--q", type=float, default=None)
    return p


def _emit(text: str, out) -> None:
    if out:
        try:
            with open(out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {out!r}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)


def _report_exit(report: SweepReport) -> int:
    counts = report.counts
    if counts[Verdict.VIOLATED.value]:
        return EXIT_VIOLATION
    if counts[Verdict.NUMERICAL_FAILURE.value]:
        return EXIT_NUMERICAL
    return EXIT_OK


def _tol(args, default=1e-9):
    return default if args.tol is None else args.tol


def cmd_verify(args) -> int:
    kind = THEOREMS[args.theorem]
    iv = args.interval
    fn = args.function
    if args.theorem.startswith("prop"):
        fn = fn or f"pow:{args.s:g}"
    elif fn is None:
        raise UsageError("--function is required for this theorem")
    x = args.x
    if kind.x_range is None:
        if x is not None:
            raise UsageError(f"{args.theorem} takes no --x")
    elif x is None:
        x = iv.mid
    q = args.q
    if kind.needs_q and q is None:
        raise UsageError(f"{args.theorem} needs --q")
    if not kind.needs_q:
        q = None
    resolve(fn)
    if x is not None:
        hi = iv.mid if kind.x_range == "companion" else iv.b
        if not iv.a <= x <= hi:
            raise UsageError(f"{args.theorem} needs x in [{iv.a:g}, {hi:g}], got {x:g}")
    case = InequalityCase(args.theorem, fn, iv, x, args.s, q)
    ev = Evaluator(args.samples, args.seed or 0, _tol(args))
    report = SweepReport([(case, ev.evaluate(case))])
    _emit(rp.render(report, args.format), args.out)
    return _report_exit(report)


def cmd_sweep(args) -> int:
    if args.default:
        configs = [SweepConfig(name="default")]
    else:
        configs = load_config(args.config)
    if args.section:
        wanted = set(args.section)
        missing = wanted - {c.name for c in configs}
        if missing:
            raise ConfigError(f"no such sections: {sorted(missing)}")
        configs = [c for c in configs if c.name in wanted]
    report = SweepReport()
    for cfg in configs:
        if args.seed is not None:
            cfg.seed = args.seed
        if args.tol is not None:
            cfg.rel_tol = args.tol
        report = report.extend(run_sweep(cfg, workers=args.workers))
    _emit(rp.render(report, args.format), args.out)
    return _report_exit(report)


IDENTITY_COLUMNS = ("form", "function", "a", "b", "x", "lhs", "rhs", "residual", "allowance", "verdict")


def cmd_identity(args) -> int:
    fs = resolve(args.function)
    iv = args.interval
    if iv.a < fs.domain_min:
        raise DomainError(f"{fs.name} needs a >= {fs.domain_min:g}")
    if args.x:
        xs = args.x
    else:
        hi = iv.mid if args.form == "companion" else iv.b
        xs = [float(v) for v in np.linspace(iv.a, hi, args.x_count)]
    mean = cp.integral_mean(fs, iv)
    rows = []
    for x in xs:
        chk = cp.identity_check(fs, iv, x, args.form, mean=mean)
        rows.append({"form": args.form, "function": fs.name, "a": iv.a, "b": iv.b, "x": chk.x,
                     "lhs": chk.lhs.value, "rhs": chk.rhs.value, "residual": chk.residual,
                     "allowance": chk.allowance, "verdict": "holds" if chk.passed else "violated"})
    if args.format == "json":
        text = json.dumps({"records": [{k: (rp._jnum(v) if isinstance(v, float) else v) for k, v in r.items()}
                                       for r in rows]}, indent=1) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(IDENTITY_COLUMNS)
        for r in rows:
            w.writerow([rp.num(r[k]) if isinstance(r[k], float) else r[k] for k in IDENTITY_COLUMNS])
        text = buf.getvalue()
    else:
        text = "".join(
            f"x={r['x']:.8g} lhs={rp.human(r['lhs'])} rhs={rp.human(r['rhs'])} "
            f"residual={r['residual']:.3e} allowance={r['allowance']:.3e} verdict={r['verdict']}\n"
            for r in rows)
    _emit(text, args.out)
    return EXIT_OK if all(r["verdict"] == "holds" for r in rows) else EXIT_VIOLATION


def cmd_convexity(args) -> int:
    fs = resolve(args.function)
    iv = args.interval
    subject = fs if args.curvature_power is None else curvature_power(fs, args.curvature_power)
    seed = args.seed or 0
    if args.s is None:
        if args.concave:
            raise UsageError("estimation covers s-convexity only; pass --s with --concave")
        s_max = estimate_max_s(subject, iv, args.samples, seed)
        doc = {"function": subject.name, "interval": str(iv), "estimated_max_s": s_max}
        ok = True
    else:
        check = check_s_concavity if args.concave else check_s_convexity
        rep = check(subject, iv, args.s, args.samples, seed)
        doc = {"function": subject.name, "interval": str(iv), "class": rep.class_tested, "s": rep.s,
               "samples": rep.samples, "max_violation": rep.max_violation, "tolerance": rep.tolerance,
               "verdict": rep.verdict, "witness": list(rep.witness) if rep.witness else None}
        ok = rep.passed
    if args.format == "json":
        text = json.dumps(doc, indent=1) + "\n"
    elif args.format == "csv":
        keys = [k for k in doc if k != "witness"]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(keys + (["wx", "wy", "walpha"] if "witness" in doc else []))
        vals = [rp.num(doc[k]) if isinstance(doc[k], float) else doc[k] for k in keys]
        if "witness" in doc:
            vals += [rp.num(v) for v in doc["witness"]] if doc["witness"] else ["", "", ""]
        w.writerow(vals)
        text = buf.getvalue()
    else:
        parts = []
        for k, v in doc.items():
            if k == "witness":
                if v:
                    parts.append("witness=(x={:.8g}, y={:.8g}, alpha={:.8g})".format(*v))
            elif isinstance(v, float):
                parts.append(f"{k}={v:.8g}")
            else:
                parts.append(f"{k}={v}")
        text = " ".join(parts) + "\n"
    _emit(text, args.out)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_means(args) -> int:
    res = means.verify_proposition(args.prop, args.a, args.b, args.s, args.q,
                                   rel_tol=_tol(args, means.PROP_TOL))
    fn = f"pow:{args.s:g}"
    case = InequalityCase("prop" + args.prop, fn, Interval(args.a, args.b), None, args.s,
                          args.q if args.prop in means.NEEDS_Q else None)
    report = SweepReport([(case, res)])
    _emit(rp.render(report, args.format), args.out)
    return _report_exit(report)


COMMANDS = {"verify": cmd_verify, "sweep": cmd_sweep, "identity": cmd_identity,
            "convexity": cmd_convexity, "means": cmd_means}


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (UsageError, InvalidParameter, UnknownFunction, HypothesisViolated) as exc:
        print(f"companion-bounds {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalFailure, DomainError) as exc:
        print(f"companion-bounds {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
