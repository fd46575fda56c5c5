"""Report writers (CSV, JSON, text) and the JSON reader."""

from __future__ import annotations

import csv
import io
import json
import math

from .core import EvaluationResult, Interval, Verdict
from .sweep import InequalityCase, SweepReport

CSV_COLUMNS = ("theorem_id", "function", "a", "b", "x", "s", "q",
               "lhs", "rhs", "slack", "tightness", "quad_error", "verdict")


def num(v) -> str:
    """17 significant digits: lossless for doubles."""
    if v is None:
        return ""
    return format(float(v), ".17g")


def human(v) -> str:
    if v is None:
        return "-"
    v = float(v)
    if not math.isfinite(v):
        return str(v)
    if v == 0 or 1e-4 <= abs(v) < 1e6:
        return f"{v:.8f}"
    return f"{v:.8e}"


def _jnum(v):
    if v is None:
        return None
    v = float(f"{float(v):.17g}")
    return v if math.isfinite(v) else str(v)


def _row(case: InequalityCase, res: EvaluationResult) -> list:
    return [case.theorem_id, case.function_name, num(case.interval.a), num(case.interval.b),
            num(case.x), num(case.s), num(case.q), num(res.lhs), num(res.rhs), num(res.slack),
            num(res.tightness), num(res.quad_error), res.verdict.value]


def to_csv(report: SweepReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for case, res in report.records:
        w.writerow(_row(case, res))
    return buf.getvalue()


def _record_dict(case, res) -> dict:
    return {
        "theorem_id": case.theorem_id,
        "function": case.function_name,
        "a": _jnum(case.interval.a),
        "b": _jnum(case.interval.b),
        "x": _jnum(case.x),
        "s": _jnum(case.s),
        "q": _jnum(case.q),
        "lhs": _jnum(res.lhs),
        "rhs": _jnum(res.rhs),
        "slack": _jnum(res.slack),
        "tightness": _jnum(res.tightness),
        "quad_error": _jnum(res.quad_error),
        "hypothesis_certified": res.hypothesis_certified,
        "verdict": res.verdict.value,
        "detail": res.detail,
    }


def to_json(report: SweepReport) -> str:
    best = report.min_slack_case
    doc = {
        "summary": {"total": report.total, **report.counts},
        "min_slack_case": _record_dict(*best) if best else None,
        "records": [_record_dict(c, r) for c, r in report.records],
    }
    return json.dumps(doc, indent=1) + "\n"


def _opt(v):
    return None if v is None else float(v)


def from_json(text: str) -> SweepReport:
    doc = json.loads(text)
    records = []
    for d in doc["records"]:
        case = InequalityCase(d["theorem_id"], d["function"], Interval(float(d["a"]), float(d["b"])),
                              _opt(d["x"]), float(d["s"]), _opt(d["q"]))
        res = EvaluationResult(
            lhs=float(d["lhs"]), rhs=float(d["rhs"]), slack=float(d["slack"]),
            tightness=float(d["tightness"]), quad_error=float(d["quad_error"]),
            hypothesis_certified=bool(d["hypothesis_certified"]), verdict=Verdict(d["verdict"]),
            detail=d.get("detail", ""),
        )
        records.append((case, res))
    return SweepReport(records)


def load_report(path) -> SweepReport:
    with open(path) as fh:
        return from_json(fh.read())


def describe(case: InequalityCase, res: EvaluationResult) -> str:
    parts = [case.theorem_id, case.function_name, str(case.interval)]
    if case.x is not None:
        parts.append(f"x={case.x:g}")
    parts.append(f"s={case.s:g}")
    if case.q is not None:
        parts.append(f"q={case.q:g}")
    line = (" ".join(parts) + f"  lhs={human(res.lhs)} rhs={human(res.rhs)} slack={human(res.slack)}"
            f" tightness={human(res.tightness)} verdict={res.verdict.value}")
    if res.detail:
        line += f"  ({res.detail})"
    return line


def to_text(report: SweepReport, max_rows: int = 50) -> str:
    lines = []
    if report.total <= max_rows:
        lines.extend(describe(c, r) for c, r in report.records)
    else:
        flagged = [(c, r) for c, r in report.records
                   if r.verdict in (Verdict.VIOLATED, Verdict.NUMERICAL_FAILURE)]
        lines.extend(describe(c, r) for c, r in flagged[:max_rows])
    counts = report.counts
    lines.append(f"total={report.total} " + " ".join(f"{k}={v}" for k, v in counts.items()))
    best = report.min_slack_case
    if best is not None and report.total > 1:
        lines.append("min slack: " + describe(*best))
    return "\n".join(lines) + "\n"


WRITERS = {"csv": to_csv, "json": to_json, "text": to_text}


def render(report: SweepReport, fmt: str = "text") -> str:
    return WRITERS[fmt](report)
