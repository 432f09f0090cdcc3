# report rendering: markdown summaries, plain-text reports, CSV and JSON

import csv
import dataclasses
import io
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from quiverstab.config.report import (
    CSV_LIST_SEPARATOR,
    JSON_INDENT,
    REPORT_KEY_WIDTH,
    REPORT_SEPARATOR,
    TABLE_SEPARATOR,
    VALID_FORMATS,
)
from quiverstab.core.errors import InputError
from quiverstab.core.quiver import Quiver
from quiverstab.core.series import BivariateSeries, QPolynomial, TruncatedSeries
from quiverstab.core.state import (
    CensusResult,
    IdentityCheck,
    MultiplicityBound,
    NearMaxReport,
    StarReport,
    SweepReport,
    check_choice,
)
from quiverstab.reports.documents import QuiverDocument

_BOLD = re.compile(r"\*\*(.*?)\*\*")


@dataclass(frozen=True)
class Rendered:
    """One result in every output format it supports."""
    markdown: str
    payload: dict
    csv: Optional[str] = None


def emit(rendered: Rendered, fmt: str) -> str:
    check_choice(fmt, VALID_FORMATS, "output format")
    if fmt == "json":
        return to_json(rendered.payload)
    if fmt == "csv":
        if rendered.csv is None:
            raise InputError("csv output is only available for sweep reports")
        return rendered.csv
    return format_markdown_as_report(rendered.markdown)


def format_markdown_as_report(md_text: str) -> str:
    lines = md_text.splitlines()
    out = []

    i = 0
    n = len(lines)

    while i < n:
        line = lines[i].strip()

        # ----------------------------
        # Empty line
        # ----------------------------
        if not line:
            out.append("")
            i += 1
            continue

        # ----------------------------
        # Headers
        # ----------------------------
        if line.startswith("###"):
            title = line.replace("#", "").strip().upper()
            sep = REPORT_SEPARATOR * max(len(title), 50)

            out.append("")
            out.append(sep)
            out.append(title)
            out.append(sep)
            out.append("")
            i += 1
            continue

        # ----------------------------
        # Markdown table detection
        # ----------------------------
        if line.startswith("|") and i + 1 < n and lines[i + 1].strip().startswith("|:"):

            table_lines = []
            while i < n and lines[i].strip().startswith("|"):
                table_lines.append(lines[i].strip())
                i += 1

            rows = []
            for tl in table_lines:
                rows.append([_BOLD.sub(r"\1", c.strip()) for c in tl.strip("|").split("|")])

            header = rows[0]
            data = rows[2:]

            widths = [len(h) for h in header]
            for row in data:
                for j, cell in enumerate(row):
                    widths[j] = max(widths[j], len(cell))

            def fmt_row(row):
                return TABLE_SEPARATOR.join(f"{cell:<{widths[j]}}" for j, cell in enumerate(row)).rstrip()

            out.append(fmt_row(header))
            out.append(TABLE_SEPARATOR.join("-" * w for w in widths))
            for row in data:
                out.append(fmt_row(row))

            out.append("")
            continue

        # ----------------------------
        # Bullet points
        # ----------------------------
        if line.startswith("- "):
            content = _BOLD.sub(r"\1", line[2:])

            if ":" in content:
                key, val = content.split(":", 1)
                out.append(f"{key.strip():<{REPORT_KEY_WIDTH}} : {val.strip()}")
            else:
                out.append(content)

            i += 1
            continue

        out.append(_BOLD.sub(r"\1", line))
        i += 1

    return "\n".join(out).strip()


# ---------------------------------------------------------
# Value formatting
# ---------------------------------------------------------

def fmt_value(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, (tuple, list)):
        return "(" + ", ".join(fmt_value(v) for v in x) + ")"
    return str(x)


def _bullets(items: dict) -> list[str]:
    return [f"- **{key}:** {fmt_value(value)}" for key, value in items.items()]


def _table(header: Sequence[str], rows: Sequence[Sequence]) -> list[str]:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join(":---" for _ in header) + "|"]
    for row in rows:
        lines.append("| " + " | ".join(fmt_value(c) for c in row) + " |")
    return lines


def _hypotheses_section(hypotheses: dict, flags: Sequence[str]) -> list[str]:
    lines = ["", "### Hypotheses", ""] + _bullets(hypotheses)
    if flags:
        lines += ["", "### Flags", ""] + [f"- {flag.replace(':', ' -')}" for flag in flags]
    return lines


def _jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int, float)):
        return obj
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, Fraction):
        return obj.numerator if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, QPolynomial):
        return str(obj)
    if isinstance(obj, TruncatedSeries):
        return [_jsonable(c) for c in obj.coeffs]
    if isinstance(obj, Quiver):
        return QuiverDocument.from_quiver(obj).to_dict()
    if isinstance(obj, SweepReport):
        return sweep_to_dict(obj)
    if dataclasses.is_dataclass(obj):
        return {f.name: _jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {_json_key(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (frozenset, set)):
        return sorted(_jsonable(v) for v in obj)
    if isinstance(obj, (tuple, list)):
        return [_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _json_key(key) -> str:
    if isinstance(key, tuple):
        return ",".join(str(k) for k in key)
    return str(key)


def to_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=JSON_INDENT, ensure_ascii=False)


# ---------------------------------------------------------
# Simple values
# ---------------------------------------------------------

def render_value(value, payload: dict) -> Rendered:
    """A single value printed bare in text mode."""
    return Rendered(markdown=fmt_value(value), payload=payload)


def render_items(title: str, items: dict, payload: Optional[dict] = None) -> Rendered:
    lines = [f"### {title}", ""] + _bullets(items)
    return Rendered("\n".join(lines), payload if payload is not None else items)


# ---------------------------------------------------------
# Condition (star)
# ---------------------------------------------------------

def render_star(report: StarReport, quiver: Quiver, delta: Sequence[int]) -> Rendered:
    labels = quiver.labels
    rows = [
        (labels[i], report.left_pairings[i], report.left_ok[i], report.right_pairings[i], report.right_ok[i])
        for i in range(len(labels))
    ]
    components = ["{" + ", ".join(labels[v] for v in sorted(c)) + "}" for c in report.components.components]
    lines = [
        "### Condition (star)",
        "",
        f"- **Delta:** {fmt_value(tuple(delta))}",
        f"- **Form:** {report.form_used}",
        f"- **Strictness:** {report.strictness}",
        f"- **Distance reading:** {report.dist_interpretation}",
        f"- **Support components:** {' '.join(components)}",
        f"- **Smallest component distance:** {fmt_value(report.components.min_distance())}",
        f"- **Components close enough:** {fmt_value(report.component_ok)}",
        f"- **Overall:** **{fmt_value(report.overall)}**",
        "",
        "### Pairings with simple vectors",
        "",
    ] + _table(["vertex", "left", "left ok", "right", "right ok"], rows)
    payload = {"delta": list(delta), **_jsonable(report), "overall": report.overall}
    return Rendered("\n".join(lines), payload)


# ---------------------------------------------------------
# Sweeps
# ---------------------------------------------------------

def sweep_to_dict(report: SweepReport) -> dict:
    rows = []
    for row in report.to_rows():
        rows.append({
            "n": row["n"],
            "tau": list(row["tau"]),
            "indivisible": row["indivisible"],
            "deg": row["deg"],
            "coefficients": _jsonable(row["coefficients"]),
            "certified": row["certified"],
            "verdict": row["verdict"],
        })
    return {
        "quiver": _jsonable(report.quiver),
        "d": list(report.d),
        "delta": list(report.delta),
        "mode": report.mode,
        "form": report.form,
        "depth": report.depth,
        "rows": rows,
        "stabilized": _jsonable(report.stabilized),
        "stabilization_index": _jsonable(report.stabilization_index),
        "limit": _jsonable(report.limit_coefficients),
        "certified": _jsonable(report.certified),
        "verdicts": list(report.verdicts),
        "hypotheses": _jsonable(report.hypotheses),
        "flags": list(report.flags),
    }


def sweep_to_csv(report: SweepReport) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    coeff_columns = [f"a_{i}" for i in range(report.depth + 1)]
    writer.writerow(["n", "tau", "indivisible", "deg", *coeff_columns, "certified", "verdict"])

    def cell(x):
        return "" if x is None else fmt_value(x)

    for row in report.to_rows():
        coefficients = row["coefficients"] or (None,) * (report.depth + 1)
        writer.writerow([
            row["n"],
            CSV_LIST_SEPARATOR.join(str(x) for x in row["tau"]),
            str(row["indivisible"]).lower(),
            cell(row["deg"]),
            *(cell(c) for c in coefficients),
            CSV_LIST_SEPARATOR.join(str(i) for i in row["certified"]),
            row["verdict"],
        ])
    writer.writerow(["stabilized", "", "", "", *(cell(v) for v in report.stabilized), "", ""])
    writer.writerow(["limit", "", "", "", *(cell(v) for v in report.limit_coefficients), "", ""])
    return buffer.getvalue()


def sweep_markdown(report: SweepReport) -> str:
    coeff_columns = [f"a_{i}" for i in range(report.depth + 1)]
    lines = [
        f"### Sweep summary ({report.mode})",
        "",
        f"- **d:** {fmt_value(report.d)}",
        f"- **delta:** {fmt_value(report.delta)}",
        f"- **n:** {report.n_values[0]}..{report.n_values[-1]}",
        f"- **Depth:** {report.depth}",
        f"- **Form:** {report.form}",
        f"- **Rows computed:** {len(report.computed_rows())} of {len(report.rows)}",
        "",
        "### Rows",
        "",
    ]
    rows = []
    for row in report.to_rows():
        coefficients = row["coefficients"] or (None,) * (report.depth + 1)
        certified = ",".join(str(i) for i in row["certified"]) or "-"
        rows.append((row["n"], row["tau"], row["indivisible"], row["deg"], *coefficients, certified, row["verdict"]))
    lines += _table(["n", "tau", "indivisible", "deg", *coeff_columns, "certified", "verdict"], rows)

    lines += ["", "### Stabilization", ""]
    stab_rows = [
        (f"a_{i}", report.stabilized[i], report.stabilization_index[i],
         report.limit_coefficients[i], report.certified[i], report.verdicts[i])
        for i in range(report.depth + 1)
    ]
    lines += _table(["coefficient", "stabilized", "from n", "limit", "certified from n", "verdict"], stab_rows)
    lines += _hypotheses_section(report.hypotheses, report.flags)
    return "\n".join(lines)


def render_sweep(report: SweepReport) -> Rendered:
    return Rendered(sweep_markdown(report), sweep_to_dict(report), sweep_to_csv(report))


# ---------------------------------------------------------
# Near-maximal decompositions
# ---------------------------------------------------------

def render_near_max(report: NearMaxReport) -> Rendered:
    lines = [
        "### Near-maximal decompositions",
        "",
        f"- **tau:** {fmt_value(report.tau)}",
        f"- **Dominance threshold:** {report.threshold:.4f}",
        f"- **Decompositions:** {len(report.decompositions)}",
        f"- **Conclusion holds for all:** {fmt_value(all(x.conclusion_holds for x in report.decompositions))}",
        "",
    ]
    rows = [(x.larger, x.smaller, x.pairing, x.dominant, x.remainder_pairing, x.conclusion_holds)
            for x in report.decompositions]
    lines += _table(["v", "tau - v", "pairing", "dominant part", "(delta, rest)", "holds"], rows)
    lines += _hypotheses_section(report.hypotheses, report.flags)
    payload = _jsonable(report)
    payload["threshold"] = report.threshold
    return Rendered("\n".join(lines), payload)


# ---------------------------------------------------------
# Finite-field censuses
# ---------------------------------------------------------

def render_census(
    d: Sequence[int],
    results: Sequence[CensusResult],
    hua_polynomial: Optional[QPolynomial],
    interpolated: Optional[QPolynomial],
) -> Rendered:
    """Census table; without a Hua polynomial (divisible d) nothing is compared."""
    rows = []
    for r in results:
        expected = hua_polynomial(r.q) if hua_polynomial is not None else None
        rows.append((r.q, r.total, r.classes, r.indecomposable, r.absolutely_indecomposable,
                     expected, f"{r.elapsed_seconds:.2f}s"))
    agree = None
    if hua_polynomial is not None:
        agree = all(r.absolutely_indecomposable == hua_polynomial(r.q) for r in results)
        if interpolated is not None:
            agree = agree and interpolated == hua_polynomial
    lines = [
        "### Census oracle",
        "",
        f"- **d:** {fmt_value(tuple(d))}",
        f"- **Hua:** {hua_polynomial if hua_polynomial is not None else 'divisible d, not computed'}",
        f"- **Interpolated:** {interpolated if interpolated is not None else 'not enough primes'}",
        f"- **Agreement:** **{fmt_value(agree)}**",
        "",
    ]
    lines += _table(["q", "reps", "classes", "indecomposable", "abs. indecomposable", "A_d(q)", "time"], rows)
    payload = {
        "d": list(d),
        "hua": None if hua_polynomial is None else str(hua_polynomial),
        "interpolated": None if interpolated is None else str(interpolated),
        "agreement": agree,
        "censuses": _jsonable(list(results)),
    }
    return Rendered("\n".join(lines), payload)


# ---------------------------------------------------------
# Hilbert schemes
# ---------------------------------------------------------

def render_hilbert(series: BivariateSeries, r: int, b: int, check: Optional[IdentityCheck]) -> Rendered:
    nt, nq = series.orders
    lines = [
        "### Hilbert series",
        "",
        f"- **r:** {r}",
        f"- **b:** {b}",
        f"- **Orders (t, q):** {nt}, {nq}",
        "",
    ]
    rows = [(f"t^{k}", *(series.coefficient(k, m) for m in range(nq + 1))) for k in range(nt + 1)]
    lines += _table(["", *(f"q^{m}" for m in range(nq + 1))], rows)
    payload = {"r": r, "b": b, "orders": [nt, nq], "grid": _jsonable(series.grid)}
    if check is not None:
        lines += [
            "",
            "### Coefficient identity",
            "",
            f"- **k, a:** {check.k}, {check.a}",
            f"- **Product side:** {check.lhs}",
            f"- **Partition side:** {check.rhs}",
            f"- **Equal:** **{fmt_value(check.equal)}**",
            f"- **Limit p^(b+1)(k):** {check.limit}",
            f"- **Limit reached:** {fmt_value(check.limit_equal)}",
        ]
        payload["identity"] = {**_jsonable(check), "equal": check.equal, "limit_equal": check.limit_equal}
    return Rendered("\n".join(lines), payload)


def render_multiplicity(d: Sequence[int], bound: MultiplicityBound) -> Rendered:
    items = {
        "d": tuple(d),
        "1 - (d, d)/2": bound.half_norm,
        "Bound": bound.bound,
        "Conditional": bound.conditional,
    }
    return render_items("Multiplicity bound", items, {"d": list(d), **_jsonable(bound)})
