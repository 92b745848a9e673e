"""Serializers for profiles, check reports, fits, and scans.

All emitters are deterministic: stable key order, fixed float formatting
(17 significant digits in CSV, shortest-round-trip in JSON), UTF-8,
newline-terminated.  The check-report emitter has a matching parser and
the pair round-trips exactly.
"""

from __future__ import annotations

import csv
import io
import json

from .asymptotics import FarFieldFit, expected_coefficients
from .model import ModelParams
from .profile import RadialProfile
from .verify import CheckReport, GradientScanReport

__all__ = [
    "emit_report",
    "parse_report",
    "profile_document",
    "scan_document",
    "table_document",
]


def _f(x: float) -> str:
    """Fixed 17-significant-digit decimal, enough to round-trip a double."""
    return f"{float(x):.16e}"


def _fit_payload(fit: FarFieldFit) -> dict:
    expected_leading, expected_second = expected_coefficients(fit.params)
    return {
        "window": [fit.window[0], fit.window[1]],
        "fitted_leading": fit.fitted_leading,
        "expected_leading": expected_leading,
        "fitted_second": fit.fitted_second,
        "expected_second": expected_second,
        "fitted_C1": fit.fitted_C1,
        "residual_norm": fit.residual_norm,
    }


def emit_report(
    reports: list[CheckReport],
    fit: FarFieldFit | None,
    format: str = "csv",
    params: ModelParams | None = None,
) -> str:
    """Serialize check reports plus an optional far-field fit.

    JSON shape: {"params": {"n":..., "alpha":...}, "checks": [{"name":...,
    "pass":..., "metric":..., "tolerance":..., "detail":...}], "fit": {...}}.
    CSV: a check table, a blank line, then a key,value fit section.
    """
    if params is None:
        if fit is None:
            raise ValueError("need params when no fit is supplied")
        params = fit.params
    if format == "json":
        doc = {
            "params": {"n": params.n, "alpha": params.alpha},
            "checks": [
                {
                    "name": c.name,
                    "pass": c.passed,
                    "metric": c.metric,
                    "tolerance": c.tolerance,
                    "detail": c.detail,
                }
                for c in reports
            ],
            "fit": _fit_payload(fit) if fit is not None else None,
        }
        return json.dumps(doc, indent=2) + "\n"
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["name", "pass", "metric", "tolerance", "detail"])
        for c in reports:
            writer.writerow(
                [c.name, "true" if c.passed else "false", _f(c.metric), _f(c.tolerance), c.detail]
            )
        buf.write("\n")
        writer.writerow(["key", "value"])
        writer.writerow(["n", str(params.n)])
        writer.writerow(["alpha", _f(params.alpha)])
        if fit is not None:
            for key, value in _fit_payload(fit).items():
                if key == "window":
                    writer.writerow(["window_lo", _f(value[0])])
                    writer.writerow(["window_hi", _f(value[1])])
                elif value is None:
                    writer.writerow([key, ""])
                else:
                    writer.writerow([key, _f(value)])
        return buf.getvalue()
    raise ValueError(f"unknown format {format!r} (expected csv or json)")


def parse_report(text: str, format: str = "csv") -> dict:
    """Parse a document produced by emit_report.

    Returns {"params": {...}, "checks": [CheckReport, ...], "fit": dict or
    None}; parse(emit(x)) reproduces the CheckReport list exactly.
    """
    if format == "json":
        doc = json.loads(text)
        checks = [
            CheckReport(
                name=c["name"],
                passed=bool(c["pass"]),
                metric=float(c["metric"]),
                tolerance=float(c["tolerance"]),
                detail=c.get("detail", ""),
            )
            for c in doc.get("checks", [])
        ]
        return {"params": doc.get("params"), "checks": checks, "fit": doc.get("fit")}
    if format == "csv":
        head, _, tail = text.partition("\n\n")
        rows = list(csv.reader(io.StringIO(head)))
        checks = [
            CheckReport(
                name=row[0],
                passed=row[1] == "true",
                metric=float(row[2]),
                tolerance=float(row[3]),
                detail=row[4] if len(row) > 4 else "",
            )
            for row in rows[1:]
            if row
        ]
        params: dict = {}
        fit: dict = {}
        for row in csv.reader(io.StringIO(tail)):
            if not row or row[0] == "key":
                continue
            key, value = row[0], row[1]
            if key == "n":
                params["n"] = int(value)
            elif key == "alpha":
                params["alpha"] = float(value)
            else:
                fit[key] = float(value) if value else None
        return {"params": params or None, "checks": checks, "fit": fit or None}
    raise ValueError(f"unknown format {format!r} (expected csv or json)")


def profile_document(profile: RadialProfile, format: str = "csv") -> str:
    """Serialize a profile; CSV columns exactly t,r,dr,ddr at 17 digits."""
    if format == "csv":
        lines = ["t,r,dr,ddr"]
        for k in range(len(profile.grid)):
            lines.append(
                f"{_f(profile.grid[k])},{_f(profile.r[k])},"
                f"{_f(profile.dr[k])},{_f(profile.ddr[k])}"
            )
        return "\n".join(lines) + "\n"
    if format == "json":
        doc = {
            "params": {"n": profile.params.n, "alpha": profile.params.alpha},
            "tol": profile.tol,
            "profile": {
                "t": list(profile.grid),
                "r": list(profile.r),
                "dr": list(profile.dr),
                "ddr": list(profile.ddr),
            },
        }
        return json.dumps(doc, indent=2) + "\n"
    raise ValueError(f"unknown format {format!r} (expected csv or json)")


def scan_document(report: GradientScanReport, format: str = "csv") -> str:
    """Serialize a gradient scan."""
    if format == "csv":
        lines = ["center_offset,radius,M,grad_norm,ratio"]
        for s in report.samples:
            lines.append(
                f"{_f(s.center_offset)},{_f(s.radius)},{_f(s.M)},"
                f"{_f(s.grad_norm)},{_f(s.ratio)}"
            )
        lines.append(f"sup_ratio,{_f(report.sup_ratio)},,,")
        return "\n".join(lines) + "\n"
    if format == "json":
        doc = {
            "params": {"n": report.params.n, "alpha": report.params.alpha},
            "samples": [
                {
                    "center_offset": s.center_offset,
                    "radius": s.radius,
                    "M": s.M,
                    "grad_norm": s.grad_norm,
                    "ratio": s.ratio,
                }
                for s in report.samples
            ],
            "sup_ratio": report.sup_ratio,
        }
        return json.dumps(doc, indent=2) + "\n"
    raise ValueError(f"unknown format {format!r} (expected csv or json)")


def table_document(rows: list[dict], format: str = "csv") -> str:
    """Serialize the (n, alpha) summary table of fitted vs expected coefficients."""
    columns = [
        "n",
        "alpha",
        "fitted_leading",
        "expected_leading",
        "fitted_second",
        "expected_second",
        "fitted_C1",
        "residual_norm",
    ]
    if format == "csv":
        lines = [",".join(columns)]
        for row in rows:
            cells = []
            for col in columns:
                value = row[col]
                if value is None:
                    cells.append("")
                elif col == "n":
                    cells.append(str(value))
                else:
                    cells.append(_f(value))
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"
    if format == "json":
        return json.dumps({"table": rows}, indent=2) + "\n"
    raise ValueError(f"unknown format {format!r} (expected csv or json)")
