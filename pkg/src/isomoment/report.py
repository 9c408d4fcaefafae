"""Machine-readable run reports and tabular (CSV + figure) emission.

A report is a plain dict with deterministic key order; floats serialize via
Python's shortest round-trip repr, so no precision is lost.  Items may carry
``curves`` (named column/row tables); ``emit_plot_data`` writes each curve
as a headered CSV and, by default, renders a PNG figure next to it.
"""

from __future__ import annotations

import csv
import json
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

__all__ = ["TOOL_VERSION", "REPORT_FORMAT_VERSION", "make_report",
           "write_report", "emit_plot_data", "moment_summary_dict", "curve"]

TOOL_VERSION = "0.1.0"
REPORT_FORMAT_VERSION = 1


def _plain(value):
    """Recursively convert numpy containers to JSON-serializable types."""
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    return value


def make_report(command, items, summary=None, started: float | None = None) -> dict:
    """Assemble the standard report document."""
    report = {
        "tool": "isomoment",
        "version": TOOL_VERSION,
        "format_version": REPORT_FORMAT_VERSION,
        "command": list(command),
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "wall_clock_s": None if started is None else time.perf_counter() - started,
        "items": _plain(items),
        "summary": _plain(summary or {}),
    }
    return report


def write_report(report: dict, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    return path


def curve(columns, rows) -> dict:
    """A named column/row table attached to a report item."""
    return {"columns": list(columns), "rows": _plain([list(r) for r in rows])}


def moment_summary_dict(m) -> dict:
    """Report view of a MomentSummary."""
    d = {
        "dimension": m.dimension,
        "volume": m.volume,
        "centroid": _plain(m.centroid),
        "J": _plain(m.J),
        "J0": m.J0,
        "J_product": m.J_prod,
        "inertia_matrix": _plain(m.M),
        "determinant": m.D,
    }
    if m.has_boundary():
        d.update({
            "surface": m.surface,
            "boundary_centroid": _plain(m.boundary_centroid),
            "I": _plain(m.I),
            "I0": m.I0,
            "I_product": m.I_prod,
        })
    return d


def _safe_name(*parts) -> str:
    text = "_".join(str(p) for p in parts if p not in (None, ""))
    return "".join(ch if (ch.isalnum() or ch in "-_") else "_" for ch in text) or "item"


def emit_plot_data(report: dict, out_dir, figures: bool = True) -> list[Path]:
    """Write every curve in the report as a CSV table (header row always
    present, even for empty curves) and render a PNG alongside each one."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for idx, item in enumerate(report.get("items", [])):
        curves = item.get("curves") or {}
        base = item.get("name") or f"item{idx}"
        for cname, table in curves.items():
            columns = table.get("columns", [])
            rows = table.get("rows", [])
            csv_path = out_dir / f"{_safe_name(base, cname)}.csv"
            with csv_path.open("w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(columns)
                for row in rows:
                    writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
            written.append(csv_path)
            if figures and rows:
                from .plotting import render_curve

                png_path = csv_path.with_suffix(".png")
                render_curve(columns, rows, png_path, title=f"{base}: {cname}")
                written.append(png_path)
    return written
