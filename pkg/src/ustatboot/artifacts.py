"""Deterministic artifact output: series files, CSV, JSON, and SVG reports.

Every writer produces byte-identical output for identical report contents:
floats are rendered with ``repr`` (shortest round-trip form), JSON keys are
sorted, and files are written atomically (temp file in the target directory,
then rename).  Wall-clock timing fields never enter artifacts.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import asdict

import numpy as np

COVERAGE_CSV_HEADER = "method,n,l,alpha,level,coverage,mean_width,num_sims,B,seed"
MSE_CSV_HEADER = "n,l,alpha,num_sims,mse,se,target_var,seed"
BENCH_CSV_HEADER = (
    "n,l,m,B,precompute_evals,new_evals_per_replicate,plugin_evals_per_replicate,seed"
)

_METHOD_COLORS = {
    "plugin": "#d62728",
    "new": "#1f77b4",
    "subsample": "#2ca02c",
    "blockmean": "#9467bd",
}


def atomic_write_text(path: str, text: str) -> None:
    """Write text to path via a temp file and rename, creating parent dirs."""
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=parent, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(value) -> str:
    """CSV field rendering: shortest round-trip floats, empty for None."""
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_series(path: str, values: np.ndarray) -> None:
    """One value per line, 17 significant digits (round-trip exact)."""
    lines = "".join(f"{float(v):.17g}\n" for v in np.asarray(values, dtype=np.float64))
    atomic_write_text(path, lines)


def read_series(path: str) -> np.ndarray:
    """Parse a one-value-per-line series file; errors carry line numbers."""
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for i, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                v = float(text)
            except ValueError:
                raise ValueError(f"{path}: line {i}: not a number: {text!r}") from None
            if not np.isfinite(v):
                raise ValueError(f"{path}: line {i}: non-finite value: {text!r}")
            values.append(v)
    if len(values) < 2:
        raise ValueError(f"{path}: need at least 2 values, found {len(values)}")
    return np.asarray(values, dtype=np.float64)


def _config_dict(config) -> dict:
    d = asdict(config)
    # Worker count affects scheduling only, never results; keep it out of
    # artifacts so identical experiments serialize identically.
    d.pop("threads", None)
    out = {}
    for k, v in d.items():
        if hasattr(v, "value"):
            out[k] = v.value
        elif isinstance(v, tuple):
            out[k] = [e.value if hasattr(e, "value") else e for e in v]
        else:
            out[k] = v
    return out


def report_json_text(kind: str, config, records: list[dict]) -> str:
    payload = {"kind": kind, "config": _config_dict(config), "records": records}
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def coverage_csv_text(records) -> str:
    rows = [COVERAGE_CSV_HEADER]
    for r in records:
        rows.append(
            ",".join(
                _fmt(v)
                for v in (
                    r.method, r.n, r.l, r.alpha, r.level, r.coverage,
                    r.mean_width, r.num_sims, r.num_replicates, r.seed,
                )
            )
        )
    return "\n".join(rows) + "\n"


def coverage_record_dicts(records) -> list[dict]:
    return [asdict(r) for r in records]


def mse_csv_text(records) -> str:
    rows = [MSE_CSV_HEADER]
    for r in records:
        rows.append(
            ",".join(
                _fmt(v)
                for v in (r.n, r.l, r.alpha, r.num_sims, r.mse, r.se, r.target_var, r.seed)
            )
        )
    return "\n".join(rows) + "\n"


def bench_csv_text(records) -> str:
    rows = [BENCH_CSV_HEADER]
    for r in records:
        rows.append(
            ",".join(
                _fmt(v)
                for v in (
                    r.n, r.l, r.m, r.num_replicates, r.precompute_evals,
                    r.new_evals_per_replicate, r.plugin_evals_per_replicate, r.seed,
                )
            )
        )
    return "\n".join(rows) + "\n"


def bench_record_dicts(records) -> list[dict]:
    """Benchmark records for JSON output, with timing fields dropped."""
    out = []
    for r in records:
        d = asdict(r)
        for key in ("precompute_seconds", "new_seconds", "plugin_seconds"):
            d.pop(key, None)
        out.append(d)
    return out


def coverage_curve_svg(records, level: float, title: str) -> str:
    """Coverage versus block length, one polyline per method.

    Records with errors or missing coverage are skipped.  A dashed rule
    marks the nominal level.
    """
    width, height = 640, 420
    left, right, top, bottom = 60, 20, 40, 50
    plot_w, plot_h = width - left - right, height - top - bottom

    series: dict[str, list[tuple[int, float]]] = {}
    for r in records:
        if r.coverage is None:
            continue
        series.setdefault(r.method, []).append((r.l, r.coverage))
    xs = sorted({l for pts in series.values() for l, _ in pts})

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.2f}" y="20" text-anchor="middle" font-family="sans-serif" '
        f'font-size="14">{title}</text>',
    ]
    if xs:
        x_lo, x_hi = min(xs), max(xs)
        x_span = max(x_hi - x_lo, 1)
        ys = [c for pts in series.values() for _, c in pts] + [level]
        y_lo = min(0.5, min(ys))
        y_hi = max(1.0, max(ys))

        def sx(l):
            return left + (l - x_lo) / x_span * plot_w

        def sy(c):
            return top + (y_hi - c) / (y_hi - y_lo) * plot_h

        parts.append(
            f'<line x1="{left}" y1="{top + plot_h}" x2="{left + plot_w}" y2="{top + plot_h}" '
            f'stroke="black"/>'
        )
        parts.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + plot_h}" stroke="black"/>')
        for l in xs:
            parts.append(
                f'<text x="{sx(l):.2f}" y="{top + plot_h + 18}" text-anchor="middle" '
                f'font-family="sans-serif" font-size="11">{l}</text>'
            )
        for c in (y_lo, level, y_hi):
            parts.append(
                f'<text x="{left - 8}" y="{sy(c) + 4:.2f}" text-anchor="end" '
                f'font-family="sans-serif" font-size="11">{c:.2f}</text>'
            )
        parts.append(
            f'<line x1="{left}" y1="{sy(level):.2f}" x2="{left + plot_w}" y2="{sy(level):.2f}" '
            f'stroke="gray" stroke-dasharray="4 3"/>'
        )
        for k, (name, pts) in enumerate(sorted(series.items())):
            color = _METHOD_COLORS.get(name, "#7f7f7f")
            pts = sorted(pts)
            coords = " ".join(f"{sx(l):.2f},{sy(c):.2f}" for l, c in pts)
            parts.append(
                f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>'
            )
            for l, c in pts:
                parts.append(f'<circle cx="{sx(l):.2f}" cy="{sy(c):.2f}" r="2.5" fill="{color}"/>')
            lx = left + plot_w - 130
            ly = top + 14 + 16 * k
            parts.append(
                f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
                f'stroke="{color}" stroke-width="1.5"/>'
            )
            parts.append(
                f'<text x="{lx + 28}" y="{ly}" font-family="sans-serif" font-size="11">{name}</text>'
            )
        parts.append(
            f'<text x="{left + plot_w / 2:.2f}" y="{height - 12}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">block length</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
