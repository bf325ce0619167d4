"""Deterministic CSV output and a bare-bones SVG line plot."""

from __future__ import annotations

import math
import os
from pathlib import Path


def fmt(v):
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return "%.17g" % v
    if hasattr(v, "item"):  # numpy scalar
        return fmt(v.item())
    return str(v)


def write_csv(path, meta: dict, columns, rows):
    """Write ``rows`` under a ``#``-prefixed header echoing ``meta``.

    The file is written to a temporary name and renamed, so a crash never
    leaves a partial file behind.
    """
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    lines = [f"# {k}={fmt(meta[k])}" for k in sorted(meta)]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    tmp.write_text("\n".join(lines) + "\n")
    os.replace(tmp, path)
    return path


def read_csv(path):
    """Return ``(meta, columns, rows)`` from a file written by :func:`write_csv`."""
    meta, columns, rows = {}, None, []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            k, _, v = line[1:].strip().partition("=")
            meta[k] = v
        elif columns is None:
            columns = line.split(",")
        elif line:
            rows.append(line.split(","))
    return meta, columns, rows


def write_svg(path, series, xlabel="", ylabel="", width=480, height=320):
    """Line plot of ``{label: (xs, ys)}`` as a standalone SVG file."""
    pad = 48
    xs_all = [x for xs, _ in series.values() for x in xs]
    ys_all = [y for _, ys in series.values() for y in ys if math.isfinite(y)]
    x0, x1 = min(xs_all), max(xs_all)
    y0, y1 = min(ys_all), max(ys_all)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1

    def px(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def py(y):
        return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"]
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect x="{pad}" y="{pad}" width="{width - 2 * pad}" height="{height - 2 * pad}" '
        'fill="none" stroke="black"/>',
        f'<text x="{width / 2}" y="{height - 8}" text-anchor="middle">{xlabel}</text>',
        f'<text x="12" y="{height / 2}" transform="rotate(-90 12 {height / 2})" '
        f'text-anchor="middle">{ylabel}</text>',
        f'<text x="{pad}" y="{height - pad + 16}" font-size="10">{x0:.4g}</text>',
        f'<text x="{width - pad}" y="{height - pad + 16}" font-size="10" text-anchor="end">{x1:.4g}</text>',
        f'<text x="{pad - 4}" y="{height - pad}" font-size="10" text-anchor="end">{y0:.4g}</text>',
        f'<text x="{pad - 4}" y="{pad + 8}" font-size="10" text-anchor="end">{y1:.4g}</text>',
    ]
    for i, (label, (xs, ys)) in enumerate(series.items()):
        c = colors[i % len(colors)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys) if math.isfinite(y))
        out.append(f'<polyline fill="none" stroke="{c}" points="{pts}"/>')
        out.append(f'<text x="{width - pad - 4}" y="{pad + 14 + 14 * i}" fill="{c}" '
                   f'font-size="11" text-anchor="end">{label}</text>')
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n")
    return Path(path)
