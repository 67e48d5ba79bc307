"""Figure emission: per-point SVG scatter plots and summary histograms.

The per-point projections are written as hand-rolled SVG so the output is
dependency-free and diffable: fixed 600x600 viewBox, data bounding box
padded by 10% and mapped linearly onto [40, 560] with the y axis flipped
(SVG y grows downward). Noun, denominal, and root verbs get distinct
glyphs plus a legend.

The per-model difference histogram (paired similarity differences under
both aggregations) goes through matplotlib to a PNG next to the CSVs.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

__all__ = ["write_point_svg", "write_point_csv", "write_diff_histogram"]

SIZE = 600.0
MARGIN = 40.0

NOUN_COLOR = "#e69f00"
DENOM_COLOR = "#0072b2"
VERB_COLOR = "#009e73"


def _transform(coords):
    coords = np.asarray(coords, dtype=np.float64)
    lo = coords.min(axis=0)
    hi = coords.max(axis=0)
    span = np.maximum(hi - lo, 1e-12)
    pad = 0.1 * span
    lo, hi = lo - pad, hi + pad
    span = hi - lo
    scale = (SIZE - 2 * MARGIN) / span

    def to_svg(point):
        x = MARGIN + (point[0] - lo[0]) * scale[0]
        y = SIZE - MARGIN - (point[1] - lo[1]) * scale[1]
        return x, y

    return to_svg


def _glyph(kind, x, y):
    if kind == "noun":
        return f'<circle cx="{x:.2f}" cy="{y:.2f}" r="7" fill="{NOUN_COLOR}"/>'
    if kind == "denominal":
        return (
            f'<rect x="{x - 6:.2f}" y="{y - 6:.2f}" width="12" height="12" '
            f'fill="{DENOM_COLOR}"/>'
        )
    points = f"{x:.2f},{y - 7:.2f} {x - 6:.2f},{y + 5:.2f} {x + 6:.2f},{y + 5:.2f}"
    return f'<polygon points="{points}" fill="{VERB_COLOR}"/>'


def write_point_svg(coords, tokens, kinds, path, title="") -> None:
    """One data point's 2D layout; ``kinds`` parallel to rows of ``coords``."""
    to_svg = _transform(coords)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE:.0f} {SIZE:.0f}">',
        f'<rect width="{SIZE:.0f}" height="{SIZE:.0f}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{MARGIN:.0f}" y="24" font-size="16" font-family="sans-serif">'
            f"{title}</text>"
        )
    for point, token, kind in zip(coords, tokens, kinds):
        x, y = to_svg(point)
        parts.append(_glyph(kind, x, y))
        parts.append(
            f'<text x="{x + 9:.2f}" y="{y + 4:.2f}" font-size="11" '
            f'font-family="sans-serif">{token}</text>'
        )
    legend = (("noun", NOUN_COLOR), ("denominal", DENOM_COLOR), ("root verb", VERB_COLOR))
    for i, (label, _) in enumerate(legend):
        y = MARGIN + 18 * i
        parts.append(_glyph(("noun", "denominal", "verb")[i], SIZE - 140, y))
        parts.append(
            f'<text x="{SIZE - 128:.0f}" y="{y + 4:.2f}" font-size="12" '
            f'font-family="sans-serif">{label}</text>'
        )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8")


def write_point_csv(coords, tokens, kinds, path) -> None:
    rows = ["token,kind,x,y"]
    for point, token, kind in zip(coords, tokens, kinds):
        rows.append(f"{token},{kind},{float(point[0])!r},{float(point[1])!r}")
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")


def write_diff_histogram(records, label, path) -> None:
    """Histogram of the paired similarity differences for one model."""
    d_h1 = [r.d_h1 for r in records]
    d_h2 = [r.d_h2 for r in records]
    fig, ax = plt.subplots(figsize=(6, 4))
    bins = np.histogram_bin_edges(d_h1 + d_h2, bins=20)
    ax.hist(d_h1, bins=bins, alpha=0.6, label="vs mean root-verb similarity")
    ax.hist(d_h2, bins=bins, alpha=0.6, label="vs max root-verb similarity")
    ax.axvline(0.0, color="black", linewidth=1)
    ax.set_xlabel("noun-denominal minus noun-root-verb similarity")
    ax.set_ylabel("data points")
    ax.set_title(label)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
