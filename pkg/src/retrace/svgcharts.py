"""Minimal SVG line/bar charts for headless use.

The workbench renders the real visualizations; these emitters exist so
a pipeline run on a server still leaves portable, dependency-free chart
files next to the data (e.g., the citation series).
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping
from xml.sax.saxutils import escape

_W, _H = 640, 360
_PAD = 48


def _scale(vmin: float, vmax: float, size: float, pad: float):
    span = (vmax - vmin) or 1.0

    def to_px(v: float) -> float:
        return pad + (v - vmin) / span * (size - 2 * pad)

    return to_px


def _doc(body: list[str], title: str) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="11">\n'
        f'<title>{escape(title)}</title>\n'
        f'<rect width="{_W}" height="{_H}" fill="white"/>\n'
        f'<text x="{_W / 2}" y="18" text-anchor="middle" font-size="14">'
        f'{escape(title)}</text>\n'
    )
    return head + "\n".join(body) + "\n</svg>\n"


def line_chart(series: Mapping[str, Mapping[int, int]], title: str) -> str:
    """Multi-series line chart over integer x keys (e.g., years after
    retraction -> counts per discipline)."""
    xs = sorted({x for s in series.values() for x in s})
    if not xs:
        return _doc(["<!-- empty series -->"], title)
    ymax = max((v for s in series.values() for v in s.values()), default=1)
    to_x = _scale(min(xs), max(xs), _W, _PAD)
    to_y = _scale(0, ymax, _H, _PAD)
    palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
               "#8c564b", "#17becf", "#7f7f7f"]
    body = [
        f'<line x1="{_PAD}" y1="{_H - _PAD}" x2="{_W - _PAD}" y2="{_H - _PAD}" stroke="#333"/>',
        f'<line x1="{_PAD}" y1="{_PAD}" x2="{_PAD}" y2="{_H - _PAD}" stroke="#333"/>',
    ]
    for x in xs:
        px = to_x(x)
        body.append(f'<text x="{px:.1f}" y="{_H - _PAD + 14}" text-anchor="middle">{x}</text>')
    for i, (name, s) in enumerate(sorted(series.items())):
        color = palette[i % len(palette)]
        points = " ".join(
            f"{to_x(x):.1f},{_H - to_y(s[x]):.1f}" for x in sorted(s)
        )
        body.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                    f'points="{points}"/>')
        body.append(f'<text x="{_W - _PAD + 4}" y="{_PAD + 14 * i}" fill="{color}">'
                    f'{escape(str(name))}</text>')
    return _doc(body, title)


def bar_chart(values: Mapping[str, int], title: str) -> str:
    """Horizontal bar chart of labelled counts (e.g., retraction reasons)."""
    items = sorted(values.items(), key=lambda kv: (-kv[1], kv[0]))
    if not items:
        return _doc(["<!-- empty values -->"], title)
    vmax = max(v for _, v in items) or 1
    bar_h = min(22, ((_H - 2 * _PAD) / len(items)))
    body = []
    for i, (label, value) in enumerate(items):
        y = _PAD + i * bar_h
        width = (value / vmax) * (_W - 2 * _PAD - 120)
        body.append(f'<rect x="{_PAD + 110}" y="{y:.1f}" width="{width:.1f}" '
                    f'height="{bar_h - 4:.1f}" fill="#1f77b4"/>')
        body.append(f'<text x="{_PAD + 104}" y="{y + bar_h / 2 + 3:.1f}" '
                    f'text-anchor="end">{escape(str(label))}</text>')
        body.append(f'<text x="{_PAD + 114 + width:.1f}" y="{y + bar_h / 2 + 3:.1f}">'
                    f'{value}</text>')
    return _doc(body, title)


def write_chart(svg: str, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(svg, encoding="utf-8")
    return path
