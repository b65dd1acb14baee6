"""Pebbling grids and memory curves as ASCII text and SVG."""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

from .graph import Dag
from .schedule import memory_profile
from .strategy import PebblingStrategy

FILLED = "█"
EMPTY = "·"

CELL = 14
CURVE_HEIGHT = 60
PAD = 10


@dataclass(frozen=True)
class GridFigure:
    rows: list[str]
    columns: int
    cells: list[list[bool]]
    profile: list[int]

    @classmethod
    def of(cls, s: PebblingStrategy, g: Dag) -> "GridFigure":
        rows = g.names
        cells = [[name in config for config in s.configs] for name in rows]
        return cls(rows, len(s.configs), cells, memory_profile(s))


def render_ascii(s: PebblingStrategy, g: Dag) -> str:
    fig = GridFigure.of(s, g)
    width = max(len(r) for r in fig.rows)
    lines = [" " * (width + 2) + "".join(str(i % 10) for i in range(fig.columns))]
    for name, row in zip(fig.rows, fig.cells):
        lines.append(f"{name.ljust(width)}: " + "".join(FILLED if c else EMPTY for c in row))
    lines.append(" ".join(map(str, fig.profile)))
    return "\n".join(lines) + "\n"


def render_svg(s: PebblingStrategy, g: Dag) -> str:
    """Grid of squares (rows = nodes, columns = steps) under a step plot of pebbles in use."""
    fig = GridFigure.of(s, g)
    label_w = 8 * max(len(r) for r in fig.rows) + PAD
    grid_top = PAD + CURVE_HEIGHT + PAD
    width = label_w + fig.columns * CELL + PAD
    height = grid_top + len(fig.rows) * CELL + PAD
    peak = max(fig.profile) or 1

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        "<style>.on{fill:#b22222}.off{fill:#f4f4f4;stroke:#ccc;stroke-width:0.5}"
        ".curve{fill:none;stroke:#1f4e9c;stroke-width:1.5}text{font:10px monospace}</style>",
        f"<title>peak {max(fig.profile)} pebbles, {fig.columns - 1} steps</title>",
    ]

    points = []
    for i, count in enumerate(fig.profile):
        y = PAD + CURVE_HEIGHT * (1 - count / peak)
        x0 = label_w + i * CELL
        points += [f"{x0},{y:g}", f"{x0 + CELL},{y:g}"]
    out.append(f'<polyline class="curve" points="{" ".join(points)}"/>')
    out.append(f'<text x="{PAD}" y="{PAD + 8}">{max(fig.profile)}</text>')

    for r, (name, row) in enumerate(zip(fig.rows, fig.cells)):
        y = grid_top + r * CELL
        out.append(f'<text x="{PAD}" y="{y + CELL - 3}">{escape(name)}</text>')
        for c, filled in enumerate(row):
            cls = "on" if filled else "off"
            out.append(f'<rect class="{cls}" x="{label_w + c * CELL}" y="{y}" width="{CELL}" height="{CELL}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
