"""Minimal SVG line charts for sweep results."""
from typing import Sequence, Tuple
from xml.sax.saxutils import escape

WIDTH, HEIGHT, MARGIN = 480, 320, 48


def _scale(value: float, low: float, high: float, start: float, end: float) -> float:
    if high == low:
        return (start + end) / 2
    return start + (value - low) / (high - low) * (end - start)


def polyline_chart(points: Sequence[Tuple[float, float]], title: str, x_label: str, y_label: str) -> str:
    """One polyline through `points` with min/max tick labels on both axes."""
    xs = [x for x, _ in points] or [0.0]
    ys = [y for _, y in points] or [0.0]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(0.0, min(ys)), max(ys)
    left, right, top, bottom = MARGIN, WIDTH - MARGIN / 2, MARGIN / 2, HEIGHT - MARGIN
    coords = " ".join(f"{_scale(x, x0, x1, left, right):.1f},{_scale(y, y0, y1, bottom, top):.1f}"
                      for x, y in points)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.0f}" y="16" text-anchor="middle" font-size="13">{escape(title)}</text>',
        f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>',
        f'<line x1="{left}" y1="{bottom}" x2="{left}" y2="{top}" stroke="black"/>',
        f'<text x="{left}" y="{bottom + 16}" font-size="10">{x0:g}</text>',
        f'<text x="{right}" y="{bottom + 16}" text-anchor="end" font-size="10">{x1:g}</text>',
        f'<text x="{left - 4}" y="{bottom}" text-anchor="end" font-size="10">{y0:g}</text>',
        f'<text x="{left - 4}" y="{top + 8}" text-anchor="end" font-size="10">{y1:.3g}</text>',
        f'<text x="{(left + right) / 2:.0f}" y="{HEIGHT - 8}" text-anchor="middle" font-size="11">'
        f'{escape(x_label)}</text>',
        f'<text x="12" y="{(top + bottom) / 2:.0f}" font-size="11" transform="rotate(-90 12 '
        f'{(top + bottom) / 2:.0f})" text-anchor="middle">{escape(y_label)}</text>',
    ]
    if points:
        parts.append(f'<polyline points="{coords}" fill="none" stroke="steelblue" stroke-width="2"/>')
        parts.extend(f'<circle cx="{c.split(",")[0]}" cy="{c.split(",")[1]}" r="3" fill="steelblue"/>'
                     for c in coords.split())
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
