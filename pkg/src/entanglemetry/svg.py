"""Self-contained SVG drawing of the three concurrence quadrilaterals."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .geometry import QuadrilateralGeometry

PANEL = 300
MARGIN = 40


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def _panel(q: QuadrilateralGeometry, ox: float) -> list[str]:
    xs = [v[0] for v in q.vertices]
    ys = [v[1] for v in q.vertices]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    scale = (PANEL - 2 * MARGIN) / span
    cx = (max(xs) + min(xs)) / 2
    cy = (max(ys) + min(ys)) / 2

    def pt(v):
        # svg y grows downward
        return (ox + PANEL / 2 + (v[0] - cx) * scale, PANEL / 2 + 20 - (v[1] - cy) * scale)

    p0, a1, p1, a2 = (pt(v) for v in q.vertices)
    out = [f'<g class="quad" data-diagonal="{escape(q.diagonal_cut)}">']
    out.append(
        f'<text x="{_fmt(ox + PANEL / 2)}" y="18" text-anchor="middle" font-size="14">'
        f"diagonal {escape(q.diagonal_cut)}</text>"
    )
    for tri, apex, area in ((q.triangle_1, a1, q.area_1), (q.triangle_2, a2, q.area_2)):
        fill = "#f4f4a8" if area > 0 else "none"
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (p0, apex, p1))
        out.append(f'<polygon points="{pts}" fill="{fill}" fill-opacity="0.85" stroke="#000" stroke-width="1.5"/>')
    out.append(
        f'<line x1="{_fmt(p0[0])}" y1="{_fmt(p0[1])}" x2="{_fmt(p1[0])}" y2="{_fmt(p1[1])}" '
        'stroke="#4a90e2" stroke-width="1.5" stroke-dasharray="5,3"/>'
    )
    power = "²" if q.use_squared else ""
    edges = [
        (p0, a1, q.triangle_1.labels[0], q.triangle_1.a),
        (a1, p1, q.triangle_1.labels[1], q.triangle_1.b),
        (p0, a2, q.triangle_2.labels[0], q.triangle_2.a),
        (a2, p1, q.triangle_2.labels[1], q.triangle_2.b),
        (p0, p1, q.diagonal_cut, q.diagonal),
    ]
    for u, v, label, length in edges:
        mx, my = (u[0] + v[0]) / 2, (u[1] + v[1]) / 2
        out.append(
            f'<text x="{_fmt(mx)}" y="{_fmt(my)}" font-size="11" text-anchor="middle">'
            f"C{power}[{escape(label)}]={length:.3f}</text>"
        )
    areas = f"areas {q.area_1:.4f} / {q.area_2:.4f}"
    out.append(f'<text x="{_fmt(ox + PANEL / 2)}" y="{PANEL + 30}" text-anchor="middle" font-size="12">{areas}</text>')
    out.append("</g>")
    return out


def quadrilaterals_svg(quads: list[QuadrilateralGeometry]) -> str:
    width = PANEL * len(quads)
    height = PANEL + 45
    body = []
    for k, q in enumerate(quads):
        if not all(math.isfinite(c) for v in q.vertices for c in v):
            raise ValueError(f"non-finite vertex in {q.diagonal_cut}")
        body.extend(_panel(q, k * PANEL))
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif">'
    )
    return "\n".join([head, f'<rect width="{width}" height="{height}" fill="#fff"/>', *body, "</svg>"]) + "\n"
