"""Deterministic SVG rendering of labelings.

Labels are drawn as rectangles, labeled points as filled circles, unlabeled
points as hollow circles.  The output is a pure function of the inputs:
identical invocations produce identical bytes.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError
from .labeling import (
    Anchor,
    AnchorLabeling,
    LabelInstance,
    Labeling,
    Rect,
    anchor_rect,
    validate_labeling,
)

SCALE = 40  # pixels per unit
PAD = Fraction(1)
POINT_RADIUS = "3.5"


def _px(value: Fraction) -> str:
    return f"{float(value):.4f}"


def _label_rects(
    instance: LabelInstance, labeling: Labeling | AnchorLabeling
) -> dict[int, Rect]:
    rects = {}
    for pid, value in labeling.assignments.items():
        p = instance.point(pid)
        if isinstance(value, Anchor):
            rects[pid] = anchor_rect(p, value)
        else:
            rects[pid] = Rect(x0=value, x1=value + p.length, y0=p.y, y1=p.y + 1)
    return rects


def render_svg(instance: LabelInstance, labeling: Labeling | AnchorLabeling) -> str:
    """SVG document for the instance and labeling; refuses invalid input."""
    if isinstance(labeling, Labeling):
        violations = validate_labeling(instance, labeling)
        if violations:
            raise InputError("refusing to render: " + "; ".join(violations))
    rects = _label_rects(instance, labeling)
    if not isinstance(labeling, Labeling):
        ids = sorted(rects)
        for a_idx, pid in enumerate(ids):
            for qid in ids[a_idx + 1 :]:
                if open_overlap(rects[pid], rects[qid]):
                    raise InputError(
                        f"refusing to render: points {pid},{qid}: labels overlap"
                    )

    xs = [p.x for p in instance.points] + [r.x0 for r in rects.values()] + [
        r.x1 for r in rects.values()
    ]
    ys = [p.y for p in instance.points] + [r.y0 for r in rects.values()] + [
        r.y1 for r in rects.values()
    ]
    min_x = (min(xs) if xs else Fraction(0)) - PAD
    max_x = (max(xs) if xs else Fraction(1)) + PAD
    min_y = (min(ys) if ys else Fraction(0)) - PAD
    max_y = (max(ys) if ys else Fraction(1)) + PAD
    width = (max_x - min_x) * SCALE
    height = (max_y - min_y) * SCALE

    def sx(x: Fraction) -> str:
        return _px((x - min_x) * SCALE)

    def sy(y: Fraction) -> str:
        # SVG y grows downward.
        return _px((max_y - y) * SCALE)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_px(width)}" '
        f'height="{_px(height)}" viewBox="0 0 {_px(width)} {_px(height)}">',
        f'<rect x="0" y="0" width="{_px(width)}" height="{_px(height)}" fill="white"/>',
    ]
    for pid in sorted(rects):
        r = rects[pid]
        parts.append(
            f'<rect x="{sx(r.x0)}" y="{sy(r.y1)}" '
            f'width="{_px((r.x1 - r.x0) * SCALE)}" height="{_px((r.y1 - r.y0) * SCALE)}" '
            f'fill="#9ecae1" fill-opacity="0.6" stroke="#3182bd" stroke-width="1"/>'
        )
    labeled = set(rects)
    for p in instance.points:
        fill = "black" if p.id in labeled else "white"
        parts.append(
            f'<circle cx="{sx(p.x)}" cy="{sy(p.y)}" r="{POINT_RADIUS}" '
            f'fill="{fill}" stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{sx(p.x + Fraction(1, 8))}" y="{sy(p.y + Fraction(1, 8))}" '
            f'font-family="monospace" font-size="10">{p.id}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
