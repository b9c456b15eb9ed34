"""Label placement instances and feasibility validators.

Points carry a positive label length and a nonnegative weight.  A label is an
open unit-height rectangle of the point's length; in the basic model its
bottom edge passes through the point and only its left-edge x-coordinate
``z`` is free, within ``[p_x - l(p), p_x]``.  Touching labels are feasible:
all comparisons are closed and exact.

Multi-position instances restrict ``z`` to finite sets; anchored instances
instead carry finite sets of boundary anchors, which may sit on any of the
four edges and so place rectangles above, below, left or right of the point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import InputError

ANCHOR_EDGES = ("bottom", "top", "left", "right")


@dataclass(frozen=True)
class LabelPoint:
    id: int
    x: Fraction
    y: Fraction
    length: Fraction
    weight: Fraction


@dataclass(frozen=True)
class LabelInstance:
    points: tuple[LabelPoint, ...]

    @classmethod
    def build(
        cls, rows: Iterable[tuple[Fraction, Fraction, Fraction, Fraction]]
    ) -> "LabelInstance":
        pts = []
        seen: set[tuple[Fraction, Fraction]] = set()
        for i, (x, y, length, weight) in enumerate(rows):
            x, y, length, weight = Fraction(x), Fraction(y), Fraction(length), Fraction(weight)
            if length <= 0:
                raise InputError(f"point {i}: length must be positive, got {length}")
            if weight < 0:
                raise InputError(f"point {i}: weight must be nonnegative, got {weight}")
            if (x, y) in seen:
                raise InputError(f"point {i}: coincides with an earlier point at ({x},{y})")
            seen.add((x, y))
            pts.append(LabelPoint(id=i, x=x, y=y, length=length, weight=weight))
        return cls(points=tuple(pts))

    @property
    def size(self) -> int:
        return len(self.points)

    def point(self, pid: int) -> LabelPoint:
        if not 0 <= pid < len(self.points):
            raise InputError(f"unknown point id {pid}")
        return self.points[pid]

    def restrict(self, ids: Iterable[int]) -> tuple["LabelInstance", tuple[int, ...]]:
        """Sub-instance on ``ids`` with fresh ids; returns the old-id lookup."""
        old = tuple(sorted(set(ids)))
        rows = []
        for pid in old:
            p = self.point(pid)
            rows.append((p.x, p.y, p.length, p.weight))
        return LabelInstance.build(rows), old


def y_overlap(p: LabelPoint, q: LabelPoint) -> bool:
    return abs(p.y - q.y) < 1


@dataclass(frozen=True)
class Labeling:
    """Partial assignment id -> left-edge x-coordinate."""

    assignments: Mapping[int, Fraction]

    def __init__(self, assignments: Mapping[int, Fraction] | Iterable[tuple[int, Fraction]]):
        data = dict(assignments.items() if isinstance(assignments, Mapping) else assignments)
        object.__setattr__(
            self,
            "assignments",
            MappingProxyType({pid: Fraction(z) for pid, z in sorted(data.items())}),
        )

    @property
    def labeled(self) -> tuple[int, ...]:
        return tuple(self.assignments)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Labeling) and dict(self.assignments) == dict(other.assignments)

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.assignments.items())))


EMPTY_LABELING = Labeling({})


def validate_labeling(instance: LabelInstance, labeling: Labeling) -> list[str]:
    """Empty list iff every label sits in its anchor window and no two labels
    of y-overlapping points overlap (touching allowed)."""
    violations = []
    for pid, z in labeling.assignments.items():
        p = instance.point(pid)
        if z < p.x - p.length:
            violations.append(f"point {pid}: z < p_x - l(p)")
        if z > p.x:
            violations.append(f"point {pid}: z > p_x")
    ids = list(labeling.assignments)
    for a_idx, pid in enumerate(ids):
        p = instance.point(pid)
        zp = labeling.assignments[pid]
        for qid in ids[a_idx + 1 :]:
            q = instance.point(qid)
            if not y_overlap(p, q):
                continue
            zq = labeling.assignments[qid]
            if not (zp + p.length <= zq or zq + q.length <= zp):
                violations.append(f"points {pid},{qid}: labels overlap")
    return violations


def weight_of(instance: LabelInstance, labeling: Labeling) -> Fraction:
    return sum(
        (instance.point(pid).weight for pid in labeling.assignments), Fraction(0)
    )


@dataclass(frozen=True)
class MultiPosInstance:
    """Finite candidate sets of left-edge positions, one per point."""

    base: LabelInstance
    positions: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def shared(cls, base: LabelInstance, values: Iterable[Fraction]) -> "MultiPosInstance":
        shared_tuple = tuple(sorted({Fraction(v) for v in values}))
        return cls(base=base, positions=tuple(shared_tuple for _ in base.points))

    @classmethod
    def per_point(
        cls, base: LabelInstance, position_sets: Sequence[Iterable[Fraction]]
    ) -> "MultiPosInstance":
        if len(position_sets) != base.size:
            raise InputError(
                f"expected {base.size} position sets, got {len(position_sets)}"
            )
        return cls(
            base=base,
            positions=tuple(
                tuple(sorted({Fraction(v) for v in vals})) for vals in position_sets
            ),
        )


def validate_multipos(inst: MultiPosInstance, labeling: Labeling) -> list[str]:
    violations = validate_labeling(inst.base, labeling)
    for pid, z in labeling.assignments.items():
        inst.base.point(pid)
        if z not in inst.positions[pid]:
            violations.append(f"point {pid}: position not in its candidate set")
    return violations


@dataclass(frozen=True)
class Anchor:
    """A boundary point of the label, at ``offset`` along ``edge``.

    Bottom/top offsets run left to right in [0, length]; left/right offsets
    run bottom to top in [0, 1].
    """

    edge: str
    offset: Fraction


@dataclass(frozen=True)
class Rect:
    x0: Fraction
    x1: Fraction
    y0: Fraction
    y1: Fraction


def open_overlap(a: Rect, b: Rect) -> bool:
    return (
        max(a.x0, b.x0) < min(a.x1, b.x1) and max(a.y0, b.y0) < min(a.y1, b.y1)
    )


def anchor_rect(point: LabelPoint, anchor: Anchor) -> Rect:
    """Unit-height rectangle of the point's length, placed so the anchor
    coincides with the point."""
    length = point.length
    beta = Fraction(anchor.offset)
    if anchor.edge in ("bottom", "top"):
        if not 0 <= beta <= length:
            raise InputError(
                f"anchor offset {beta} not on the boundary (length {length})"
            )
        x0 = point.x - beta
        y0 = point.y if anchor.edge == "bottom" else point.y - 1
    elif anchor.edge in ("left", "right"):
        if not 0 <= beta <= 1:
            raise InputError(f"anchor offset {beta} not on the boundary (height 1)")
        x0 = point.x if anchor.edge == "left" else point.x - length
        y0 = point.y - beta
    else:
        raise InputError(f"unknown anchor edge {anchor.edge!r}")
    return Rect(x0=x0, x1=x0 + length, y0=y0, y1=y0 + 1)


@dataclass(frozen=True)
class AnchorLabelInstance:
    """Finite anchor sets on the label boundary, one per point."""

    base: LabelInstance
    anchors: tuple[tuple[Anchor, ...], ...]

    def __post_init__(self) -> None:
        if len(self.anchors) != self.base.size:
            raise InputError(
                f"expected {self.base.size} anchor sets, got {len(self.anchors)}"
            )
        for point, anchor_set in zip(self.base.points, self.anchors):
            for anchor in anchor_set:
                anchor_rect(point, anchor)  # validates the offset range

    def rect(self, pid: int, anchor: Anchor) -> Rect:
        point = self.base.point(pid)
        if anchor not in self.anchors[pid]:
            raise InputError(f"point {pid}: anchor {anchor} not in its anchor set")
        return anchor_rect(point, anchor)


def anchor_rectangles(
    inst: AnchorLabelInstance, pid: int, anchor: Anchor
) -> Rect:
    return inst.rect(pid, anchor)


@dataclass(frozen=True)
class AnchorLabeling:
    """Partial assignment id -> chosen anchor."""

    assignments: Mapping[int, Anchor]

    def __init__(self, assignments: Mapping[int, Anchor] | Iterable[tuple[int, Anchor]]):
        data = dict(assignments.items() if isinstance(assignments, Mapping) else assignments)
        object.__setattr__(
            self, "assignments", MappingProxyType(dict(sorted(data.items())))
        )

    @property
    def labeled(self) -> tuple[int, ...]:
        return tuple(self.assignments)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AnchorLabeling) and dict(self.assignments) == dict(
            other.assignments
        )

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.assignments.items())))


EMPTY_ANCHOR_LABELING = AnchorLabeling({})


def validate_anchor_labeling(
    inst: AnchorLabelInstance, labeling: AnchorLabeling
) -> list[str]:
    violations = []
    rects = {}
    for pid, anchor in labeling.assignments.items():
        inst.base.point(pid)
        if anchor not in inst.anchors[pid]:
            violations.append(f"point {pid}: anchor not in its anchor set")
            continue
        rects[pid] = inst.rect(pid, anchor)
    ids = sorted(rects)
    for a_idx, pid in enumerate(ids):
        for qid in ids[a_idx + 1 :]:
            if open_overlap(rects[pid], rects[qid]):
                violations.append(f"points {pid},{qid}: labels overlap")
    return violations


def anchor_weight(inst: AnchorLabelInstance, labeling: AnchorLabeling) -> Fraction:
    return sum(
        (inst.base.point(pid).weight for pid in labeling.assignments), Fraction(0)
    )
