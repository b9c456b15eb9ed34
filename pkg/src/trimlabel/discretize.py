"""Discretizing sliding labels: stopping values, dependency graphs,
candidate positions, and left-push normalization.

A feasible labeling induces a directed geometric graph: an edge (p, q) means
the label of q, pushed left, can bump into the label of p before crossing a
stopping value.  These graphs are acyclic, have in- and out-degree at most 2,
and their straight-line drawings are crossing-free; ``check_structure``
verifies all of that.  Normalization pushes each label left onto either a
stopping value or the right edge of a predecessor's label, so every resulting
position is a stopping value plus a short sum of label lengths, which is what
``candidate_positions`` enumerates.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BudgetExceeded, InputError
from .graphs import WeightedGraph
from .labeling import (
    LabelInstance,
    LabelPoint,
    Labeling,
    validate_labeling,
    y_overlap,
)
from .planar import PlanarEmbedding, embed_from_coordinates

DEFAULT_CANDIDATE_CAP = 200_000


@dataclass(frozen=True)
class StoppingSet:
    """Sorted stopping values: the user-supplied ones plus, for every point,
    its leftmost and rightmost anchor positions p_x - l(p) and p_x."""

    values: tuple[Fraction, ...]
    user_values: frozenset[Fraction]
    point_values: frozenset[Fraction]

    def floor(self, x: Fraction) -> Fraction | None:
        idx = bisect_right(self.values, x)
        return self.values[idx - 1] if idx else None


def stopping_set(instance: LabelInstance, user: Iterable[Fraction] = ()) -> StoppingSet:
    user_values = frozenset(Fraction(v) for v in user)
    point_values = frozenset(
        value for p in instance.points for value in (p.x - p.length, p.x)
    )
    return StoppingSet(
        values=tuple(sorted(user_values | point_values)),
        user_values=user_values,
        point_values=point_values,
    )


def rank_in(values: Sequence[Fraction], x: Fraction) -> int:
    """Number of elements of the sorted sequence that are <= x."""
    return bisect_right(list(values), Fraction(x))


@dataclass(frozen=True)
class DependencyGraph:
    """Directed geometric graph over the labeled points of one labeling.

    Point-to-point edges go left to right and carry the source label's
    length.  The implicit origin vertex contributes, for every stopping value
    x and every point, an edge of length x; those lengths are carried by
    ``stopping``.
    """

    points: tuple[LabelPoint, ...]  # the labeled points, ascending id
    edges: tuple[tuple[int, int], ...]  # ids, always increasing in x
    lengths: tuple[Fraction, ...]  # parallel to edges; length of the source label
    stopping: StoppingSet

    def __post_init__(self) -> None:
        x_of = {p.id: p.x for p in self.points}
        assert all(x_of[p] < x_of[q] for p, q in self.edges), "edges must increase x"

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(p.id for p in self.points)

    def successors(self, pid: int) -> tuple[int, ...]:
        return tuple(q for p, q in self.edges if p == pid)

    def as_weighted_graph(self) -> tuple[WeightedGraph, tuple[int, ...]]:
        """Undirected projection with point weights, for the trimming pipeline."""
        ids = self.ids
        index = {pid: i for i, pid in enumerate(ids)}
        edges = [(index[p], index[q]) for p, q in self.edges]
        weights = [p.weight for p in self.points]
        return WeightedGraph.build(len(ids), edges, weights), ids

    def straight_line_embedding(self) -> PlanarEmbedding:
        graph, ids = self.as_weighted_graph()
        coords = {i: (p.x, p.y) for i, p in enumerate(self.points)}
        return embed_from_coordinates(graph, coords)


def dependency_graph(
    instance: LabelInstance, labeling: Labeling, stopping: StoppingSet
) -> DependencyGraph:
    """Edges (p, q) for labeled y-overlapping pairs with p_x < q_x whose gap
    [z(p)+l(p), z(q)] contains no stopping value."""
    violations = validate_labeling(instance, labeling)
    if violations:
        raise InputError("labeling is infeasible: " + "; ".join(violations))
    points = tuple(instance.point(pid) for pid in labeling.labeled)
    edges = []
    lengths = []
    for p in points:
        zp = labeling.assignments[p.id]
        for q in points:
            if p.id == q.id or not (p.x < q.x) or not y_overlap(p, q):
                continue
            zq = labeling.assignments[q.id]
            lo = zp + p.length
            idx = bisect_right(stopping.values, zq)
            blocked = idx > 0 and stopping.values[idx - 1] >= lo
            if not blocked:
                edges.append((p.id, q.id))
                lengths.append(p.length)
    order = sorted(range(len(edges)), key=lambda i: edges[i])
    return DependencyGraph(
        points=points,
        edges=tuple(edges[i] for i in order),
        lengths=tuple(lengths[i] for i in order),
        stopping=stopping,
    )


@dataclass(frozen=True)
class StructureReport:
    max_in_degree: int
    max_out_degree: int
    degree_violations: tuple[int, ...]
    triangle_violations: tuple[tuple[int, int, int], ...]  # (p, q, witness)
    crossing_pairs: tuple[tuple[tuple[int, int], tuple[int, int]], ...]

    @property
    def ok(self) -> bool:
        return not (
            self.degree_violations or self.triangle_violations or self.crossing_pairs
        )


def _orient(a, b, c) -> int:
    value = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (value > 0) - (value < 0)


def _on_segment(a, b, c) -> bool:
    # c collinear with a-b assumed; is c within the closed box?
    return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(
        a[1], b[1]
    )


def segments_intersect(a, b, c, d) -> bool:
    """Closed straight segments ab and cd share a point (exact arithmetic)."""
    d1 = _orient(c, d, a)
    d2 = _orient(c, d, b)
    d3 = _orient(a, b, c)
    d4 = _orient(a, b, d)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and (
        (d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)
    ):
        return True
    if d1 == 0 and _on_segment(c, d, a):
        return True
    if d2 == 0 and _on_segment(c, d, b):
        return True
    if d3 == 0 and _on_segment(a, b, c):
        return True
    if d4 == 0 and _on_segment(a, b, d):
        return True
    return False


def check_structure(graph: DependencyGraph) -> StructureReport:
    """Degree bounds, the triangle property, and segment crossings.

    Graphs built by :func:`dependency_graph` from feasible labelings always
    come back clean; the detectors exist so that claim can be tested.
    """
    point_of = {p.id: p for p in graph.points}
    in_deg: dict[int, int] = {p.id: 0 for p in graph.points}
    out_deg: dict[int, int] = {p.id: 0 for p in graph.points}
    for p, q in graph.edges:
        out_deg[p] += 1
        in_deg[q] += 1
    degree_violations = tuple(
        sorted(pid for pid in in_deg if in_deg[pid] >= 3 or out_deg[pid] >= 3)
    )

    triangle = []
    for p_id, q_id in graph.edges:
        p, q = point_of[p_id], point_of[q_id]
        for c in graph.points:
            if c.id in (p_id, q_id):
                continue
            if not (y_overlap(c, p) and y_overlap(c, q)):
                continue
            if p.x <= c.x <= q.x:
                triangle.append((p_id, q_id, c.id))

    crossings = []
    for i, (p1, q1) in enumerate(graph.edges):
        seg1 = (
            (point_of[p1].x, point_of[p1].y),
            (point_of[q1].x, point_of[q1].y),
        )
        for p2, q2 in graph.edges[i + 1 :]:
            if len({p1, q1, p2, q2}) != 4:
                continue
            seg2 = (
                (point_of[p2].x, point_of[p2].y),
                (point_of[q2].x, point_of[q2].y),
            )
            if segments_intersect(seg1[0], seg1[1], seg2[0], seg2[1]):
                crossings.append(((p1, q1), (p2, q2)))

    return StructureReport(
        max_in_degree=max(in_deg.values(), default=0),
        max_out_degree=max(out_deg.values(), default=0),
        degree_violations=degree_violations,
        triangle_violations=tuple(triangle),
        crossing_pairs=tuple(crossings),
    )


def longest_dependency_path(
    graph: DependencyGraph, kept: Iterable[int] | None = None
) -> int:
    """Longest directed path (edge count), optionally restricted to ``kept``.

    Edges increase in x, so a pass over the points in x-order is topological.
    """
    ids = set(graph.ids) if kept is None else set(kept) & set(graph.ids)
    incoming: dict[int, list[int]] = {pid: [] for pid in ids}
    for p, q in graph.edges:
        if p in ids and q in ids:
            incoming[q].append(p)
    longest: dict[int, int] = {}
    for point in sorted(graph.points, key=lambda pt: (pt.x, pt.id)):
        if point.id not in ids:
            continue
        longest[point.id] = max(
            (longest[p] + 1 for p in incoming[point.id]), default=0
        )
    return max(longest.values(), default=0)


@dataclass(frozen=True)
class CandidateSet:
    """All sums of one stopping value and at most g label lengths."""

    values: tuple[Fraction, ...]
    g: int
    stopping_size: int
    size_bound: int


def candidate_positions(
    instance: LabelInstance,
    user: Iterable[Fraction] = (),
    g: int = 0,
    *,
    max_size: int = DEFAULT_CANDIDATE_CAP,
) -> CandidateSet:
    """Enumerate the candidate position set for ``g`` chained labels.

    Length sums allow repetition, since distinct points may share a length.
    Refuses with :class:`BudgetExceeded` once the running size projection
    exceeds ``max_size``; the set grows like (n+1)^g.
    """
    if not isinstance(g, int) or g < 0:
        raise InputError(f"g must be a nonnegative integer, got {g!r}")
    stopping = stopping_set(instance, user)
    lengths = sorted({p.length for p in instance.points})
    sums = {Fraction(0)}
    frontier = {Fraction(0)}
    for _ in range(g):
        frontier = {s + length for s in frontier for length in lengths} - sums
        if not frontier:
            break
        sums |= frontier
        if len(sums) * max(len(stopping.values), 1) > max_size:
            raise BudgetExceeded(
                f"candidate set would exceed {max_size} values "
                f"(|S'|={len(stopping.values)}, partial sums={len(sums)}, g={g})"
            )
    values = sorted({x + s for x in stopping.values for s in sums})
    if len(values) > max_size:
        raise BudgetExceeded(f"candidate set has {len(values)} > {max_size} values")
    bound = (2 * instance.size + len(stopping.user_values)) * (instance.size + 1) ** g
    return CandidateSet(
        values=tuple(values),
        g=g,
        stopping_size=len(stopping.values),
        size_bound=bound,
    )


def normalize(
    instance: LabelInstance,
    labeling: Labeling,
    user: Iterable[Fraction] = (),
    removed: Iterable[int] = (),
) -> Labeling:
    """Left-push the labels outside ``removed``, never crossing a stopping
    value that the original position had not crossed.

    Points are processed by increasing original position (ties by id); each
    new position is the larger of the stopping-value floor and the right
    edges of already-pushed predecessor labels along dependency edges.  The
    result is feasible, pointwise at most the original, preserves each
    position's rank among the user stopping values, and is a fixpoint.
    """
    removed = frozenset(removed)
    labeled = set(labeling.labeled)
    if not removed <= labeled:
        raise InputError("removed set contains unlabeled ids")
    stopping = stopping_set(instance, user)
    graph = dependency_graph(instance, labeling, stopping)
    kept = [pid for pid in labeling.labeled if pid not in removed]
    predecessors: dict[int, list[tuple[int, Fraction]]] = {pid: [] for pid in kept}
    for (p, q), length in zip(graph.edges, graph.lengths):
        if p in predecessors and q in predecessors:
            predecessors[q].append((p, length))

    new_positions: dict[int, Fraction] = {}
    for pid in sorted(kept, key=lambda pid: (labeling.assignments[pid], pid)):
        z = labeling.assignments[pid]
        best = stopping.floor(z)
        assert best is not None, "p_x - l(p) is always a stopping value <= z"
        for p, length in predecessors[pid]:
            pushed = new_positions[p] + length
            if pushed > best:
                best = pushed
        new_positions[pid] = best
    return Labeling(new_positions)
