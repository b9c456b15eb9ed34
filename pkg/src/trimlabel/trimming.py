"""Trimming: delete vertices of small total weight so that no long simple
path survives.

``level_trimming`` removes one depth-residue class of bags from a rooted tree
decomposition; the bound calculators give the guaranteed path-length caps for
decompositions of measured width/elongation, for bounded treewidth plus
degree, and for planar graphs via layer peeling (``planar_trimming``).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BudgetExceeded, InputError
from .exact import format_exact
from .graphs import (
    TreeDecomposition,
    WeightedGraph,
    build_tree_decomposition,
    elongation,
    longest_simple_path,
    validate_tree_decomposition,
    width,
)
from .planar import PlanarEmbedding, planar_layers


def _check_nonneg_int(name: str, value: int) -> int:
    if not isinstance(value, int) or value < 0:
        raise InputError(f"{name} must be a nonnegative integer, got {value!r}")
    return value


def g_bound(k: int, s: int, t: int) -> tuple[int, int]:
    """Branching factor ``a`` and path-length cap ``g`` for a decomposition
    of width ``k`` and elongation ``s`` trimmed with parameter ``t``."""
    _check_nonneg_int("k", k)
    _check_nonneg_int("s", s)
    if not isinstance(t, int) or t < 2:
        raise InputError(f"t must be an integer >= 2, got {t!r}")
    a = k + 1 if s >= 2 else (k + 1) // 2
    if a <= 1:
        g = (2 * (s + 1) * t - 3) * (k + 1)
    else:
        numerator = (a ** ((s + 1) * t - 2) * (a + 1) - 2) * (k + 1)
        assert numerator % (a - 1) == 0, "geometric sum is always divisible by a-1"
        g = numerator // (a - 1)
    return a, g


@dataclass(frozen=True)
class TrimParams:
    """Parameters of a level trimming; ``g`` always matches the formula."""

    t: int
    k: int
    s: int
    a: int
    g: int

    def __post_init__(self) -> None:
        a, g = g_bound(self.k, self.s, self.t)
        if (a, g) != (self.a, self.g):
            raise InputError(
                f"inconsistent trim parameters: expected a={a}, g={g}, "
                f"got a={self.a}, g={self.g}"
            )

    @classmethod
    def compute(cls, k: int, s: int, t: int) -> "TrimParams":
        a, g = g_bound(k, s, t)
        return cls(t=t, k=k, s=s, a=a, g=g)


def _depths(decomposition: TreeDecomposition) -> list[int]:
    depth = [-1] * decomposition.node_count
    if decomposition.node_count == 0:
        return depth
    depth[decomposition.root] = 0
    queue = deque([decomposition.root])
    while queue:
        x = queue.popleft()
        for y in decomposition.node_adjacency[x]:
            if depth[y] < 0:
                depth[y] = depth[x] + 1
                queue.append(y)
    return depth


def level_trimming(
    graph: WeightedGraph, decomposition: TreeDecomposition, t: int
) -> tuple[frozenset[int], TrimParams]:
    """Delete the lightest depth-residue class of bags.

    Among the residues i of depth mod (s+1)t, returns the union of bags whose
    depth is congruent to the weight-minimal i (ties to the smallest i).  The
    returned set weighs at most W/t and meets every simple path of more than
    g edges, with g from :func:`g_bound` at the measured width and elongation.
    """
    violations = validate_tree_decomposition(graph, decomposition)
    if violations:
        raise InputError(
            "invalid tree decomposition: " + "; ".join(violations)
        )
    params = TrimParams.compute(width(decomposition), elongation(decomposition), t)
    period = (params.s + 1) * t

    depth = _depths(decomposition)
    residue_of_vertex: list[set[int]] = [set() for _ in range(graph.n)]
    for node, bag in enumerate(decomposition.bags):
        for v in bag:
            residue_of_vertex[v].add(depth[node] % period)

    class_weight = [Fraction(0)] * period
    class_members: list[set[int]] = [set() for _ in range(period)]
    for v in range(graph.n):
        for r in residue_of_vertex[v]:
            class_weight[r] += graph.weights[v]
            class_members[r].add(v)

    total = graph.total_weight
    # Each vertex occurs on at most s+1 consecutive levels, hence in at most
    # s+1 residue classes; the lightest class therefore weighs at most W/t.
    assert sum(class_weight, Fraction(0)) <= (params.s + 1) * total
    best = min(range(period), key=lambda r: (class_weight[r], r))
    assert class_weight[best] * t <= total
    return frozenset(class_members[best]), params


def is_trimming(
    graph: WeightedGraph,
    removed: Iterable[int],
    t: int,
    g: int,
    *,
    budget: int | None = None,
) -> bool:
    """Exact check: weight(removed) <= W/t and no surviving simple path has
    more than g edges.  Brute force; guarded by the path-search budget."""
    removed = frozenset(removed)
    for v in removed:
        if not 0 <= v < graph.n:
            raise InputError(f"vertex {v} out of range")
    if not isinstance(t, int) or t < 1:
        raise InputError(f"t must be a positive integer, got {t!r}")
    if graph.weight_of(removed) * t > graph.total_weight:
        return False
    remaining, _ = graph.minus(removed)
    kwargs = {} if budget is None else {"budget": budget}
    return longest_simple_path(remaining, **kwargs) <= g


def twdeg_g_bound(k: int, d: int, t: int) -> tuple[int, int]:
    """Cap for treewidth k and maximum degree d: K = (9k+7)d(d+1)-1 and
    g = ceil(K/2)^(2t)."""
    _check_nonneg_int("k", k)
    if not isinstance(d, int) or d < 1:
        raise InputError(f"d must be an integer >= 1, got {d!r}")
    if not isinstance(t, int) or t < 2:
        raise InputError(f"t must be an integer >= 2, got {t!r}")
    cap = (9 * k + 7) * d * (d + 1) - 1
    return cap, ((cap + 1) // 2) ** (2 * t)


def planar_g_bound(d: int, t: int) -> tuple[int, int]:
    """Cap for planar graphs of maximum degree d: K = (54t-29)d(d+1)-1 and
    g = ceil(K/2)^(4t)."""
    if not isinstance(d, int) or d < 1:
        raise InputError(f"d must be an integer >= 1, got {d!r}")
    if not isinstance(t, int) or t < 1:
        raise InputError(f"t must be an integer >= 1, got {t!r}")
    cap = (54 * t - 29) * d * (d + 1) - 1
    return cap, ((cap + 1) // 2) ** (4 * t)


def remark_bound(d: int, t: int, alpha: Fraction) -> tuple[int, int]:
    """Tunable planar cap: K = (27*alpha*t-29)d(d+1)-1 with exponent
    2*ceil(alpha*t/(alpha-1)), for rational alpha > 2 making K integral."""
    if not isinstance(d, int) or d < 1:
        raise InputError(f"d must be an integer >= 1, got {d!r}")
    if not isinstance(t, int) or t < 1:
        raise InputError(f"t must be an integer >= 1, got {t!r}")
    alpha = Fraction(alpha)
    if alpha <= 2:
        raise InputError(f"alpha must exceed 2, got {alpha}")
    scaled = 27 * alpha * t
    if scaled.denominator != 1:
        raise InputError(
            f"27*alpha*t = {scaled} is not an integer; K would not be integral"
        )
    cap = (scaled.numerator - 29) * d * (d + 1) - 1
    ratio = alpha * t / (alpha - 1)
    exponent = 2 * -(-ratio.numerator // ratio.denominator)
    return cap, exponent


@dataclass(frozen=True)
class BakerSelection:
    residue: int
    removed: frozenset[int]
    subgraph: WeightedGraph
    kept_vertices: tuple[int, ...]  # subgraph index -> original vertex


def baker_select(
    graph: WeightedGraph, layers: Sequence[Sequence[int]], t: int
) -> BakerSelection:
    """Drop the lightest residue class of layers mod 2t (layers are 1-based).

    Returns the residue j, the removed vertex set Vj of weight at most
    W/(2t), and the induced subgraph on the rest.
    """
    if not isinstance(t, int) or t < 1:
        raise InputError(f"t must be an integer >= 1, got {t!r}")
    flat = [v for layer in layers for v in layer]
    if sorted(flat) != list(range(graph.n)):
        raise InputError("layers do not partition the vertex set")
    period = 2 * t
    class_weight = [Fraction(0)] * period
    class_members: list[set[int]] = [set() for _ in range(period)]
    for index, layer in enumerate(layers, start=1):
        r = index % period
        for v in layer:
            class_weight[r] += graph.weights[v]
            class_members[r].add(v)
    best = min(range(period), key=lambda r: (class_weight[r], r))
    assert class_weight[best] * period <= graph.total_weight
    removed = frozenset(class_members[best])
    subgraph, kept = graph.minus(removed)
    return BakerSelection(
        residue=best, removed=removed, subgraph=subgraph, kept_vertices=kept
    )


@dataclass(frozen=True)
class TrimReport:
    total_weight: Fraction
    t: int
    k: int
    s: int
    g: int
    removed_count: int
    removed_weight: Fraction

    def render(self) -> str:
        lines = [
            "trim-report",
            f"W {format_exact(self.total_weight)}",
            f"t {self.t}",
            f"k {self.k}",
            f"s {self.s}",
            f"g {self.g}",
            f"|U| {self.removed_count}",
            f"weight(U) {format_exact(self.removed_weight)}",
        ]
        return "\n".join(lines)


def planar_trimming(
    graph: WeightedGraph,
    emb: PlanarEmbedding,
    t: int,
    decomposition_mode: str = "auto",
) -> tuple[frozenset[int], TrimReport]:
    """Layer peeling, lightest layer-residue deletion, then level trimming of
    the leftover graph with parameter 2t.  The union weighs at most W/t."""
    if not isinstance(t, int) or t < 1:
        raise InputError(f"t must be an integer >= 1, got {t!r}")
    layers = planar_layers(graph, emb)
    selection = baker_select(graph, layers, t)
    sub = selection.subgraph
    if decomposition_mode == "auto":
        decomposition_mode = "exact-tiny" if sub.n <= 12 else "min-fill-heuristic"
    decomposition = build_tree_decomposition(sub, decomposition_mode)
    inner_removed, params = level_trimming(sub, decomposition, 2 * t)
    removed = frozenset(selection.removed) | {
        selection.kept_vertices[v] for v in inner_removed
    }
    assert graph.weight_of(removed) * t <= graph.total_weight
    report = TrimReport(
        total_weight=graph.total_weight,
        t=t,
        k=params.k,
        s=params.s,
        g=params.g,
        removed_count=len(removed),
        removed_weight=graph.weight_of(removed),
    )
    return removed, report
