"""Seeded random generators for the invariant suites and benchmarks.

Everything is driven by a caller-supplied ``random.Random`` so that suites
are reproducible; values are small exact rationals chosen to make labels
interact (and frequently touch exactly, which is where closed-versus-open
comparison bugs show up).
"""

from __future__ import annotations

from fractions import Fraction
from random import Random

from .graphs import TreeDecomposition, WeightedGraph
from .labeling import Anchor, AnchorLabelInstance, LabelInstance, Labeling, MultiPosInstance

LENGTH_POOL = (Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2))
WEIGHT_POOL = (Fraction(1), Fraction(2), Fraction(3), Fraction(5), Fraction(1, 2))


def random_fraction(rng: Random, lo: int, hi: int, denominators=(1, 2, 4)) -> Fraction:
    den = rng.choice(denominators)
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_weighted_graph(
    rng: Random, max_n: int, *, edge_factor: float = 1.5, unit_weights: bool = False
) -> WeightedGraph:
    n = rng.randint(0, max_n)
    possible = [(i, j) for i in range(n) for j in range(i + 1, n)]
    rng.shuffle(possible)
    m = min(len(possible), int(edge_factor * n))
    edges = possible[: rng.randint(0, m)] if possible else []
    weights = [Fraction(1) if unit_weights else rng.choice(WEIGHT_POOL) for _ in range(n)]
    return WeightedGraph.build(n, edges, weights)


def random_decomposed_graph(
    rng: Random, max_vertices: int, max_nodes: int = 7, max_bag: int = 4
) -> tuple[WeightedGraph, TreeDecomposition]:
    """A random valid (graph, tree decomposition) pair.

    Builds a random tree of bags, assigns each vertex a random connected
    subtree of occurrence nodes, and keeps a random subset of the in-bag
    vertex pairs as edges; validity holds by construction.
    """
    n = rng.randint(1, max_vertices)
    m = rng.randint(1, max_nodes)
    tree_edges = [(rng.randrange(node), node) for node in range(1, m)]
    node_adj: list[list[int]] = [[] for _ in range(m)]
    for a, b in tree_edges:
        node_adj[a].append(b)
        node_adj[b].append(a)

    bags: list[set[int]] = [set() for _ in range(m)]
    for v in range(n):
        start = rng.randrange(m)
        subtree = {start}
        frontier = [start]
        steps = rng.randint(0, 3)
        for _ in range(steps):
            grow = [
                (x, y) for x in frontier for y in node_adj[x] if y not in subtree
            ]
            if not grow:
                break
            x, y = rng.choice(grow)
            if len(bags[y]) >= max_bag:
                continue
            subtree.add(y)
            frontier.append(y)
        for node in subtree:
            bags[node].add(v)

    candidates = sorted(
        {
            (min(u, v), max(u, v))
            for bag in bags
            for u in bag
            for v in bag
            if u != v
        }
    )
    rng.shuffle(candidates)
    cap = int(1.6 * n) + 1
    edges = candidates[: rng.randint(0, min(len(candidates), cap))]
    weights = [rng.choice(WEIGHT_POOL) for _ in range(n)]
    graph = WeightedGraph.build(n, edges, weights)
    decomposition = TreeDecomposition.build(bags, tree_edges, root=rng.randrange(m))
    return graph, decomposition


def random_label_instance(
    rng: Random, max_points: int, *, min_points: int = 0, spread: int | None = None
) -> LabelInstance:
    n = rng.randint(min_points, max_points)
    if spread is None:
        spread = max(2, n)
    rows = []
    seen = set()
    while len(rows) < n:
        x = random_fraction(rng, 0, spread)
        y = random_fraction(rng, 0, 3, denominators=(1, 2))
        if (x, y) in seen:
            continue
        seen.add((x, y))
        rows.append((x, y, rng.choice(LENGTH_POOL), rng.choice(WEIGHT_POOL)))
    return LabelInstance.build(rows)


def random_feasible_labeling(
    rng: Random, instance: LabelInstance, *, touch_probability: float = 0.5
) -> Labeling:
    """Random feasible labeling: a random subset placed greedily in random
    order, each label pushed left with random leftover slack (often zero, so
    exact touching is common)."""
    ids = [p.id for p in instance.points if rng.random() < 0.8]
    rng.shuffle(ids)
    placed: dict[int, Fraction] = {}
    for pid in ids:
        p = instance.point(pid)
        lo = p.x - p.length
        for qid, zq in placed.items():
            q = instance.point(qid)
            if abs(p.y - q.y) < 1 and zq + q.length > lo:
                lo = zq + q.length
        if lo > p.x:
            continue  # no room in this order; drop the point
        if rng.random() < touch_probability:
            z = lo
        else:
            numerator = rng.randint(0, 4)
            z = lo + (p.x - lo) * Fraction(numerator, 4)
        placed[pid] = z
    return Labeling(placed)


def random_multipos_instance(
    rng: Random, max_points: int, max_positions: int = 5
) -> MultiPosInstance:
    base = random_label_instance(rng, max_points)
    position_sets = []
    for p in base.points:
        count = rng.randint(1, max_positions)
        values = {
            p.x - p.length * Fraction(rng.randint(0, 4), 4) for _ in range(count)
        }
        position_sets.append(values)
    return MultiPosInstance.per_point(base, position_sets)


def random_anchor_instance(
    rng: Random, max_points: int, max_anchors: int = 4
) -> AnchorLabelInstance:
    base = random_label_instance(rng, max_points)
    anchor_sets = []
    for p in base.points:
        anchors = set()
        for _ in range(rng.randint(1, max_anchors)):
            edge = rng.choice(("bottom", "top", "left", "right"))
            if edge in ("bottom", "top"):
                offset = p.length * Fraction(rng.randint(0, 4), 4)
            else:
                offset = Fraction(rng.randint(0, 4), 4)
            anchors.add(Anchor(edge=edge, offset=offset))
        anchor_sets.append(sorted(anchors, key=lambda a: (a.edge, a.offset)))
    return AnchorLabelInstance(base=base, anchors=tuple(anchor_sets))


def random_grid_subgraph(
    rng: Random, max_side: int = 4
) -> tuple[WeightedGraph, dict[int, tuple[Fraction, Fraction]]]:
    """Random subgraph of a grid with its straight-line coordinates."""
    rows = rng.randint(1, max_side)
    cols = rng.randint(1, max_side)
    n = rows * cols
    coords = {
        r * cols + c: (Fraction(c), Fraction(r)) for r in range(rows) for c in range(cols)
    }
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols and rng.random() < 0.85:
                edges.append((v, v + 1))
            if r + 1 < rows and rng.random() < 0.85:
                edges.append((v, v + cols))
    weights = [rng.choice(WEIGHT_POOL) for _ in range(n)]
    return WeightedGraph.build(n, edges, weights), coords
