"""Vertex-weighted graphs and tree decompositions, with brute-force path
oracles and decomposition builders.

All weights are exact rationals.  The path oracles are intended for desk
scale (guarded); they back every guarantee check in the test suites.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import BudgetExceeded, InputError

DEFAULT_PATH_BUDGET = 5_000_000


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph with nonnegative rational vertex weights."""

    weights: tuple[Fraction, ...]
    edges: frozenset[tuple[int, int]]

    @classmethod
    def build(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]] = (),
        weights: Sequence[Fraction | int] | None = None,
    ) -> "WeightedGraph":
        if weights is None:
            ws = tuple(Fraction(1) for _ in range(n))
        else:
            if len(weights) != n:
                raise InputError(f"expected {n} weights, got {len(weights)}")
            ws = tuple(Fraction(w) for w in weights)
        for i, w in enumerate(ws):
            if w < 0:
                raise InputError(f"vertex {i} has negative weight {w}")
        norm = set()
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise InputError(f"edge ({i},{j}) out of range for {n} vertices")
            if i == j:
                raise InputError(f"self-loop at vertex {i}")
            norm.add((min(i, j), max(i, j)))
        return cls(weights=ws, edges=frozenset(norm))

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def total_weight(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in sorted(self.edges):
            adj[i].append(j)
            adj[j].append(i)
        return tuple(tuple(sorted(a)) for a in adj)

    def weight_of(self, vertices: Iterable[int]) -> Fraction:
        return sum((self.weights[v] for v in set(vertices)), Fraction(0))

    def induced(self, keep: Iterable[int]) -> tuple["WeightedGraph", tuple[int, ...]]:
        """Induced subgraph on ``keep``; returns it with the old-id lookup."""
        old = tuple(sorted(set(keep)))
        for v in old:
            if not 0 <= v < self.n:
                raise InputError(f"vertex {v} out of range")
        new_of = {v: i for i, v in enumerate(old)}
        edges = [
            (new_of[i], new_of[j]) for i, j in self.edges if i in new_of and j in new_of
        ]
        sub = WeightedGraph.build(len(old), edges, [self.weights[v] for v in old])
        return sub, old

    def minus(self, removed: Iterable[int]) -> tuple["WeightedGraph", tuple[int, ...]]:
        gone = set(removed)
        return self.induced(v for v in range(self.n) if v not in gone)


def connected_components(graph: WeightedGraph) -> list[tuple[int, ...]]:
    seen = [False] * graph.n
    comps = []
    for start in range(graph.n):
        if seen[start]:
            continue
        comp = []
        queue = deque([start])
        seen[start] = True
        while queue:
            v = queue.popleft()
            comp.append(v)
            for w in graph.adjacency[v]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
        comps.append(tuple(sorted(comp)))
    return comps


@dataclass(frozen=True)
class TreeDecomposition:
    """Tree of bags over a graph's vertices, rooted for level arguments."""

    bags: tuple[frozenset[int], ...]
    tree_edges: frozenset[tuple[int, int]]
    root: int = 0

    @classmethod
    def build(
        cls,
        bags: Sequence[Iterable[int]],
        tree_edges: Iterable[tuple[int, int]] = (),
        root: int = 0,
    ) -> "TreeDecomposition":
        frozen = tuple(frozenset(b) for b in bags)
        m = len(frozen)
        norm = set()
        for a, b in tree_edges:
            if not (0 <= a < m and 0 <= b < m):
                raise InputError(f"tree edge ({a},{b}) out of range for {m} nodes")
            if a == b:
                raise InputError(f"tree self-loop at node {a}")
            norm.add((min(a, b), max(a, b)))
        if m > 0 and not 0 <= root < m:
            raise InputError(f"root {root} out of range for {m} nodes")
        return cls(bags=frozen, tree_edges=frozenset(norm), root=root)

    @property
    def node_count(self) -> int:
        return len(self.bags)

    @cached_property
    def node_adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.node_count)]
        for a, b in sorted(self.tree_edges):
            adj[a].append(b)
            adj[b].append(a)
        return tuple(tuple(sorted(a)) for a in adj)


def width(decomposition: TreeDecomposition) -> int:
    """Max bag size minus one; -1 for the empty decomposition."""
    if decomposition.node_count == 0:
        return -1
    return max(len(b) for b in decomposition.bags) - 1


def _tree_distances(decomposition: TreeDecomposition, start: int) -> list[int]:
    dist = [-1] * decomposition.node_count
    dist[start] = 0
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in decomposition.node_adjacency[x]:
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def elongation(decomposition: TreeDecomposition) -> int:
    """Max tree distance between two nodes whose bags intersect."""
    m = decomposition.node_count
    best = 0
    for x in range(m):
        dist = _tree_distances(decomposition, x)
        bag_x = decomposition.bags[x]
        for y in range(x + 1, m):
            if dist[y] > best and bag_x & decomposition.bags[y]:
                best = dist[y]
    return best


def validate_tree_decomposition(
    graph: WeightedGraph, decomposition: TreeDecomposition
) -> list[str]:
    """Empty list iff the decomposition is valid for the graph.

    Semantic failures (uncovered vertex/edge, disconnected occurrences,
    non-tree shape) are reported; out-of-range indices raise instead.
    """
    m = decomposition.node_count
    for node, bag in enumerate(decomposition.bags):
        for v in bag:
            if not 0 <= v < graph.n:
                raise InputError(f"bag {node} mentions vertex {v}, out of range")

    violations: list[str] = []

    if graph.n > 0 and m == 0:
        violations.append("decomposition has no nodes")
    if len(decomposition.tree_edges) != max(m - 1, 0):
        violations.append(
            f"tree has {len(decomposition.tree_edges)} edges, expected {max(m - 1, 0)}"
        )
    if m > 0:
        reach = _tree_distances(decomposition, 0)
        if any(d < 0 for d in reach):
            violations.append("tree is disconnected")
        elif len(decomposition.tree_edges) > m - 1:
            violations.append("tree has a cycle")

    occurrences: list[list[int]] = [[] for _ in range(graph.n)]
    for node, bag in enumerate(decomposition.bags):
        for v in bag:
            occurrences[v].append(node)

    for v in range(graph.n):
        if not occurrences[v]:
            violations.append(f"vertex {v} uncovered")
    for i, j in sorted(graph.edges):
        if not any(i in bag and j in bag for bag in decomposition.bags):
            violations.append(f"edge {{{i},{j}}} uncovered")

    for v in range(graph.n):
        nodes = occurrences[v]
        if len(nodes) <= 1:
            continue
        allowed = set(nodes)
        seen = {nodes[0]}
        queue = deque([nodes[0]])
        while queue:
            x = queue.popleft()
            for y in decomposition.node_adjacency[x]:
                if y in allowed and y not in seen:
                    seen.add(y)
                    queue.append(y)
        if len(seen) != len(allowed):
            violations.append(f"vertex {v} occurrences disconnected")

    return violations


def longest_simple_path(
    graph: WeightedGraph, *, budget: int = DEFAULT_PATH_BUDGET
) -> int:
    """Exact maximum edge count over all simple paths, by exhaustive DFS.

    Stops early once some component's vertex count bounds the answer; refuses
    with :class:`BudgetExceeded` when the enumeration outgrows ``budget``
    extension steps rather than running an unbounded exponential search.
    """
    comps = connected_components(graph)
    if not comps:
        return 0
    upper = max(len(c) for c in comps) - 1
    adj = graph.adjacency
    best = 0
    steps = 0
    on_path = [False] * graph.n

    def extend(v: int, length: int) -> None:
        nonlocal best, steps
        if length > best:
            best = length
        for w in adj[v]:
            if on_path[w] or best >= upper:
                continue
            steps += 1
            if steps > budget:
                raise BudgetExceeded(
                    f"longest-path search exceeded {budget} steps on "
                    f"{graph.n} vertices / {len(graph.edges)} edges"
                )
            on_path[w] = True
            extend(w, length + 1)
            on_path[w] = False

    for start in range(graph.n):
        if best >= upper:
            break
        on_path[start] = True
        extend(start, 0)
        on_path[start] = False
    return best


def longest_simple_path_subsets(graph: WeightedGraph) -> int:
    """Subset-DP cross-check for :func:`longest_simple_path` (desk scale)."""
    n = graph.n
    if n > 20:
        raise BudgetExceeded(f"subset DP refused for {n} > 20 vertices")
    adj_mask = [0] * n
    for i, j in graph.edges:
        adj_mask[i] |= 1 << j
        adj_mask[j] |= 1 << i
    # ends[mask] = bitmask of vertices at which a simple path covering mask ends
    ends: dict[int, int] = {1 << v: 1 << v for v in range(n)}
    frontier = dict(ends)
    best = 0
    while frontier:
        nxt: dict[int, int] = {}
        for mask, end_set in frontier.items():
            remaining = end_set
            while remaining:
                v_bit = remaining & -remaining
                remaining ^= v_bit
                v = v_bit.bit_length() - 1
                grow = adj_mask[v] & ~mask
                while grow:
                    w_bit = grow & -grow
                    grow ^= w_bit
                    new_mask = mask | w_bit
                    nxt[new_mask] = nxt.get(new_mask, 0) | w_bit
        for mask, end_set in nxt.items():
            ends[mask] = ends.get(mask, 0) | end_set
        if nxt:
            best += 1
        frontier = nxt
    return best


def _eliminate(adj: list[set[int]], v: int) -> set[int]:
    """Remove v, clique-fill its neighborhood, return that neighborhood."""
    nb = adj[v]
    for u in nb:
        adj[u].discard(v)
    for u in nb:
        adj[u].update(nb - {u})
    adj[v] = set()
    return nb


def _decomposition_from_order(
    graph: WeightedGraph, order: Sequence[int]
) -> TreeDecomposition:
    adj = [set(a) for a in graph.adjacency]
    position = {v: i for i, v in enumerate(order)}
    bags: list[frozenset[int]] = []
    later_neighbors: list[set[int]] = []
    for v in order:
        nb = _eliminate(adj, v)
        bags.append(frozenset(nb | {v}))
        later_neighbors.append(nb)
    edges = []
    for i, nb in enumerate(later_neighbors):
        if nb:
            parent = min(position[u] for u in nb)
            edges.append((i, parent))
        elif i + 1 < len(order):
            # isolated at elimination time: chain to keep the tree connected
            edges.append((i, i + 1))
    if not bags:
        bags = [frozenset()]
    root = len(bags) - 1
    return TreeDecomposition.build(bags, edges, root=root)


def _min_fill_order(graph: WeightedGraph) -> list[int]:
    adj = [set(a) for a in graph.adjacency]
    alive = set(range(graph.n))
    order = []
    while alive:
        best_v = -1
        best_fill = None
        for v in sorted(alive):
            nb = adj[v]
            fill = 0
            nb_list = sorted(nb)
            for a_i, u in enumerate(nb_list):
                for w in nb_list[a_i + 1 :]:
                    if w not in adj[u]:
                        fill += 1
            if best_fill is None or fill < best_fill:
                best_fill = fill
                best_v = v
        _eliminate(adj, best_v)
        alive.discard(best_v)
        order.append(best_v)
    return order


def _exact_order(graph: WeightedGraph) -> list[int]:
    """Optimal elimination order by DP over vertex subsets."""
    n = graph.n
    if n == 0:
        return []
    adj_mask = [0] * n
    for i, j in graph.edges:
        adj_mask[i] |= 1 << j
        adj_mask[j] |= 1 << i
    full = (1 << n) - 1

    def elim_degree(prior: int, v: int) -> int:
        # Neighborhood of v's connected component within prior | {v}.
        inside = 1 << v
        frontier = 1 << v
        reach = 0
        while frontier:
            u_bit = frontier & -frontier
            frontier ^= u_bit
            u = u_bit.bit_length() - 1
            nb = adj_mask[u]
            reach |= nb & ~prior & ~(1 << v)
            new_inside = nb & prior & ~inside
            inside |= new_inside
            frontier |= new_inside
        return bin(reach).count("1")

    cost = {0: -1}
    choice: dict[int, int] = {}
    masks_by_size: list[list[int]] = [[] for _ in range(n + 1)]
    for mask in range(1, full + 1):
        masks_by_size[bin(mask).count("1")].append(mask)
    for size in range(1, n + 1):
        for mask in masks_by_size[size]:
            best = None
            best_v = -1
            rest = mask
            while rest:
                v_bit = rest & -rest
                rest ^= v_bit
                v = v_bit.bit_length() - 1
                prior = mask ^ v_bit
                value = max(cost[prior], elim_degree(prior, v))
                if best is None or value < best or (value == best and v < best_v):
                    best = value
                    best_v = v
            cost[mask] = best  # type: ignore[assignment]
            choice[mask] = best_v
    order_rev = []
    mask = full
    while mask:
        v = choice[mask]
        order_rev.append(v)
        mask ^= 1 << v
    return order_rev[::-1]


def build_tree_decomposition(
    graph: WeightedGraph, mode: str = "exact-tiny", *, exact_limit: int = 12
) -> TreeDecomposition:
    """Valid tree decomposition: minimum width in ``exact-tiny`` mode
    (guarded), min-fill heuristic otherwise."""
    if mode == "exact-tiny":
        if graph.n > exact_limit:
            raise BudgetExceeded(
                f"exact-tiny decomposition refused for {graph.n} > {exact_limit} vertices"
            )
        order = _exact_order(graph)
    elif mode == "min-fill-heuristic":
        order = _min_fill_order(graph)
    else:
        raise InputError(f"unknown decomposition mode: {mode!r}")
    return _decomposition_from_order(graph, order)
