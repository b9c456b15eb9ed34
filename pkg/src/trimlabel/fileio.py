"""Text formats for graphs, decompositions, instances, labelings and vertex
sets.  All values are exact decimals or fractions; parse/print round-trips
are lossless.

    graph <n>            td <m>               instance <n>
    w <i> <weight>       bag <node> <v...>    pt <x> <y> <length> <weight>
    e <i> <j>            te <a> <b>
                         root <node>

Labeling files hold ``lab <id> <z>`` lines for sliding/multi-position
labelings and ``alab <id> <edge> <offset>`` lines for anchored ones.  Vertex
set files hold ``vset <k>`` then ``v <i>`` lines.  ``#`` starts a comment.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .errors import InputError, ParseError
from .exact import format_exact, parse_exact
from .graphs import TreeDecomposition, WeightedGraph
from .labeling import Anchor, AnchorLabeling, LabelInstance, Labeling

ANCHOR_EDGE_NAMES = ("bottom", "top", "left", "right")


def _content_lines(text: str) -> list[tuple[int, list[str]]]:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line.split()))
    return rows


def _int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer, got {token!r}", lineno) from None


def _rational(token: str, lineno: int) -> Fraction:
    try:
        return parse_exact(token)
    except InputError:
        raise ParseError(f"expected an exact rational, got {token!r}", lineno) from None


def load_graph(text: str) -> WeightedGraph:
    rows = _content_lines(text)
    if not rows or rows[0][1][0] != "graph":
        lineno = rows[0][0] if rows else 1
        raise ParseError("expected a 'graph <n>' header", lineno)
    lineno, header = rows[0]
    if len(header) != 2:
        raise ParseError("expected 'graph <n>'", lineno)
    n = _int(header[1], lineno)
    if n < 0:
        raise ParseError("vertex count must be nonnegative", lineno)
    weights = [Fraction(1)] * n
    edges = []
    for lineno, tokens in rows[1:]:
        kind = tokens[0]
        if kind == "w":
            if len(tokens) != 3:
                raise ParseError("expected 'w <i> <weight>'", lineno)
            i = _int(tokens[1], lineno)
            if not 0 <= i < n:
                raise ParseError(f"vertex {i} out of range", lineno)
            weights[i] = _rational(tokens[2], lineno)
        elif kind == "e":
            if len(tokens) != 3:
                raise ParseError("expected 'e <i> <j>'", lineno)
            i, j = _int(tokens[1], lineno), _int(tokens[2], lineno)
            if not (0 <= i < n and 0 <= j < n):
                raise ParseError(f"edge ({i},{j}) out of range for {n} vertices", lineno)
            if i == j:
                raise ParseError(f"self-loop at vertex {i}", lineno)
            edges.append((i, j))
        else:
            raise ParseError(f"unknown directive {kind!r}", lineno)
    try:
        return WeightedGraph.build(n, edges, weights)
    except InputError as exc:
        raise ParseError(str(exc)) from exc


def dump_graph(graph: WeightedGraph) -> str:
    lines = [f"graph {graph.n}"]
    lines.extend(
        f"w {i} {format_exact(w)}" for i, w in enumerate(graph.weights)
    )
    lines.extend(f"e {i} {j}" for i, j in sorted(graph.edges))
    return "\n".join(lines) + "\n"


def load_decomposition(text: str) -> TreeDecomposition:
    rows = _content_lines(text)
    if not rows or rows[0][1][0] != "td":
        lineno = rows[0][0] if rows else 1
        raise ParseError("expected a 'td <m>' header", lineno)
    lineno, header = rows[0]
    if len(header) != 2:
        raise ParseError("expected 'td <m>'", lineno)
    m = _int(header[1], lineno)
    if m < 0:
        raise ParseError("node count must be nonnegative", lineno)
    bags: list[set[int] | None] = [None] * m
    tree_edges = []
    root = 0
    for lineno, tokens in rows[1:]:
        kind = tokens[0]
        if kind == "bag":
            if len(tokens) < 2:
                raise ParseError("expected 'bag <node> <v...>'", lineno)
            node = _int(tokens[1], lineno)
            if not 0 <= node < m:
                raise ParseError(f"node {node} out of range", lineno)
            bags[node] = {_int(tok, lineno) for tok in tokens[2:]}
        elif kind == "te":
            if len(tokens) != 3:
                raise ParseError("expected 'te <a> <b>'", lineno)
            tree_edges.append((_int(tokens[1], lineno), _int(tokens[2], lineno)))
        elif kind == "root":
            if len(tokens) != 2:
                raise ParseError("expected 'root <node>'", lineno)
            root = _int(tokens[1], lineno)
        else:
            raise ParseError(f"unknown directive {kind!r}", lineno)
    try:
        return TreeDecomposition.build(
            [bag if bag is not None else set() for bag in bags], tree_edges, root=root
        )
    except InputError as exc:
        raise ParseError(str(exc)) from exc


def dump_decomposition(decomposition: TreeDecomposition) -> str:
    lines = [f"td {decomposition.node_count}"]
    for node, bag in enumerate(decomposition.bags):
        lines.append(" ".join(["bag", str(node), *map(str, sorted(bag))]))
    lines.extend(f"te {a} {b}" for a, b in sorted(decomposition.tree_edges))
    lines.append(f"root {decomposition.root}")
    return "\n".join(lines) + "\n"


def load_instance(text: str) -> LabelInstance:
    rows = _content_lines(text)
    if not rows or rows[0][1][0] != "instance":
        lineno = rows[0][0] if rows else 1
        raise ParseError("expected an 'instance <n>' header", lineno)
    lineno, header = rows[0]
    if len(header) != 2:
        raise ParseError("expected 'instance <n>'", lineno)
    n = _int(header[1], lineno)
    points = []
    for lineno, tokens in rows[1:]:
        if tokens[0] != "pt":
            raise ParseError(f"unknown directive {tokens[0]!r}", lineno)
        if len(tokens) != 5:
            raise ParseError("expected 'pt <x> <y> <length> <weight>'", lineno)
        points.append(tuple(_rational(tok, lineno) for tok in tokens[1:]))
    if len(points) != n:
        raise ParseError(f"header promised {n} points, found {len(points)}")
    try:
        return LabelInstance.build(points)
    except InputError as exc:
        raise ParseError(str(exc)) from exc


def dump_instance(instance: LabelInstance) -> str:
    lines = [f"instance {instance.size}"]
    for p in instance.points:
        lines.append(
            f"pt {format_exact(p.x)} {format_exact(p.y)} "
            f"{format_exact(p.length)} {format_exact(p.weight)}"
        )
    return "\n".join(lines) + "\n"


def load_labeling(text: str) -> Labeling | AnchorLabeling:
    rows = _content_lines(text)
    sliding: dict[int, Fraction] = {}
    anchored: dict[int, Anchor] = {}
    for lineno, tokens in rows:
        if tokens[0] == "lab":
            if len(tokens) != 3:
                raise ParseError("expected 'lab <id> <z>'", lineno)
            pid = _int(tokens[1], lineno)
            if pid in sliding or pid in anchored:
                raise ParseError(f"duplicate assignment for point {pid}", lineno)
            sliding[pid] = _rational(tokens[2], lineno)
        elif tokens[0] == "alab":
            if len(tokens) != 4:
                raise ParseError("expected 'alab <id> <edge> <offset>'", lineno)
            pid = _int(tokens[1], lineno)
            if pid in sliding or pid in anchored:
                raise ParseError(f"duplicate assignment for point {pid}", lineno)
            if tokens[2] not in ANCHOR_EDGE_NAMES:
                raise ParseError(f"unknown anchor edge {tokens[2]!r}", lineno)
            anchored[pid] = Anchor(edge=tokens[2], offset=_rational(tokens[3], lineno))
        else:
            raise ParseError(f"unknown directive {tokens[0]!r}", lineno)
    if anchored and sliding:
        raise ParseError("labeling mixes 'lab' and 'alab' lines")
    if anchored:
        return AnchorLabeling(anchored)
    return Labeling(sliding)


def dump_labeling(labeling: Labeling | AnchorLabeling) -> str:
    lines = []
    if isinstance(labeling, AnchorLabeling):
        for pid, anchor in labeling.assignments.items():
            lines.append(f"alab {pid} {anchor.edge} {format_exact(anchor.offset)}")
    else:
        for pid, z in labeling.assignments.items():
            lines.append(f"lab {pid} {format_exact(z)}")
    return "\n".join(lines) + ("\n" if lines else "")


def load_vertex_set(text: str) -> frozenset[int]:
    rows = _content_lines(text)
    if not rows or rows[0][1][0] != "vset":
        lineno = rows[0][0] if rows else 1
        raise ParseError("expected a 'vset <k>' header", lineno)
    lineno, header = rows[0]
    k = _int(header[1], lineno)
    vertices = set()
    for lineno, tokens in rows[1:]:
        if tokens[0] != "v" or len(tokens) != 2:
            raise ParseError("expected 'v <i>'", lineno)
        vertices.add(_int(tokens[1], lineno))
    if len(vertices) != k:
        raise ParseError(f"header promised {k} vertices, found {len(vertices)}")
    return frozenset(vertices)


def dump_vertex_set(vertices: Iterable[int]) -> str:
    ordered = sorted(set(vertices))
    lines = [f"vset {len(ordered)}"]
    lines.extend(f"v {v}" for v in ordered)
    return "\n".join(lines) + "\n"
