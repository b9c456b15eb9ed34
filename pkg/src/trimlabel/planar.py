"""Combinatorial planar embeddings: rotation systems, face traversal, and
outer-face peeling into layers.

An embedding stores, per vertex, its neighbors in counterclockwise order,
plus one directed half-edge per edged component designating that component's
outer face.  Validity is checked via Euler's formula on the face orbits.
Straight-line embeddings are derived from exact rational coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Mapping, Sequence

from .errors import InputError
from .graphs import WeightedGraph, connected_components


@dataclass(frozen=True)
class PlanarEmbedding:
    rotation: tuple[tuple[int, ...], ...]
    outer: tuple[tuple[int, int], ...]


def _next_in_face(emb: PlanarEmbedding, u: int, v: int) -> tuple[int, int]:
    # Arriving at v along (u, v), the face continues with the neighbor that
    # precedes u in v's counterclockwise rotation.
    ring = emb.rotation[v]
    idx = ring.index(u)
    return v, ring[idx - 1]


def face_orbits(emb: PlanarEmbedding) -> list[tuple[tuple[int, int], ...]]:
    """All faces as closed walks of directed edges, deterministically ordered."""
    seen: set[tuple[int, int]] = set()
    faces = []
    for u in range(len(emb.rotation)):
        for v in emb.rotation[u]:
            if (u, v) in seen:
                continue
            walk = []
            edge = (u, v)
            while edge not in seen:
                seen.add(edge)
                walk.append(edge)
                edge = _next_in_face(emb, *edge)
            faces.append(tuple(walk))
    return faces


def validate_embedding(graph: WeightedGraph, emb: PlanarEmbedding) -> None:
    """Raise :class:`InputError` unless ``emb`` is a genus-0 embedding of
    ``graph``: rotations list exactly the neighbor sets, each edged component
    satisfies Euler's formula, and each has exactly one designated outer
    half-edge."""
    if len(emb.rotation) != graph.n:
        raise InputError(
            f"rotation system covers {len(emb.rotation)} vertices, graph has {graph.n}"
        )
    for v in range(graph.n):
        ring = emb.rotation[v]
        if len(set(ring)) != len(ring) or set(ring) != set(graph.adjacency[v]):
            raise InputError(f"rotation at vertex {v} does not match its neighbors")

    comp_of = {}
    comps = connected_components(graph)
    for idx, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = idx

    faces = face_orbits(emb)
    faces_per_comp = [0] * len(comps)
    for walk in faces:
        faces_per_comp[comp_of[walk[0][0]]] += 1
    edges_per_comp = [0] * len(comps)
    for i, j in graph.edges:
        edges_per_comp[comp_of[i]] += 1
    for idx, comp in enumerate(comps):
        if edges_per_comp[idx] == 0:
            continue
        euler = len(comp) - edges_per_comp[idx] + faces_per_comp[idx]
        if euler != 2:
            raise InputError(
                f"rotation system is not planar on component {comp}: "
                f"V-E+F = {euler}, expected 2"
            )

    outer_comps = set()
    for u, v in emb.outer:
        if not (0 <= u < graph.n) or v not in emb.rotation[u]:
            raise InputError(f"outer half-edge ({u},{v}) is not in the graph")
        idx = comp_of[u]
        if idx in outer_comps:
            raise InputError(f"component {comps[idx]} has two outer half-edges")
        outer_comps.add(idx)
    for idx, comp in enumerate(comps):
        if edges_per_comp[idx] > 0 and idx not in outer_comps:
            raise InputError(f"component {comp} has no outer half-edge")


def _direction_cmp(d1: tuple[Fraction, Fraction], d2: tuple[Fraction, Fraction]) -> int:
    def half(d: tuple[Fraction, Fraction]) -> int:
        return 0 if d[1] > 0 or (d[1] == 0 and d[0] > 0) else 1

    h1, h2 = half(d1), half(d2)
    if h1 != h2:
        return -1 if h1 < h2 else 1
    cross = d1[0] * d2[1] - d1[1] * d2[0]
    if cross > 0:
        return -1
    if cross < 0:
        return 1
    return 0


def embed_from_coordinates(
    graph: WeightedGraph, coords: Mapping[int, tuple[Fraction, Fraction]] | Sequence[tuple[Fraction, Fraction]]
) -> PlanarEmbedding:
    """Rotation system of the straight-line drawing given by ``coords``.

    Neighbors are sorted counterclockwise by exact angle comparisons; two
    neighbors in exactly the same direction mean overlapping segments and are
    rejected.  Each edged component's outer face is the one below its
    bottommost-leftmost vertex.
    """
    pts = {v: (Fraction(coords[v][0]), Fraction(coords[v][1])) for v in range(graph.n)}
    rotation = []
    for v in range(graph.n):
        dirs = []
        for w in graph.adjacency[v]:
            d = (pts[w][0] - pts[v][0], pts[w][1] - pts[v][1])
            if d == (0, 0):
                raise InputError(f"vertices {v} and {w} share coordinates")
            dirs.append((d, w))
        ordered = sorted(dirs, key=cmp_to_key(lambda a, b: _direction_cmp(a[0], b[0])))
        for (d1, w1), (d2, w2) in zip(ordered, ordered[1:]):
            if _direction_cmp(d1, d2) == 0:
                raise InputError(
                    f"edges ({v},{w1}) and ({v},{w2}) overlap in the drawing"
                )
        rotation.append(tuple(w for _, w in ordered))

    outer = []
    for comp in connected_components(graph):
        if all(not graph.adjacency[v] for v in comp):
            continue
        bottom = min(comp, key=lambda v: (pts[v][1], pts[v][0]))
        # All neighbor directions at `bottom` lie in the upper half; the
        # outer face is left of the edge toward the angle-maximal neighbor.
        best = max(
            graph.adjacency[bottom],
            key=cmp_to_key(
                lambda a, b: _direction_cmp(
                    (pts[a][0] - pts[bottom][0], pts[a][1] - pts[bottom][1]),
                    (pts[b][0] - pts[bottom][0], pts[b][1] - pts[bottom][1]),
                )
            ),
        )
        outer.append((bottom, best))
    emb = PlanarEmbedding(rotation=tuple(rotation), outer=tuple(outer))
    validate_embedding(graph, emb)
    return emb


def find_planar_embedding(graph: WeightedGraph) -> PlanarEmbedding:
    """Some planar embedding of ``graph``, or :class:`InputError` if none
    exists.  The outer face of each component is chosen deterministically as
    its largest face (ties by smallest first half-edge)."""
    import networkx as nx

    nx_graph = nx.Graph()
    nx_graph.add_nodes_from(range(graph.n))
    nx_graph.add_edges_from(graph.edges)
    is_planar, nx_emb = nx.check_planarity(nx_graph)
    if not is_planar:
        raise InputError("graph is not planar")
    rotation = tuple(
        tuple(nx_emb.neighbors_cw_order(v)) if graph.adjacency[v] else ()
        for v in range(graph.n)
    )
    emb = PlanarEmbedding(rotation=rotation, outer=())
    faces = face_orbits(emb)

    comp_of = {}
    comps = connected_components(graph)
    for idx, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = idx
    best_face: dict[int, tuple[tuple[int, int], ...]] = {}
    for walk in faces:
        idx = comp_of[walk[0][0]]
        incumbent = best_face.get(idx)
        if incumbent is None or (-len(walk), min(walk)) < (-len(incumbent), min(incumbent)):
            best_face[idx] = walk
    outer = tuple(min(best_face[idx]) for idx in sorted(best_face))
    emb = PlanarEmbedding(rotation=rotation, outer=outer)
    validate_embedding(graph, emb)
    return emb


def planar_layers(graph: WeightedGraph, emb: PlanarEmbedding) -> list[tuple[int, ...]]:
    """Partition the vertices into peeling layers R1, R2, ...

    R1 is the outer-face boundary (isolated vertices included); deleting a
    layer merges every face that touched it into the outer region, so the
    next layer is the set of surviving vertices on such faces.
    """
    validate_embedding(graph, emb)
    faces = face_orbits(emb)
    face_vertices = [tuple(sorted({u for u, _ in walk})) for walk in faces]
    faces_of_vertex: list[list[int]] = [[] for _ in range(graph.n)]
    for f_idx, verts in enumerate(face_vertices):
        for v in verts:
            faces_of_vertex[v].append(f_idx)

    outer_faces = set()
    for half in emb.outer:
        for f_idx, walk in enumerate(faces):
            if half in walk:
                outer_faces.add(f_idx)
                break

    assigned = [False] * graph.n
    first = {v for f_idx in outer_faces for v in face_vertices[f_idx]}
    first.update(v for v in range(graph.n) if not graph.adjacency[v])
    layers = []
    current = tuple(sorted(first))
    used_faces = set(outer_faces)
    for v in current:
        assigned[v] = True
    while current:
        layers.append(current)
        exposed = set()
        for v in current:
            for f_idx in faces_of_vertex[v]:
                if f_idx not in used_faces:
                    used_faces.add(f_idx)
                    exposed.update(face_vertices[f_idx])
        nxt = tuple(sorted(v for v in exposed if not assigned[v]))
        for v in nxt:
            assigned[v] = True
        current = nxt
    if not all(assigned) and graph.n > 0:
        raise InputError("embedding does not reach every vertex during peeling")
    return layers
