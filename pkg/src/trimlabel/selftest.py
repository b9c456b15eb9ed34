"""Seeded, deterministic invariant suites runnable from the CLI.

Each suite draws its own ``random.Random(seed)`` stream, so results are
reproducible and independent of suite order.  On failure the offending case
is printed as parseable text (shrunk first for labeling cases).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Callable

from . import discretize
from .errors import BudgetExceeded
from .fileio import dump_decomposition, dump_graph, dump_instance, dump_labeling
from .generators import (
    random_anchor_instance,
    random_decomposed_graph,
    random_feasible_labeling,
    random_grid_subgraph,
    random_label_instance,
    random_multipos_instance,
    random_weighted_graph,
)
from .graphs import (
    WeightedGraph,
    connected_components,
    longest_simple_path,
    longest_simple_path_subsets,
    validate_tree_decomposition,
    width,
    elongation,
    TreeDecomposition,
)
from .labeling import MultiPosInstance, validate_labeling, validate_multipos, weight_of
from .planar import embed_from_coordinates, planar_layers
from .solve import exact_1sh, exact_multipos, ptas_1sh, shifting_ptas_result
from .trimming import baker_select, g_bound, is_trimming, level_trimming, planar_trimming


@dataclass
class SuiteResult:
    name: str
    checks: int
    failure: str | None = None

    @property
    def ok(self) -> bool:
        return self.failure is None


def _shrink_labeling_case(instance, labeling, still_failing):
    """Greedily drop points while the predicate keeps failing."""
    changed = True
    while changed and instance.size > 1:
        changed = False
        for drop in range(instance.size):
            keep = [pid for pid in range(instance.size) if pid != drop]
            sub, old = instance.restrict(keep)
            remap = {old_pid: new_pid for new_pid, old_pid in enumerate(old)}
            sub_labeling = type(labeling)(
                {
                    remap[pid]: value
                    for pid, value in labeling.assignments.items()
                    if pid in remap
                }
            )
            try:
                failing = still_failing(sub, sub_labeling)
            except Exception:
                failing = False
            if failing:
                instance, labeling = sub, sub_labeling
                changed = True
                break
    return instance, labeling


def _labeling_reproducer(instance, labeling) -> str:
    return "instance:\n" + dump_instance(instance) + "labeling:\n" + dump_labeling(labeling)


def suite_trim_formulas(rng: Random, trials: int, max_n: int) -> SuiteResult:
    checks = 0
    for k in range(11):
        for s in range(4):
            for t in range(2, 6):
                a, g = g_bound(k, s, t)
                checks += 1
                if a >= 2:
                    numerator = (a ** ((s + 1) * t - 2) * (a + 1) - 2) * (k + 1)
                    if numerator % (a - 1) != 0 or g * (a - 1) != numerator:
                        return SuiteResult(
                            "trim-formulas", checks, f"g not integral at k={k} s={s} t={t}"
                        )
                elif g != (2 * (s + 1) * t - 3) * (k + 1):
                    return SuiteResult(
                        "trim-formulas", checks, f"wrong linear g at k={k} s={s} t={t}"
                    )
    return SuiteResult("trim-formulas", checks)


def suite_decomposition_properties(rng: Random, trials: int, max_n: int) -> SuiteResult:
    checks = 0
    if max_n < 1:
        return SuiteResult("decomposition-properties", checks)
    for _ in range(trials):
        graph, decomposition = random_decomposed_graph(rng, min(max_n, 12))
        if validate_tree_decomposition(graph, decomposition):
            return SuiteResult(
                "decomposition-properties",
                checks,
                "generator produced an invalid decomposition:\n"
                + dump_graph(graph)
                + dump_decomposition(decomposition),
            )
        checks += 1
        # Separator: removing either endpoint bag of a tree edge disconnects
        # the vertex sets of the two sides.
        for a, b in sorted(decomposition.tree_edges):
            sides = _tree_sides(decomposition, a, b)
            for bag_node in (a, b):
                removed = decomposition.bags[bag_node]
                side_a = {
                    v
                    for node in sides[0]
                    for v in decomposition.bags[node]
                    if v not in removed
                }
                side_b = {
                    v
                    for node in sides[1]
                    for v in decomposition.bags[node]
                    if v not in removed
                }
                remaining, old = graph.minus(removed)
                comp_of = {}
                for comp_id, comp in enumerate(connected_components(remaining)):
                    for v in comp:
                        comp_of[old[v]] = comp_id
                touched = {comp_of[v] for v in side_a if v in comp_of} & {
                    comp_of[v] for v in side_b if v in comp_of
                }
                if side_a & side_b or touched:
                    return SuiteResult(
                        "decomposition-properties",
                        checks,
                        f"bag {bag_node} fails to separate tree edge ({a},{b}):\n"
                        + dump_graph(graph)
                        + dump_decomposition(decomposition),
                    )
                checks += 1
        # Width and elongation are invariant under node relabeling and re-rooting.
        perm = list(range(decomposition.node_count))
        rng.shuffle(perm)
        relabeled = TreeDecomposition.build(
            [decomposition.bags[perm.index(i)] for i in range(len(perm))],
            [(perm[a], perm[b]) for a, b in decomposition.tree_edges],
            root=rng.randrange(decomposition.node_count),
        )
        if width(relabeled) != width(decomposition) or elongation(
            relabeled
        ) != elongation(decomposition):
            return SuiteResult(
                "decomposition-properties",
                checks,
                "width/elongation changed under relabeling:\n"
                + dump_decomposition(decomposition),
            )
        checks += 1
    return SuiteResult("decomposition-properties", checks)


def _tree_sides(decomposition, a, b):
    side_a = set()
    stack = [a]
    while stack:
        x = stack.pop()
        if x in side_a:
            continue
        side_a.add(x)
        for y in decomposition.node_adjacency[x]:
            if not (x == a and y == b) and not (x == b and y == a) and y not in side_a:
                if (x, y) != (a, b) and (y, x) != (a, b):
                    stack.append(y)
    side_a.discard(b)
    side_b = set(range(decomposition.node_count)) - side_a
    return sorted(side_a), sorted(side_b)


def suite_longest_path_oracles(rng: Random, trials: int, max_n: int) -> SuiteResult:
    checks = 0
    for _ in range(trials):
        graph = random_weighted_graph(rng, min(max_n, 8))
        dfs = longest_simple_path(graph)
        dp = longest_simple_path_subsets(graph)
        checks += 1
        if dfs != dp:
            return SuiteResult(
                "longest-path-oracles",
                checks,
                f"DFS={dfs} vs subset-DP={dp} disagree:\n" + dump_graph(graph),
            )
    return SuiteResult("longest-path-oracles", checks)


def suite_trimming_soundness(rng: Random, trials: int, max_n: int) -> SuiteResult:
    checks = 0
    if max_n < 1:
        return SuiteResult("trimming-soundness", checks)
    for _ in range(trials):
        graph, decomposition = random_decomposed_graph(rng, min(max_n, 14))
        t = rng.choice((2, 3, 4))
        removed, params = level_trimming(graph, decomposition, t)
        checks += 1
        if graph.weight_of(removed) * t > graph.total_weight:
            return SuiteResult(
                "trimming-soundness",
                checks,
                f"removed weight exceeds W/{t}:\n" + dump_graph(graph),
            )
        remaining, _ = graph.minus(removed)
        if longest_simple_path(remaining) > params.g:
            return SuiteResult(
                "trimming-soundness",
                checks,
                f"surviving path longer than g={params.g} (t={t}):\n"
                + dump_graph(graph)
                + dump_decomposition(decomposition),
            )
    return SuiteResult("trimming-soundness", checks)


def suite_clique_negative_control(rng: Random, trials: int, max_n: int) -> SuiteResult:
    checks = 0
    top = min(max_n, 7)
    for n in range(4, top + 1):
        clique = WeightedGraph.build(
            n, [(i, j) for i in range(n) for j in range(i + 1, n)]
        )
        for t in (2, 3):
            floor = n - n // t - 1  # n(1 - 1/t) - 1 for unit weights
            for mask in range(1 << n):
                members = [v for v in range(n) if mask >> v & 1]
                if len(members) * t > n:
                    continue
                remaining, _ = clique.minus(members)
                checks += 1
                if longest_simple_path(remaining) < floor:
                    return SuiteResult(
                        "clique-negative-control",
                        checks,
                        f"K_{n} minus {members} has a short longest path",
                    )
    return SuiteResult("clique-negative-control", checks)


def suite_dependency_structure(rng: Random, trials: int, max_n: int) -> SuiteResult:
    checks = 0
    for _ in range(trials):
        instance = random_label_instance(rng, min(max_n, 10))
        labeling = random_feasible_labeling(rng, instance)
        stopping = discretize.stopping_set(instance)
        graph = discretize.dependency_graph(instance, labeling, stopping)
        report = discretize.check_structure(graph)
        checks += 1
        if not report.ok:
            instance, labeling = _shrink_labeling_case(
                instance,
                labeling,
                lambda inst, lab: not discretize.check_structure(
                    discretize.dependency_graph(inst, lab, discretize.stopping_set(inst))
                ).ok,
            )
            return SuiteResult(
                "dependency-structure",
                checks,
                "structure violation (minimized):\n"
                + _labeling_reproducer(instance, labeling),
            )
    return SuiteResult("dependency-structure", checks)


def suite_normalization(rng: Random, trials: int, max_n: int) -> SuiteResult:
    checks = 0
    for _ in range(trials):
        instance = random_label_instance(rng, min(max_n, 10))
        labeling = random_feasible_labeling(rng, instance)
        user = sorted(
            {random_fraction_stop(rng) for _ in range(rng.randint(0, 2))}
        )
        labeled = list(labeling.labeled)
        removed = frozenset(pid for pid in labeled if rng.random() < 0.25)

        def violation(inst, lab, user=tuple(user), removed_ids=None):
            if removed_ids is None:
                removed_ids = frozenset()
            removed_ids = removed_ids & set(lab.labeled)
            pushed = discretize.normalize(inst, lab, user, removed_ids)
            if validate_labeling(inst, pushed):
                return "normalized labeling infeasible"
            if set(pushed.labeled) != set(lab.labeled) - removed_ids:
                return "wrong labeled set"
            stops = discretize.stopping_set(inst, user)
            for pid, z in pushed.assignments.items():
                original = lab.assignments[pid]
                if z > original:
                    return f"point {pid} moved right"
                if discretize.rank_in(user, z) != discretize.rank_in(user, original):
                    return f"point {pid} changed rank"
            again = discretize.normalize(inst, pushed, user, frozenset())
            if again != pushed:
                return "normalization is not idempotent"
            graph = discretize.dependency_graph(inst, lab, stops)
            kept = set(pushed.labeled)
            g = discretize.longest_dependency_path(graph, kept)
            cands = discretize.candidate_positions(inst, user, g)
            for pid, z in pushed.assignments.items():
                if z not in cands.values:
                    return f"position of point {pid} not in the candidate set"
            return None

        problem = violation(instance, labeling, tuple(user), removed)
        checks += 1
        if problem:
            return SuiteResult(
                "normalization",
                checks,
                f"{problem}:\n" + _labeling_reproducer(instance, labeling),
            )
    return SuiteResult("normalization", checks)


def random_fraction_stop(rng: Random) -> Fraction:
    return Fraction(rng.randint(-4, 12), rng.choice((1, 2, 4)))


def suite_oracle_agreement(rng: Random, trials: int, max_n: int) -> SuiteResult:
    checks = 0
    for _ in range(trials):
        instance = random_label_instance(rng, min(max_n, 5))
        sliding = exact_1sh(instance)
        g = max(instance.size - 1, 0)
        cands = discretize.candidate_positions(instance, (), g)
        fixed = MultiPosInstance.shared(instance, cands.values)
        positional = exact_multipos(fixed)
        checks += 1
        if weight_of(instance, sliding) != weight_of(instance, positional):
            return SuiteResult(
                "oracle-agreement",
                checks,
                f"sliding OPT {weight_of(instance, sliding)} != candidate OPT "
                f"{weight_of(instance, positional)}:\n" + dump_instance(instance),
            )
    return SuiteResult("oracle-agreement", checks)


def suite_ptas_ratio(rng: Random, trials: int, max_n: int) -> SuiteResult:
    checks = 0
    for _ in range(trials):
        inst = random_anchor_instance(rng, min(max_n, 8))
        exact = exact_multipos(inst)
        from .labeling import anchor_weight

        opt = anchor_weight(inst, exact)
        for eps in (Fraction(1), Fraction(1, 2), Fraction(1, 4)):
            result = shifting_ptas_result(inst, eps)
            checks += 1
            if result.weight < (1 - eps) * opt:
                return SuiteResult(
                    "ptas-ratio",
                    checks,
                    f"shifting at eps={eps} got {result.weight} < "
                    f"(1-eps)*{opt}:\n" + dump_instance(inst.base),
                )
        small = random_label_instance(rng, min(max_n, 5))
        approx = ptas_1sh(small, Fraction(1, 2), "exhaustive")
        best = exact_1sh(small)
        checks += 1
        if weight_of(small, approx) != weight_of(small, best):
            return SuiteResult(
                "ptas-ratio",
                checks,
                "exhaustive pipeline missed the optimum:\n" + dump_instance(small),
            )
    return SuiteResult("ptas-ratio", checks)


def suite_planar_pipeline(rng: Random, trials: int, max_n: int) -> SuiteResult:
    checks = 0
    if max_n < 1:
        return SuiteResult("planar-pipeline", checks)
    for _ in range(trials):
        graph, coords = random_grid_subgraph(rng, max_side=3)
        emb = embed_from_coordinates(graph, coords)
        layers = planar_layers(graph, emb)
        flat = sorted(v for layer in layers for v in layer)
        checks += 1
        if flat != list(range(graph.n)):
            return SuiteResult(
                "planar-pipeline", checks, "layers do not partition:\n" + dump_graph(graph)
            )
        t = rng.choice((1, 2))
        selection = baker_select(graph, layers, t)
        if selection.subgraph.n:
            # Components of the survivor graph span < 2t consecutive layers.
            layer_of = {
                v: idx for idx, layer in enumerate(layers, start=1) for v in layer
            }
            for comp in connected_components(selection.subgraph):
                spans = [layer_of[selection.kept_vertices[v]] for v in comp]
                checks += 1
                if max(spans) - min(spans) + 1 > 2 * t - 1:
                    return SuiteResult(
                        "planar-pipeline",
                        checks,
                        f"component spans {spans} with t={t}:\n" + dump_graph(graph),
                    )
        removed, report = planar_trimming(graph, emb, t)
        checks += 1
        if not is_trimming(graph, removed, t, report.g):
            return SuiteResult(
                "planar-pipeline",
                checks,
                f"planar trimming fails its own certificate (t={t}):\n"
                + dump_graph(graph),
            )
    return SuiteResult("planar-pipeline", checks)


SUITES: tuple[tuple[str, Callable[[Random, int, int], SuiteResult]], ...] = (
    ("trim-formulas", suite_trim_formulas),
    ("decomposition-properties", suite_decomposition_properties),
    ("longest-path-oracles", suite_longest_path_oracles),
    ("trimming-soundness", suite_trimming_soundness),
    ("clique-negative-control", suite_clique_negative_control),
    ("dependency-structure", suite_dependency_structure),
    ("normalization", suite_normalization),
    ("oracle-agreement", suite_oracle_agreement),
    ("ptas-ratio", suite_ptas_ratio),
    ("planar-pipeline", suite_planar_pipeline),
)


def run_selftest(seed: int, trials: int, max_n: int, out=print) -> int:
    failures = 0
    for index, (name, suite) in enumerate(SUITES):
        rng = Random(seed * 1_000_003 + index)
        try:
            result = suite(rng, trials, max_n)
        except BudgetExceeded as exc:
            result = SuiteResult(name, 0, f"budget exceeded: {exc}")
        if result.ok:
            out(f"PASS {name} ({result.checks} checks)")
        else:
            failures += 1
            out(f"FAIL {name}: {result.failure}")
    out(f"selftest: {len(SUITES) - failures}/{len(SUITES)} suites passed")
    return 0 if failures == 0 else 1
