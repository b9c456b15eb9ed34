"""Exact solvers and approximation schemes for label placement.

Exact solving is deliberately brute force at desk scale: subsets and
orderings with a greedy left-push for sliding and multi-position instances,
branch and bound over explicit rectangles for anchored instances.  The
approximation path deletes horizontal bands of points for each shift offset,
solves the resulting independent clusters exactly, and keeps the best offset;
losing at most an epsilon fraction of the optimum.  Pipelines compose the
candidate-position discretization with either solver.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .discretize import candidate_positions, stopping_set
from .errors import BudgetExceeded, InputError
from .labeling import (
    ANCHOR_EDGES,
    Anchor,
    AnchorLabelInstance,
    AnchorLabeling,
    LabelInstance,
    Labeling,
    MultiPosInstance,
    anchor_rect,
    anchor_weight,
    open_overlap,
    validate_anchor_labeling,
    validate_labeling,
    validate_multipos,
    weight_of,
)
from .trimming import planar_g_bound

DEFAULT_SOLVER_BUDGET = 2_000_000
DEPENDENCY_MAX_DEGREE = 4  # in-degree and out-degree are each at most 2


def transpose_instance(instance: LabelInstance) -> LabelInstance:
    """Swap the coordinate axes; an involution."""
    return LabelInstance.build(
        (p.y, p.x, p.length, p.weight) for p in instance.points
    )


def _check_epsilon(epsilon: Fraction) -> Fraction:
    epsilon = Fraction(epsilon)
    if not 0 < epsilon <= 1:
        raise InputError(f"epsilon must lie in (0, 1], got {epsilon}")
    return epsilon


def _ceil(value: Fraction) -> int:
    return math.ceil(Fraction(value))


class _Budget:
    def __init__(self, limit: int, what: str):
        self.limit = limit
        self.used = 0
        self.what = what

    def spend(self, amount: int = 1) -> None:
        self.used += amount
        if self.used > self.limit:
            raise BudgetExceeded(f"{self.what} exceeded {self.limit} steps")


def _subsets_by_weight(weights: list[Fraction]) -> list[tuple[Fraction, int]]:
    n = len(weights)
    table = []
    for mask in range(1 << n):
        w = Fraction(0)
        rest = mask
        while rest:
            bit = rest & -rest
            rest ^= bit
            w += weights[bit.bit_length() - 1]
        table.append((w, mask))
    table.sort(key=lambda entry: (-entry[0], entry[1]))
    return table


def exact_1sh(
    instance: LabelInstance,
    *,
    max_points: int = 7,
    budget: int = DEFAULT_SOLVER_BUDGET,
) -> Labeling:
    """Optimal sliding labeling by subset and ordering enumeration.

    For each candidate subset, each ordering is tried with a greedy left
    push: a label goes to the leftmost position clearing the window and every
    already-placed y-overlapping label.  Any feasible labeling, taken in
    increasing-z order, survives this push, so some ordering succeeds exactly
    when the subset is feasible.
    """
    n = instance.size
    if n > max_points:
        raise BudgetExceeded(f"exact sliding solver refused for {n} > {max_points} points")
    tracker = _Budget(budget, "exact sliding solver")
    best_weight = Fraction(0)
    best: Labeling = Labeling({})
    weights = [p.weight for p in instance.points]
    for subset_weight, mask in _subsets_by_weight(weights):
        if subset_weight <= best_weight:
            break
        members = [pid for pid in range(n) if mask >> pid & 1]
        placement = _greedy_subset_sliding(instance, members, tracker)
        if placement is not None:
            best_weight = subset_weight
            best = Labeling(placement)
    return best


def _greedy_subset_sliding(instance, members, tracker):
    for perm in permutations(members):
        tracker.spend()
        placed: list[tuple[int, Fraction]] = []
        ok = True
        for pid in perm:
            p = instance.point(pid)
            lo = p.x - p.length
            for qid, zq in placed:
                q = instance.point(qid)
                if abs(p.y - q.y) < 1 and zq + q.length > lo:
                    lo = zq + q.length
            if lo > p.x:
                ok = False
                break
            placed.append((pid, lo))
        if ok:
            return placed
    return None


def _greedy_subset_positions(instance, positions, members, tracker):
    for perm in permutations(members):
        tracker.spend()
        placed: list[tuple[int, Fraction]] = []
        ok = True
        for pid in perm:
            p = instance.point(pid)
            lo = p.x - p.length
            for qid, zq in placed:
                q = instance.point(qid)
                if abs(p.y - q.y) < 1 and zq + q.length > lo:
                    lo = zq + q.length
            cands = positions[pid]
            idx = bisect_left(cands, lo)
            if idx == len(cands) or cands[idx] > p.x:
                ok = False
                break
            placed.append((pid, cands[idx]))
        if ok:
            return placed
    return None


def _exact_multipos_greedy(inst: MultiPosInstance, tracker, max_points: int) -> Labeling:
    base = inst.base
    n = base.size
    if n > max_points:
        raise BudgetExceeded(
            f"exact multi-position solver refused for {n} > {max_points} points"
        )
    best_weight = Fraction(0)
    best = Labeling({})
    weights = [p.weight for p in base.points]
    for subset_weight, mask in _subsets_by_weight(weights):
        if subset_weight <= best_weight:
            break
        members = [pid for pid in range(n) if mask >> pid & 1]
        placement = _greedy_subset_positions(base, inst.positions, members, tracker)
        if placement is not None:
            best_weight = subset_weight
            best = Labeling(placement)
    return best


def _exact_anchor_bnb(inst: AnchorLabelInstance, tracker) -> AnchorLabeling:
    base = inst.base
    n = base.size
    order = sorted(range(n), key=lambda pid: (base.point(pid).x, pid))
    options = []
    for pid in order:
        point = base.point(pid)
        opts = sorted(
            inst.anchors[pid],
            key=lambda anchor: (ANCHOR_EDGES.index(anchor.edge), anchor.offset),
        )
        options.append([(anchor_rect(point, a), a) for a in opts])
    suffix = [Fraction(0)] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + base.point(order[i]).weight

    best_weight = Fraction(-1)
    best: dict[int, Anchor] = {}
    chosen: list[tuple[int, object, Anchor]] = []

    def dfs(i: int, current: Fraction) -> None:
        nonlocal best_weight, best
        tracker.spend()
        if current + suffix[i] <= best_weight:
            return
        if i == n:
            best_weight = current
            best = {pid: anchor for pid, _, anchor in chosen}
            return
        pid = order[i]
        point_weight = base.point(pid).weight
        for rect, anchor in options[i]:
            if all(not open_overlap(rect, r) for _, r, _ in chosen):
                chosen.append((pid, rect, anchor))
                dfs(i + 1, current + point_weight)
                chosen.pop()
        dfs(i + 1, current)

    dfs(0, Fraction(0))
    return AnchorLabeling(best)


def exact_multipos(
    inst: MultiPosInstance | AnchorLabelInstance,
    *,
    budget: int = DEFAULT_SOLVER_BUDGET,
    max_points: int = 7,
) -> Labeling | AnchorLabeling:
    """Optimal labeling of a fixed-position instance.

    Multi-position instances go through subset/ordering greedy search (exact
    for arbitrarily large candidate sets); anchored instances through branch
    and bound over explicit rectangles with a remaining-weight bound.  Either
    path refuses with :class:`BudgetExceeded` instead of answering late or
    wrong.
    """
    if isinstance(inst, MultiPosInstance):
        tracker = _Budget(budget, "exact multi-position solver")
        labeling = _exact_multipos_greedy(inst, tracker, max_points)
        assert not validate_multipos(inst, labeling)
        return labeling
    if isinstance(inst, AnchorLabelInstance):
        tracker = _Budget(budget, "exact anchored solver")
        labeling = _exact_anchor_bnb(inst, tracker)
        assert not validate_anchor_labeling(inst, labeling)
        return labeling
    raise InputError(f"unsupported instance type: {type(inst).__name__}")


def _restrict_multipos(inst: MultiPosInstance, ids):
    sub_base, old = inst.base.restrict(ids)
    return MultiPosInstance(
        base=sub_base, positions=tuple(inst.positions[pid] for pid in old)
    ), old


def _restrict_anchor(inst: AnchorLabelInstance, ids):
    sub_base, old = inst.base.restrict(ids)
    return AnchorLabelInstance(
        base=sub_base, anchors=tuple(inst.anchors[pid] for pid in old)
    ), old


def _instance_weight(inst, labeling) -> Fraction:
    if isinstance(labeling, AnchorLabeling):
        return anchor_weight(inst, labeling)
    return weight_of(inst.base, labeling)


def _is_bottom_only(inst) -> bool:
    if isinstance(inst, MultiPosInstance):
        return True
    return all(
        anchor.edge == "bottom"
        for anchor_set in inst.anchors
        for anchor in anchor_set
    )


@dataclass(frozen=True)
class ShiftingResult:
    labeling: Labeling | AnchorLabeling
    weight: Fraction
    band_count: int
    best_offset: int
    scheme: str  # "single-band" or "double-band"


def shifting_ptas_result(
    inst: MultiPosInstance | AnchorLabelInstance,
    epsilon: Fraction,
    *,
    budget: int = DEFAULT_SOLVER_BUDGET,
    max_points: int = 7,
) -> ShiftingResult:
    """Shifting scheme: for each offset, delete the points whose label bands
    hit that residue class, solve the remaining independent clusters exactly,
    and keep the heaviest offset.

    Bottom-anchored labels occupy [p_y, p_y+1], so deleting one residue class
    of floor(p_y) mod m splits the survivors at every y-gap of at least 1;
    with anchors on all four edges labels live in [p_y-1, p_y+1], so two
    consecutive residues are deleted and clusters split at gaps of at least
    2.  Averaging over offsets, the best one loses at most an epsilon
    fraction of the optimal weight.
    """
    epsilon = _check_epsilon(epsilon)
    base = inst.base
    bottom_only = _is_bottom_only(inst)
    if bottom_only:
        bands = max(2, _ceil(1 / epsilon))
        deleted_width = 1
        gap = Fraction(1)
        scheme = "single-band"
    else:
        bands = max(3, _ceil(2 / epsilon))
        deleted_width = 2
        gap = Fraction(2)
        scheme = "double-band"

    best: ShiftingResult | None = None
    for offset in range(bands):
        survivors = []
        for p in base.points:
            band = math.floor(p.y)
            if (band - offset) % bands >= deleted_width:
                survivors.append(p.id)
        survivors.sort(key=lambda pid: (base.point(pid).y, pid))
        clusters: list[list[int]] = []
        for pid in survivors:
            p = base.point(pid)
            if clusters and p.y - base.point(clusters[-1][-1]).y < gap:
                clusters[-1].append(pid)
            else:
                clusters.append([pid])
        assignments: dict[int, object] = {}
        total = Fraction(0)
        for cluster in clusters:
            if isinstance(inst, MultiPosInstance):
                sub, old = _restrict_multipos(inst, cluster)
            else:
                sub, old = _restrict_anchor(inst, cluster)
            try:
                solution = exact_multipos(sub, budget=budget, max_points=max_points)
            except BudgetExceeded as exc:
                raise BudgetExceeded(
                    f"offset {offset}: cluster of points {cluster} is too hard: {exc}"
                ) from exc
            for new_pid, value in solution.assignments.items():
                assignments[old[new_pid]] = value
            total += _instance_weight(sub, solution)
        labeling = (
            Labeling(assignments)
            if isinstance(inst, MultiPosInstance)
            else AnchorLabeling(assignments)
        )
        if best is None or total > best.weight:
            best = ShiftingResult(
                labeling=labeling,
                weight=total,
                band_count=bands,
                best_offset=offset,
                scheme=scheme,
            )
    assert best is not None
    if isinstance(inst, MultiPosInstance):
        assert not validate_multipos(inst, best.labeling)
    else:
        assert not validate_anchor_labeling(inst, best.labeling)
    return best


def shifting_ptas(
    inst: MultiPosInstance | AnchorLabelInstance,
    epsilon: Fraction,
    *,
    budget: int = DEFAULT_SOLVER_BUDGET,
    max_points: int = 7,
) -> Labeling | AnchorLabeling:
    return shifting_ptas_result(
        inst, epsilon, budget=budget, max_points=max_points
    ).labeling


@dataclass(frozen=True)
class PipelineReport:
    model: str
    epsilon: Fraction
    t: int
    g_mode: str
    g: int
    candidate_count: int
    solver: str  # "exact" or "shifting"
    band_count: int | None
    best_offset: int | None
    weight: Fraction


def _resolve_g(g_mode, chain_length: int, t: int) -> tuple[int, str]:
    if g_mode == "exhaustive":
        return max(chain_length, 0), "exhaustive"
    if g_mode == "theory":
        _, g = planar_g_bound(DEPENDENCY_MAX_DEGREE, t)
        return g, "theory"
    if isinstance(g_mode, int) and not isinstance(g_mode, bool):
        if g_mode < 0:
            raise InputError(f"fixed g must be nonnegative, got {g_mode}")
        return g_mode, "fixed"
    raise InputError(f"unknown g mode: {g_mode!r}")


def ptas_1sh_result(
    instance: LabelInstance,
    epsilon: Fraction,
    g_mode="exhaustive",
    *,
    budget: int = DEFAULT_SOLVER_BUDGET,
    candidate_cap: int | None = None,
    max_points: int = 7,
) -> tuple[Labeling, PipelineReport]:
    """Sliding-label scheme: discretize to the candidate-position set for the
    resolved g, then solve the fixed-position instance.

    ``exhaustive`` g covers every possible push chain (g = n-1), making the
    fixed-position optimum equal the sliding optimum, and is solved exactly.
    ``theory`` g is the closed-form planar trimming cap for dependency graphs
    (degree at most 4); it is astronomically large, so the candidate guard
    refuses to enumerate and the mode only documents the bound.  A fixed g
    splits the epsilon budget evenly between discretization loss and the
    shifting solver.
    """
    epsilon = _check_epsilon(epsilon)
    t = max(2, _ceil(2 / epsilon))
    g, mode_name = _resolve_g(g_mode, instance.size - 1, t)
    kwargs = {} if candidate_cap is None else {"max_size": candidate_cap}
    try:
        candidates = candidate_positions(instance, (), g, **kwargs)
    except BudgetExceeded as exc:
        raise BudgetExceeded(f"g mode {mode_name!r} with g={g}: {exc}") from exc
    fixed = MultiPosInstance.shared(instance, candidates.values)
    if mode_name == "exhaustive":
        labeling = exact_multipos(fixed, budget=budget, max_points=max_points)
        solver, bands, offset = "exact", None, None
    else:
        shifted = shifting_ptas_result(
            fixed, epsilon / 2, budget=budget, max_points=max_points
        )
        labeling = shifted.labeling
        solver, bands, offset = "shifting", shifted.band_count, shifted.best_offset
    assert not validate_labeling(instance, labeling)
    report = PipelineReport(
        model="1sh",
        epsilon=epsilon,
        t=t,
        g_mode=mode_name,
        g=g,
        candidate_count=len(candidates.values),
        solver=solver,
        band_count=bands,
        best_offset=offset,
        weight=weight_of(instance, labeling),
    )
    return labeling, report


def ptas_1sh(
    instance: LabelInstance,
    epsilon: Fraction,
    g_mode="exhaustive",
    *,
    budget: int = DEFAULT_SOLVER_BUDGET,
    candidate_cap: int | None = None,
    max_points: int = 7,
) -> Labeling:
    return ptas_1sh_result(
        instance,
        epsilon,
        g_mode,
        budget=budget,
        candidate_cap=candidate_cap,
        max_points=max_points,
    )[0]


def reduce_2sh(
    instance: LabelInstance,
    g: int,
    user=(),
    *,
    candidate_cap: int | None = None,
) -> AnchorLabelInstance:
    """Bottom-or-top anchored instance covering both 2SH sliding directions.

    Conceptually each point gets a copy one unit below whose bottom-anchored
    candidates are read as top-edge anchors of the original.  The copies
    share their x-coordinate and length with the originals, so the doubled
    instance's stopping values and length sums coincide with the original's
    and the candidate set is computed from it directly.
    """
    kwargs = {} if candidate_cap is None else {"max_size": candidate_cap}
    candidates = candidate_positions(instance, user, g, **kwargs)
    anchor_sets = []
    for p in instance.points:
        lo = bisect_left(candidates.values, p.x - p.length)
        anchors = []
        for z in candidates.values[lo:]:
            if z > p.x:
                break
            anchors.append(Anchor(edge="bottom", offset=p.x - z))
        anchors.extend(Anchor(edge="top", offset=a.offset) for a in list(anchors))
        anchor_sets.append(tuple(anchors))
    return AnchorLabelInstance(base=instance, anchors=tuple(anchor_sets))


def ptas_2sh_result(
    instance: LabelInstance,
    epsilon: Fraction,
    g_mode="exhaustive",
    *,
    budget: int = DEFAULT_SOLVER_BUDGET,
    candidate_cap: int | None = None,
    max_points: int = 7,
) -> tuple[AnchorLabeling, PipelineReport]:
    """2SH scheme: reduce to a bottom-or-top anchored instance and solve it.

    The exhaustive chain length is 2n-1 because push chains may alternate
    between originals and copies of the doubled instance.
    """
    epsilon = _check_epsilon(epsilon)
    t = max(2, _ceil(2 / epsilon))
    g, mode_name = _resolve_g(g_mode, 2 * instance.size - 1, t)
    try:
        anchored = reduce_2sh(instance, g, candidate_cap=candidate_cap)
    except BudgetExceeded as exc:
        raise BudgetExceeded(f"g mode {mode_name!r} with g={g}: {exc}") from exc
    candidate_count = sum(len(a) for a in anchored.anchors)
    if mode_name == "exhaustive":
        labeling = exact_multipos(anchored, budget=budget, max_points=max_points)
        solver, bands, offset = "exact", None, None
    else:
        shifted = shifting_ptas_result(
            anchored, epsilon / 2, budget=budget, max_points=max_points
        )
        labeling = shifted.labeling
        solver, bands, offset = "shifting", shifted.band_count, shifted.best_offset
    assert not validate_anchor_labeling(anchored, labeling)
    report = PipelineReport(
        model="2sh",
        epsilon=epsilon,
        t=t,
        g_mode=mode_name,
        g=g,
        candidate_count=candidate_count,
        solver=solver,
        band_count=bands,
        best_offset=offset,
        weight=anchor_weight(anchored, labeling),
    )
    return labeling, report


def _vertical_positions(instance: LabelInstance, g: int, cap: int | None) -> list[Fraction]:
    # Horizontal stopping lines plus unit-height stacking steps.
    stops = sorted(
        {p.y - 1 for p in instance.points}
        | {p.y for p in instance.points}
        | {p.y + 1 for p in instance.points}
    )
    limit = cap if cap is not None else 200_000
    if stops and (g + 1) * len(stops) > limit:
        raise BudgetExceeded(
            f"vertical candidate set would exceed {limit} values (g={g})"
        )
    return sorted({y + j for y in stops for j in range(g + 1)})


def build_4s_instance(
    instance: LabelInstance,
    g_horizontal: int,
    g_vertical: int,
    *,
    candidate_cap: int | None = None,
) -> AnchorLabelInstance:
    """Anchored instance covering all four sliding directions.

    Horizontal candidates use extra stopping values at p_x - l(p), p_x and
    p_x + l(p); vertical candidates stack unit heights over stopping values
    at p_y - 1, p_y and p_y + 1.
    """
    user = set()
    for p in instance.points:
        user.update((p.x - p.length, p.x, p.x + p.length))
    kwargs = {} if candidate_cap is None else {"max_size": candidate_cap}
    horizontal = candidate_positions(instance, sorted(user), g_horizontal, **kwargs)
    vertical = _vertical_positions(instance, g_vertical, candidate_cap)

    anchor_sets = []
    for p in instance.points:
        anchors = []
        lo = bisect_left(horizontal.values, p.x - p.length)
        for z in horizontal.values[lo:]:
            if z > p.x:
                break
            anchors.append(Anchor(edge="bottom", offset=p.x - z))
            anchors.append(Anchor(edge="top", offset=p.x - z))
        lo = bisect_left(vertical, p.y - 1)
        for y in vertical[lo:]:
            if y > p.y:
                break
            anchors.append(Anchor(edge="left", offset=p.y - y))
            anchors.append(Anchor(edge="right", offset=p.y - y))
        anchor_sets.append(tuple(anchors))
    return AnchorLabelInstance(base=instance, anchors=tuple(anchor_sets))


def ptas_4s_result(
    instance: LabelInstance,
    epsilon: Fraction,
    g_mode="exhaustive",
    *,
    budget: int = DEFAULT_SOLVER_BUDGET,
    candidate_cap: int | None = None,
    max_points: int = 7,
) -> tuple[AnchorLabeling, PipelineReport]:
    """4S scheme: anchored candidates on all four edges, then one solve.

    The merged instance contains every bottom candidate the 1SH scheme would
    generate for the same g, so with the exact solver its weight dominates
    the 1SH result.  Feasibility of the merged labeling is enforced by the
    solver and re-validated here rather than assumed.
    """
    epsilon = _check_epsilon(epsilon)
    t = max(2, _ceil(2 / epsilon))
    g, mode_name = _resolve_g(g_mode, 2 * instance.size - 1, t)
    try:
        anchored = build_4s_instance(instance, g, g, candidate_cap=candidate_cap)
    except BudgetExceeded as exc:
        raise BudgetExceeded(f"g mode {mode_name!r} with g={g}: {exc}") from exc
    candidate_count = sum(len(a) for a in anchored.anchors)
    if mode_name == "exhaustive":
        labeling = exact_multipos(anchored, budget=budget, max_points=max_points)
        solver, bands, offset = "exact", None, None
    else:
        shifted = shifting_ptas_result(
            anchored, epsilon / 2, budget=budget, max_points=max_points
        )
        labeling = shifted.labeling
        solver, bands, offset = "shifting", shifted.band_count, shifted.best_offset
    assert not validate_anchor_labeling(anchored, labeling)
    report = PipelineReport(
        model="4s",
        epsilon=epsilon,
        t=t,
        g_mode=mode_name,
        g=g,
        candidate_count=candidate_count,
        solver=solver,
        band_count=bands,
        best_offset=offset,
        weight=anchor_weight(anchored, labeling),
    )
    return labeling, report


def ptas_4s(
    instance: LabelInstance,
    epsilon: Fraction,
    g_mode="exhaustive",
    *,
    budget: int = DEFAULT_SOLVER_BUDGET,
    candidate_cap: int | None = None,
    max_points: int = 7,
) -> AnchorLabeling:
    return ptas_4s_result(
        instance,
        epsilon,
        g_mode,
        budget=budget,
        candidate_cap=candidate_cap,
        max_points=max_points,
    )[0]
