"""Command-line front end.

Subcommands: trim, decompose, deps, candidates, label, oracle, render,
selftest, bench.  All output is deterministic for fixed inputs and seeds;
values print as exact decimals or fractions.  Exit codes: 0 success,
1 failed check, 2 bad input, 3 budget/size refusal.

Budget defaults come from the environment: TRIMLABEL_BUDGET caps exact-solver
steps, TRIMLABEL_CANDIDATE_CAP caps candidate-set size.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from .discretize import candidate_positions, dependency_graph, stopping_set
from .errors import BudgetExceeded, InputError, TrimLabelError
from .exact import format_exact, parse_exact
from .fileio import (
    dump_decomposition,
    dump_graph,
    dump_instance,
    dump_labeling,
    dump_vertex_set,
    load_decomposition,
    load_graph,
    load_instance,
    load_labeling,
)
from .graphs import build_tree_decomposition, elongation, longest_simple_path, width
from .labeling import AnchorLabeling, Labeling, anchor_weight, weight_of
from .render import render_svg
from .selftest import run_selftest
from .solve import (
    DEFAULT_SOLVER_BUDGET,
    exact_1sh,
    exact_multipos,
    ptas_1sh_result,
    ptas_2sh_result,
    ptas_4s_result,
)
from .trimming import TrimReport, is_trimming, level_trimming

VERIFY_VERTEX_LIMIT = 16


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _write(path: str, text: str) -> None:
    with open(path, "w", newline="\n") as handle:
        handle.write(text)


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"environment variable {name} must be an integer, got {raw!r}")


def _parse_g_mode(text: str):
    if text in ("theory", "exhaustive"):
        return text
    if text.startswith("fixed:"):
        try:
            return int(text.split(":", 1)[1])
        except ValueError:
            pass
    raise InputError(f"--g-mode must be theory, exhaustive or fixed:<int>, got {text!r}")


def cmd_trim(args) -> int:
    graph = load_graph(_read(args.graph))
    if args.decomposition:
        decomposition = load_decomposition(_read(args.decomposition))
    else:
        mode = args.auto or ("exact-tiny" if graph.n <= 12 else "min-fill-heuristic")
        decomposition = build_tree_decomposition(graph, mode)
    removed, params = level_trimming(graph, decomposition, args.t)
    report = TrimReport(
        total_weight=graph.total_weight,
        t=args.t,
        k=params.k,
        s=params.s,
        g=params.g,
        removed_count=len(removed),
        removed_weight=graph.weight_of(removed),
    )
    print(report.render())
    if args.output:
        _write(args.output, dump_vertex_set(removed))
    if graph.n <= VERIFY_VERTEX_LIMIT:
        try:
            verified = is_trimming(graph, removed, args.t, params.g)
        except BudgetExceeded:
            print("verification skipped (path-search budget)")
            return 0
        print(f"verified {'yes' if verified else 'NO'}")
        return 0 if verified else 1
    print("verification skipped (graph too large)")
    return 0


def cmd_decompose(args) -> int:
    graph = load_graph(_read(args.graph))
    mode = args.mode or ("exact-tiny" if graph.n <= 12 else "min-fill-heuristic")
    decomposition = build_tree_decomposition(graph, mode)
    print(f"mode {mode}")
    print(f"width {width(decomposition)}")
    print(f"elongation {elongation(decomposition)}")
    text = dump_decomposition(decomposition)
    if args.output:
        _write(args.output, text)
    else:
        print(text, end="")
    return 0


def cmd_deps(args) -> int:
    instance = load_instance(_read(args.instance))
    labeling = load_labeling(_read(args.labeling))
    if not isinstance(labeling, Labeling):
        raise InputError("deps expects a sliding labeling ('lab' lines)")
    stops = stopping_set(instance, [parse_exact(s) for s in args.stop])
    graph = dependency_graph(instance, labeling, stops)
    weighted, ids = graph.as_weighted_graph()
    print(dump_graph(weighted), end="")
    print("# edge-length annex: len <p> <q> <length of p's label>")
    for idx, pid in enumerate(ids):
        print(f"# vertex {idx} = point {pid}")
    index = {pid: idx for idx, pid in enumerate(ids)}
    for (p, q), length in zip(graph.edges, graph.lengths):
        print(f"len {index[p]} {index[q]} {format_exact(length)}")
    return 0


def cmd_candidates(args) -> int:
    instance = load_instance(_read(args.instance))
    cap = args.cap or _env_int("TRIMLABEL_CANDIDATE_CAP", 200_000)
    cands = candidate_positions(
        instance, [parse_exact(s) for s in args.stop], args.g, max_size=cap
    )
    for value in cands.values:
        print(format_exact(value))
    return 0


def cmd_label(args) -> int:
    instance = load_instance(_read(args.instance))
    epsilon = parse_exact(args.epsilon)
    g_mode = _parse_g_mode(args.g_mode)
    budget = args.budget or _env_int("TRIMLABEL_BUDGET", DEFAULT_SOLVER_BUDGET)
    cap = args.candidate_cap or _env_int("TRIMLABEL_CANDIDATE_CAP", 200_000)
    runners = {"1sh": ptas_1sh_result, "2sh": ptas_2sh_result, "4s": ptas_4s_result}
    labeling, report = runners[args.model](
        instance, epsilon, g_mode, budget=budget, candidate_cap=cap
    )
    print(f"model {report.model}")
    print(f"epsilon {format_exact(report.epsilon)}")
    print(f"t {report.t}")
    print(f"g-mode {report.g_mode}")
    print(f"g {report.g}")
    print(f"candidates {report.candidate_count}")
    print(f"solver {report.solver}")
    if report.band_count is not None:
        print(f"offsets-tried {report.band_count}")
        print(f"best-offset {report.best_offset}")
    print(f"labeled {len(labeling.assignments)}")
    print(f"weight {format_exact(report.weight)}")
    if args.verify_oracle:
        if instance.size > 7:
            raise BudgetExceeded("oracle verification refused beyond 7 points")
        optimum = weight_of(instance, exact_1sh(instance))
        print(f"oracle-1sh {format_exact(optimum)}")
        if args.model == "1sh":
            ratio = Fraction(1) if optimum == 0 else report.weight / optimum
            print(f"ratio {format_exact(ratio)}")
    if args.output:
        _write(args.output, dump_labeling(labeling))
    else:
        print(dump_labeling(labeling), end="")
    return 0


def cmd_oracle(args) -> int:
    instance = load_instance(_read(args.instance))
    labeling = exact_1sh(instance, max_points=args.max_points, budget=args.budget)
    print(f"model 1sh")
    print(f"weight {format_exact(weight_of(instance, labeling))}")
    print(f"labeled {len(labeling.assignments)}")
    if args.output:
        _write(args.output, dump_labeling(labeling))
    else:
        print(dump_labeling(labeling), end="")
    return 0


def cmd_render(args) -> int:
    instance = load_instance(_read(args.instance))
    labeling = load_labeling(_read(args.labeling))
    svg = render_svg(instance, labeling)
    if args.output:
        _write(args.output, svg)
    else:
        print(svg, end="")
    return 0


def cmd_selftest(args) -> int:
    return run_selftest(args.seed, args.trials, args.max_n)


def cmd_bench(args) -> int:
    # Deterministic workload metrics only; wall time goes to stderr on request
    # because timings are not reproducible byte for byte.
    from random import Random

    from .generators import random_decomposed_graph, random_label_instance

    rng = Random(args.seed)
    started = time.perf_counter()
    print("benchmark candidate-growth")
    instance = random_label_instance(rng, 6, min_points=6)
    for g in range(0, 5):
        cands = candidate_positions(instance, (), g)
        print(f"g {g} candidates {len(cands.values)}")
    print("benchmark trimming")
    for trial in range(args.trials):
        graph, decomposition = random_decomposed_graph(rng, 12)
        removed, params = level_trimming(graph, decomposition, 2)
        remaining, _ = graph.minus(removed)
        print(
            f"trial {trial} n {graph.n} removed {len(removed)} "
            f"g {params.g} longest {longest_simple_path(remaining)}"
        )
    print("benchmark exact-labeling")
    for trial in range(args.trials):
        instance = random_label_instance(rng, 5)
        labeling = exact_1sh(instance)
        print(
            f"trial {trial} n {instance.size} labeled {len(labeling.assignments)} "
            f"weight {format_exact(weight_of(instance, labeling))}"
        )
    if args.timings:
        print(f"elapsed {time.perf_counter() - started:.3f}s", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trimlabel",
        description="Graph trimming and sliding-label placement toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trim", help="level-trim a graph given a tree decomposition")
    p.add_argument("graph")
    p.add_argument("--decomposition", help="decomposition file; omit to build one")
    p.add_argument(
        "--auto",
        choices=("exact-tiny", "min-fill-heuristic"),
        help="decomposition mode when building one",
    )
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--output", help="write the removed vertex set here")
    p.set_defaults(func=cmd_trim)

    p = sub.add_parser("decompose", help="build a tree decomposition")
    p.add_argument("graph")
    p.add_argument("--mode", choices=("exact-tiny", "min-fill-heuristic"))
    p.add_argument("--output")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("deps", help="dependency graph of a labeling")
    p.add_argument("instance")
    p.add_argument("labeling")
    p.add_argument("--stop", action="append", default=[], metavar="X")
    p.set_defaults(func=cmd_deps)

    p = sub.add_parser("candidates", help="candidate label positions")
    p.add_argument("instance")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--stop", action="append", default=[], metavar="X")
    p.add_argument("--cap", type=int)
    p.set_defaults(func=cmd_candidates)

    p = sub.add_parser("label", help="run a labeling scheme")
    p.add_argument("instance")
    p.add_argument("--model", choices=("1sh", "2sh", "4s"), default="1sh")
    p.add_argument("--epsilon", default="1/2")
    p.add_argument("--g-mode", default="exhaustive")
    p.add_argument("--budget", type=int)
    p.add_argument("--candidate-cap", type=int)
    p.add_argument("--verify-oracle", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("oracle", help="exact optimum by brute force")
    p.add_argument("instance")
    p.add_argument("--max-points", type=int, default=7)
    p.add_argument("--budget", type=int, default=DEFAULT_SOLVER_BUDGET)
    p.add_argument("--output")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("render", help="render a labeling as SVG")
    p.add_argument("instance")
    p.add_argument("labeling")
    p.add_argument("--output")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("selftest", help="run the seeded invariant suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=25)
    p.add_argument("--max-n", type=int, default=8)
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("bench", help="deterministic benchmark workload")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--timings", action="store_true", help="wall time on stderr")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 3
    except (InputError, TrimLabelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
