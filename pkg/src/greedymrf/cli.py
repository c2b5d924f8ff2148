"""Command-line entry point: structure learning from CSV files, recovery
experiments over sample-size grids, exact-source oracle runs, and bound
reports.

Every command is deterministic given its seed; see the experiment command's
--no-timing flag for byte-identical reruns (wall-clock means are otherwise
the one non-reproducible output column).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .dataset import (
    CapacityError,
    DatasetError,
    DiscreteDataset,
    EmptyDatasetError,
    IngestOptions,
    filter_participation,
    load_csv,
    remap_values,
)
from .entropy import DistributionSource, EmpiricalSource, ExactSource, mutual_information
from .generators import (
    ModelSpec,
    build,
    model_from_strings,
    parse_model_string,
    parse_weight_string,
)
from .learner import LearnResult, LearnerConfig, chow_liu, learn_structure, prune_result
from .models import GibbsConfig, exact_joint, exact_sample, gibbs_sample, to_dot, write_edge_list
from .theory import all_bound_reports

RESULTS_HEADER = "n,epsilon,trials,successes,success_rate,mean_runtime_s"


@dataclass(frozen=True)
class ExperimentSpec:
    model: ModelSpec
    n_values: tuple[int, ...]
    epsilons: tuple[float, ...]
    trials: int = 50
    success_target: float = 0.95
    seed: int = 0
    sampler: str = "exact"
    gibbs_burn_in: int | None = None
    gibbs_thinning: int = 10

    def __post_init__(self) -> None:
        if list(self.n_values) != sorted(set(self.n_values)):
            raise ValueError("n values must be strictly ascending")
        if not self.n_values or not self.epsilons:
            raise ValueError("need at least one n and one epsilon")
        if self.trials < 1:
            raise ValueError("need trials >= 1")
        if not 0.0 < self.success_target <= 1.0:
            raise ValueError("success target must lie in (0, 1]")
        if self.sampler not in ("exact", "gibbs"):
            raise ValueError("sampler must be 'exact' or 'gibbs'")


@dataclass(frozen=True)
class CellResult:
    n: int
    epsilon: float
    trials: int
    successes: int
    success_rate: float
    mean_runtime_s: float
    mean_precision: float
    mean_recall: float


def _precision_recall(learned: set, truth: set) -> tuple[float, float]:
    hit = len(learned & truth)
    precision = hit / len(learned) if learned else 1.0
    recall = hit / len(truth) if truth else 1.0
    return precision, recall


def run_experiment(
    spec: ExperimentSpec, results_path: Path, no_timing: bool = False
) -> list[CellResult]:
    """Sweep (n, epsilon) cells, writing one CSV row per cell as it finishes
    so partial results survive a capacity failure mid-grid."""
    model = build(spec.model)
    truth = set(model.graph.edges)
    joint = exact_joint(model) if spec.sampler == "exact" else None
    cells: list[CellResult] = []
    with open(results_path, "w", encoding="utf-8") as fh:
        fh.write(RESULTS_HEADER + "\n")
        for n in spec.n_values:
            datasets: list[DiscreteDataset] = []
            for trial in range(spec.trials):
                seed = spec.seed ^ trial
                if joint is not None:
                    datasets.append(exact_sample(joint, n, seed))
                else:
                    cfg = GibbsConfig(
                        seed=seed, burn_in=spec.gibbs_burn_in, thinning=spec.gibbs_thinning
                    )
                    datasets.append(gibbs_sample(model, n, cfg))
            for eps in spec.epsilons:
                successes = 0
                runtimes = []
                precisions = []
                recalls = []
                for ds in datasets:
                    src = EmpiricalSource(ds)
                    started = time.perf_counter()
                    result = learn_structure(src, LearnerConfig(epsilon=eps))
                    runtimes.append(time.perf_counter() - started)
                    got = set(result.graph.edges)
                    successes += int(got == truth)
                    pr, rc = _precision_recall(got, truth)
                    precisions.append(pr)
                    recalls.append(rc)
                mean_rt = 0.0 if no_timing else sum(runtimes) / len(runtimes)
                cell = CellResult(
                    n=n,
                    epsilon=eps,
                    trials=spec.trials,
                    successes=successes,
                    success_rate=successes / spec.trials,
                    mean_runtime_s=mean_rt,
                    mean_precision=sum(precisions) / len(precisions),
                    mean_recall=sum(recalls) / len(recalls),
                )
                cells.append(cell)
                fh.write(
                    f"{cell.n},{cell.epsilon:.10g},{cell.trials},{cell.successes},"
                    f"{cell.success_rate:.6f},{cell.mean_runtime_s:.6f}\n"
                )
                fh.flush()
    return cells


def experiment_summary(spec: ExperimentSpec, cells: list[CellResult]) -> dict:
    """Minimal n reaching the target per epsilon (no interpolation) plus the
    best epsilon per n, with partial-recovery means logged alongside."""
    min_n: dict[str, int | None] = {}
    for eps in spec.epsilons:
        hit = [c.n for c in cells if c.epsilon == eps and c.success_rate >= spec.success_target]
        min_n[f"{eps:.10g}"] = min(hit) if hit else None
    best_eps: dict[str, float] = {}
    for n in spec.n_values:
        row = [c for c in cells if c.n == n]
        top = max(row, key=lambda c: (c.success_rate, -c.epsilon))
        best_eps[str(n)] = top.epsilon
    return {
        "model": {"family": spec.model.family, "params": list(spec.model.params)},
        "weights": {"kind": spec.model.weights.kind, "params": list(spec.model.weights.params)},
        "trials": spec.trials,
        "seed": spec.seed,
        "sampler": spec.sampler,
        "success_target": spec.success_target,
        "min_n_at_target": min_n,
        "best_epsilon_per_n": best_eps,
        "cells": [
            {
                "n": c.n,
                "epsilon": c.epsilon,
                "success_rate": c.success_rate,
                "mean_precision": c.mean_precision,
                "mean_recall": c.mean_recall,
            }
            for c in cells
        ],
    }


def _write_json(doc: dict, path: Path) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _write_trace(result: LearnResult, path: Path) -> None:
    lines = []
    for t in result.traces:
        lines.append(f"node {t.node}: stop={t.stop_reason}")
        for p in t.picks:
            lines.append(
                f"  pick {p.vertex}: H_before={p.entropy_before:.10f}"
                f" H_after={p.entropy_after:.10f}"
            )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _learner_config(args: argparse.Namespace) -> LearnerConfig:
    cap = args.max_neighborhood
    if cap is None and getattr(args, "degree_hint", None) is not None:
        cap = 2 * args.degree_hint
    return LearnerConfig(
        epsilon=args.epsilon, max_neighborhood=cap, symmetrization=args.symmetrization
    )


def _parse_map_flags(args: argparse.Namespace) -> tuple[tuple[str, str], ...]:
    rules: list[tuple[str, str]] = []
    if args.map_file:
        for line in Path(args.map_file).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise DatasetError(f"map file line without '=': {line!r}")
            src, dst = line.split("=", 1)
            rules.append((src.strip(), dst.strip()))
    for item in args.map or []:
        if "=" not in item:
            raise DatasetError(f"--map needs token=token, got {item!r}")
        src, dst = item.split("=", 1)
        rules.append((src, dst))
    return tuple(rules)


def _ingest(args: argparse.Namespace) -> DiscreteDataset:
    rules = _parse_map_flags(args)
    alphabet = tuple(args.alphabet.split(",")) if args.alphabet else None
    if args.participation is not None:
        if args.missing is None:
            raise DatasetError("--participation requires --missing to name the absent token")
        raw = load_csv(args.input)
        kept = filter_participation(raw, args.missing, args.participation)
        if rules or alphabet:
            return remap_values(kept, rules, alphabet)
        return kept
    return load_csv(args.input, IngestOptions(value_map=rules, alphabet=alphabet))


def cmd_learn(args: argparse.Namespace) -> int:
    ds = _ingest(args)
    src = EmpiricalSource(ds)
    result = learn_structure(src, _learner_config(args))
    if args.prune:
        result = prune_result(src, result)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    doc = result.to_dict()
    doc["variable_names"] = list(ds.names)
    _write_json(doc, out / "result.json")
    (out / "graph.dot").write_text(to_dot(result.graph, ds.names), encoding="utf-8")
    write_edge_list(result.graph, out / "graph.edges")
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    model = model_from_strings(args.model, args.theta)
    src: DistributionSource = ExactSource(exact_joint(model))
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if args.chow_liu:
        tree = chow_liu(src)
        doc = {
            "mode": "chow_liu",
            "num_vars": tree.p,
            "edges": [list(e) for e in tree.sorted_edges()],
        }
        _write_json(doc, out / "result.json")
        lines = [
            f"edge {u} {v}: mutual_information={mutual_information(src, u, v):.10f}"
            for u, v in tree.sorted_edges()
        ]
        (out / "trace.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
        (out / "graph.dot").write_text(to_dot(tree), encoding="utf-8")
        write_edge_list(tree, out / "graph.edges")
        return 0
    result = learn_structure(src, _learner_config(args))
    if args.prune:
        result = prune_result(src, result)
    doc = result.to_dict()
    doc["mode"] = "greedy"
    doc["true_edges"] = [list(e) for e in model.graph.sorted_edges()]
    _write_json(doc, out / "result.json")
    _write_trace(result, out / "trace.txt")
    (out / "graph.dot").write_text(to_dot(result.graph), encoding="utf-8")
    write_edge_list(result.graph, out / "graph.edges")
    return 0


def cmd_experiment(args: argparse.Namespace) -> int:
    fam, params = parse_model_string(args.model)
    spec = ExperimentSpec(
        model=ModelSpec(fam, params, parse_weight_string(args.theta)),
        n_values=tuple(int(x) for x in args.n.split(",")),
        epsilons=tuple(float(x) for x in args.epsilon.split(",")),
        trials=args.trials,
        success_target=args.success_target,
        seed=args.seed,
        sampler=args.sampler,
        gibbs_burn_in=args.gibbs_burn_in,
        gibbs_thinning=args.gibbs_thinning,
    )
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cells = run_experiment(spec, out / "results.csv", no_timing=args.no_timing)
    _write_json(experiment_summary(spec, cells), out / "summary.json")
    return 0


def cmd_bounds(args: argparse.Namespace) -> int:
    reports = all_bound_reports(
        epsilon=args.epsilon,
        beta=args.beta,
        gamma=args.gamma,
        max_degree=args.max_degree,
        alphabet_size=args.alphabet_size,
        num_vars=args.num_vars,
        delta=args.delta,
        log_base2=not args.natural_log,
    )
    if not reports:
        print(
            "bounds: nothing to compute; supply --epsilon/--max-degree/--alphabet-size "
            "and/or --beta/--max-degree (see --help)",
            file=sys.stderr,
        )
        return 2
    if args.json:
        doc = {
            "inputs": {
                k: v
                for k, v in {
                    "epsilon": args.epsilon,
                    "beta": args.beta,
                    "gamma": args.gamma,
                    "max_degree": args.max_degree,
                    "alphabet_size": args.alphabet_size,
                    "num_vars": args.num_vars,
                    "delta": args.delta,
                }.items()
                if v is not None
            },
            "reports": [
                {"name": r.name, "value": r.value, "formula": r.formula, "inputs": r.inputs}
                for r in reports
            ],
        }
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        width = max(len(r.name) for r in reports)
        for r in reports:
            print(f"{r.name:<{width}}  {r.value:.12g}    [{r.formula}]")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="greedymrf",
        description="Markov-network structure learning by greedy conditional-entropy descent.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_learner_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--epsilon", type=float, required=True, help="stopping threshold input")
        p.add_argument("--max-neighborhood", type=int, default=None, help="per-node pick cap")
        p.add_argument(
            "--degree-hint", type=int, default=None,
            help="expected max degree; caps picks at twice this when --max-neighborhood is unset",
        )
        p.add_argument("--symmetrization", choices=("AND", "OR"), default="AND")
        p.add_argument("--prune", action="store_true", help="apply the pruning post-process")
        p.add_argument("--out-dir", default=".", help="directory for output files")

    p_learn = sub.add_parser("learn", help="learn a graph from a CSV dataset")
    p_learn.add_argument("input", help="CSV file: header row of names, one sample per row")
    add_learner_flags(p_learn)
    p_learn.add_argument("--map", action="append", metavar="TOK=TOK",
                         help="token remap rule, applied in order (repeatable)")
    p_learn.add_argument("--map-file", default=None, help="file of token=token lines")
    p_learn.add_argument("--alphabet", default=None, help="explicit comma-separated alphabet")
    p_learn.add_argument("--missing", default=None, help="token marking a missing observation")
    p_learn.add_argument("--participation", type=float, default=None,
                         help="drop columns whose non-missing fraction is below this")
    p_learn.set_defaults(func=cmd_learn)

    p_oracle = sub.add_parser("oracle", help="run the learner on an exact joint table")
    p_oracle.add_argument("--model", required=True,
                          help="grid:K | chain:P | cycle:P | tree:D,DEPTH | counterexample:D | er:P,PROB,SEED")
    p_oracle.add_argument("--theta", required=True,
                          help="const:T | uniform:LO,HI,SEED | randsign:T,SEED")
    p_oracle.add_argument("--chow-liu", action="store_true",
                          help="emit the mutual-information spanning tree instead")
    add_learner_flags(p_oracle)
    p_oracle.set_defaults(func=cmd_oracle)

    p_exp = sub.add_parser("experiment", help="success-probability sweep over sample counts")
    p_exp.add_argument("--model", required=True)
    p_exp.add_argument("--theta", required=True)
    p_exp.add_argument("--n", required=True, help="comma-separated ascending sample counts")
    p_exp.add_argument("--epsilon", required=True, help="comma-separated threshold sweep")
    p_exp.add_argument("--trials", type=int, default=50)
    p_exp.add_argument("--success-target", type=float, default=0.95)
    p_exp.add_argument("--seed", type=int, default=0)
    p_exp.add_argument("--sampler", choices=("exact", "gibbs"), default="exact")
    p_exp.add_argument("--gibbs-burn-in", type=int, default=None, help="sweeps; default 1000*p")
    p_exp.add_argument("--gibbs-thinning", type=int, default=10, help="sweeps between samples")
    p_exp.add_argument("--no-timing", action="store_true",
                       help="write 0.0 runtimes so reruns are byte-identical")
    p_exp.add_argument("--out-dir", default=".")
    p_exp.set_defaults(func=cmd_experiment)

    p_bounds = sub.add_parser("bounds", help="print the closed-form guarantee values")
    p_bounds.add_argument("--epsilon", type=float, default=None)
    p_bounds.add_argument("--beta", type=float, default=None)
    p_bounds.add_argument("--gamma", type=float, default=None)
    p_bounds.add_argument("--max-degree", type=int, default=None)
    p_bounds.add_argument("--alphabet-size", type=int, default=None)
    p_bounds.add_argument("--num-vars", type=int, default=None)
    p_bounds.add_argument("--delta", type=float, default=None)
    p_bounds.add_argument("--natural-log", action="store_true",
                          help="evaluate the sample bound's logs as natural logs")
    p_bounds.add_argument("--json", action="store_true")
    p_bounds.set_defaults(func=cmd_bounds)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DatasetError, EmptyDatasetError, CapacityError, ValueError, OSError) as exc:
        print(f"greedymrf {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
