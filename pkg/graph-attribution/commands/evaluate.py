"""
Subcomandos `ground-truth` (CCC contrafactual) e `evaluate` (CAS vs CCC).
"""

import logging

from attribution import load_reports
from commands.common import (
    ExperimentConfig,
    add_execution_arguments,
    print_table,
    read_json,
    resolve_threads_arg,
    write_json,
)
from evaluation import evaluate_reports
from metrics import track_stage_latency
from simulator import GroundTruth, ground_truth_all, load_scenario

logger = logging.getLogger("graph-attribution.evaluate")


def add_ground_truth_parser(subparsers) -> None:
    parser = subparsers.add_parser("ground-truth", help="CCC por canal via execuções z-off acopladas")
    parser.add_argument("--scenario", required=True, help="Cenário JSON")
    parser.add_argument("--n-paths", type=int, default=None, help="Sobrescreve n_paths do cenário")
    add_execution_arguments(parser, seed_default=None)
    parser.set_defaults(handler=run_ground_truth)


def run_ground_truth(args) -> bool:
    cfg = ExperimentConfig(
        scenario=args.scenario,
        seed=args.seed or 0,
        out=args.out or "ccc.json",
        threads=resolve_threads_arg(args.threads),
    )
    scenario = load_scenario(cfg.scenario).with_overrides(n_paths=args.n_paths, master_seed=args.seed)
    with track_stage_latency("ground_truth"):
        truth = ground_truth_all(scenario, threads=cfg.threads)
    write_json(cfg.output_path("ccc.json"), truth.to_dict())

    proportions = truth.proportions() or {}
    print_table(
        ["channel", "conversions_off", "ccc", "proportion"],
        [
            [z, truth.conversions_off[z], truth.ccc[z], proportions.get(z, "-")]
            for z in truth.channel_names
        ],
    )
    print(f"\nConversões (base): {truth.total_conversions}")
    return True


def add_evaluate_parser(subparsers) -> None:
    parser = subparsers.add_parser("evaluate", help="Compara CAS de relatórios com a ground truth")
    parser.add_argument("--truth", required=True, help="ccc.json (saída de ground-truth)")
    parser.add_argument("--scores", action="append", required=True, help="Relatório JSONL (repetível)")
    add_execution_arguments(parser)
    parser.set_defaults(handler=run_evaluate)


def run_evaluate(args) -> bool:
    cfg = ExperimentConfig(truth=args.truth, scores=args.scores, out=args.out or "metrics.json")
    truth = GroundTruth.from_dict(read_json(cfg.truth))
    reports = [r for path in cfg.scores for r in load_reports(path)]

    with track_stage_latency("evaluate"):
        evaluation = evaluate_reports(truth, reports)
    write_json(cfg.output_path("metrics.json"), evaluation.to_dict())

    names = list(truth.channel_names)
    rows = [["truth"] + [float(p) for p in evaluation.truth.proportions] + ["-", "-"]]
    for method, ev in evaluation.methods.items():
        rows.append([method] + [float(p) for p in ev.distribution.proportions] + [ev.kl, ev.hellinger])
    print_table(["method"] + names + ["kl", "hellinger"], rows)
    return True
