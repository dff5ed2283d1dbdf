"""
Subcomando `simulate`: gera paths JSONL a partir de um cenário.
"""

import logging
import os

from catalog import dump_paths
from commands.common import (
    ExperimentConfig,
    add_execution_arguments,
    print_table,
    resolve_disabled,
    resolve_threads_arg,
    write_json,
)
from metrics import track_stage_latency
from simulator import load_scenario, simulate_paths

logger = logging.getLogger("graph-attribution.simulate")


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("simulate", help="Simula paths de um cenário")
    parser.add_argument("--scenario", required=True, help="Cenário JSON")
    parser.add_argument("--n-paths", type=int, default=None, help="Sobrescreve n_paths do cenário")
    parser.add_argument(
        "--disable",
        action="append",
        default=[],
        help="Tipo ou canal desabilitado na geração (repetível)"
    )
    add_execution_arguments(parser, seed_default=None)
    parser.set_defaults(handler=run)


def run(args) -> bool:
    cfg = ExperimentConfig(
        scenario=args.scenario,
        seed=args.seed or 0,
        out=args.out or "paths.jsonl",
        threads=resolve_threads_arg(args.threads),
    )
    scenario = load_scenario(cfg.scenario).with_overrides(n_paths=args.n_paths, master_seed=args.seed)
    disabled = resolve_disabled(scenario.catalog, args.disable)

    with track_stage_latency("simulate"):
        paths, stats = simulate_paths(scenario, disabled, threads=cfg.threads,
                                      kind="counterfactual" if disabled else "base")

    out = cfg.output_path("paths.jsonl")
    with open(out, "w", encoding="utf-8") as f:
        dump_paths(paths, scenario.catalog, f)
    write_json(os.path.splitext(out)[0] + ".stats.json", stats.to_dict())
    logger.info(f"{stats.n_paths} paths escritos em {out} ({stats.positive_share:.1%} positivos)")

    print_table(
        ["type", "initiator", "events"],
        [
            [name, scenario.catalog.initiator(k), stats.events_per_type[name]]
            for k, name in enumerate(scenario.catalog.type_names)
        ],
    )
    return True
