"""
Subcomando `baselines`: regras, logística e Markov no esquema de relatório.
"""

import logging

from attribution import dump_reports
from baselines import BaselineSpec, baseline_reports
from catalog import load_paths
from commands.common import (
    ExperimentConfig,
    add_execution_arguments,
    print_table,
    resolve_catalog,
    resolve_threads_arg,
)
from errors import GraphAttributionError
from evaluation import aggregate_cas
from metrics import track_stage_latency

logger = logging.getLogger("graph-attribution.baselines")


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("baselines", help="Atribuição por métodos de referência")
    parser.add_argument(
        "--method",
        action="append",
        required=True,
        help="last | first | linear | decay[:HALF_LIFE] | u_shaped | logistic | markov (repetível)"
    )
    parser.add_argument("--paths", required=True, help="Paths JSONL")
    parser.add_argument("--catalog", default=None, help="Catálogo JSON")
    parser.add_argument("--scenario", default=None, help="Cenário (fonte do catálogo)")
    add_execution_arguments(parser)
    parser.set_defaults(handler=run)


def run(args) -> bool:
    cfg = ExperimentConfig(
        paths=args.paths,
        catalog=args.catalog,
        scenario=args.scenario,
        methods=args.method,
        out=args.out or "baselines.jsonl",
        threads=resolve_threads_arg(args.threads),
    )
    catalog = resolve_catalog(cfg)
    with track_stage_latency("load"):
        paths = load_paths(cfg.paths, catalog)

    reports = []
    rows = []
    for name in cfg.methods:
        spec = BaselineSpec.from_name(name)
        with track_stage_latency("baselines"):
            method_reports = baseline_reports(paths, catalog, spec, cfg.threads)
        reports.extend(method_reports)
        try:
            cas = aggregate_cas(method_reports, catalog.channel_names, spec.label)
            rows.append([spec.label] + [float(p) for p in cas.proportions])
        except GraphAttributionError as e:
            logger.warning(f"Proporções indefinidas para {spec.label}: {e.message}")
            rows.append([spec.label] + ["-"] * catalog.n_channels)

    out = cfg.output_path("baselines.jsonl")
    with open(out, "w", encoding="utf-8") as f:
        dump_reports(reports, f)
    logger.info(f"{len(reports)} relatórios escritos em {out}")

    print_table(["method"] + list(catalog.channel_names), rows)
    return True
