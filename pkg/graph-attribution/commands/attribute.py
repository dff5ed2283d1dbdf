"""
Subcomando `attribute`: pontua cada conversão com DRE ou TRE.
"""

import logging

from attribution import GRANULARITIES, GRANULARITY_TOUCHPOINT, METHODS, dump_reports, score_paths
from catalog import load_paths
from commands.common import (
    ExperimentConfig,
    add_execution_arguments,
    print_table,
    resolve_catalog,
    resolve_threads_arg,
)
from config import ATTRIBUTION_CONFIG
from evaluation import aggregate_cas
from kernels import load_model
from metrics import track_stage_latency

logger = logging.getLogger("graph-attribution.attribute")


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("attribute", help="Atribuição DRE/TRE por conversão")
    parser.add_argument("--model", required=True, help="Modelo JSON (saída de fit)")
    parser.add_argument("--paths", required=True, help="Paths JSONL")
    parser.add_argument("--catalog", default=None, help="Catálogo JSON")
    parser.add_argument("--scenario", default=None, help="Cenário (fonte do catálogo)")
    parser.add_argument(
        "--method",
        choices=list(METHODS),
        default=ATTRIBUTION_CONFIG["method"],
        help=f"Método (default: {ATTRIBUTION_CONFIG['method']})"
    )
    parser.add_argument(
        "--granularity",
        choices=list(GRANULARITIES),
        default=GRANULARITY_TOUCHPOINT,
        help="touchpoint inclui scores por evento; channel só por canal"
    )
    parser.add_argument(
        "--replicates",
        type=int,
        default=ATTRIBUTION_CONFIG["thinning_replicates"],
        help="Réplicas L do thinning (somente tre-thinning)"
    )
    add_execution_arguments(parser)
    parser.set_defaults(handler=run)


def run(args) -> bool:
    cfg = ExperimentConfig(
        model=args.model,
        paths=args.paths,
        catalog=args.catalog,
        scenario=args.scenario,
        methods=[args.method],
        seed=args.seed,
        out=args.out or "report.jsonl",
        threads=resolve_threads_arg(args.threads),
    )
    catalog = resolve_catalog(cfg)
    params = load_model(cfg.model, catalog)
    with track_stage_latency("load"):
        paths = load_paths(cfg.paths, catalog)

    with track_stage_latency("attribute"):
        reports = score_paths(paths, params, catalog, args.method, args.granularity,
                              args.replicates, cfg.seed, cfg.threads)

    out = cfg.output_path("report.jsonl")
    with open(out, "w", encoding="utf-8") as f:
        dump_reports(reports, f)
    logger.info(f"{len(reports)} relatórios escritos em {out}")

    if not reports:
        print("Nenhuma conversão encontrada")
        return True
    cas = aggregate_cas(reports, catalog.channel_names, args.method)
    print_table(
        ["channel", "cas", "proportion"],
        [[z, float(raw), float(p)] for z, raw, p in zip(cas.channel_names, cas.raw, cas.proportions)],
    )
    return True
