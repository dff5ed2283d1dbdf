"""
Subcomando `fit`: estima μ e α por ADMM e extrai o grafo de Granger.
"""

import logging
import os

from catalog import load_paths
from commands.common import (
    ExperimentConfig,
    add_execution_arguments,
    fit_model,
    parse_kernel,
    print_table,
    resolve_catalog,
    resolve_threads_arg,
    write_json,
)
from config import FIT_CONFIG
from estimation import FitConfig
from kernels import load_model
from metrics import track_stage_latency
from shared_config import parse_float_list
from simulator import load_scenario

logger = logging.getLogger("graph-attribution.fit")


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("fit", help="Ajusta o modelo a paths JSONL")
    data = parser.add_argument_group("Data")
    data.add_argument("--paths", required=True, help="Paths JSONL")
    data.add_argument("--catalog", default=None, help="Catálogo JSON")
    data.add_argument("--scenario", default=None, help="Cenário (fonte de catálogo e kernels)")
    data.add_argument("--model", default=None, help="Modelo de referência (fonte da grade de kernels)")

    fit = parser.add_argument_group("Fit")
    fit.add_argument("--kernel", default="exp_decay:10", help="Kernel SHAPE:T0 sem --model (default: exp_decay:10)")
    fit.add_argument("--gamma", type=float, default=None, help="γ fixo para todos os nós (desliga a seleção)")
    fit.add_argument(
        "--gamma-grid",
        type=str,
        default=None,
        help=f"Grid de γ separado por vírgulas (default: {FIT_CONFIG['gamma_grid']})"
    )
    fit.add_argument("--folds", type=int, default=FIT_CONFIG["cv_folds"], help="Folds da validação cruzada")
    fit.add_argument(
        "--rule",
        choices=["min", "one_se"],
        default=FIT_CONFIG["selection_rule"],
        help="Regra de seleção de γ"
    )
    fit.add_argument("--threshold", type=float, default=FIT_CONFIG["graph_threshold"], help="Limiar do grafo")
    add_execution_arguments(parser, seed_default=FIT_CONFIG["cv_seed"])
    parser.set_defaults(handler=run)


def run(args) -> bool:
    cfg = ExperimentConfig(
        paths=args.paths,
        catalog=args.catalog,
        scenario=args.scenario,
        model=args.model,
        seed=args.seed,
        out=args.out or "model.json",
        threads=resolve_threads_arg(args.threads),
    )
    catalog = resolve_catalog(cfg)
    if cfg.model is not None:
        kernels = load_model(cfg.model, catalog)
    elif cfg.scenario is not None:
        kernels = load_scenario(cfg.scenario).params
    else:
        kernels = parse_kernel(args.kernel)

    with track_stage_latency("load"):
        paths = load_paths(cfg.paths, catalog)

    grid = parse_float_list(args.gamma_grid, FIT_CONFIG["gamma_grid"]) if args.gamma is None else None
    config = FitConfig.from_config(threads=cfg.threads, graph_threshold=args.threshold)
    with track_stage_latency("fit"):
        result = fit_model(paths, catalog, kernels, config, gamma=args.gamma, grid=grid,
                           folds=args.folds, rule=args.rule, seed=cfg.seed)

    out = cfg.output_path("model.json")
    write_json(out, result.params.to_dict(catalog))
    graph = result.graph(args.threshold)
    diagnostics = result.to_dict(catalog)
    diagnostics["graph"] = graph.to_dict(catalog)
    write_json(os.path.splitext(out)[0] + ".fit.json", diagnostics)

    rows = []
    for src, dst in graph.edge_names(catalog):
        a, b = catalog.index_of(src), catalog.index_of(dst)
        rows.append([src, dst, float(result.params.alpha[a, b])])
    print_table(["from", "to", "alpha"], rows)
    print()
    print_table(
        ["node", "mu", "gamma", "iterations", "converged"],
        [
            [catalog.type_names[k], float(result.params.mu[k]), diag.gamma, diag.iterations, diag.converged]
            for k, diag in sorted(result.diagnostics.items())
        ],
    )
    return True
