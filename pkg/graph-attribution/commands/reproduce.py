"""
Subcomando `reproduce`: estudo Hawkes DRE vs TRE em múltiplas execuções.

Por execução: simula o cenário com seed derivado, calcula a CCC com
execuções z-off acopladas, ajusta o modelo (γ por validação cruzada ou
fixo), pontua TRE e DRE por canal, agrega e compara com KL e Hellinger.
Falha em qualquer estágio aborta só aquela execução e fica registrada.
"""

import logging
import os
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence

from attribution import GRANULARITY_CHANNEL, METHOD_DRE, METHOD_TRE, score_paths
from commands.common import (
    ExperimentConfig,
    add_execution_arguments,
    fit_model,
    print_table,
    resolve_threads_arg,
    write_json,
)
from config import FIT_CONFIG, REPRODUCE_CONFIG
from errors import GraphAttributionError
from estimation import FitConfig
from evaluation import Evaluation, RunSummary, evaluate_reports, summarize_runs
from metrics import track_pipeline_error, track_stage_latency
from shared_config import parse_float_list
from simulator import Scenario, derived_seed, ground_truth_all, load_scenario, simulate_paths
from utils.logging import RunLoggerAdapter, get_run_logger

logger = logging.getLogger("graph-attribution.reproduce")

# chave de derivação do seed de folds, separada do seed da simulação
FOLD_SEED_KEY = 1


@dataclass
class RunRecord:
    """Resultado de uma execução (evaluation None se falhou)."""
    run: int
    seed: int
    evaluation: Optional[Evaluation] = None
    stage: str = ""
    error: Optional[dict] = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        data = {"run": self.run, "seed": self.seed, **self.details}
        if self.evaluation is not None:
            data["evaluation"] = self.evaluation.to_dict()
        if self.error is not None:
            data["failed_stage"] = self.stage
            data["error"] = self.error
        return data


def run_once(
    scenario: Scenario,
    run_index: int,
    seed: int,
    config: FitConfig,
    gamma: Optional[float],
    grid: Sequence[float],
    folds: int,
    rule: str,
    n_runs: Optional[int] = None,
) -> RunRecord:
    """Uma execução completa; erros do domínio viram registro de falha."""
    run_seed = derived_seed(seed, run_index)
    record = RunRecord(run=run_index, seed=run_seed)
    run_logger = get_run_logger("graph-attribution.reproduce", run_index=run_index, n_runs=n_runs, seed=run_seed)
    sc = scenario.with_overrides(master_seed=run_seed)
    catalog = sc.catalog
    threads = config.threads

    @contextmanager
    def stage(name: str) -> Iterator[RunLoggerAdapter]:
        record.stage = name
        with track_stage_latency(name), run_logger.timed(name) as log:
            yield log

    try:
        with stage("simulate") as log:
            paths, stats = simulate_paths(sc, threads=threads)
            log.info(f"{stats.n_paths} paths, {stats.positive_paths} positivos")
        record.details["simulation"] = stats.to_dict()

        with stage("ground_truth") as log:
            truth = ground_truth_all(sc, threads=threads, base_paths=paths)
            log.info(f"CCC {truth.ccc}")
        record.details["ground_truth"] = truth.to_dict()

        with stage("fit") as log:
            fit = fit_model(paths, catalog, sc.params, config, gamma=gamma, grid=grid,
                            folds=folds, rule=rule, seed=derived_seed(seed, run_index, FOLD_SEED_KEY))
            graph = fit.graph(config.graph_threshold)
            log.info(f"{len(graph.edges)} arestas no grafo ajustado")
        record.details["graph"] = graph.to_dict(catalog)
        record.details["gamma"] = {catalog.type_names[k]: d.gamma for k, d in sorted(fit.diagnostics.items())}

        with stage("attribute") as log:
            reports = []
            for method in (METHOD_TRE, METHOD_DRE):
                reports.extend(score_paths(paths, fit.params, catalog, method, GRANULARITY_CHANNEL,
                                           threads=threads))
            log.info(f"{len(reports)} relatórios")

        with stage("evaluate"):
            record.evaluation = evaluate_reports(truth, reports)
        record.stage = ""
    except GraphAttributionError as e:
        track_pipeline_error(record.stage)
        record.error = e.to_dict()
        run_logger.error(f"Execução falhou: {e.message}", extra={"stage": record.stage})
    return record


def reproduce_hawkes(
    scenario: Scenario,
    runs: int,
    seed: int,
    config: FitConfig,
    gamma: Optional[float] = None,
    grid: Optional[Sequence[float]] = None,
    folds: Optional[int] = None,
    rule: Optional[str] = None,
):
    """Executa `runs` execuções independentes; retorna (resumo, registros).

    O resumo é None se todas as execuções falharam.
    """
    grid = list(FIT_CONFIG["gamma_grid"]) if grid is None else list(grid)
    folds = FIT_CONFIG["cv_folds"] if folds is None else folds
    rule = FIT_CONFIG["selection_rule"] if rule is None else rule

    logger.info(f"{runs} execuções a partir do seed {seed}")
    records: List[RunRecord] = []
    for run_index in range(runs):
        records.append(run_once(scenario, run_index, seed, config, gamma, grid, folds, rule, n_runs=runs))

    evaluations = [r.evaluation for r in records]
    summary: Optional[RunSummary] = None
    if any(e is not None for e in evaluations):
        summary = summarize_runs(evaluations)
    return summary, records


def summary_rows(summary: RunSummary) -> List[list]:
    """Linhas da tabela: média (erro padrão) das proporções, KL e Hellinger."""
    def fmt(pair) -> str:
        return f"{pair[0]:.4f} ({pair[1]:.4f})"

    rows = [["truth"] + [fmt(summary.truth[z]) for z in summary.channel_names] + ["-", "-"]]
    for method, stats in summary.methods.items():
        rows.append(
            [method]
            + [fmt(stats["proportions"][z]) for z in summary.channel_names]
            + [fmt(stats["kl"]), fmt(stats["hellinger"])]
        )
    return rows


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("reproduce", help="Estudo DRE vs TRE em múltiplas execuções")
    parser.add_argument(
        "--scenario",
        default=REPRODUCE_CONFIG["scenario"],
        help="Cenário JSON (default: scenarios/display_search.json)"
    )
    parser.add_argument("--runs", type=int, default=REPRODUCE_CONFIG["runs"], help="Número de execuções")
    parser.add_argument("--n-paths", type=int, default=None, help="Sobrescreve n_paths do cenário")
    parser.add_argument("--gamma", type=float, default=None, help="γ fixo (desliga a validação cruzada)")
    parser.add_argument("--gamma-grid", type=str, default=None, help="Grid de γ separado por vírgulas")
    parser.add_argument("--folds", type=int, default=FIT_CONFIG["cv_folds"], help="Folds da validação cruzada")
    add_execution_arguments(parser, seed_default=REPRODUCE_CONFIG["seed"])
    parser.set_defaults(handler=run)


def run(args) -> bool:
    cfg = ExperimentConfig(
        scenario=args.scenario,
        seed=args.seed,
        runs=args.runs,
        out=args.out,
        threads=resolve_threads_arg(args.threads),
    )
    scenario = load_scenario(cfg.scenario).with_overrides(n_paths=args.n_paths)
    grid = parse_float_list(args.gamma_grid, FIT_CONFIG["gamma_grid"])
    config = FitConfig.from_config(threads=cfg.threads)

    summary, records = reproduce_hawkes(scenario, cfg.runs, cfg.seed, config, args.gamma, grid, args.folds)

    payload = {
        "scenario": cfg.scenario,
        "seed": cfg.seed,
        "n_paths": scenario.n_paths,
        "summary": summary.to_dict() if summary else None,
        "runs": [r.to_dict() for r in records],
    }
    write_json(os.path.join(cfg.output_dir("reproduce"), "summary.json"), payload)

    failed = [r for r in records if r.error is not None]
    for r in failed:
        print(f"Execução {r.run} falhou em '{r.stage}': {r.error.get('message')}")
    if summary is None:
        return False

    print_table(["method"] + summary.channel_names + ["kl", "hellinger"], summary_rows(summary))
    print()
    print_table(
        ["method", "kl_on_mean", "hellinger_on_mean"],
        [[m, s["kl_on_mean"], s["hellinger_on_mean"]] for m, s in summary.methods.items()],
    )
    return not failed
