"""
Execução de baselines no esquema de AttributionReport.

Regras e logística: um relatório por conversão, scores por canal somando
os touchpoints do canal. Markov: um único relatório agregado (path_id "*").
"""

import logging
from typing import Callable, Dict, List, Sequence

from attribution.report import AGGREGATE_PATH_ID, AttributionReport, TouchpointScore
from baselines.logistic import logistic_attribution
from baselines.markov import markov_removal
from baselines.rules import MARKOV, BaselineSpec, rule_score
from catalog import EventCatalog, Path
from config import EXECUTION_CONFIG
from metrics import track_conversions_scored
from utils.parallel import parallel_map

logger = logging.getLogger("graph-attribution.baselines")

Scorer = Callable[[Path, int], Dict[int, float]]


def _report(path: Path, catalog: EventCatalog, target: int, method: str, scores: Dict[int, float]) -> AttributionReport:
    channels = {name: 0.0 for name in catalog.channel_names}
    touchpoints = []
    for i, score in scores.items():
        ev = path.events[i]
        channels[catalog.channel_names[catalog.channel_of[ev.e]]] += score
        touchpoints.append(TouchpointScore(i, ev.t, catalog.type_names[ev.e], score))
    return AttributionReport(
        path_id=path.path_id,
        method=method,
        conversion_position=target,
        conversion_time=path.events[target].t,
        touchpoints=touchpoints,
        channel_scores=channels,
    )


def baseline_reports(
    paths: Sequence[Path],
    catalog: EventCatalog,
    spec: BaselineSpec,
    threads: int = -1,
) -> List[AttributionReport]:
    """Relatórios do baseline `spec` sobre os paths, na ordem dos paths."""
    if spec.method == MARKOV:
        effects = markov_removal(paths, catalog)
        track_conversions_scored(MARKOV, sum(len(p.conversion_positions) for p in paths))
        return [AttributionReport(
            path_id=AGGREGATE_PATH_ID,
            method=MARKOV,
            conversion_position=-1,
            conversion_time=None,
            channel_scores=effects,
        )]

    if spec.is_rule:
        scorer: Scorer = lambda path, target: rule_score(path, target, spec)  # noqa: E731
    else:
        scorer = logistic_attribution(paths, catalog).score

    threads = EXECUTION_CONFIG["threads"] if threads < 0 else threads
    nested = parallel_map(
        lambda path: [_report(path, catalog, t, spec.label, scorer(path, t)) for t in path.conversion_positions],
        paths,
        threads,
    )
    reports = [r for group in nested for r in group]
    track_conversions_scored(spec.label, len(reports))
    logger.info(f"Baseline {spec.label}: {len(reports)} conversões em {len(paths)} paths")
    return reports
