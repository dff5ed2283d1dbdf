"""
Relatórios de atribuição por conversão e scoring em lote.

Cada AttributionReport corresponde a uma linha JSONL: path_id, posição e
instante da conversão, scores por touchpoint, efeito baseline e scores
por canal (removal set = canal inteiro).
"""

import json
import logging
import os
from dataclasses import dataclass, field
from typing import IO, Dict, Iterable, List, Optional, Sequence, Union

from attribution.excitation import ExcitationTable
from attribution.removal import (
    METHOD_DRE,
    METHOD_TRE_THINNING,
    METHODS,
    baseline_effect,
    dre,
    dre_breakdown,
    tre,
    tre_breakdown,
)
from catalog import EventCatalog, Path, RemovalSet
from config import ATTRIBUTION_CONFIG, EXECUTION_CONFIG
from errors import invalid_removal_set, malformed_json_line
from kernels import ModelParams
from metrics import track_conversions_scored
from simulator.rng import PURPOSE_THINNING, derived_seed
from utils.parallel import parallel_map

logger = logging.getLogger("graph-attribution.attribution")

GRANULARITY_TOUCHPOINT = "touchpoint"
GRANULARITY_CHANNEL = "channel"
GRANULARITIES = (GRANULARITY_TOUCHPOINT, GRANULARITY_CHANNEL)

AGGREGATE_PATH_ID = "*"


@dataclass
class TouchpointScore:
    position: int
    t: float
    type_name: str
    score: float
    std_error: Optional[float] = None

    def to_dict(self) -> dict:
        data = {"position": self.position, "t": self.t, "type": self.type_name, "score": self.score}
        if self.std_error is not None:
            data["std_error"] = self.std_error
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "TouchpointScore":
        return cls(
            position=int(data["position"]),
            t=float(data["t"]),
            type_name=str(data["type"]),
            score=float(data["score"]),
            std_error=None if data.get("std_error") is None else float(data["std_error"]),
        )


@dataclass
class AttributionReport:
    """
    Atribuição de uma conversão (ou agregado de corpus, path_id "*").

    Attributes:
        path_id: Path de origem
        method: dre | tre | tre-thinning | tre-exhaustive | baseline
        conversion_position: i⋆ (-1 no agregado)
        conversion_time: t_{i⋆} (None no agregado)
        touchpoints: Scores por touchpoint (vazio em granularidade channel)
        baseline_effect: μ/λ⋆ (None para baselines)
        channel_scores: Canal -> score do removal set do canal inteiro
    """
    path_id: str
    method: str
    conversion_position: int
    conversion_time: Optional[float]
    touchpoints: List[TouchpointScore] = field(default_factory=list)
    baseline_effect: Optional[float] = None
    channel_scores: Dict[str, float] = field(default_factory=dict)

    @property
    def is_aggregate(self) -> bool:
        return self.path_id == AGGREGATE_PATH_ID

    def to_dict(self) -> dict:
        return {
            "path_id": self.path_id,
            "method": self.method,
            "conversion_position": self.conversion_position,
            "conversion_time": self.conversion_time,
            "touchpoints": [tp.to_dict() for tp in self.touchpoints],
            "baseline_effect": self.baseline_effect,
            "channel_scores": dict(self.channel_scores),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AttributionReport":
        return cls(
            path_id=str(data["path_id"]),
            method=str(data["method"]),
            conversion_position=int(data.get("conversion_position", -1)),
            conversion_time=None if data.get("conversion_time") is None else float(data["conversion_time"]),
            touchpoints=[TouchpointScore.from_dict(tp) for tp in data.get("touchpoints", [])],
            baseline_effect=None if data.get("baseline_effect") is None else float(data["baseline_effect"]),
            channel_scores={str(k): float(v) for k, v in data.get("channel_scores", {}).items()},
        )


def channel_removal_set(path: Path, catalog: EventCatalog, target: int, channel: int) -> RemovalSet:
    """Todos os eventos do canal anteriores a i⋆."""
    positions = [i for i in range(target) if catalog.channel_of[path.events[i].e] == channel]
    return RemovalSet(frozenset(positions), target)


def channel_scores(
    path: Path,
    params: ModelParams,
    catalog: EventCatalog,
    target: int,
    method: str = METHOD_DRE,
    replicates: Optional[int] = None,
    seed: int = 0,
    table: Optional[ExcitationTable] = None,
) -> Dict[str, float]:
    """Score de cada canal usando o canal inteiro como removal set; canal ausente -> 0."""
    if table is None or table.path is not path:
        table = ExcitationTable.build(path, params)
    scores: Dict[str, float] = {}
    for z, name in enumerate(catalog.channel_names):
        removal = channel_removal_set(path, catalog, target, z)
        if not removal.indices:
            scores[name] = 0.0
        elif method == METHOD_DRE:
            scores[name] = dre(path, params, removal, table)
        else:
            scores[name] = tre(path, params, removal, method, replicates, seed + z, table)[0]
    return scores


def score_conversion(
    path: Path,
    params: ModelParams,
    catalog: EventCatalog,
    target: int,
    method: str,
    granularity: str = GRANULARITY_TOUCHPOINT,
    replicates: Optional[int] = None,
    seed: int = 0,
) -> AttributionReport:
    table = ExcitationTable.build(path, params)
    touchpoints: List[TouchpointScore] = []
    if granularity != GRANULARITY_TOUCHPOINT:
        baseline = baseline_effect(path, params, target, table)
    else:
        if method == METHOD_DRE:
            breakdown = dre_breakdown(path, params, target, table)
        else:
            breakdown = tre_breakdown(path, params, target, method, replicates, seed, table)
        baseline = breakdown.baseline_effect
        for i in path.touchpoint_positions(target):
            ev = path.events[i]
            touchpoints.append(TouchpointScore(
                position=i,
                t=ev.t,
                type_name=catalog.type_names[ev.e],
                score=breakdown.scores[i],
                std_error=breakdown.std_errors.get(i),
            ))
    channels = channel_scores(path, params, catalog, target, method, replicates,
                              seed + len(path), table)
    return AttributionReport(
        path_id=path.path_id,
        method=method,
        conversion_position=target,
        conversion_time=path.events[target].t,
        touchpoints=touchpoints,
        baseline_effect=baseline,
        channel_scores=channels,
    )


def score_paths(
    paths: Sequence[Path],
    params: ModelParams,
    catalog: EventCatalog,
    method: Optional[str] = None,
    granularity: str = GRANULARITY_TOUCHPOINT,
    replicates: Optional[int] = None,
    seed: int = 0,
    threads: int = -1,
) -> List[AttributionReport]:
    """Um relatório por conversão, paralelo por path; ordem = ordem dos paths.

    Cada conversão usa um seed derivado de (seed, path, posição), então a
    saída independe do número de threads.
    """
    method = ATTRIBUTION_CONFIG["method"] if method is None else method
    if method not in METHODS:
        raise invalid_removal_set("*", f"unknown method '{method}', expected one of {METHODS}")
    if granularity not in GRANULARITIES:
        raise invalid_removal_set("*", f"unknown granularity '{granularity}'")
    threads = EXECUTION_CONFIG["threads"] if threads < 0 else threads

    def score_one(item) -> List[AttributionReport]:
        j, path = item
        return [
            score_conversion(
                path, params, catalog, target, method, granularity, replicates,
                derived_seed(seed, j, target, PURPOSE_THINNING) if method == METHOD_TRE_THINNING else 0,
            )
            for target in path.conversion_positions
        ]

    nested = parallel_map(score_one, list(enumerate(paths)), threads)
    reports = [r for group in nested for r in group]
    track_conversions_scored(method, len(reports))
    logger.info(f"{len(reports)} conversões pontuadas com {method} em {len(paths)} paths")
    return reports


# =============================================================================
# JSONL
# =============================================================================

def dump_reports(reports: Iterable[AttributionReport], sink: IO) -> int:
    count = 0
    for report in reports:
        sink.write(json.dumps(report.to_dict()) + "\n")
        count += 1
    return count


def load_reports(source: Union[str, os.PathLike, IO]) -> List[AttributionReport]:
    """Lê relatórios JSONL; linhas em branco são ignoradas."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8") as f:
            lines = f.readlines()
    else:
        lines = source.readlines()
    reports = []
    for n, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            reports.append(AttributionReport.from_dict(json.loads(line)))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError, AttributeError) as e:
            raise malformed_json_line(n, str(e)) from e
    return reports
