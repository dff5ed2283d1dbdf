"""
Agregação por canal (CAS), comparação com a ground truth (CCC) e resumo
de múltiplas execuções.

CAS_z = Σ_paths Σ_conversões att(canal z inteiro | D). Para TRE o removal
set é o canal inteiro; somar scores de touchpoints superestima o canal.
"""

import logging
import math
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from attribution.report import AttributionReport
from errors import channel_mismatch, undefined_proportions
from evaluation.divergence import ChannelDistribution, hellinger, kl_divergence
from simulator.ground_truth import GroundTruth

logger = logging.getLogger("graph-attribution.evaluation")


def aggregate_cas(
    reports: Sequence[AttributionReport],
    channel_names: Sequence[str],
    method: Optional[str] = None,
) -> ChannelDistribution:
    """Soma os scores de canal de todos os relatórios (do método, se dado) e normaliza.

    A soma é exatamente arredondada, então o resultado independe da ordem.
    """
    selected = [r for r in reports if method is None or r.method == method]
    label = method or (selected[0].method if selected else "")
    if not selected:
        raise undefined_proportions(label or "scores")
    columns: Dict[str, List[float]] = {z: [] for z in channel_names}
    for report in selected:
        if set(report.channel_scores) != set(columns):
            raise channel_mismatch(sorted(columns), sorted(report.channel_scores))
        for z, score in report.channel_scores.items():
            columns[z].append(score)
    raw = [math.fsum(columns[z]) for z in channel_names]
    return ChannelDistribution.from_scores(raw, channel_names, label)


def truth_distribution(truth: GroundTruth) -> ChannelDistribution:
    """Proporções de CCC; CCC com soma <= 0 -> erro de proporções indefinidas."""
    ccc = truth.ccc
    return ChannelDistribution.from_scores([float(ccc[z]) for z in truth.channel_names],
                                           truth.channel_names, "truth")


@dataclass
class MethodEvaluation:
    method: str
    distribution: ChannelDistribution
    kl: float
    hellinger: float

    def to_dict(self) -> dict:
        return {
            "proportions": self.distribution.as_dict(),
            "cas": {z: float(v) for z, v in zip(self.distribution.channel_names, self.distribution.raw)},
            "kl": self.kl,
            "hellinger": self.hellinger,
        }


@dataclass
class Evaluation:
    """Ground truth e avaliação por método de uma execução."""
    truth: ChannelDistribution
    methods: Dict[str, MethodEvaluation] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "truth": self.truth.as_dict(),
            "methods": {m: ev.to_dict() for m, ev in self.methods.items()},
        }


def evaluate_distribution(truth: ChannelDistribution, estimate: ChannelDistribution) -> MethodEvaluation:
    if truth.channel_names != estimate.channel_names:
        raise channel_mismatch(list(truth.channel_names), list(estimate.channel_names))
    return MethodEvaluation(
        method=estimate.label,
        distribution=estimate,
        kl=kl_divergence(truth, estimate),
        hellinger=hellinger(truth, estimate),
    )


def evaluate_reports(truth: GroundTruth, reports: Sequence[AttributionReport]) -> Evaluation:
    """Proporções, KL e Hellinger para cada método presente nos relatórios."""
    truth_dist = truth_distribution(truth)
    methods = list(OrderedDict.fromkeys(r.method for r in reports))
    evaluation = Evaluation(truth=truth_dist)
    for method in methods:
        estimate = aggregate_cas(reports, truth.channel_names, method)
        evaluation.methods[method] = evaluate_distribution(truth_dist, estimate)
    return evaluation


# =============================================================================
# RESUMO DE EXECUÇÕES
# =============================================================================

def mean_and_se(values: Sequence[float]):
    """(média, erro padrão); erro padrão 0 com uma única observação."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return float("nan"), float("nan")
    se = float(arr.std(ddof=1) / np.sqrt(arr.size)) if arr.size > 1 else 0.0
    return float(arr.mean()), se


@dataclass
class RunSummary:
    """
    Média e erro padrão sobre execuções bem-sucedidas.

    KL e Hellinger aparecem de duas formas: média das execuções
    (per_run) e calculados sobre as proporções médias (on_mean).
    """
    channel_names: List[str]
    n_runs: int
    n_failed: int
    truth: Dict[str, tuple]
    methods: Dict[str, dict]

    def to_dict(self) -> dict:
        def pair(v):
            return {"mean": v[0], "se": v[1]}

        return {
            "channels": list(self.channel_names),
            "runs": self.n_runs,
            "failed": self.n_failed,
            "truth": {z: pair(v) for z, v in self.truth.items()},
            "methods": {
                m: {
                    "proportions": {z: pair(v) for z, v in stats["proportions"].items()},
                    "kl": pair(stats["kl"]),
                    "hellinger": pair(stats["hellinger"]),
                    "kl_on_mean": stats["kl_on_mean"],
                    "hellinger_on_mean": stats["hellinger_on_mean"],
                }
                for m, stats in self.methods.items()
            },
        }


def summarize_runs(evaluations: Sequence[Optional[Evaluation]]) -> RunSummary:
    """Resumo de execuções; entradas None representam execuções que falharam."""
    done = [e for e in evaluations if e is not None]
    failed = len(evaluations) - len(done)
    if not done:
        raise undefined_proportions("summary")
    names = list(done[0].truth.channel_names)
    truth_matrix = np.array([e.truth.proportions for e in done])
    truth = {z: mean_and_se(truth_matrix[:, k]) for k, z in enumerate(names)}
    mean_truth = truth_matrix.mean(axis=0)

    methods: Dict[str, dict] = {}
    for method in OrderedDict.fromkeys(m for e in done for m in e.methods):
        runs = [e.methods[method] for e in done if method in e.methods]
        matrix = np.array([r.distribution.proportions for r in runs])
        mean_props = matrix.mean(axis=0)
        methods[method] = {
            "proportions": {z: mean_and_se(matrix[:, k]) for k, z in enumerate(names)},
            "kl": mean_and_se([r.kl for r in runs]),
            "hellinger": mean_and_se([r.hellinger for r in runs]),
            "kl_on_mean": kl_divergence(mean_truth, mean_props),
            "hellinger_on_mean": hellinger(mean_truth, mean_props),
        }
    if failed:
        logger.warning(f"{failed} de {len(evaluations)} execuções falharam e foram excluídas do resumo")
    return RunSummary(names, len(done), failed, truth, methods)
