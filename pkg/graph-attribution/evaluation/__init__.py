"""
Avaliação: CAS por canal, divergências contra a ground truth e resumo de execuções
"""

from evaluation.divergence import ChannelDistribution, hellinger, kl_divergence
from evaluation.aggregate import (
    Evaluation,
    MethodEvaluation,
    RunSummary,
    aggregate_cas,
    evaluate_distribution,
    evaluate_reports,
    mean_and_se,
    summarize_runs,
    truth_distribution,
)

__all__ = [
    'ChannelDistribution',
    'hellinger',
    'kl_divergence',
    'Evaluation',
    'MethodEvaluation',
    'RunSummary',
    'aggregate_cas',
    'evaluate_distribution',
    'evaluate_reports',
    'mean_and_se',
    'summarize_runs',
    'truth_distribution',
]
