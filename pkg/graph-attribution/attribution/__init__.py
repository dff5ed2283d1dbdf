"""
Atribuição por removal effect (DRE/TRE) e relatórios
"""

from attribution.excitation import ExcitationTable
from attribution.removal import (
    METHOD_DRE,
    METHOD_TRE,
    METHOD_TRE_EXHAUSTIVE,
    METHOD_TRE_THINNING,
    METHODS,
    ScoreBreakdown,
    baseline_effect,
    dre,
    dre_breakdown,
    removal_pmf,
    tre,
    tre_backprop,
    tre_breakdown,
    tre_exhaustive,
    tre_thinning,
)
from attribution.report import (
    AGGREGATE_PATH_ID,
    GRANULARITIES,
    GRANULARITY_CHANNEL,
    GRANULARITY_TOUCHPOINT,
    AttributionReport,
    TouchpointScore,
    channel_removal_set,
    channel_scores,
    dump_reports,
    load_reports,
    score_conversion,
    score_paths,
)

__all__ = [
    'ExcitationTable',
    'METHOD_DRE',
    'METHOD_TRE',
    'METHOD_TRE_EXHAUSTIVE',
    'METHOD_TRE_THINNING',
    'METHODS',
    'ScoreBreakdown',
    'baseline_effect',
    'dre',
    'dre_breakdown',
    'removal_pmf',
    'tre',
    'tre_backprop',
    'tre_breakdown',
    'tre_exhaustive',
    'tre_thinning',
    'AGGREGATE_PATH_ID',
    'GRANULARITIES',
    'GRANULARITY_CHANNEL',
    'GRANULARITY_TOUCHPOINT',
    'AttributionReport',
    'TouchpointScore',
    'channel_removal_set',
    'channel_scores',
    'dump_reports',
    'load_reports',
    'score_conversion',
    'score_paths',
]
