"""
Baselines de atribuição: regras, regressão logística e Markov
"""

from baselines.rules import (
    BASELINES,
    LOGISTIC,
    MARKOV,
    RULES,
    BaselineSpec,
    rule_score,
)
from baselines.logistic import LogisticAttribution, logistic_attribution, newton_fit, touch_counts
from baselines.markov import MarkovChain, absorption_probability, channel_sequence, markov_removal
from baselines.runner import baseline_reports

__all__ = [
    'BASELINES',
    'LOGISTIC',
    'MARKOV',
    'RULES',
    'BaselineSpec',
    'rule_score',
    'LogisticAttribution',
    'logistic_attribution',
    'newton_fit',
    'touch_counts',
    'MarkovChain',
    'absorption_probability',
    'channel_sequence',
    'markov_removal',
    'baseline_reports',
]
