"""
Heurísticas de atribuição por regra: last, first, linear, decay e u_shaped.

Touchpoints são os eventos não-conversão anteriores a i⋆. Todo vetor de
scores é de probabilidade (não negativo, soma 1) quando há touchpoints.
"""

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from catalog import Path
from config import BASELINE_CONFIG
from errors import insufficient_data

RULE_LAST = "last"
RULE_FIRST = "first"
RULE_LINEAR = "linear"
RULE_DECAY = "decay"
RULE_U_SHAPED = "u_shaped"
RULES = (RULE_LAST, RULE_FIRST, RULE_LINEAR, RULE_DECAY, RULE_U_SHAPED)

LOGISTIC = "logistic"
MARKOV = "markov"
BASELINES = RULES + (LOGISTIC, MARKOV)

# U-shaped: fração de cada extremo; o resto vai para o meio
U_SHAPED_ENDPOINT = 0.4


@dataclass(frozen=True)
class BaselineSpec:
    """
    Método baseline e parâmetros.

    Attributes:
        method: last | first | linear | decay | u_shaped | logistic | markov
        half_life: Meia-vida em dias (somente decay)
    """
    method: str
    half_life: Optional[float] = None

    def __post_init__(self):
        if self.method not in BASELINES:
            raise insufficient_data(self.method, f"unknown baseline, expected one of {BASELINES}")
        if self.method == RULE_DECAY:
            if self.half_life is None:
                object.__setattr__(self, "half_life", float(BASELINE_CONFIG["decay_half_life_days"]))
            if not self.half_life > 0:
                raise insufficient_data(self.method, f"half_life must be > 0, got {self.half_life}")

    @property
    def is_rule(self) -> bool:
        return self.method in RULES

    @property
    def label(self) -> str:
        if self.method == RULE_DECAY:
            return f"{RULE_DECAY}:{self.half_life:g}"
        return self.method

    @classmethod
    def from_name(cls, name: str) -> "BaselineSpec":
        """'decay:14' -> decay com meia-vida 14; 'u-shaped' aceito como u_shaped."""
        method, _, arg = name.strip().lower().partition(":")
        method = method.replace("-", "_")
        if not arg:
            return cls(method)
        if method != RULE_DECAY:
            raise insufficient_data(method, f"baseline does not take a parameter: '{name}'")
        try:
            half_life = float(arg)
        except ValueError:
            raise insufficient_data(method, f"invalid half-life '{arg}'") from None
        return cls(method, half_life)


def _u_shaped(k: int) -> np.ndarray:
    if k == 1:
        return np.ones(1)
    if k == 2:
        return np.full(2, 0.5)
    weights = np.full(k, (1.0 - 2 * U_SHAPED_ENDPOINT) / (k - 2))
    weights[0] = weights[-1] = U_SHAPED_ENDPOINT
    return weights


def rule_score(path: Path, target: int, spec: BaselineSpec) -> Dict[int, float]:
    """Scores por touchpoint para a conversão em `target`; vazio sem touchpoints."""
    if not spec.is_rule:
        raise insufficient_data(spec.method, "not a rule-based baseline")
    positions = path.touchpoint_positions(target)
    k = len(positions)
    if k == 0:
        return {}

    if spec.method == RULE_LAST:
        weights = np.zeros(k)
        weights[-1] = 1.0
    elif spec.method == RULE_FIRST:
        weights = np.zeros(k)
        weights[0] = 1.0
    elif spec.method == RULE_LINEAR:
        weights = np.full(k, 1.0 / k)
    elif spec.method == RULE_DECAY:
        lags = path.events[target].t - path.times[positions]
        # deslocado pelo menor lag para não zerar por underflow
        weights = np.exp2(-(lags - lags.min()) / spec.half_life)
        weights = weights / weights.sum()
    else:
        weights = _u_shaped(k)

    return {i: float(w) for i, w in zip(positions, weights)}
