"""
Distribuições por canal e divergências (KL e Hellinger).
"""

import math
from dataclasses import dataclass
from typing import Dict, Mapping, Sequence, Union

import numpy as np
from scipy.special import rel_entr

from errors import channel_mismatch, undefined_proportions


@dataclass(frozen=True, eq=False)
class ChannelDistribution:
    """
    Proporções por canal (somam 1) com os valores brutos agregados.

    Attributes:
        channel_names: Canais na ordem do catálogo
        proportions: Vetor (Z,) normalizado
        raw: Scores ou contagens antes da normalização
        label: Método de origem (tre, dre, truth, ...)
    """
    channel_names: tuple
    proportions: np.ndarray
    raw: np.ndarray
    label: str = ""

    @classmethod
    def from_scores(
        cls,
        raw: Union[Mapping[str, float], Sequence[float]],
        channel_names: Sequence[str],
        label: str = "",
    ) -> "ChannelDistribution":
        """Normaliza scores não negativos; soma <= 0 -> erro de proporções indefinidas."""
        names = tuple(channel_names)
        if isinstance(raw, Mapping):
            if set(raw) != set(names):
                raise channel_mismatch(sorted(names), sorted(raw))
            values = np.array([float(raw[z]) for z in names])
        else:
            values = np.asarray(raw, dtype=float)
            if values.shape != (len(names),):
                raise channel_mismatch(list(names), list(values))
        values = np.maximum(values, 0.0)
        total = math.fsum(values)
        if not total > 0:
            raise undefined_proportions(label or "scores")
        proportions = values / total
        return cls(names, proportions / math.fsum(proportions), values, label)

    def as_dict(self) -> Dict[str, float]:
        return {z: float(v) for z, v in zip(self.channel_names, self.proportions)}

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "proportions": self.as_dict(),
            "raw": {z: float(v) for z, v in zip(self.channel_names, self.raw)},
        }


def _pair(p, q):
    p = np.asarray(getattr(p, "proportions", p), dtype=float)
    q = np.asarray(getattr(q, "proportions", q), dtype=float)
    if p.shape != q.shape:
        raise channel_mismatch(list(p), list(q))
    return p, q


def kl_divergence(p, p_hat) -> float:
    """D_KL(p || p̂) com log natural; 0·log(0/·) = 0 e +inf se p̂_z = 0 < p_z."""
    p, q = _pair(p, p_hat)
    return max(float(np.sum(rel_entr(p, q))), 0.0)


def hellinger(p, p_hat) -> float:
    """sqrt(½ Σ (√p_z - √p̂_z)²), em [0, 1]."""
    p, q = _pair(p, p_hat)
    return min(float(np.sqrt(0.5 * np.sum((np.sqrt(p) - np.sqrt(q)) ** 2))), 1.0)
