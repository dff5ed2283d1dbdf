"""
Processos de feature X_{j,k}(t), intensidade condicional e compensador.

Todas as avaliações usam apenas eventos estritamente anteriores a t
(continuidade à esquerda), salvo `right_limit=True`.
"""

from typing import Optional

import numpy as np

from catalog import Path
from kernels.params import ModelParams


def feature(path: Path, params: ModelParams, target: int, source: Optional[int], t: float) -> float:
    """X_{j,k}(t) = Σ_{t_i<t, e_i=k} ψ_{k,target}(t - t_i).

    source=None é a feature constante (retorna 1).
    """
    if source is None:
        return 1.0
    if len(path) == 0:
        return 0.0
    mask = (path.times < t) & (path.types == source)
    if not np.any(mask):
        return 0.0
    kernel = params.kernel_for(source, target)
    return float(np.sum(kernel.evaluate(t - path.times[mask])))


def history_intensities(
    times: np.ndarray,
    types: np.ndarray,
    params: ModelParams,
    t: float,
    right_limit: bool = False,
) -> np.ndarray:
    """Vetor (q,) de intensidades dado um histórico em arrays.

    right_limit=True inclui eventos em t (valor em t+).
    """
    out = params.mu.copy()
    if len(times) == 0:
        return out
    mask = times <= t if right_limit else times < t
    if not np.any(mask):
        return out
    src = types[mask][:, None]
    dt = (t - times[mask])[:, None]
    dst = np.arange(params.q)[None, :]
    if right_limit:
        contrib = params.excitation_right(src, dst, dt)
    else:
        contrib = params.excitation(src, dst, dt)
    return out + contrib.sum(axis=0)


def intensity(path: Path, params: ModelParams, target: int, t: float) -> float:
    """λ_target(t | H_t) = μ + Σ α ψ sobre eventos com t_i < t."""
    if len(path) == 0:
        return float(params.mu[target])
    mask = path.times < t
    if not np.any(mask):
        return float(params.mu[target])
    contrib = params.excitation(path.types[mask], target, t - path.times[mask])
    return float(params.mu[target] + np.sum(contrib))


def intensity_vector(path: Path, params: ModelParams, t: float) -> np.ndarray:
    """Todas as q intensidades customer-initiated no instante t."""
    return history_intensities(path.times, path.types, params, t)


def compensator(path: Path, params: ModelParams, target: int, t0: float, t1: float) -> float:
    """∫_{t0}^{t1} λ_target(t) dt em forma fechada via Ψ."""
    if t1 <= t0:
        return 0.0
    total = float(params.mu[target]) * (t1 - t0)
    if len(path) == 0:
        return total
    mask = path.times < t1
    if not np.any(mask):
        return total
    src = path.types[mask]
    ti = path.times[mask]
    upper = params.cumulative_excitation(src, target, t1 - ti)
    lower = params.cumulative_excitation(src, target, np.maximum(t0 - ti, 0.0))
    return total + float(np.sum(upper - lower))


def rescaled_intervals(path: Path, params: ModelParams, target: int) -> np.ndarray:
    """Intervalos reescalonados Λ(s_k) - Λ(s_{k-1}) dos eventos do tipo alvo.

    Sob o modelo são i.i.d. Exp(1) (teorema de time-rescaling); s_0 = 0.
    """
    if len(path) == 0:
        return np.zeros(0)
    stamps = path.times[path.types == target]
    out = np.empty(len(stamps))
    previous = 0.0
    for k, s in enumerate(stamps):
        out[k] = compensator(path, params, target, previous, float(s))
        previous = float(s)
    return out
