"""
Direct e Total Removal Effect de um removal set R sobre a conversão i⋆.

DRE(R) = Σ_{i∈R} C[i, i⋆] / λ⋆, com λ⋆ = λ_conv(t_{i⋆} | D).

TRE(R) = E[DRE(R◊)], onde R◊ cresce a partir de R percorrendo os eventos
customer-initiated i_min(R) < i < i⋆ fora de R em ordem crescente e
removendo cada um com probabilidade 1 - λ(t_i | D \\ R◊)/λ(t_i | D).

Três motores: thinning Monte-Carlo, backpropagation (exato) e
enumeração exaustiva Σ_{R'} DRE(R')·pmf(R').
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from attribution.excitation import ExcitationTable
from catalog import CONVERSION_INDEX, Path, RemovalSet
from config import ATTRIBUTION_CONFIG
from errors import (
    deletion_probability_out_of_range,
    invalid_removal_set,
    too_many_candidates,
    zero_intensity,
)
from kernels import ModelParams

logger = logging.getLogger("graph-attribution.attribution")

METHOD_DRE = "dre"
METHOD_TRE = "tre"
METHOD_TRE_THINNING = "tre-thinning"
METHOD_TRE_EXHAUSTIVE = "tre-exhaustive"
METHODS = (METHOD_DRE, METHOD_TRE, METHOD_TRE_THINNING, METHOD_TRE_EXHAUSTIVE)


@dataclass
class ScoreBreakdown:
    """
    Scores por evento para uma conversão.

    Attributes:
        target: Posição i⋆ da conversão
        method: dre | tre | tre-thinning | tre-exhaustive
        scores: Posição do evento -> score
        baseline_effect: μ/λ⋆
        std_errors: Erro padrão por evento (somente thinning)
    """
    target: int
    method: str
    scores: Dict[int, float]
    baseline_effect: float
    std_errors: Dict[int, float] = field(default_factory=dict)

    @property
    def total(self) -> float:
        return self.baseline_effect + sum(self.scores.values())


def _table(path: Path, params: ModelParams, table: Optional[ExcitationTable]) -> ExcitationTable:
    return table if table is not None and table.path is path else ExcitationTable.build(path, params)


def _target_intensity(path: Path, table: ExcitationTable, target: int) -> float:
    lam = float(table.lam[target])
    if not lam > 0:
        raise zero_intensity(path.path_id, target)
    return lam


def _candidates(table: ExcitationTable, removal: RemovalSet) -> List[int]:
    """Ω \\ R: eventos customer-initiated em (i_min(R), i⋆) fora de R."""
    return [
        i for i in range(removal.i_min + 1, removal.target)
        if table.customer[i] and i not in removal.indices
    ]


def _deletion_probability(path: Path, table: ExcitationTable, i: int, removed_mass, tolerance: float):
    """1 - λ_red/λ_full, validado em [0, 1] e recortado. Vetorizado em removed_mass."""
    full = table.lam[i]
    if not full > 0:
        logger.warning(f"Intensidade zero no candidato {i} do path '{path.path_id}'; probabilidade 0")
        return np.zeros_like(removed_mass, dtype=float)
    prob = np.asarray(removed_mass, dtype=float) / full
    if np.any(prob < -tolerance) or np.any(prob > 1.0 + tolerance):
        bad = float(prob.min() if np.any(prob < -tolerance) else prob.max())
        raise deletion_probability_out_of_range(path.path_id, i, bad)
    return np.clip(prob, 0.0, 1.0)


def baseline_effect(path: Path, params: ModelParams, target: int, table: Optional[ExcitationTable] = None) -> float:
    """μ_conv/λ⋆: fração da intensidade da conversão que não vem de nenhum evento."""
    RemovalSet(frozenset(), target).validate(path)
    table = _table(path, params, table)
    return float(params.mu[CONVERSION_INDEX] / _target_intensity(path, table, target))


# =============================================================================
# DIRECT REMOVAL EFFECT
# =============================================================================

def dre(path: Path, params: ModelParams, removal: RemovalSet, table: Optional[ExcitationTable] = None) -> float:
    """Σ_{i∈R} α ψ(t_{i⋆} - t_i) / λ⋆."""
    removal.validate(path)
    table = _table(path, params, table)
    lam = _target_intensity(path, table, removal.target)
    if not removal.indices:
        return 0.0
    return float(table.C[sorted(removal.indices), removal.target].sum() / lam)


def dre_breakdown(path: Path, params: ModelParams, target: int, table: Optional[ExcitationTable] = None) -> ScoreBreakdown:
    """DRE de cada evento anterior a i⋆ mais o efeito baseline; soma 1."""
    RemovalSet(frozenset(), target).validate(path)
    table = _table(path, params, table)
    lam = _target_intensity(path, table, target)
    scores = {i: float(table.C[i, target] / lam) for i in range(target)}
    baseline = float(params.mu[CONVERSION_INDEX] / lam)
    return ScoreBreakdown(target=target, method=METHOD_DRE, scores=scores, baseline_effect=baseline)


# =============================================================================
# TOTAL REMOVAL EFFECT
# =============================================================================

def tre_thinning(
    path: Path,
    params: ModelParams,
    removal: RemovalSet,
    replicates: Optional[int] = None,
    seed: int = 0,
    table: Optional[ExcitationTable] = None,
) -> Tuple[float, float]:
    """Estimativa Monte-Carlo do TRE com L réplicas; retorna (média, erro padrão)."""
    replicates = ATTRIBUTION_CONFIG["thinning_replicates"] if replicates is None else int(replicates)
    if replicates < 1:
        raise invalid_removal_set(path.path_id, f"replicates must be >= 1, got {replicates}")
    removal.validate(path, require_nonempty=True)
    table = _table(path, params, table)
    target = removal.target
    lam = _target_intensity(path, table, target)
    tolerance = ATTRIBUTION_CONFIG["probability_tolerance"]
    rng = np.random.default_rng(np.random.SeedSequence(seed))

    removed = np.zeros((replicates, target), dtype=float)
    removed[:, sorted(removal.indices)] = 1.0
    for i in _candidates(table, removal):
        mass = removed[:, :i] @ table.C[:i, i]
        prob = _deletion_probability(path, table, i, mass, tolerance)
        removed[:, i] = rng.random(replicates) < prob

    draws = removed @ table.C[:target, target] / lam
    mean = float(draws.mean())
    se = float(draws.std(ddof=1) / np.sqrt(replicates)) if replicates > 1 else 0.0
    return mean, se


def tre_backprop(path: Path, params: ModelParams, removal: RemovalSet, table: Optional[ExcitationTable] = None) -> float:
    """TRE exato por backpropagation das DREs singleton."""
    removal.validate(path, require_nonempty=True)
    table = _table(path, params, table)
    target = removal.target
    lam = _target_intensity(path, table, target)
    lo = removal.i_min

    y = np.zeros(target)
    y[lo:] = table.C[lo:target, target] / lam
    for i in reversed(_candidates(table, removal)):
        if y[i] == 0.0:
            continue
        full = table.lam[i]
        if not full > 0:
            continue
        y[lo:i] += y[i] * table.C[lo:i, i] / full
    return float(y[sorted(removal.indices)].sum())


def removal_pmf(
    path: Path,
    params: ModelParams,
    removal: RemovalSet,
    candidate: FrozenSet[int],
    table: Optional[ExcitationTable] = None,
) -> float:
    """P(R◊ = R') sob o thinning sequencial, para R ⊆ R' ⊆ Ω."""
    removal.validate(path, require_nonempty=True)
    table = _table(path, params, table)
    omega_minus_r = _candidates(table, removal)
    candidate = frozenset(candidate)
    if not removal.indices <= candidate or not candidate <= removal.indices | set(omega_minus_r):
        raise invalid_removal_set(path.path_id, "candidate set must satisfy R ⊆ R' ⊆ Ω")
    tolerance = ATTRIBUTION_CONFIG["probability_tolerance"]

    chosen = sorted(candidate)
    prob = 1.0
    for i in omega_minus_r:
        earlier = [k for k in chosen if k < i]
        mass = table.C[earlier, i].sum() if earlier else 0.0
        p_del = float(_deletion_probability(path, table, i, mass, tolerance))
        prob *= p_del if i in candidate else 1.0 - p_del
    return prob


def tre_exhaustive(
    path: Path,
    params: ModelParams,
    removal: RemovalSet,
    max_candidates: Optional[int] = None,
    table: Optional[ExcitationTable] = None,
) -> float:
    """Σ_{R ⊆ R' ⊆ Ω} DRE(R')·pmf(R') por enumeração em profundidade."""
    limit = ATTRIBUTION_CONFIG["max_exhaustive_candidates"] if max_candidates is None else max_candidates
    removal.validate(path, require_nonempty=True)
    table = _table(path, params, table)
    target = removal.target
    lam = _target_intensity(path, table, target)
    cands = _candidates(table, removal)
    if len(cands) > limit:
        raise too_many_candidates(path.path_id, len(cands), limit)
    tolerance = ATTRIBUTION_CONFIG["probability_tolerance"]

    base = sorted(removal.indices)
    mass0 = table.C[base, :].sum(axis=0)
    score0 = float(table.C[base, target].sum())

    def expand(depth: int, mass: np.ndarray, score: float) -> float:
        if depth == len(cands):
            return score
        i = cands[depth]
        p_del = float(_deletion_probability(path, table, i, mass[i], tolerance))
        total = 0.0
        if p_del > 0.0:
            total += p_del * expand(depth + 1, mass + table.C[i], score + table.C[i, target])
        if p_del < 1.0:
            total += (1.0 - p_del) * expand(depth + 1, mass, score)
        return total

    return float(expand(0, mass0, score0) / lam)


def tre(path: Path, params: ModelParams, removal: RemovalSet, method: str = METHOD_TRE,
        replicates: Optional[int] = None, seed: int = 0,
        table: Optional[ExcitationTable] = None) -> Tuple[float, float]:
    """Despacha para o motor de TRE; retorna (score, erro padrão)."""
    if method == METHOD_TRE:
        return tre_backprop(path, params, removal, table), 0.0
    if method == METHOD_TRE_THINNING:
        return tre_thinning(path, params, removal, replicates, seed, table)
    if method == METHOD_TRE_EXHAUSTIVE:
        return tre_exhaustive(path, params, removal, table=table), 0.0
    raise invalid_removal_set(path.path_id, f"unknown TRE method '{method}'")


def tre_breakdown(
    path: Path,
    params: ModelParams,
    target: int,
    method: str = METHOD_TRE,
    replicates: Optional[int] = None,
    seed: int = 0,
    table: Optional[ExcitationTable] = None,
) -> ScoreBreakdown:
    """TRE singleton de cada touchpoint anterior a i⋆ mais o efeito baseline.

    A soma pode exceder 1: TRE é subaditivo, não aditivo.
    """
    RemovalSet(frozenset(), target).validate(path)
    table = _table(path, params, table)
    lam = _target_intensity(path, table, target)
    scores: Dict[int, float] = {}
    errors: Dict[int, float] = {}
    for k, i in enumerate(path.touchpoint_positions(target)):
        score, se = tre(path, params, RemovalSet(frozenset([i]), target), method, replicates,
                        seed + k, table)
        scores[i] = score
        if method == METHOD_TRE_THINNING:
            errors[i] = se
    baseline = float(params.mu[CONVERSION_INDEX] / lam)
    return ScoreBreakdown(target=target, method=method, scores=scores, baseline_effect=baseline, std_errors=errors)
