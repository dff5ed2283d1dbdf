"""
Seleção de γ por nó via validação cruzada K-fold em nível de path.

Perda held-out: Φ_e(θ) = ½θᵀVθ - bᵀθ no design do fold de teste.
Regras:
    min: menor perda média (empates vão para o maior γ)
    one_se: maior γ com perda média <= mínimo + 1 erro padrão
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from catalog import EventCatalog, Path
from errors import invalid_fit_config
from estimation.admm import FitConfig, admm_fit
from estimation.design import KernelSpec, PathContributions, build_contributions, empirical_loss
from utils.parallel import parallel_map

logger = logging.getLogger("graph-attribution.selection")

RULE_MIN = "min"
RULE_ONE_SE = "one_se"
RULES = (RULE_MIN, RULE_ONE_SE)

TIE_TOLERANCE = 1e-12


@dataclass
class SelectionResult:
    """
    γ escolhido por nó e a tabela de perdas.

    Attributes:
        gamma: γ por nó
        grid: Grid avaliado (ordem crescente)
        mean_loss: Perda média por nó e γ (None se todos os folds degeneraram)
        valid_folds: Folds usados por nó
    """
    gamma: Dict[int, float]
    grid: List[float]
    mean_loss: Dict[int, List[Optional[float]]]
    valid_folds: Dict[int, int]


def fold_assignment(n: int, folds: int, seed: int) -> np.ndarray:
    """Fold de cada path (na ordem canônica) por permutação com seed."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    perm = rng.permutation(n)
    assignment = np.empty(n, dtype=int)
    assignment[perm] = np.arange(n) % folds
    return assignment


def _choose(grid: List[float], means: np.ndarray, ses: np.ndarray, rule: str) -> float:
    lowest = int(np.argmin(means))
    limit = means[lowest] + TIE_TOLERANCE * max(1.0, abs(means[lowest]))
    if rule == RULE_ONE_SE:
        limit += ses[lowest]
    # grid crescente: o último candidato dentro do limite é o mais esparso
    best = max(k for k in range(len(grid)) if means[k] <= limit)
    return grid[best]


def select_gamma_from_contributions(
    contributions: Dict[int, PathContributions],
    catalog: EventCatalog,
    grid: Sequence[float],
    folds: int,
    config: FitConfig,
    rule: str = RULE_MIN,
    seed: int = 0,
) -> SelectionResult:
    """Seleção a partir de contribuições por path já montadas."""
    grid = sorted(float(g) for g in grid)
    if not grid:
        raise invalid_fit_config("gamma grid is empty")
    if any(g < 0 for g in grid):
        raise invalid_fit_config("gamma grid values must be >= 0")
    if folds < 2:
        raise invalid_fit_config(f"folds must be >= 2, got {folds}")
    if rule not in RULES:
        raise invalid_fit_config(f"unknown selection rule '{rule}'")

    def select_node(target: int):
        name = catalog.type_names[target]
        contrib = contributions[target]
        if len(grid) == 1:
            return grid[0], [None], 0
        assignment = fold_assignment(contrib.n, folds, seed)
        counts = contrib.target_event_counts()
        losses = []
        for f in range(folds):
            test = np.flatnonzero(assignment == f)
            train = np.flatnonzero(assignment != f)
            if counts[train].sum() <= 0 or counts[test].sum() <= 0:
                logger.warning(f"Fold {f} degenerado para '{name}' (sem eventos do alvo); ignorado")
                continue
            train_design = contrib.design(train)
            test_design = contrib.design(test)
            row = []
            for gamma in grid:
                mu, alpha, _ = admm_fit(train_design, config, gamma=gamma, target_name=name)
                row.append(empirical_loss(test_design, np.concatenate([[mu], alpha])))
            losses.append(row)

        if not losses:
            logger.warning(f"Todos os folds degeneraram para '{name}'; usando maior γ")
            return grid[-1], [None] * len(grid), 0
        table = np.array(losses)
        means = table.mean(axis=0)
        if len(losses) > 1:
            ses = table.std(axis=0, ddof=1) / np.sqrt(len(losses))
        else:
            ses = np.zeros(len(grid))
        return _choose(grid, means, ses, rule), [float(m) for m in means], len(losses)

    targets = sorted(contributions)
    results = parallel_map(select_node, targets, config.threads)
    gamma = {}
    mean_loss = {}
    valid = {}
    for target, (g, means, used) in zip(targets, results):
        gamma[target] = g
        mean_loss[target] = means
        valid[target] = used
        logger.info(f"γ selecionado para '{catalog.type_names[target]}': {g:g} ({used} folds)")
    return SelectionResult(gamma=gamma, grid=grid, mean_loss=mean_loss, valid_folds=valid)


def select_gamma(
    paths: Sequence[Path],
    catalog: EventCatalog,
    kernels: KernelSpec,
    grid: Sequence[float],
    folds: int = 5,
    config: Optional[FitConfig] = None,
    rule: str = RULE_MIN,
    seed: int = 0,
) -> Dict[int, float]:
    """γ por nó minimizando a perda Φ held-out média."""
    config = config or FitConfig()
    contributions = build_contributions(
        paths, catalog, kernels,
        quadrature=config.quadrature,
        points_per_scale=config.trapezoid_points,
        threads=config.threads,
    )
    return select_gamma_from_contributions(contributions, catalog, grid, folds, config, rule, seed).gamma
