"""
Baseline de regressão logística.

Modelo: P(conversão | c) = σ(β₀ + Σ_k β_k c_k), com c_k = contagem de
toques do tipo k (não-conversão) no path inteiro. Ajuste por máxima
verossimilhança com Newton amortecido; em separação completa, refaz
com ridge L2 e registra warning.

Score incremental de um touchpoint i: p̂(c) - p̂(c - 1_{e_i}), truncado em
0 e normalizado entre os touchpoints anteriores a i⋆.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.special import expit

from catalog import CONVERSION_INDEX, EventCatalog, Path
from config import BASELINE_CONFIG
from errors import insufficient_data

logger = logging.getLogger("graph-attribution.baselines")

MAX_HALVINGS = 40


def touch_counts(path: Path, catalog: EventCatalog) -> np.ndarray:
    """Contagem por tipo de evento (p,), incluindo a conversão na posição 0."""
    if not len(path):
        return np.zeros(catalog.p)
    return np.bincount(path.types, minlength=catalog.p).astype(float)


def _mean_loglik(X: np.ndarray, y: np.ndarray, beta: np.ndarray, ridge: float) -> float:
    eta = X @ beta
    return float(np.mean(y * eta - np.logaddexp(0.0, eta)) - 0.5 * ridge * np.sum(beta[1:] ** 2))


def newton_fit(
    X: np.ndarray,
    y: np.ndarray,
    ridge: float = 0.0,
    max_iter: int = 100,
    tol: float = 1e-10,
) -> Tuple[np.ndarray, bool, int]:
    """Newton amortecido na log-verossimilhança média; intercepto (coluna 0) sem penalidade.

    Returns:
        (beta, convergiu, iterações). LinAlgError se a Hessiana for singular.
    """
    n, d = X.shape
    penalty = np.full(d, ridge)
    penalty[0] = 0.0
    beta = np.zeros(d)
    current = _mean_loglik(X, y, beta, ridge)

    for it in range(1, max_iter + 1):
        prob = expit(X @ beta)
        grad = X.T @ (y - prob) / n - penalty * beta
        if np.max(np.abs(grad)) < tol:
            return beta, True, it - 1
        weights = prob * (1.0 - prob)
        hessian = (X.T * weights) @ X / n + np.diag(penalty)
        step = np.linalg.solve(hessian, grad)

        scale = 1.0
        for _ in range(MAX_HALVINGS):
            candidate = beta + scale * step
            value = _mean_loglik(X, y, candidate, ridge)
            if value >= current:
                break
            scale *= 0.5
        else:
            return beta, False, it

        beta, current = candidate, value
        if np.max(np.abs(scale * step)) < tol:
            return beta, True, it

    return beta, False, max_iter


@dataclass
class LogisticAttribution:
    """
    Modelo logístico ajustado e scorer por touchpoint.

    Attributes:
        catalog: Catálogo dos tipos
        intercept: β₀
        coefficients: β por tipo (p,), zero na conversão e em tipos ausentes
        ridge: Penalidade usada (0 sem fallback)
        converged: Convergência do Newton
        iterations: Iterações do ajuste final
    """
    catalog: EventCatalog
    intercept: float
    coefficients: np.ndarray
    ridge: float
    converged: bool
    iterations: int

    def probability(self, counts: np.ndarray) -> float:
        return float(expit(self.intercept + float(self.coefficients @ counts)))

    def coefficient_map(self) -> Dict[str, float]:
        return {
            self.catalog.type_names[k]: float(self.coefficients[k])
            for k in range(self.catalog.p) if k != CONVERSION_INDEX
        }

    def score(self, path: Path, target: int) -> Dict[int, float]:
        """Scores normalizados dos touchpoints anteriores a `target`."""
        positions = path.touchpoint_positions(target)
        if not positions:
            return {}
        counts = touch_counts(path, self.catalog)
        full = self.probability(counts)
        raw = {}
        for i in positions:
            reduced = counts.copy()
            reduced[path.events[i].e] -= 1.0
            raw[i] = max(full - self.probability(reduced), 0.0)
        total = sum(raw.values())
        if total <= 0:
            return {i: 0.0 for i in positions}
        return {i: v / total for i, v in raw.items()}


def logistic_attribution(
    paths: Sequence[Path],
    catalog: EventCatalog,
    ridge: Optional[float] = None,
) -> LogisticAttribution:
    """Ajusta o modelo logístico de conversão sobre as contagens por tipo.

    Separação (sem convergência, |β| acima do limiar ou Hessiana singular)
    dispara o refit com ridge BASELINE_CONFIG["logistic_ridge"].
    """
    y = np.array([1.0 if p.is_positive else 0.0 for p in paths])
    if y.sum() == 0 or y.sum() == len(y):
        raise insufficient_data("logistic", "need at least one positive and one negative path")

    counts = np.array([touch_counts(p, catalog) for p in paths])
    features = [k for k in range(catalog.p) if k != CONVERSION_INDEX and np.any(counts[:, k] > 0)]
    X = np.column_stack([np.ones(len(paths))] + [counts[:, k] for k in features])
    max_iter = BASELINE_CONFIG["logistic_max_iter"]
    tol = BASELINE_CONFIG["logistic_tol"]
    threshold = BASELINE_CONFIG["logistic_separation_threshold"]

    if ridge is not None:
        used_ridge = ridge
        beta, converged, iterations = newton_fit(X, y, used_ridge, max_iter, tol)
    else:
        used_ridge = 0.0
        try:
            beta, converged, iterations = newton_fit(X, y, 0.0, max_iter, tol)
            separated = not converged or np.max(np.abs(beta)) > threshold
        except np.linalg.LinAlgError:
            separated = True
        if separated:
            used_ridge = BASELINE_CONFIG["logistic_ridge"]
            logger.warning(f"Separação na regressão logística; refazendo com ridge={used_ridge:g}")
            beta, converged, iterations = newton_fit(X, y, used_ridge, max_iter, tol)

    coefficients = np.zeros(catalog.p)
    coefficients[features] = beta[1:]
    logger.debug(f"Logística: intercepto={beta[0]:.4f}, iterações={iterations}, ridge={used_ridge:g}")
    return LogisticAttribution(
        catalog=catalog,
        intercept=float(beta[0]),
        coefficients=coefficients,
        ridge=used_ridge,
        converged=converged,
        iterations=iterations,
    )
