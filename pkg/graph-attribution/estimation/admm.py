"""
ADMM para o programa quadrático não negativo com penalidade L1 por nó:

    min_{θ>=0} ½θᵀVθ - bᵀθ + γ‖α‖₁,   θ = (μ, α)

Splitting α = α'. Cada iteração:
    (i)   θ ← argmin_{θ>=0} ½θᵀMθ - rhsᵀθ,  M = V + diag(0, ηI),  rhs = b + (0, ηα' - ω)
    (ii)  α' ← (α + ω/η - γ/η)₊
    (iii) ω ← ω + η(α - α')

Em (i), quando M⁻¹rhs já é não negativo ele é a solução (projeção trivial);
caso contrário o subproblema é resolvido exatamente como NNLS sobre o
fator de Cholesky de M. Projetar M⁻¹rhs coordenada a coordenada não é o
minimizador restrito quando M não é diagonal.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple, Union

import numpy as np
from scipy.linalg import LinAlgError, cho_solve, cholesky, solve_triangular
from scipy.optimize import nnls

from config import EXECUTION_CONFIG, FIT_CONFIG
from errors import degenerate_design, invalid_fit_config
from estimation.design import QUADRATURES, NodeDesign, empirical_loss

logger = logging.getLogger("graph-attribution.admm")


@dataclass
class FitConfig:
    """
    Configuração do ajuste.

    Attributes:
        gamma: γ_e global ou por nó (índice do tipo -> γ)
        eta: Penalidade do Lagrangiano aumentado
        tol_primal: Tolerância ‖α - α'‖∞
        tol_dual: Tolerância η‖α'_new - α'_old‖∞
        max_iter: Iterações máximas por nó
        quadrature: auto | analytic-exp | trapezoid
        trapezoid_points: Pontos do trapézio por T0
        graph_threshold: Limiar de extração do grafo
        threads: Threads para montagem do design e nós (0 = núcleos)
    """
    gamma: Union[float, Dict[int, float]] = 0.0
    eta: float = 1.0
    tol_primal: float = 1e-7
    tol_dual: float = 1e-7
    max_iter: int = 10000
    quadrature: str = "auto"
    trapezoid_points: int = 50
    graph_threshold: float = 0.0
    threads: int = 0

    def __post_init__(self):
        gammas = self.gamma.values() if isinstance(self.gamma, dict) else [self.gamma]
        if any(g < 0 for g in gammas):
            raise invalid_fit_config("gamma must be >= 0")
        if self.eta <= 0:
            raise invalid_fit_config(f"eta must be > 0, got {self.eta}")
        if self.tol_primal <= 0 or self.tol_dual <= 0:
            raise invalid_fit_config("tolerances must be > 0")
        if self.max_iter < 1:
            raise invalid_fit_config(f"max_iter must be >= 1, got {self.max_iter}")
        if self.quadrature not in QUADRATURES:
            raise invalid_fit_config(f"unknown quadrature '{self.quadrature}'")
        if self.trapezoid_points < 1:
            raise invalid_fit_config("trapezoid_points must be >= 1")
        if self.graph_threshold < 0:
            raise invalid_fit_config("graph_threshold must be >= 0")

    def gamma_for(self, target: int) -> float:
        if isinstance(self.gamma, dict):
            return float(self.gamma.get(target, 0.0))
        return float(self.gamma)

    @classmethod
    def from_config(cls, **overrides) -> "FitConfig":
        """Valores de FIT_CONFIG com overrides (flags da CLI)."""
        values = {
            "gamma": FIT_CONFIG["gamma"],
            "eta": FIT_CONFIG["eta"],
            "tol_primal": FIT_CONFIG["tol_primal"],
            "tol_dual": FIT_CONFIG["tol_dual"],
            "max_iter": FIT_CONFIG["max_iter"],
            "quadrature": FIT_CONFIG["quadrature"],
            "trapezoid_points": FIT_CONFIG["trapezoid_points_per_scale"],
            "graph_threshold": FIT_CONFIG["graph_threshold"],
            "threads": EXECUTION_CONFIG["threads"],
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass
class AdmmDiagnostics:
    """Diagnóstico de um ajuste ADMM."""
    iterations: int
    converged: bool
    primal_residual: float
    dual_residual: float
    objective: float
    gamma: float
    constrained_steps: int = 0

    def to_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "converged": self.converged,
            "primal_residual": self.primal_residual,
            "dual_residual": self.dual_residual,
            "objective": self.objective,
            "gamma": self.gamma,
            "constrained_steps": self.constrained_steps,
        }


def _theta_step(chol: np.ndarray, rhs: np.ndarray) -> Tuple[np.ndarray, bool]:
    """argmin_{θ>=0} ½θᵀMθ - rhsᵀθ com M = LLᵀ. Retorna (θ, usou NNLS)."""
    theta = cho_solve((chol, True), rhs)
    if np.all(theta >= 0):
        return theta, False
    # ½‖Lᵀθ - L⁻¹rhs‖² difere do objetivo por constante
    y = solve_triangular(chol, rhs, lower=True)
    theta, _ = nnls(chol.T, y)
    return theta, True


def objective(design: NodeDesign, mu: float, alpha: np.ndarray, gamma: float) -> float:
    """½θᵀVθ - bᵀθ + γ‖α‖₁."""
    theta = np.concatenate([[mu], alpha])
    return empirical_loss(design, theta) + gamma * float(np.sum(np.abs(alpha)))


def admm_fit(
    design: NodeDesign,
    config: FitConfig,
    gamma: Optional[float] = None,
    target_name: str = "",
) -> Tuple[float, np.ndarray, AdmmDiagnostics]:
    """Ajusta (μ_e, α_e) de um nó. α é retornado do iterado esparso α'."""
    name = target_name or str(design.target)
    gamma = config.gamma_for(design.target) if gamma is None else float(gamma)
    if gamma < 0:
        raise invalid_fit_config("gamma must be >= 0")
    V, b = design.V, design.b
    dim = V.shape[0]
    p = dim - 1
    eta = config.eta

    if not (V[0, 0] > 0):
        raise degenerate_design(name, "V[0,0] = 0 (no observation time)")

    M = V.copy()
    M[1:, 1:] += eta * np.eye(p)
    try:
        chol = cholesky(M, lower=True)
    except LinAlgError as e:
        raise degenerate_design(name, f"V + diag(0, ηI) is not positive definite: {e}") from e

    alpha = np.zeros(p)
    alpha_s = np.zeros(p)
    omega = np.zeros(p)
    theta = np.zeros(dim)
    r_primal = r_dual = float("inf")
    converged = False
    constrained = 0
    iterations = 0

    for iterations in range(1, config.max_iter + 1):
        rhs = b.copy()
        rhs[1:] += eta * alpha_s - omega
        theta, used_nnls = _theta_step(chol, rhs)
        constrained += used_nnls
        alpha = theta[1:]

        alpha_new = np.maximum(alpha + omega / eta - gamma / eta, 0.0)
        omega = omega + eta * (alpha - alpha_new)

        r_primal = float(np.max(np.abs(alpha - alpha_new))) if p else 0.0
        r_dual = float(eta * np.max(np.abs(alpha_new - alpha_s))) if p else 0.0
        alpha_s = alpha_new
        if r_primal <= config.tol_primal and r_dual <= config.tol_dual:
            converged = True
            break

    mu = float(theta[0])
    if not converged:
        logger.warning(
            f"ADMM não convergiu para '{name}' em {iterations} iterações "
            f"(primal={r_primal:.2e}, dual={r_dual:.2e})"
        )

    diagnostics = AdmmDiagnostics(
        iterations=iterations,
        converged=converged,
        primal_residual=r_primal,
        dual_residual=r_dual,
        objective=objective(design, mu, alpha_s, gamma),
        gamma=gamma,
        constrained_steps=int(constrained),
    )
    return mu, alpha_s.copy(), diagnostics
