"""
Ajuste nó a nó de todos os tipos customer-initiated.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from catalog import EventCatalog, Path
from errors import GraphAttributionError, node_fit_failed
from estimation.admm import AdmmDiagnostics, FitConfig, admm_fit
from estimation.design import KernelSpec, PathContributions, build_contributions, kernel_grid
from kernels import GrangerGraph, ModelParams, extract_graph
from metrics import track_admm_fit
from utils.parallel import parallel_map

logger = logging.getLogger("graph-attribution.fit")


@dataclass
class FitResult:
    """
    Resultado do ajuste completo.

    Attributes:
        params: ModelParams ajustado
        diagnostics: Diagnóstico ADMM por nó (índice do tipo)
        selected_gamma: γ escolhido por nó quando houve busca em grid
    """
    params: ModelParams
    diagnostics: Dict[int, AdmmDiagnostics]
    selected_gamma: Optional[Dict[int, float]] = None
    selection_losses: Dict[int, List[Optional[float]]] = field(default_factory=dict)

    @property
    def converged(self) -> bool:
        return all(d.converged for d in self.diagnostics.values())

    def graph(self, threshold: float = 0.0) -> GrangerGraph:
        return extract_graph(self.params, threshold)

    def to_dict(self, catalog: EventCatalog) -> dict:
        """Diagnóstico JSON escrito por `fit`."""
        nodes = {}
        for target, diag in sorted(self.diagnostics.items()):
            entry = diag.to_dict()
            if self.selected_gamma is not None:
                entry["selected_gamma"] = self.selected_gamma.get(target)
            if target in self.selection_losses:
                entry["cv_losses"] = self.selection_losses[target]
            nodes[catalog.type_names[target]] = entry
        return {"converged": self.converged, "nodes": nodes}


def fit_contributions(
    contributions: Dict[int, PathContributions],
    catalog: EventCatalog,
    kernels: KernelSpec,
    config: FitConfig,
    gammas: Optional[Dict[int, float]] = None,
    subset: Optional[Sequence[int]] = None,
) -> FitResult:
    """Ajusta todos os nós a partir de contribuições já montadas."""
    targets = sorted(contributions)

    def fit_node(target: int):
        name = catalog.type_names[target]
        gamma = config.gamma_for(target) if gammas is None else gammas[target]
        try:
            design = contributions[target].design(subset)
            return admm_fit(design, config, gamma=gamma, target_name=name)
        except GraphAttributionError as e:
            raise node_fit_failed(name, e) from e

    results = parallel_map(fit_node, targets, config.threads)

    mu = np.zeros(catalog.q)
    alpha = np.zeros((catalog.p, catalog.q))
    diagnostics = {}
    for target, (mu_e, alpha_e, diag) in zip(targets, results):
        mu[target] = max(mu_e, 0.0)
        alpha[:, target] = alpha_e
        diagnostics[target] = diag
        track_admm_fit(diag.iterations, diag.converged)
        logger.debug(
            f"Nó '{catalog.type_names[target]}': {diag.iterations} iterações, "
            f"objetivo={diag.objective:.6g}"
        )

    grid = kernel_grid(kernels, catalog)
    params = ModelParams.from_grid(mu, alpha, grid)
    return FitResult(params=params, diagnostics=diagnostics, selected_gamma=dict(gammas) if gammas else None)


def fit_all(
    paths: Sequence[Path],
    catalog: EventCatalog,
    kernels: KernelSpec,
    config: FitConfig,
    gammas: Optional[Dict[int, float]] = None,
) -> FitResult:
    """build_design + admm_fit para cada nó customer-initiated."""
    contributions = build_contributions(
        paths, catalog, kernels,
        quadrature=config.quadrature,
        points_per_scale=config.trapezoid_points,
        threads=config.threads,
    )
    result = fit_contributions(contributions, catalog, kernels, config, gammas)
    if not result.converged:
        logger.warning("Ajuste terminou com nós não convergidos (ver diagnóstico)")
    return result
