"""
Matrizes de design por nó alvo: V = (1/n) Σ_j ∫ x_j x_jᵀ dt e
b = (1/n) Σ_j Σ_{eventos do alvo} x_j(t_i-), com x = (1, X_{j,0}, ..., X_{j,p-1}).

Índice 0 da feature é a constante; índice k+1 é o tipo de evento k.

Quadratura:
    analytic-exp: kernels ExpDecay em forma fechada por segmento (exato)
    trapezoid: trapézio composto por segmento com passo min(T0/N, seg/8)
    auto: analytic-exp quando toda a coluna de kernels é ExpDecay
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Hashable, List, Optional, Sequence, Tuple, Union

import numpy as np

from catalog import EventCatalog, Path
from errors import invalid_fit_config, quadrature_failure
from kernels import Kernel, KernelShape, ModelParams
from utils.parallel import parallel_map

logger = logging.getLogger("graph-attribution.design")

QUADRATURE_AUTO = "auto"
QUADRATURE_EXACT = "analytic-exp"
QUADRATURE_TRAPEZOID = "trapezoid"
QUADRATURES = (QUADRATURE_AUTO, QUADRATURE_EXACT, QUADRATURE_TRAPEZOID)

KernelSpec = Union[Kernel, ModelParams, Sequence[Sequence[Kernel]]]


@dataclass(frozen=True, eq=False)
class NodeDesign:
    """
    Design do nó alvo.

    Attributes:
        target: Tipo customer-initiated alvo
        V: Matriz (p+1)x(p+1) simétrica PSD
        b: Vetor (p+1) não negativo
        n: Número de paths
    """
    target: int
    V: np.ndarray
    b: np.ndarray
    n: int

    @property
    def dim(self) -> int:
        return self.V.shape[0]

    @property
    def has_target_events(self) -> bool:
        return bool(self.b[0] > 0)


def kernel_grid(kernels: KernelSpec, catalog: EventCatalog) -> List[List[Kernel]]:
    """Normaliza a especificação de kernels em uma grade p x q."""
    if isinstance(kernels, Kernel):
        return [[kernels] * catalog.q for _ in range(catalog.p)]
    if isinstance(kernels, ModelParams):
        return kernels.kernel_grid()
    grid = [list(row) for row in kernels]
    if len(grid) != catalog.p or any(len(row) != catalog.q for row in grid):
        raise invalid_fit_config(f"kernel grid must be {catalog.p}x{catalog.q}")
    return grid


def kernel_column(kernels: KernelSpec, catalog: EventCatalog, target: int) -> Tuple[Kernel, ...]:
    """Kernels ψ_{k,target} para k = 0..p-1."""
    grid = kernel_grid(kernels, catalog)
    return tuple(grid[k][target] for k in range(catalog.p))


def resolve_quadrature(column: Sequence[Kernel], quadrature: str) -> str:
    if quadrature not in QUADRATURES:
        raise invalid_fit_config(f"unknown quadrature '{quadrature}'")
    all_exp = all(k.shape is KernelShape.EXP_DECAY for k in column)
    if quadrature == QUADRATURE_EXACT and not all_exp:
        raise invalid_fit_config("analytic-exp quadrature requires ExpDecay kernels")
    if quadrature == QUADRATURE_AUTO:
        return QUADRATURE_EXACT if all_exp else QUADRATURE_TRAPEZOID
    return quadrature


def canonical_key(path: Path) -> tuple:
    """Ordem canônica de soma: resultados independem da ordem de entrada."""
    return (path.path_id, path.T, tuple(path.times.tolist()), tuple(path.types.tolist()))


def canonical_order(paths: Sequence[Path]) -> List[int]:
    return sorted(range(len(paths)), key=lambda j: canonical_key(paths[j]))


# =============================================================================
# CONTRIBUIÇÕES POR PATH
# =============================================================================

def _exact_path(path: Path, column: Sequence[Kernel]) -> Tuple[np.ndarray, np.ndarray]:
    """Gram ∫ x xᵀ e features x(t_i-) em cada evento, em forma fechada."""
    p = len(column)
    d = p + 1
    inv = np.array([1.0 / k.T0 for k in column])
    rates = inv[:, None] + inv[None, :]
    gram = np.zeros((d, d))
    left = np.zeros((len(path), d))
    amp = np.zeros(p)
    cursor = 0.0

    def integrate(length: float):
        if length <= 0:
            return
        decay = np.exp(-length * inv)
        lin = amp * (-np.expm1(-length * inv)) / inv
        gram[0, 0] += length
        gram[0, 1:] += lin
        gram[1:, 0] += lin
        gram[1:, 1:] += np.outer(amp, amp) * (-np.expm1(-length * rates)) / rates
        amp[:] = amp * decay

    for i, ev in enumerate(path.events):
        integrate(ev.t - cursor)
        cursor = ev.t
        left[i, 0] = 1.0
        left[i, 1:] = amp
        amp[ev.e] += inv[ev.e]
    integrate(path.T - cursor)
    return gram, left


def _feature_rows(times: np.ndarray, types: np.ndarray, column: Sequence[Kernel], nodes: np.ndarray, right: bool) -> np.ndarray:
    p = len(column)
    rows = np.zeros((len(nodes), p + 1))
    rows[:, 0] = 1.0
    if len(times) == 0:
        return rows
    dt = nodes[:, None] - times[None, :]
    for k in np.unique(types):
        sel = types == k
        kernel = column[k]
        vals = kernel.right_limit(dt[:, sel]) if right else kernel.evaluate(dt[:, sel])
        rows[:, k + 1] = np.sum(vals, axis=1)
    return rows


def _trapezoid_path(path: Path, column: Sequence[Kernel], points_per_scale: int, target_name: str) -> Tuple[np.ndarray, np.ndarray]:
    """Gram por trapézio composto entre breakpoints; features exatas nos eventos."""
    p = len(column)
    d = p + 1
    times, types = path.times, path.types
    breaks = [0.0, path.T, *times.tolist()]
    for t, k in zip(times.tolist(), types.tolist()):
        if column[k].shape is KernelShape.BOXCAR:
            breaks.append(t + column[k].T0)
    breaks = sorted({b for b in breaks if 0.0 <= b <= path.T})
    min_scale = min(k.T0 for k in column)

    gram = np.zeros((d, d))
    for a, c in zip(breaks[:-1], breaks[1:]):
        seg = c - a
        if seg <= 0:
            continue
        step = min(min_scale / points_per_scale, seg / 8.0)
        count = max(int(math.ceil(seg / step - 1e-9)), 1)
        nodes = np.linspace(a, c, count + 1)
        rows = np.vstack([
            _feature_rows(times, types, column, nodes[:1], right=True),
            _feature_rows(times, types, column, nodes[1:], right=False),
        ])
        if not np.all(np.isfinite(rows)):
            bad = int(np.argmax(~np.all(np.isfinite(rows), axis=1)))
            raise quadrature_failure(target_name, path.path_id, float(nodes[bad]))
        weights = np.full(count + 1, seg / count)
        weights[0] *= 0.5
        weights[-1] *= 0.5
        gram += np.einsum("n,ni,nj->ij", weights, rows, rows)

    left = _feature_rows(times, types, column, times, right=False)
    return gram, left


@dataclass(frozen=True, eq=False)
class PathContributions:
    """
    Contribuições por path (V_j, b_j) para um nó, em ordem canônica.

    Folds de validação cruzada somam subconjuntos sem refazer a quadratura.
    """
    target: int
    V_parts: np.ndarray
    b_parts: np.ndarray
    path_ids: Tuple[str, ...]

    @property
    def n(self) -> int:
        return self.V_parts.shape[0]

    def design(self, subset: Optional[Sequence[int]] = None) -> NodeDesign:
        """Média das contribuições (todas ou de um subconjunto canônico)."""
        idx = np.arange(self.n) if subset is None else np.sort(np.asarray(subset, dtype=int))
        n = len(idx)
        if n == 0:
            dim = self.V_parts.shape[1]
            return NodeDesign(self.target, np.zeros((dim, dim)), np.zeros(dim), 0)
        V = np.sum(self.V_parts[idx], axis=0) / n
        V = 0.5 * (V + V.T)
        b = np.sum(self.b_parts[idx], axis=0) / n
        return NodeDesign(self.target, V, b, n)

    def target_event_counts(self) -> np.ndarray:
        """Número de eventos do alvo por path (coordenada constante de b_j)."""
        return self.b_parts[:, 0]


class _ColumnCache:
    """Gram e features por path, compartilhados entre nós com a mesma coluna."""

    def __init__(self, paths: Sequence[Path], column: Tuple[Kernel, ...], quadrature: str,
                 points_per_scale: int, target_name: str, threads: int):
        method = resolve_quadrature(column, quadrature)
        self.order = canonical_order(paths)
        ordered = [paths[j] for j in self.order]
        self.paths = ordered

        def work(path: Path):
            if method == QUADRATURE_EXACT:
                gram, left = _exact_path(path, column)
                if not (np.all(np.isfinite(gram)) and np.all(np.isfinite(left))):
                    raise quadrature_failure(target_name, path.path_id, float("nan"))
                return gram, left
            return _trapezoid_path(path, column, points_per_scale, target_name)

        results = parallel_map(work, ordered, threads)
        dim = len(column) + 1
        self.grams = np.array([g for g, _ in results]).reshape(len(ordered), dim, dim)
        self.lefts = [left for _, left in results]

    def contributions(self, target: int) -> PathContributions:
        dim = self.grams.shape[1]
        b_parts = np.zeros((len(self.paths), dim))
        for j, path in enumerate(self.paths):
            if len(path):
                sel = path.types == target
                if np.any(sel):
                    b_parts[j] = np.sum(self.lefts[j][sel], axis=0)
        return PathContributions(target, self.grams, b_parts, tuple(p.path_id for p in self.paths))


def path_contributions(
    paths: Sequence[Path],
    catalog: EventCatalog,
    kernels: KernelSpec,
    target: int,
    quadrature: str = QUADRATURE_AUTO,
    points_per_scale: int = 50,
    threads: int = 0,
) -> PathContributions:
    """(V_j, b_j) de cada path para o nó alvo, em ordem canônica."""
    column = kernel_column(kernels, catalog, target)
    cache = _ColumnCache(paths, column, quadrature, points_per_scale, catalog.type_names[target], threads)
    return cache.contributions(target)


def build_design(
    paths: Sequence[Path],
    catalog: EventCatalog,
    kernels: KernelSpec,
    target: int,
    quadrature: str = QUADRATURE_AUTO,
    points_per_scale: int = 50,
    threads: int = 0,
) -> NodeDesign:
    """NodeDesign (V, b) do nó alvo."""
    return path_contributions(paths, catalog, kernels, target, quadrature, points_per_scale, threads).design()


def build_contributions(
    paths: Sequence[Path],
    catalog: EventCatalog,
    kernels: KernelSpec,
    targets: Optional[Sequence[int]] = None,
    quadrature: str = QUADRATURE_AUTO,
    points_per_scale: int = 50,
    threads: int = 0,
) -> Dict[int, PathContributions]:
    """Contribuições para vários nós, reaproveitando V entre colunas de kernel iguais."""
    targets = list(catalog.customer_initiated) if targets is None else list(targets)
    caches: Dict[Hashable, _ColumnCache] = {}
    out: Dict[int, PathContributions] = {}
    for target in targets:
        column = kernel_column(kernels, catalog, target)
        if column not in caches:
            caches[column] = _ColumnCache(
                paths, column, quadrature, points_per_scale, catalog.type_names[target], threads
            )
        else:
            logger.debug(f"Reusando V para '{catalog.type_names[target]}'")
        out[target] = caches[column].contributions(target)
    return out


def build_designs(
    paths: Sequence[Path],
    catalog: EventCatalog,
    kernels: KernelSpec,
    targets: Optional[Sequence[int]] = None,
    quadrature: str = QUADRATURE_AUTO,
    points_per_scale: int = 50,
    threads: int = 0,
) -> Dict[int, NodeDesign]:
    """NodeDesign para cada nó alvo (default: todos os customer-initiated)."""
    contribs = build_contributions(paths, catalog, kernels, targets, quadrature, points_per_scale, threads)
    return {target: c.design() for target, c in contribs.items()}


def empirical_loss(design: NodeDesign, theta: np.ndarray) -> float:
    """Φ_e(θ) = ½θᵀVθ - bᵀθ."""
    theta = np.asarray(theta, dtype=float)
    return float(0.5 * theta @ design.V @ theta - design.b @ theta)
