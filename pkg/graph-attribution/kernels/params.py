"""
Parâmetros do modelo (μ, A, kernels) e grafo de Granger induzido.
"""

import json
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from catalog import EventCatalog
from errors import invalid_model
from kernels.kernel import Kernel


@dataclass(frozen=True, eq=False)
class ModelParams:
    """
    Parâmetros de λ_e(t) = μ_e + Σ_{e'} α_{e'e} Σ_{t_i<t, e_i=e'} ψ_{e'e}(t - t_i).

    Attributes:
        mu: Intensidades base, shape (q,)
        alpha: Coeficientes de Granger, shape (p, q); colunas = tipos customer-initiated
        kernels: Kernels distintos usados pelo modelo
        kernel_ids: Índice em `kernels` para cada par (e', e), shape (p, q)
    """
    mu: np.ndarray
    alpha: np.ndarray
    kernels: Tuple[Kernel, ...]
    kernel_ids: np.ndarray = field(repr=False)

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=float).reshape(-1)
        alpha = np.asarray(self.alpha, dtype=float)
        ids = np.asarray(self.kernel_ids, dtype=int)
        if alpha.ndim != 2 or alpha.shape[1] != mu.shape[0]:
            raise invalid_model(f"alpha shape {alpha.shape} incompatible with mu length {mu.shape[0]}")
        if alpha.shape[0] <= alpha.shape[1]:
            raise invalid_model("alpha must have more source types (p) than targets (q)")
        if ids.shape != alpha.shape:
            raise invalid_model(f"kernel assignment shape {ids.shape} != alpha shape {alpha.shape}")
        if not len(self.kernels) or ids.min() < 0 or ids.max() >= len(self.kernels):
            raise invalid_model("kernel assignment references unknown kernel")
        if not (np.all(np.isfinite(mu)) and np.all(np.isfinite(alpha))):
            raise invalid_model("parameters must be finite")
        if np.any(mu < 0) or np.any(alpha < 0):
            raise invalid_model("parameters must be nonnegative")
        mu.setflags(write=False)
        alpha.setflags(write=False)
        ids.setflags(write=False)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "kernel_ids", ids)
        object.__setattr__(self, "kernels", tuple(self.kernels))

    @classmethod
    def uniform(cls, mu: Sequence[float], alpha, kernel: Kernel) -> "ModelParams":
        """Um único kernel para todos os pares."""
        alpha = np.asarray(alpha, dtype=float)
        return cls(np.asarray(mu, dtype=float), alpha, (kernel,), np.zeros(alpha.shape, dtype=int))

    @classmethod
    def from_grid(cls, mu: Sequence[float], alpha, grid: Sequence[Sequence[Kernel]]) -> "ModelParams":
        """Kernels por par (p x q)."""
        unique: List[Kernel] = []
        ids = np.zeros(np.asarray(alpha).shape, dtype=int)
        for a, row in enumerate(grid):
            for b, kernel in enumerate(row):
                if kernel not in unique:
                    unique.append(kernel)
                ids[a, b] = unique.index(kernel)
        return cls(np.asarray(mu, dtype=float), np.asarray(alpha, dtype=float), tuple(unique), ids)

    @property
    def p(self) -> int:
        return self.alpha.shape[0]

    @property
    def q(self) -> int:
        return self.alpha.shape[1]

    def kernel_for(self, source: int, target: int) -> Kernel:
        return self.kernels[self.kernel_ids[source, target]]

    def kernel_grid(self) -> List[List[Kernel]]:
        return [[self.kernel_for(a, b) for b in range(self.q)] for a in range(self.p)]

    def with_values(self, mu, alpha) -> "ModelParams":
        """Mesmos kernels, novos μ e α."""
        return ModelParams(np.asarray(mu, dtype=float), np.asarray(alpha, dtype=float), self.kernels, self.kernel_ids)

    def _apply(self, method: str, sources: np.ndarray, targets: np.ndarray, dt: np.ndarray) -> np.ndarray:
        sources, targets, dt = np.broadcast_arrays(
            np.asarray(sources, dtype=int), np.asarray(targets, dtype=int), np.asarray(dt, dtype=float)
        )
        ids = self.kernel_ids[sources, targets]
        values = np.zeros(dt.shape, dtype=float)
        for u, kernel in enumerate(self.kernels):
            mask = ids == u
            if np.any(mask):
                values[mask] = getattr(kernel, method)(dt[mask])
        return self.alpha[sources, targets] * values

    def excitation(self, sources, targets, dt) -> np.ndarray:
        """α_{e'e}·ψ_{e'e}(dt), elemento a elemento."""
        return self._apply("evaluate", sources, targets, dt)

    def excitation_right(self, sources, targets, dt) -> np.ndarray:
        """α_{e'e}·ψ_{e'e}(dt+)."""
        return self._apply("right_limit", sources, targets, dt)

    def cumulative_excitation(self, sources, targets, dt) -> np.ndarray:
        """α_{e'e}·Ψ_{e'e}(dt) com Ψ a integral do kernel."""
        return self._apply("integral", sources, targets, dt)

    def to_dict(self, catalog: EventCatalog) -> dict:
        """Formato do arquivo de modelo; listas na ordem interna do catálogo."""
        data = {
            "types": list(catalog.type_names),
            "targets": list(catalog.type_names[:catalog.q]),
            "mu": [float(v) for v in self.mu],
            "alpha": [[float(v) for v in row] for row in self.alpha],
        }
        if len(self.kernels) == 1:
            data["kernel"] = self.kernels[0].to_dict()
        else:
            counts = np.bincount(self.kernel_ids.reshape(-1), minlength=len(self.kernels))
            default = int(np.argmax(counts))
            data["kernel"] = self.kernels[default].to_dict()
            data["kernels"] = [
                {"from": catalog.type_names[a], "to": catalog.type_names[b], **self.kernel_for(a, b).to_dict()}
                for a in range(self.p)
                for b in range(self.q)
                if self.kernel_ids[a, b] != default
            ]
        return data

    @classmethod
    def from_dict(cls, data: dict, catalog: EventCatalog) -> "ModelParams":
        """Lê o arquivo de modelo resolvendo nomes de tipo contra o catálogo.

        mu: lista (ordem de "targets", ou ordem interna) ou {nome: valor}
        alpha: matriz (linhas em "types", colunas em "targets") ou {origem: {destino: valor}}
        """
        if not isinstance(data, dict):
            raise invalid_model("model file must be a JSON object")
        p, q = catalog.p, catalog.q

        def resolve(name: str) -> int:
            if not catalog.has_type(name):
                raise invalid_model(f"unknown type '{name}'")
            return catalog.index_of(name)

        def resolve_target(name: str) -> int:
            k = resolve(name)
            if not catalog.is_customer(k):
                raise invalid_model(f"'{name}' is firm-initiated and cannot be a target")
            return k

        rows = [resolve(n) for n in data.get("types", catalog.type_names)]
        cols = [resolve_target(n) for n in data.get("targets", catalog.type_names[:q])]
        if sorted(rows) != list(range(p)) or sorted(cols) != list(range(q)):
            raise invalid_model("'types'/'targets' must list every catalog type exactly once")

        mu = np.zeros(q)
        raw_mu = data.get("mu")
        try:
            if isinstance(raw_mu, dict):
                for name, value in raw_mu.items():
                    mu[resolve_target(name)] = float(value)
            elif isinstance(raw_mu, list) and len(raw_mu) == q:
                for pos, value in enumerate(raw_mu):
                    mu[cols[pos]] = float(value)
            else:
                raise invalid_model(f"'mu' must be a length-{q} list or an object")

            alpha = np.zeros((p, q))
            raw_alpha = data.get("alpha")
            if isinstance(raw_alpha, dict):
                for src, targets in raw_alpha.items():
                    if not isinstance(targets, dict):
                        raise invalid_model(f"'alpha.{src}' must be an object")
                    for dst, value in targets.items():
                        alpha[resolve(src), resolve_target(dst)] = float(value)
            elif isinstance(raw_alpha, list) and len(raw_alpha) == p and all(
                isinstance(r, list) and len(r) == q for r in raw_alpha
            ):
                for a, row in enumerate(raw_alpha):
                    for b, value in enumerate(row):
                        alpha[rows[a], cols[b]] = float(value)
            else:
                raise invalid_model(f"'alpha' must be a {p}x{q} matrix or a nested object")
        except (TypeError, ValueError) as e:
            raise invalid_model(f"non-numeric parameter: {e}") from e

        if "kernel" not in data:
            raise invalid_model("missing 'kernel'")
        default = Kernel.from_dict(data["kernel"])
        grid = [[default] * q for _ in range(p)]
        for entry in data.get("kernels", []):
            if not isinstance(entry, dict) or "from" not in entry or "to" not in entry:
                raise invalid_model(f"malformed per-pair kernel {entry!r}")
            grid[resolve(entry["from"])][resolve_target(entry["to"])] = Kernel.from_dict(entry)
        return cls.from_grid(mu, alpha, grid)


def load_model(source: str, catalog: EventCatalog) -> ModelParams:
    """Carrega ModelParams de um arquivo JSON."""
    try:
        with open(source, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise invalid_model(f"invalid JSON: {e}") from e
    return ModelParams.from_dict(data, catalog)


@dataclass(frozen=True)
class GrangerGraph:
    """Grafo de Granger: arestas (e' -> e) com e customer-initiated."""
    edges: FrozenSet[Tuple[int, int]]

    def parents(self, target: int) -> List[int]:
        return sorted(src for src, dst in self.edges if dst == target)

    def edge_names(self, catalog: EventCatalog) -> List[Tuple[str, str]]:
        return sorted((catalog.type_names[a], catalog.type_names[b]) for a, b in self.edges)

    def to_dict(self, catalog: EventCatalog) -> Dict[str, list]:
        return {"edges": [list(e) for e in self.edge_names(catalog)]}


def extract_graph(params: ModelParams, threshold: float = 0.0) -> GrangerGraph:
    """Aresta (e' -> e) sse alpha[e', e] > threshold."""
    if threshold < 0:
        raise invalid_model(f"graph threshold must be >= 0, got {threshold}")
    rows, cols = np.nonzero(params.alpha > threshold)
    return GrangerGraph(frozenset(zip(rows.tolist(), cols.tolist())))


def edges_by_name(catalog: EventCatalog, edges: Optional[Sequence[Tuple[str, str]]]) -> FrozenSet[Tuple[int, int]]:
    """Converte pares de nomes em pares de índices internos."""
    return frozenset((catalog.index_of(a), catalog.index_of(b)) for a, b in (edges or []))
