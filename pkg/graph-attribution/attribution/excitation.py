"""
Tabela de excitação de um path.

C[i, j] = α_{e_i e_j}·ψ_{e_i e_j}(t_j - t_i) para i < j com e_j customer-initiated
(zero caso contrário), e λ_full[j] = μ_{e_j} + Σ_{i<j} C[i, j].

Removendo um conjunto S: λ_{e_j}(t_j | D \\ S) = λ_full[j] - Σ_{i∈S} C[i, j].
"""

from dataclasses import dataclass

import numpy as np

from catalog import Path
from kernels import ModelParams


@dataclass(frozen=True, eq=False)
class ExcitationTable:
    path: Path
    C: np.ndarray
    lam: np.ndarray
    customer: np.ndarray

    @classmethod
    def build(cls, path: Path, params: ModelParams) -> "ExcitationTable":
        m = len(path)
        times, types = path.times, path.types
        customer = types < params.q
        if m == 0:
            return cls(path, np.zeros((0, 0)), np.zeros(0), customer)
        dst = np.where(customer, types, 0)
        dt = times[None, :] - times[:, None]
        upper = np.triu(np.ones((m, m), dtype=bool), k=1) & customer[None, :]
        C = np.zeros((m, m))
        rows, cols = np.nonzero(upper)
        if len(rows):
            C[rows, cols] = params.excitation(types[rows], dst[cols], dt[rows, cols])
        lam = np.where(customer, params.mu[dst] + C.sum(axis=0), 0.0)
        return cls(path, C, lam, customer)

    @property
    def size(self) -> int:
        return len(self.lam)

    def reduced_intensity(self, j: int, removed) -> float:
        """λ_{e_j}(t_j | D \\ removed)."""
        idx = [i for i in removed if i < j]
        return float(self.lam[j] - self.C[idx, j].sum()) if idx else float(self.lam[j])
