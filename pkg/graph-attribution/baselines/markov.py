"""
Baseline de removal effect em cadeia de Markov de primeira ordem.

Estados: START, um por canal, CONV e NULL (absorventes). Cada path vira
uma sequência de canais com repetições consecutivas colapsadas; paths
positivos usam os touchpoints anteriores à última conversão e terminam
em CONV, os demais terminam em NULL.

Removal effect do canal z: 1 - P_z/P, onde P é a probabilidade de
absorção em CONV a partir de START e P_z a mesma probabilidade com as
transições para z redirecionadas a NULL.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from catalog import EventCatalog, Path
from errors import insufficient_data

logger = logging.getLogger("graph-attribution.baselines")

START = "START"
CONV = "CONV"
NULL = "NULL"


def channel_sequence(path: Path, catalog: EventCatalog) -> List[int]:
    """Canais dos touchpoints (até a última conversão, se houver), sem repetições consecutivas."""
    conversions = path.conversion_positions
    end = conversions[-1] if conversions else len(path)
    sequence: List[int] = []
    for i in path.touchpoint_positions(end):
        z = catalog.channel_of[path.events[i].e]
        if not sequence or sequence[-1] != z:
            sequence.append(z)
    return sequence


@dataclass
class MarkovChain:
    """
    Contagens de transição entre estados.

    Índices: 0 = START, 1..Z = canais, Z+1 = CONV, Z+2 = NULL.
    """
    channel_names: List[str]
    counts: np.ndarray

    @property
    def n_channels(self) -> int:
        return len(self.channel_names)

    @property
    def conv_state(self) -> int:
        return self.n_channels + 1

    @property
    def null_state(self) -> int:
        return self.n_channels + 2

    @property
    def state_names(self) -> List[str]:
        return [START] + list(self.channel_names) + [CONV, NULL]

    @classmethod
    def from_paths(cls, paths: Sequence[Path], catalog: EventCatalog) -> "MarkovChain":
        Z = catalog.n_channels
        counts = np.zeros((Z + 3, Z + 3))
        for path in paths:
            states = [0] + [z + 1 for z in channel_sequence(path, catalog)]
            states.append(Z + 1 if path.is_positive else Z + 2)
            for a, b in zip(states[:-1], states[1:]):
                counts[a, b] += 1.0
        return cls(list(catalog.channel_names), counts)

    def transition_matrix(self) -> np.ndarray:
        """Probabilidades por linha; linhas sem saída ficam zeradas."""
        totals = self.counts.sum(axis=1, keepdims=True)
        return np.divide(self.counts, totals, out=np.zeros_like(self.counts), where=totals > 0)

    def conversion_probability(self, removed: Optional[int] = None) -> float:
        """P(absorção em CONV | START), com o canal `removed` (0-based) redirecionado a NULL."""
        return absorption_probability(self.transition_matrix(), self.conv_state,
                                      None if removed is None else removed + 1)


def absorption_probability(P: np.ndarray, absorbing: int, removed_state: Optional[int] = None) -> float:
    """Probabilidade de absorção em `absorbing` partindo do estado 0.

    Os estados transientes são 0..absorbing-1; um estado removido tem a
    coluna zerada em Q (a massa que entraria nele vai para NULL).
    """
    transient = absorbing
    Q = P[:transient, :transient].copy()
    r = P[:transient, absorbing]
    if removed_state is not None:
        Q[:, removed_state] = 0.0
    x = np.linalg.solve(np.eye(transient) - Q, r)
    return float(x[0])


def markov_removal(paths: Sequence[Path], catalog: EventCatalog) -> Dict[str, float]:
    """Removal effect por canal; sistema singular ou P = 0 -> zeros com warning."""
    if not any(p.is_positive for p in paths):
        raise insufficient_data("markov", "need at least one positive path")
    chain = MarkovChain.from_paths(paths, catalog)
    zeros = {name: 0.0 for name in chain.channel_names}
    try:
        base = chain.conversion_probability()
        if not base > 0:
            logger.warning("CONV inalcançável a partir de START; removal effects zerados")
            return zeros
        effects = {}
        for z, name in enumerate(chain.channel_names):
            effects[name] = float(np.clip(1.0 - chain.conversion_probability(z) / base, 0.0, 1.0))
    except np.linalg.LinAlgError:
        logger.warning("Sistema de absorção singular; removal effects zerados")
        return zeros
    return effects
