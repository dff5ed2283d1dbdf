"""
Contagem de conversões por canal (CCC) via execuções contrafactuais acopladas.

CCC_z = Σ_j N_conv(0, T] - Σ_j N_conv^{z-off}(0, T], com as mesmas seeds.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from catalog import CONVERSION_INDEX, Path
from simulator.engine import simulate_paths
from simulator.scenario import Scenario

logger = logging.getLogger("graph-attribution.ground-truth")


def count_conversions(paths: Sequence[Path]) -> int:
    return int(sum(int(np.sum(p.types == CONVERSION_INDEX)) for p in paths if len(p)))


@dataclass
class GroundTruth:
    """
    CCC para todos os canais.

    Attributes:
        channel_names: Canais na ordem do catálogo
        total_conversions: Conversões na execução base
        conversions_off: Conversões com cada canal desabilitado
    """
    channel_names: List[str]
    total_conversions: int
    conversions_off: Dict[str, int]

    @property
    def ccc(self) -> Dict[str, int]:
        return {z: self.total_conversions - self.conversions_off[z] for z in self.channel_names}

    def proportions(self) -> Optional[Dict[str, float]]:
        ccc = self.ccc
        total = sum(ccc.values())
        if total <= 0:
            return None
        return {z: ccc[z] / total for z in self.channel_names}

    def to_dict(self) -> dict:
        return {
            "channels": list(self.channel_names),
            "total_conversions": self.total_conversions,
            "conversions_off": dict(self.conversions_off),
            "ccc": self.ccc,
            "proportions": self.proportions(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GroundTruth":
        """Lê o formato de `to_dict` (arquivo ccc.json)."""
        return cls(
            channel_names=list(data["channels"]),
            total_conversions=int(data["total_conversions"]),
            conversions_off={str(k): int(v) for k, v in data["conversions_off"].items()},
        )


def _disabled_for(scenario: Scenario, channel: int) -> frozenset:
    return frozenset(scenario.catalog.types_in_channel(channel))


def ground_truth_ccc(
    scenario: Scenario,
    channel: int,
    threads: int = -1,
    base_paths: Optional[Sequence[Path]] = None,
) -> Tuple[int, int, int]:
    """(conversões totais, conversões com z desligado, CCC_z)."""
    if base_paths is None:
        base_paths, _ = simulate_paths(scenario, threads=threads)
    off_paths, _ = simulate_paths(scenario, _disabled_for(scenario, channel), threads=threads, kind="counterfactual")
    total = count_conversions(base_paths)
    off = count_conversions(off_paths)
    return total, off, total - off


def ground_truth_all(
    scenario: Scenario,
    threads: int = -1,
    base_paths: Optional[Sequence[Path]] = None,
) -> GroundTruth:
    """Execução base (ou paths fornecidos) + uma execução z-off por canal."""
    if base_paths is None:
        base_paths, _ = simulate_paths(scenario, threads=threads)
    total = count_conversions(base_paths)
    off = {}
    for z, name in enumerate(scenario.catalog.channel_names):
        off_paths, _ = simulate_paths(scenario, _disabled_for(scenario, z), threads=threads, kind="counterfactual")
        off[name] = count_conversions(off_paths)
        logger.info(f"Canal '{name}' desligado: {off[name]} conversões (base {total})")
    return GroundTruth(list(scenario.catalog.channel_names), total, off)
