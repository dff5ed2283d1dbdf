"""
Simulador de paths (thinning) e ground truth contrafactual
"""

from simulator.scenario import Scenario, load_scenario
from simulator.rng import derived_seed, stream
from simulator.engine import (
    SimulationStats,
    band_widths,
    simulate_path,
    simulate_path_with_stats,
    simulate_paths,
    summarize,
)
from simulator.ground_truth import (
    GroundTruth,
    count_conversions,
    ground_truth_all,
    ground_truth_ccc,
)

__all__ = [
    'Scenario',
    'load_scenario',
    'derived_seed',
    'stream',
    'SimulationStats',
    'band_widths',
    'simulate_path',
    'simulate_path_with_stats',
    'simulate_paths',
    'summarize',
    'GroundTruth',
    'count_conversions',
    'ground_truth_all',
    'ground_truth_ccc',
]
