"""
Kernels, parâmetros do modelo e intensidade condicional
"""

from kernels.kernel import Kernel, KernelShape
from kernels.params import (
    GrangerGraph,
    ModelParams,
    edges_by_name,
    extract_graph,
    load_model,
)
from kernels.intensity import (
    compensator,
    feature,
    history_intensities,
    intensity,
    intensity_vector,
    rescaled_intervals,
)

__all__ = [
    'Kernel',
    'KernelShape',
    'GrangerGraph',
    'ModelParams',
    'edges_by_name',
    'extract_graph',
    'load_model',
    'compensator',
    'feature',
    'history_intensities',
    'intensity',
    'intensity_vector',
    'rescaled_intervals',
]
