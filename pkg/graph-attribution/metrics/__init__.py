"""
Módulo de métricas Prometheus para Graph Attribution
"""

from metrics.prometheus_metrics import (
    # Dados
    PATHS_LOADED,
    PATHS_SIMULATED,
    THINNING_CANDIDATES,
    # Estimação
    ADMM_ITERATIONS,
    ADMM_NOT_CONVERGED,
    # Atribuição
    CONVERSIONS_SCORED,
    # Pipeline
    STAGE_LATENCY,
    PIPELINE_ERRORS,
    # Helpers
    start_metrics_server,
    track_stage_latency,
    track_pipeline_error,
    track_paths_loaded,
    track_paths_simulated,
    track_thinning_candidates,
    track_admm_fit,
    track_conversions_scored,
)

__all__ = [
    'PATHS_LOADED',
    'PATHS_SIMULATED',
    'THINNING_CANDIDATES',
    'ADMM_ITERATIONS',
    'ADMM_NOT_CONVERGED',
    'CONVERSIONS_SCORED',
    'STAGE_LATENCY',
    'PIPELINE_ERRORS',
    # Helpers
    'start_metrics_server',
    'track_stage_latency',
    'track_pipeline_error',
    'track_paths_loaded',
    'track_paths_simulated',
    'track_thinning_candidates',
    'track_admm_fit',
    'track_conversions_scored',
]
