"""
Definições de métricas Prometheus para Graph Attribution
"""

import logging
import time
from contextlib import contextmanager

from prometheus_client import (
    Counter,
    Histogram,
    start_http_server,
)

logger = logging.getLogger("graph-attribution.metrics")

# =============================================================================
# MÉTRICAS DE DADOS
# =============================================================================

PATHS_LOADED = Counter(
    'graph_attribution_paths_loaded_total',
    'Total de paths carregados de arquivos JSONL'
)

PATHS_SIMULATED = Counter(
    'graph_attribution_paths_simulated_total',
    'Total de paths simulados',
    ['kind']  # base, counterfactual
)

THINNING_CANDIDATES = Counter(
    'graph_attribution_thinning_candidates_total',
    'Candidatos do thinning no simulador',
    ['outcome']  # accepted, rejected
)

# =============================================================================
# MÉTRICAS DE ESTIMAÇÃO
# =============================================================================

ADMM_ITERATIONS = Histogram(
    'graph_attribution_admm_iterations',
    'Iterações ADMM por nó',
    buckets=[10, 50, 100, 250, 500, 1000, 2500, 5000, 10000]
)

ADMM_NOT_CONVERGED = Counter(
    'graph_attribution_admm_not_converged_total',
    'Nós que atingiram max_iter sem convergir'
)

# =============================================================================
# MÉTRICAS DE ATRIBUIÇÃO
# =============================================================================

CONVERSIONS_SCORED = Counter(
    'graph_attribution_conversions_scored_total',
    'Conversões pontuadas',
    ['method']  # dre, tre, tre-thinning, last, logistic, ...
)

# =============================================================================
# MÉTRICAS DE PIPELINE
# =============================================================================

STAGE_LATENCY = Histogram(
    'graph_attribution_stage_latency_seconds',
    'Latência por estágio do pipeline',
    ['stage'],  # simulate, ground_truth, fit, attribute, evaluate
    buckets=[0.1, 0.5, 1.0, 5.0, 10.0, 30.0, 60.0, 120.0, 300.0, 600.0]
)

PIPELINE_ERRORS = Counter(
    'graph_attribution_pipeline_errors_total',
    'Total de erros no pipeline',
    ['stage']
)

# =============================================================================
# HELPERS
# =============================================================================

def start_metrics_server(port: int = 9095):
    """Inicia servidor HTTP para expor métricas"""
    try:
        start_http_server(port)
        logger.info(f"Metrics server iniciado na porta {port}")
    except Exception as e:
        logger.error(f"Erro ao iniciar metrics server: {e}")


@contextmanager
def track_stage_latency(stage: str):
    """Context manager para medir latência de um estágio"""
    start = time.perf_counter()
    try:
        yield
    finally:
        STAGE_LATENCY.labels(stage=stage).observe(time.perf_counter() - start)


def track_pipeline_error(stage: str):
    """Registra erro no pipeline"""
    PIPELINE_ERRORS.labels(stage=stage).inc()


def track_paths_loaded(count: int):
    """Registra paths carregados"""
    PATHS_LOADED.inc(count)


def track_paths_simulated(kind: str, count: int):
    """Registra paths simulados"""
    PATHS_SIMULATED.labels(kind=kind).inc(count)


def track_thinning_candidates(accepted: int, rejected: int):
    """Registra candidatos aceitos/rejeitados do thinning"""
    if accepted:
        THINNING_CANDIDATES.labels(outcome="accepted").inc(accepted)
    if rejected:
        THINNING_CANDIDATES.labels(outcome="rejected").inc(rejected)


def track_admm_fit(iterations: int, converged: bool):
    """Registra iterações ADMM de um nó"""
    ADMM_ITERATIONS.observe(iterations)
    if not converged:
        ADMM_NOT_CONVERGED.inc()


def track_conversions_scored(method: str, count: int):
    """Registra conversões pontuadas por método"""
    CONVERSIONS_SCORED.labels(method=method).inc(count)
