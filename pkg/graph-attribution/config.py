"""
Configuração do Graph Attribution (processo pontual gráfico para atribuição multi-touch)

Todas as configurações são carregadas de variáveis de ambiente.
Nenhuma variável é obrigatória; flags da CLI sobrescrevem estes valores.
"""

import os
import sys

from dotenv import load_dotenv

# Adiciona shared ao path para imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'shared'))
from shared_config import parse_bool, parse_float_list  # noqa: E402

load_dotenv(override=False)

SERVICE_DIR = os.path.dirname(os.path.abspath(__file__))


# =============================================================================
# LOGGING
# =============================================================================

LOG_CONFIG = {
    # Nível de log (DEBUG, INFO, WARNING, ERROR, CRITICAL)
    "level": os.getenv("LOG_LEVEL", "INFO"),
}


# =============================================================================
# MÉTRICAS PROMETHEUS
# =============================================================================

METRICS_CONFIG = {
    # Porta do servidor HTTP para métricas Prometheus
    "port": int(os.getenv("METRICS_PORT", "9095")),

    # Habilitar servidor de métricas (CLI batch: desabilitado por padrão)
    "enabled": parse_bool(os.getenv("METRICS_ENABLED", "false"), False),
}


# =============================================================================
# EXECUÇÃO
# =============================================================================

EXECUTION_CONFIG = {
    # Número de threads (0 = núcleos disponíveis). Resultados independem deste valor.
    "threads": int(os.getenv("GA_THREADS", "0")),
}


# =============================================================================
# ESTIMAÇÃO (ADMM)
# =============================================================================

FIT_CONFIG = {
    # Regularização L1 por nó (gamma_e), usada quando não há seleção por CV
    "gamma": float(os.getenv("GA_FIT_GAMMA", "0.0")),

    # Penalidade do Lagrangiano aumentado (eta > 0)
    "eta": float(os.getenv("GA_FIT_ETA", "1.0")),

    # Tolerâncias de parada (resíduo primal e dual, norma infinito)
    "tol_primal": float(os.getenv("GA_FIT_TOL_PRIMAL", "1e-7")),
    "tol_dual": float(os.getenv("GA_FIT_TOL_DUAL", "1e-7")),

    # Número máximo de iterações ADMM por nó
    "max_iter": int(os.getenv("GA_FIT_MAX_ITER", "10000")),

    # Quadratura de V: auto, analytic-exp, trapezoid
    "quadrature": os.getenv("GA_FIT_QUADRATURE", "auto"),

    # Pontos do trapézio por T0 (passo = min(T0/N, segmento/8))
    "trapezoid_points_per_scale": int(os.getenv("GA_FIT_TRAPEZOID_POINTS", "50")),

    # Limiar para extração do grafo de Granger (0 = zeros exatos do ADMM)
    "graph_threshold": float(os.getenv("GA_GRAPH_THRESHOLD", "0.0")),

    # Validação cruzada para seleção de gamma
    "cv_folds": int(os.getenv("GA_CV_FOLDS", "5")),
    "gamma_grid": parse_float_list(
        os.getenv("GA_GAMMA_GRID", ""),
        [0.0, 1e-5, 1e-4, 3e-4, 1e-3, 3e-3, 1e-2],
    ),

    # Regra de seleção: min (menor perda) ou one_se (maior gamma a 1 erro padrão)
    "selection_rule": os.getenv("GA_SELECTION_RULE", "min"),

    # Seed do embaralhamento dos folds
    "cv_seed": int(os.getenv("GA_CV_SEED", "20240601")),
}


# =============================================================================
# SIMULADOR
# =============================================================================

SIMULATION_CONFIG = {
    # Folga relativa ao verificar lambda <= limite superior no thinning
    "bound_tolerance": float(os.getenv("GA_SIM_BOUND_TOLERANCE", "1e-9")),
}


# =============================================================================
# ATRIBUIÇÃO
# =============================================================================

ATTRIBUTION_CONFIG = {
    # Método padrão: dre, tre (backpropagation), tre-thinning
    "method": os.getenv("GA_ATTRIBUTION_METHOD", "tre"),

    # Réplicas L do thinning Monte-Carlo
    "thinning_replicates": int(os.getenv("GA_THINNING_REPLICATES", "10000")),

    # Limite de candidatos para enumeração exaustiva (2^n subconjuntos)
    "max_exhaustive_candidates": int(os.getenv("GA_MAX_EXHAUSTIVE_CANDIDATES", "20")),

    # Tolerância numérica para probabilidades de remoção fora de [0, 1]
    "probability_tolerance": float(os.getenv("GA_PROBABILITY_TOLERANCE", "1e-9")),
}


# =============================================================================
# BASELINES
# =============================================================================

BASELINE_CONFIG = {
    # Meia-vida da regra time-decay (dias)
    "decay_half_life_days": float(os.getenv("GA_DECAY_HALF_LIFE_DAYS", "7.0")),

    # Newton amortecido da regressão logística
    "logistic_max_iter": int(os.getenv("GA_LOGISTIC_MAX_ITER", "100")),
    "logistic_tol": float(os.getenv("GA_LOGISTIC_TOL", "1e-10")),

    # Ridge de fallback em separação completa
    "logistic_ridge": float(os.getenv("GA_LOGISTIC_RIDGE", "1e-4")),

    # |beta| acima deste valor indica separação
    "logistic_separation_threshold": float(os.getenv("GA_LOGISTIC_SEPARATION", "30.0")),
}


# =============================================================================
# REPRODUÇÃO (estudo Hawkes)
# =============================================================================

REPRODUCE_CONFIG = {
    # Número de execuções independentes
    "runs": int(os.getenv("GA_REPRODUCE_RUNS", "10")),

    # Seed mestre
    "seed": int(os.getenv("GA_REPRODUCE_SEED", "20240101")),

    # Cenário padrão
    "scenario": os.getenv(
        "GA_REPRODUCE_SCENARIO",
        os.path.join(SERVICE_DIR, "scenarios", "display_search.json"),
    ),
}
