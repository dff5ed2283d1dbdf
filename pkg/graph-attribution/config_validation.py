"""
Validação de configuração com Pydantic.

Valida todas as configurações no startup da CLI e falha com mensagem
clara se alguma configuração for inválida.
"""

import logging
from typing import List

from pydantic import BaseModel, ValidationError, field_validator

logger = logging.getLogger("graph-attribution.config-validation")

VALID_LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
VALID_QUADRATURES = ["auto", "analytic-exp", "trapezoid"]
VALID_SELECTION_RULES = ["min", "one_se"]
VALID_METHODS = ["dre", "tre", "tre-thinning", "tre-exhaustive"]


class LogSettings(BaseModel):
    """Validação de configurações de logging."""
    level: str

    @field_validator('level')
    @classmethod
    def validate_level(cls, v):
        if v.upper() not in VALID_LOG_LEVELS:
            raise ValueError(f"LOG_LEVEL deve ser um de {VALID_LOG_LEVELS}, recebeu: '{v}'")
        return v


class MetricsSettings(BaseModel):
    """Validação de configurações de métricas."""
    port: int
    enabled: bool

    @field_validator('port')
    @classmethod
    def validate_port(cls, v):
        if v < 1 or v > 65535:
            raise ValueError(f"port deve ser entre 1 e 65535, recebeu: {v}")
        return v


class ExecutionSettings(BaseModel):
    """Validação de configurações de execução."""
    threads: int

    @field_validator('threads')
    @classmethod
    def validate_threads(cls, v):
        if v < 0:
            raise ValueError(f"threads deve ser >= 0 (0 = todos os núcleos), recebeu: {v}")
        return v


class FitSettings(BaseModel):
    """Validação de configurações de estimação."""
    gamma: float
    eta: float
    tol_primal: float
    tol_dual: float
    max_iter: int
    quadrature: str
    trapezoid_points_per_scale: int
    graph_threshold: float
    cv_folds: int
    gamma_grid: List[float]
    selection_rule: str

    @field_validator('gamma', 'graph_threshold')
    @classmethod
    def validate_nonnegative(cls, v):
        if v < 0:
            raise ValueError(f"valor deve ser >= 0, recebeu: {v}")
        return v

    @field_validator('eta', 'tol_primal', 'tol_dual')
    @classmethod
    def validate_positive(cls, v):
        if v <= 0:
            raise ValueError(f"valor deve ser > 0, recebeu: {v}")
        return v

    @field_validator('max_iter', 'trapezoid_points_per_scale')
    @classmethod
    def validate_count(cls, v):
        if v < 1:
            raise ValueError(f"valor deve ser >= 1, recebeu: {v}")
        return v

    @field_validator('quadrature')
    @classmethod
    def validate_quadrature(cls, v):
        if v not in VALID_QUADRATURES:
            raise ValueError(f"quadrature deve ser um de {VALID_QUADRATURES}, recebeu: '{v}'")
        return v

    @field_validator('cv_folds')
    @classmethod
    def validate_folds(cls, v):
        if v < 2:
            raise ValueError(f"cv_folds deve ser >= 2, recebeu: {v}")
        return v

    @field_validator('gamma_grid')
    @classmethod
    def validate_grid(cls, v):
        if not v:
            raise ValueError("gamma_grid não pode ser vazio")
        if any(g < 0 for g in v):
            raise ValueError(f"gamma_grid deve conter valores >= 0, recebeu: {v}")
        return v

    @field_validator('selection_rule')
    @classmethod
    def validate_rule(cls, v):
        if v not in VALID_SELECTION_RULES:
            raise ValueError(f"selection_rule deve ser um de {VALID_SELECTION_RULES}, recebeu: '{v}'")
        return v


class SimulationSettings(BaseModel):
    """Validação de configurações do simulador."""
    bound_tolerance: float

    @field_validator('bound_tolerance')
    @classmethod
    def validate_tolerance(cls, v):
        if v < 0 or v > 1e-3:
            raise ValueError(f"bound_tolerance deve ser entre 0 e 1e-3, recebeu: {v}")
        return v


class AttributionSettings(BaseModel):
    """Validação de configurações de atribuição."""
    method: str
    thinning_replicates: int
    max_exhaustive_candidates: int
    probability_tolerance: float

    @field_validator('method')
    @classmethod
    def validate_method(cls, v):
        if v not in VALID_METHODS:
            raise ValueError(f"method deve ser um de {VALID_METHODS}, recebeu: '{v}'")
        return v

    @field_validator('thinning_replicates')
    @classmethod
    def validate_replicates(cls, v):
        if v < 1:
            raise ValueError(f"thinning_replicates deve ser >= 1, recebeu: {v}")
        return v

    @field_validator('max_exhaustive_candidates')
    @classmethod
    def validate_cap(cls, v):
        if v < 0 or v > 30:
            raise ValueError(f"max_exhaustive_candidates deve ser entre 0 e 30, recebeu: {v}")
        return v


class BaselineSettings(BaseModel):
    """Validação de configurações dos baselines."""
    decay_half_life_days: float
    logistic_max_iter: int
    logistic_tol: float
    logistic_ridge: float
    logistic_separation_threshold: float

    @field_validator('decay_half_life_days', 'logistic_tol', 'logistic_ridge', 'logistic_separation_threshold')
    @classmethod
    def validate_positive(cls, v):
        if v <= 0:
            raise ValueError(f"valor deve ser > 0, recebeu: {v}")
        return v

    @field_validator('logistic_max_iter')
    @classmethod
    def validate_iterations(cls, v):
        if v < 1:
            raise ValueError(f"logistic_max_iter deve ser >= 1, recebeu: {v}")
        return v


class ReproduceSettings(BaseModel):
    """Validação de configurações da reprodução."""
    runs: int
    seed: int
    scenario: str

    @field_validator('runs')
    @classmethod
    def validate_runs(cls, v):
        if v < 1:
            raise ValueError(f"runs deve ser >= 1, recebeu: {v}")
        return v


def validate_config():
    """Valida todas as configurações no startup.

    Falha com mensagem clara se alguma configuração for inválida.
    Retorna True se todas as validações passaram.
    """
    from config import (
        LOG_CONFIG, METRICS_CONFIG, EXECUTION_CONFIG, FIT_CONFIG,
        SIMULATION_CONFIG, ATTRIBUTION_CONFIG, BASELINE_CONFIG, REPRODUCE_CONFIG,
    )

    errors = []

    sections = [
        ("Log", LogSettings, LOG_CONFIG),
        ("Metrics", MetricsSettings, METRICS_CONFIG),
        ("Execution", ExecutionSettings, EXECUTION_CONFIG),
        ("Fit", FitSettings, FIT_CONFIG),
        ("Simulation", SimulationSettings, SIMULATION_CONFIG),
        ("Attribution", AttributionSettings, ATTRIBUTION_CONFIG),
        ("Baseline", BaselineSettings, BASELINE_CONFIG),
        ("Reproduce", ReproduceSettings, REPRODUCE_CONFIG),
    ]
    for name, model, values in sections:
        try:
            model(**{k: values[k] for k in model.model_fields})
        except (ValidationError, KeyError) as e:
            errors.append(f"[{name}] {e}")

    if errors:
        msg = "Erros de configuração encontrados:\n" + "\n".join(f"  {e}" for e in errors)
        logger.error(msg)
        raise ValueError(msg)

    logger.info("Todas as configurações validadas com sucesso")
    return True
