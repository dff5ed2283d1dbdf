"""
Erros pré-definidos do Graph Attribution

Códigos de erro agrupados por categoria, exceções tipadas e factory
functions para criar erros com detalhes estruturados.
"""

from enum import Enum
from typing import Any, Dict, Optional


class ErrorCategory(str, Enum):
    """Categoria de erro."""
    INGEST = "ingest"
    MODEL = "model"
    ESTIMATION = "estimation"
    SIMULATION = "simulation"
    ATTRIBUTION = "attribution"
    EVALUATION = "evaluation"


# =============================================================================
# CÓDIGOS DE ERRO
# =============================================================================

# Ingest errors (1xxx)
ERROR_MALFORMED_JSON_LINE = 1001
ERROR_DUPLICATE_TIMESTAMP = 1002
ERROR_EVENT_AFTER_HORIZON = 1003
ERROR_UNKNOWN_EVENT_TYPE = 1004
ERROR_INVALID_CATALOG = 1005
ERROR_INVALID_PATH = 1006

# Model errors (2xxx)
ERROR_INVALID_MODEL = 2001
ERROR_INVALID_KERNEL = 2002
ERROR_INVALID_SCENARIO = 2003

# Estimation errors (3xxx)
ERROR_DEGENERATE_DESIGN = 3001
ERROR_QUADRATURE_FAILURE = 3002
ERROR_NODE_FIT_FAILED = 3003
ERROR_INVALID_FIT_CONFIG = 3004

# Simulation errors (4xxx)
ERROR_INTENSITY_BOUND_VIOLATION = 4001

# Attribution errors (5xxx)
ERROR_ZERO_INTENSITY = 5001
ERROR_INVALID_REMOVAL_SET = 5002
ERROR_DELETION_PROBABILITY_OUT_OF_RANGE = 5003
ERROR_TOO_MANY_CANDIDATES = 5004
ERROR_INSUFFICIENT_DATA = 5005

# Evaluation errors (6xxx)
ERROR_UNDEFINED_PROPORTIONS = 6001
ERROR_CHANNEL_MISMATCH = 6002


class GraphAttributionError(Exception):
    """
    Erro base do Graph Attribution.

    Attributes:
        code: Código do erro
        category: Categoria do erro
        message: Mensagem human-readable
        details: Detalhes adicionais
        recoverable: Se o erro é recuperável
    """

    category: ErrorCategory = ErrorCategory.INGEST

    def __init__(
        self,
        code: int,
        message: str,
        details: Optional[Dict[str, Any]] = None,
        recoverable: bool = False,
    ):
        super().__init__(message)
        self.code = code
        self.message = message
        self.details = details
        self.recoverable = recoverable

    def to_dict(self) -> dict:
        """Converte para dicionário."""
        d = {
            "code": self.code,
            "category": self.category.value,
            "message": self.message,
            "recoverable": self.recoverable,
        }
        if self.details:
            d["details"] = self.details
        return d


class IngestError(GraphAttributionError):
    category = ErrorCategory.INGEST


class ModelError(GraphAttributionError):
    category = ErrorCategory.MODEL


class EstimationError(GraphAttributionError):
    category = ErrorCategory.ESTIMATION


class SimulationError(GraphAttributionError):
    category = ErrorCategory.SIMULATION


class AttributionError(GraphAttributionError):
    category = ErrorCategory.ATTRIBUTION


class EvaluationError(GraphAttributionError):
    category = ErrorCategory.EVALUATION


# =============================================================================
# FACTORY FUNCTIONS - INGEST
# =============================================================================

def malformed_json_line(line_number: int, reason: str) -> IngestError:
    """Linha JSONL que não é um objeto de path válido."""
    return IngestError(
        code=ERROR_MALFORMED_JSON_LINE,
        message=f"Malformed path line {line_number}: {reason}",
        details={"line": line_number, "reason": reason},
    )


def duplicate_timestamp(path_id: str, t: float, line_number: Optional[int] = None) -> IngestError:
    """Dois eventos com o mesmo timestamp no mesmo path."""
    return IngestError(
        code=ERROR_DUPLICATE_TIMESTAMP,
        message=f"Duplicate timestamp t={t} in path '{path_id}'",
        details={"path_id": path_id, "t": t, "line": line_number},
    )


def event_after_horizon(path_id: str, t: float, horizon: float, line_number: Optional[int] = None) -> IngestError:
    """Evento fora de [0, T]."""
    return IngestError(
        code=ERROR_EVENT_AFTER_HORIZON,
        message=f"Event at t={t} outside [0, {horizon}] in path '{path_id}'",
        details={"path_id": path_id, "t": t, "T": horizon, "line": line_number},
    )


def unknown_event_type(name: str, path_id: str = "", line_number: Optional[int] = None) -> IngestError:
    """Nome de tipo de evento ausente do catálogo."""
    return IngestError(
        code=ERROR_UNKNOWN_EVENT_TYPE,
        message=f"Unknown event type '{name}'",
        details={"type": name, "path_id": path_id, "line": line_number},
    )


def invalid_catalog(reason: str) -> IngestError:
    """Catálogo viola as invariantes de partição/canal."""
    return IngestError(
        code=ERROR_INVALID_CATALOG,
        message=f"Invalid catalog: {reason}",
        details={"reason": reason},
    )


def invalid_path(path_id: str, reason: str, line_number: Optional[int] = None) -> IngestError:
    """Path com campos inválidos (T, id)."""
    return IngestError(
        code=ERROR_INVALID_PATH,
        message=f"Invalid path '{path_id}': {reason}",
        details={"path_id": path_id, "reason": reason, "line": line_number},
    )


# =============================================================================
# FACTORY FUNCTIONS - MODEL
# =============================================================================

def invalid_model(reason: str) -> ModelError:
    """Parâmetros do modelo inconsistentes com o catálogo."""
    return ModelError(
        code=ERROR_INVALID_MODEL,
        message=f"Invalid model: {reason}",
        details={"reason": reason},
    )


def invalid_kernel(shape: str, scale: float) -> ModelError:
    """Kernel com forma desconhecida ou escala não positiva."""
    return ModelError(
        code=ERROR_INVALID_KERNEL,
        message=f"Invalid kernel: shape='{shape}', T0={scale}",
        details={"shape": shape, "T0": scale},
    )


def invalid_scenario(reason: str) -> ModelError:
    """Cenário de simulação inválido."""
    return ModelError(
        code=ERROR_INVALID_SCENARIO,
        message=f"Invalid scenario: {reason}",
        details={"reason": reason},
    )


# =============================================================================
# FACTORY FUNCTIONS - ESTIMATION
# =============================================================================

def degenerate_design(target: str, reason: str) -> EstimationError:
    """Sistema do ADMM singular (sem dados)."""
    return EstimationError(
        code=ERROR_DEGENERATE_DESIGN,
        message=f"Degenerate design for node '{target}': {reason}",
        details={"target": target, "reason": reason},
    )


def quadrature_failure(target: str, path_id: str, t: float) -> EstimationError:
    """Integrando não finito na quadratura de V."""
    return EstimationError(
        code=ERROR_QUADRATURE_FAILURE,
        message=f"Non-finite integrand for node '{target}' on path '{path_id}' at t={t}",
        details={"target": target, "path_id": path_id, "t": t},
    )


def node_fit_failed(target: str, cause: GraphAttributionError) -> EstimationError:
    """Falha de ajuste propagada com a identidade do nó."""
    return EstimationError(
        code=ERROR_NODE_FIT_FAILED,
        message=f"Fit failed for node '{target}': {cause.message}",
        details={"target": target, "cause": cause.to_dict()},
    )


def invalid_fit_config(reason: str) -> EstimationError:
    """Configuração de ajuste inválida (tolerâncias, grid, folds)."""
    return EstimationError(
        code=ERROR_INVALID_FIT_CONFIG,
        message=f"Invalid fit configuration: {reason}",
        details={"reason": reason},
    )


# =============================================================================
# FACTORY FUNCTIONS - SIMULATION
# =============================================================================

def intensity_bound_violation(type_name: str, t: float, intensity: float, bound: float) -> SimulationError:
    """Intensidade acima do limite do thinning (bug, não dado)."""
    return SimulationError(
        code=ERROR_INTENSITY_BOUND_VIOLATION,
        message=f"Intensity {intensity} exceeds thinning bound {bound} for '{type_name}' at t={t}",
        details={"type": type_name, "t": t, "intensity": intensity, "bound": bound},
    )


# =============================================================================
# FACTORY FUNCTIONS - ATTRIBUTION
# =============================================================================

def zero_intensity(path_id: str, position: int) -> AttributionError:
    """Intensidade zero na conversão alvo: score indefinido."""
    return AttributionError(
        code=ERROR_ZERO_INTENSITY,
        message=f"Conversion intensity is zero at position {position} of path '{path_id}'",
        details={"path_id": path_id, "position": position},
        recoverable=True,
    )


def invalid_removal_set(path_id: str, reason: str) -> AttributionError:
    """Removal set inconsistente com o path ou alvo."""
    return AttributionError(
        code=ERROR_INVALID_REMOVAL_SET,
        message=f"Invalid removal set on path '{path_id}': {reason}",
        details={"path_id": path_id, "reason": reason},
        recoverable=True,
    )


def deletion_probability_out_of_range(path_id: str, position: int, probability: float) -> AttributionError:
    """Probabilidade de deleção fora de [0, 1]: invariante violada."""
    return AttributionError(
        code=ERROR_DELETION_PROBABILITY_OUT_OF_RANGE,
        message=f"Deletion probability {probability} outside [0, 1] at position {position} of path '{path_id}'",
        details={"path_id": path_id, "position": position, "probability": probability},
    )


def too_many_candidates(path_id: str, count: int, limit: int) -> AttributionError:
    """Enumeração exaustiva acima do limite configurado."""
    return AttributionError(
        code=ERROR_TOO_MANY_CANDIDATES,
        message=f"{count} thinning candidates on path '{path_id}' exceed enumeration limit {limit}",
        details={"path_id": path_id, "count": count, "limit": limit},
        recoverable=True,
    )


def insufficient_data(method: str, reason: str) -> AttributionError:
    """Baseline sem dados suficientes para ajuste."""
    return AttributionError(
        code=ERROR_INSUFFICIENT_DATA,
        message=f"Cannot fit {method}: {reason}",
        details={"method": method, "reason": reason},
    )


# =============================================================================
# FACTORY FUNCTIONS - EVALUATION
# =============================================================================

def undefined_proportions(method: str) -> EvaluationError:
    """Agregado por canal é todo zero."""
    return EvaluationError(
        code=ERROR_UNDEFINED_PROPORTIONS,
        message=f"All channel scores are zero for method '{method}'",
        details={"method": method},
    )


def channel_mismatch(expected: list, received: list) -> EvaluationError:
    """Distribuições com canais diferentes."""
    return EvaluationError(
        code=ERROR_CHANNEL_MISMATCH,
        message=f"Channel mismatch: expected {expected}, received {received}",
        details={"expected": expected, "received": received},
    )
