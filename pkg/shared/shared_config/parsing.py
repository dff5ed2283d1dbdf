"""Parsing de variáveis de ambiente compartilhado entre serviços."""
from typing import List, Sequence

TRUTHY = frozenset({"true", "1", "yes", "on"})


def parse_bool(value: str, default: bool = False) -> bool:
    """'true', '1', 'yes' ou 'on' (sem diferenciar caixa) viram True; vazio usa default."""
    if not value or not value.strip():
        return default
    return value.strip().lower() in TRUTHY


def parse_list(value: str, default: Sequence[str]) -> List[str]:
    """Itens separados por vírgula, sem espaços nas pontas; vazio usa default."""
    items = [item.strip() for item in (value or "").split(",")]
    items = [item for item in items if item]
    return items if items else list(default)


def parse_float_list(value: str, default: Sequence[float]) -> List[float]:
    """Lista numérica separada por vírgula (ex: grid de gamma "0,1e-4,1e-3").

    Raises:
        ValueError: se algum item não for numérico
    """
    items = parse_list(value, [])
    if not items:
        return [float(v) for v in default]
    try:
        return [float(item) for item in items]
    except ValueError as e:
        raise ValueError(f"Lista numérica inválida: '{value}'") from e
