"""
Utilidades compartilhadas pelos subcomandos: configuração do experimento,
tabelas alinhadas, escrita de JSON e ajuste com seleção de γ.
"""

import json
import logging
import os
from typing import Dict, List, Optional, Sequence

from pydantic import BaseModel, field_validator, model_validator

from attribution import METHODS
from baselines import BASELINES, BaselineSpec
from catalog import EventCatalog, Path, load_catalog
from config import EXECUTION_CONFIG
from errors import GraphAttributionError, invalid_catalog, invalid_model, unknown_event_type
from estimation import (
    FitConfig,
    FitResult,
    build_contributions,
    fit_contributions,
    select_gamma_from_contributions,
)
from estimation.design import KernelSpec
from kernels import Kernel
from simulator import load_scenario

logger = logging.getLogger("graph-attribution.cli")

KNOWN_METHODS = set(METHODS) | set(BASELINES)


class ExperimentConfig(BaseModel):
    """
    Entradas de um subcomando, validadas antes de qualquer estágio.

    Arquivos referenciados precisam existir; diretório de saída é criado.
    """
    scenario: Optional[str] = None
    model: Optional[str] = None
    catalog: Optional[str] = None
    paths: Optional[str] = None
    truth: Optional[str] = None
    scores: List[str] = []
    methods: List[str] = []
    seed: int = 0
    runs: int = 1
    out: Optional[str] = None
    threads: int = 0

    @field_validator('scenario', 'model', 'catalog', 'paths', 'truth')
    @classmethod
    def validate_file(cls, v):
        if v is not None and not os.path.isfile(v):
            raise ValueError(f"arquivo não encontrado: '{v}'")
        return v

    @field_validator('scores')
    @classmethod
    def validate_scores(cls, v):
        missing = [f for f in v if not os.path.isfile(f)]
        if missing:
            raise ValueError(f"arquivos não encontrados: {missing}")
        return v

    @field_validator('methods')
    @classmethod
    def validate_methods(cls, v):
        for method in v:
            if method in METHODS:
                continue
            try:
                BaselineSpec.from_name(method)
            except GraphAttributionError:
                raise ValueError(f"método desconhecido '{method}', esperado um de {sorted(KNOWN_METHODS)}") from None
        return v

    @field_validator('runs')
    @classmethod
    def validate_runs(cls, v):
        if v < 1:
            raise ValueError(f"runs deve ser >= 1, recebeu: {v}")
        return v

    @field_validator('seed')
    @classmethod
    def validate_seed(cls, v):
        if not 0 <= v < 2 ** 64:
            raise ValueError(f"seed deve ser um inteiro de 64 bits sem sinal, recebeu: {v}")
        return v

    @field_validator('threads')
    @classmethod
    def validate_threads(cls, v):
        if v < 0:
            raise ValueError(f"threads deve ser >= 0, recebeu: {v}")
        return v

    @model_validator(mode="after")
    def validate_catalog_source(self):
        if self.paths is not None and self.catalog is None and self.scenario is None:
            raise ValueError("--paths exige --catalog ou --scenario")
        return self

    def output_path(self, default_name: str) -> str:
        """Arquivo de saída: --out se for arquivo, ou default_name dentro de --out."""
        if self.out is None:
            return default_name
        if self.out.endswith(os.sep) or os.path.isdir(self.out):
            os.makedirs(self.out, exist_ok=True)
            return os.path.join(self.out, default_name)
        parent = os.path.dirname(self.out)
        if parent:
            os.makedirs(parent, exist_ok=True)
        return self.out

    def output_dir(self, default_dir: str) -> str:
        """--out sempre como diretório (criado se preciso)."""
        directory = self.out or default_dir
        os.makedirs(directory, exist_ok=True)
        return directory


def parse_kernel(text: str) -> Kernel:
    """'exp_decay:10' -> Kernel(EXP_DECAY, 10)."""
    shape, _, scale = text.partition(":")
    try:
        return Kernel.from_dict({"shape": shape, "T0": float(scale or "nan")})
    except ValueError:
        raise invalid_model(f"kernel must look like 'exp_decay:10', got '{text}'") from None


def write_json(path: str, data) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, sort_keys=False)
        f.write("\n")
    logger.info(f"Escrito: {path}")


def read_json(path: str):
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def format_table(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    """Tabela em texto com colunas alinhadas; números com 4 casas."""
    def cell(value) -> str:
        if isinstance(value, float):
            return f"{value:.4f}"
        return str(value)

    body = [[cell(v) for v in row] for row in rows]
    widths = [max(len(str(h)), *(len(r[k]) for r in body)) if body else len(str(h)) for k, h in enumerate(headers)]
    lines = ["  ".join(str(h).ljust(w) for h, w in zip(headers, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for row in body:
        lines.append("  ".join(v.rjust(w) if k else v.ljust(w) for k, (v, w) in enumerate(zip(row, widths))))
    return "\n".join(lines)


def print_table(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> None:
    print(format_table(headers, rows))


def fit_model(
    paths: Sequence[Path],
    catalog: EventCatalog,
    kernels: KernelSpec,
    config: FitConfig,
    gamma: Optional[float] = None,
    grid: Optional[Sequence[float]] = None,
    folds: int = 5,
    rule: str = "min",
    seed: int = 0,
) -> FitResult:
    """Ajuste completo: γ fixo se dado, senão seleção por validação cruzada no grid."""
    contributions = build_contributions(
        paths, catalog, kernels,
        quadrature=config.quadrature,
        points_per_scale=config.trapezoid_points,
        threads=config.threads,
    )
    losses: Dict[int, List[Optional[float]]] = {}
    if gamma is not None:
        gammas = {target: float(gamma) for target in contributions}
    elif grid:
        selection = select_gamma_from_contributions(contributions, catalog, grid, folds, config, rule, seed)
        gammas = selection.gamma
        losses = selection.mean_loss
    else:
        gammas = {target: config.gamma_for(target) for target in contributions}
    result = fit_contributions(contributions, catalog, kernels, config, gammas)
    result.selection_losses = losses
    if not result.converged:
        logger.warning("Ajuste terminou com nós não convergidos (ver diagnóstico)")
    return result


def add_execution_arguments(parser, seed_default: Optional[int] = 0) -> None:
    """--seed, --threads e --out, comuns a todos os subcomandos."""
    group = parser.add_argument_group("Execution")
    group.add_argument(
        "--seed",
        type=int,
        default=seed_default,
        help=f"Seed mestre (default: {seed_default})"
    )
    group.add_argument(
        "--threads",
        type=int,
        default=None,
        help="Threads (0 = todos os núcleos; default: GA_THREADS). Resultados independem deste valor"
    )
    group.add_argument(
        "--out",
        type=str,
        default=None,
        help="Arquivo ou diretório de saída"
    )


def resolve_threads_arg(threads: Optional[int]) -> int:
    return EXECUTION_CONFIG["threads"] if threads is None else threads


def resolve_catalog(cfg: ExperimentConfig) -> EventCatalog:
    """Catálogo de --catalog ou, na falta dele, do cenário."""
    if cfg.catalog is not None:
        return load_catalog(cfg.catalog)
    if cfg.scenario is not None:
        return load_scenario(cfg.scenario).catalog
    raise invalid_catalog("no catalog given (use --catalog or --scenario)")


def resolve_disabled(catalog: EventCatalog, names: Sequence[str]) -> frozenset:
    """Nomes de tipo ou de canal -> índices de tipo desabilitados."""
    disabled = set()
    for name in names:
        if catalog.has_type(name):
            disabled.add(catalog.index_of(name))
        elif name in catalog.channel_names:
            disabled.update(catalog.types_in_channel(catalog.channel_index(name)))
        else:
            raise unknown_event_type(name)
    return frozenset(disabled)
