"""
Logging estruturado por execução do estudo.

RunLoggerAdapter prefixa cada mensagem com a posição da execução no estudo
(índice/total), o seed derivado e a etapa corrente, e repassa os mesmos
campos como atributos do LogRecord para handlers estruturados.

Uso:
    from utils.logging import get_run_logger

    logger = get_run_logger("graph-attribution.reproduce", run_index=2, n_runs=10, seed=77)
    logger.info("Simulando paths")
    # Output: [run 3/10 seed=77] Simulando paths

    with logger.timed("fit") as log:
        log.info("γ selecionado")
    # Output: [run 3/10 seed=77] [fit] γ selecionado
    #         [run 3/10 seed=77] [fit] etapa concluída (890ms)
"""

import logging
import time
from contextlib import contextmanager
from typing import Any, Iterator, MutableMapping, Optional


class RunLoggerAdapter(logging.LoggerAdapter):
    """Logger que injeta índice da execução, seed e etapa em todas as mensagens."""

    def __init__(
        self,
        logger: logging.Logger,
        run_index: Optional[int] = None,
        n_runs: Optional[int] = None,
        seed: Optional[int] = None,
        stage: str = "",
    ):
        super().__init__(logger, {"run_index": run_index, "n_runs": n_runs, "seed": seed, "stage": stage})

    def with_stage(self, stage: str) -> "RunLoggerAdapter":
        """Mesmo contexto de execução, outra etapa."""
        ctx = self.extra
        return RunLoggerAdapter(self.logger, ctx["run_index"], ctx["n_runs"], ctx["seed"], stage)

    @contextmanager
    def timed(self, stage: str) -> Iterator["RunLoggerAdapter"]:
        """Bloco de uma etapa; loga a duração se o bloco terminar sem erro."""
        log = self.with_stage(stage)
        start = time.perf_counter()
        yield log
        log.info("etapa concluída", extra={"duration_ms": (time.perf_counter() - start) * 1000})

    def _run_label(self) -> str:
        run_index = self.extra["run_index"]
        if run_index is None:
            return ""
        n_runs = self.extra["n_runs"]
        label = f"run {run_index + 1}/{n_runs}" if n_runs else f"run {run_index + 1}"
        if self.extra["seed"] is not None:
            label += f" seed={self.extra['seed']}"
        return f"[{label}]"

    def process(
        self, msg: str, kwargs: MutableMapping[str, Any]
    ) -> tuple:
        extra = kwargs.get("extra", {})
        stage = extra.get("stage") or self.extra["stage"]
        prefix = " ".join(part for part in (self._run_label(), f"[{stage}]" if stage else "") if part)

        duration_ms = extra.get("duration_ms")
        suffix = f" ({duration_ms:.0f}ms)" if duration_ms is not None else ""

        # Não muta o dict do caller
        filtered_extra = {k: v for k, v in extra.items() if k not in ("stage", "duration_ms")}
        kwargs["extra"] = {**self.extra, "stage": stage, **filtered_extra}
        text = f"{prefix} {msg}{suffix}" if prefix else f"{msg}{suffix}"
        return text, kwargs


def get_run_logger(
    name: str,
    run_index: Optional[int] = None,
    n_runs: Optional[int] = None,
    seed: Optional[int] = None,
) -> RunLoggerAdapter:
    """Cria um logger com o contexto de uma execução.

    Args:
        name: Nome do logger (ex: "graph-attribution.fit")
        run_index: Índice da execução a partir de 0 (None = sem prefixo)
        n_runs: Total de execuções do estudo
        seed: Seed derivado da execução

    Returns:
        RunLoggerAdapter com contexto de execução
    """
    return RunLoggerAdapter(logging.getLogger(name), run_index, n_runs, seed)
