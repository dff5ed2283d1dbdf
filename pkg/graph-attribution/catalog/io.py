"""
Leitura e escrita de catálogos (JSON) e paths (JSON Lines).
"""

import json
import logging
import os
from typing import IO, Iterable, List, Union

from catalog.types import Event, EventCatalog, Path
from errors import (
    GraphAttributionError,
    duplicate_timestamp,
    event_after_horizon,
    invalid_catalog,
    invalid_path,
    malformed_json_line,
    unknown_event_type,
)
from metrics import track_paths_loaded

logger = logging.getLogger("graph-attribution.catalog")

Source = Union[str, os.PathLike, IO]


def _read_text(source: Source) -> str:
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as f:
            data = f.read()
    else:
        data = source.read()
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            line = data.count(b"\n", 0, e.start) + 1
            raise malformed_json_line(line, f"invalid UTF-8 at byte {e.start}") from e
    return data


def load_catalog(source: Source) -> EventCatalog:
    """Carrega catálogo de arquivo ou stream JSON."""
    try:
        data = json.loads(_read_text(source))
    except GraphAttributionError as e:
        raise invalid_catalog(e.details.get("reason", e.message)) from e
    except json.JSONDecodeError as e:
        raise invalid_catalog(f"invalid JSON: {e}") from e
    return EventCatalog.from_dict(data)


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def parse_path_line(line: str, catalog: EventCatalog, line_number: int) -> Path:
    """Converte uma linha JSONL em Path validado.

    Eventos fora de ordem são ordenados antes da validação; timestamps
    repetidos continuam sendo erro fatal.
    """
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as e:
        raise malformed_json_line(line_number, str(e)) from e
    if not isinstance(raw, dict):
        raise malformed_json_line(line_number, "expected a JSON object")

    path_id = raw.get("path_id")
    horizon = raw.get("T")
    events = raw.get("events")
    if not isinstance(path_id, str):
        raise malformed_json_line(line_number, "missing string 'path_id'")
    if not _is_number(horizon):
        raise malformed_json_line(line_number, "missing numeric 'T'")
    if not isinstance(events, list):
        raise malformed_json_line(line_number, "missing 'events' list")

    parsed = []
    for ev in events:
        if not isinstance(ev, dict) or not _is_number(ev.get("t")) or not isinstance(ev.get("e"), str):
            raise malformed_json_line(line_number, f"malformed event {ev!r}")
        if not catalog.has_type(ev["e"]):
            raise unknown_event_type(ev["e"], path_id, line_number)
        parsed.append(Event(float(ev["t"]), catalog.index_of(ev["e"])))

    parsed.sort(key=lambda ev: ev.t)
    horizon = float(horizon)
    if horizon <= 0:
        raise invalid_path(path_id, f"horizon T must be positive, got {horizon}", line_number)
    for k, ev in enumerate(parsed):
        if ev.t < 0 or ev.t > horizon:
            raise event_after_horizon(path_id, ev.t, horizon, line_number)
        if k and ev.t == parsed[k - 1].t:
            raise duplicate_timestamp(path_id, ev.t, line_number)
    return Path(path_id, horizon, tuple(parsed))


def load_paths(source: Source, catalog: EventCatalog) -> List[Path]:
    """Carrega paths de um arquivo/stream JSONL, um path por linha.

    Linhas em branco são ignoradas. Erros carregam o número da linha.
    """
    paths = []
    for line_number, line in enumerate(_read_text(source).splitlines(), start=1):
        if not line.strip():
            continue
        try:
            paths.append(parse_path_line(line, catalog, line_number))
        except GraphAttributionError:
            raise
        except (TypeError, ValueError) as e:
            raise malformed_json_line(line_number, str(e)) from e
    track_paths_loaded(len(paths))
    logger.debug(f"{len(paths)} paths carregados")
    return paths


def path_to_dict(path: Path, catalog: EventCatalog) -> dict:
    """Forma canônica de um path (nomes de tipo, números como float)."""
    return {
        "path_id": path.path_id,
        "T": float(path.T),
        "events": [{"t": float(ev.t), "e": catalog.type_names[ev.e]} for ev in path.events],
    }


def dump_paths(paths: Iterable[Path], catalog: EventCatalog, sink: IO[str]) -> int:
    """Escreve paths em JSONL canônico. Retorna o número de linhas."""
    count = 0
    for path in paths:
        sink.write(json.dumps(path_to_dict(path, catalog)) + "\n")
        count += 1
    return count
