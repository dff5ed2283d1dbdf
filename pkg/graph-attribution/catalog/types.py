"""
Tipos de domínio: catálogo de eventos, eventos, paths e removal sets.

Indexação interna dos tipos: o bloco customer-initiated vem primeiro,
com a conversão no índice 0; os tipos firm-initiated ocupam q..p-1.
Colunas de alpha (p x q) são indexadas pelos tipos customer-initiated.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from errors import (
    duplicate_timestamp,
    event_after_horizon,
    invalid_catalog,
    invalid_path,
    invalid_removal_set,
)

CONVERSION_INDEX = 0

CUSTOMER = "customer"
FIRM = "firm"


@dataclass(frozen=True)
class EventCatalog:
    """
    Catálogo dos p tipos de evento.

    Attributes:
        type_names: Nomes únicos, na ordem interna (conversão, customer, firm)
        q: Número de tipos customer-initiated (inclui a conversão)
        channel_of: Índice do canal de cada tipo (None para a conversão)
        channel_names: Nomes dos Z canais, na ordem em que aparecem em type_names
    """
    type_names: Tuple[str, ...]
    q: int
    channel_of: Tuple[Optional[int], ...]
    channel_names: Tuple[str, ...]
    _index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        p = len(self.type_names)
        if len(set(self.type_names)) != p:
            raise invalid_catalog("type names must be unique")
        if not 1 <= self.q < p:
            raise invalid_catalog(f"need 1 <= q < p, got q={self.q}, p={p}")
        if len(self.channel_of) != p:
            raise invalid_catalog("channel_of must have one entry per type")
        if self.channel_of[CONVERSION_INDEX] is not None:
            raise invalid_catalog("conversion type cannot belong to a marketing channel")
        for k in range(1, p):
            z = self.channel_of[k]
            if z is None or not 0 <= z < len(self.channel_names):
                raise invalid_catalog(f"type '{self.type_names[k]}' has no valid channel")
        object.__setattr__(self, "_index", {name: k for k, name in enumerate(self.type_names)})

    @property
    def p(self) -> int:
        return len(self.type_names)

    @property
    def conversion_index(self) -> int:
        return CONVERSION_INDEX

    @property
    def conversion_name(self) -> str:
        return self.type_names[CONVERSION_INDEX]

    @property
    def customer_initiated(self) -> range:
        return range(self.q)

    @property
    def firm_initiated(self) -> range:
        return range(self.q, self.p)

    @property
    def n_channels(self) -> int:
        return len(self.channel_names)

    def is_customer(self, k: int) -> bool:
        return 0 <= k < self.q

    def initiator(self, k: int) -> str:
        return CUSTOMER if self.is_customer(k) else FIRM

    def index_of(self, name: str) -> int:
        """Índice interno do tipo; KeyError se desconhecido."""
        return self._index[name]

    def has_type(self, name: str) -> bool:
        return name in self._index

    def channel_index(self, name: str) -> int:
        try:
            return self.channel_names.index(name)
        except ValueError:
            raise invalid_catalog(f"unknown channel '{name}'") from None

    def types_in_channel(self, z: int) -> List[int]:
        return [k for k, c in enumerate(self.channel_of) if c == z]

    def to_dict(self) -> dict:
        """Formato do arquivo de catálogo (tipos na ordem interna)."""
        return {
            "types": [
                {
                    "name": name,
                    "initiator": self.initiator(k),
                    "channel": None if self.channel_of[k] is None else self.channel_names[self.channel_of[k]],
                }
                for k, name in enumerate(self.type_names)
            ],
            "conversion": self.conversion_name,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EventCatalog":
        """Cria catálogo a partir do JSON, reordenando para a indexação interna."""
        if not isinstance(data, dict) or not isinstance(data.get("types"), list):
            raise invalid_catalog("expected object with a 'types' list")
        conversion = data.get("conversion")
        if not isinstance(conversion, str):
            raise invalid_catalog("missing 'conversion' type name")

        entries = []
        for raw in data["types"]:
            if not isinstance(raw, dict) or not isinstance(raw.get("name"), str):
                raise invalid_catalog(f"malformed type entry: {raw!r}")
            initiator = raw.get("initiator")
            if initiator not in (CUSTOMER, FIRM):
                raise invalid_catalog(f"type '{raw['name']}' has initiator {initiator!r}")
            channel = raw.get("channel")
            if channel is not None and not isinstance(channel, str):
                raise invalid_catalog(f"type '{raw['name']}' has non-string channel")
            entries.append((raw["name"], initiator, channel))

        conv = [e for e in entries if e[0] == conversion]
        if not conv:
            raise invalid_catalog(f"conversion type '{conversion}' not in types")
        if len(conv) > 1:
            raise invalid_catalog(f"conversion type '{conversion}' listed {len(conv)} times")
        if conv[0][1] != CUSTOMER or conv[0][2] is not None:
            raise invalid_catalog("conversion must be customer-initiated with channel null")

        ordered = (
            conv[:1]
            + [e for e in entries if e[1] == CUSTOMER and e[0] != conversion]
            + [e for e in entries if e[1] == FIRM]
        )
        channel_names: List[str] = []
        for _, _, channel in ordered:
            if channel is not None and channel not in channel_names:
                channel_names.append(channel)

        return cls(
            type_names=tuple(e[0] for e in ordered),
            q=sum(1 for e in ordered if e[1] == CUSTOMER),
            channel_of=tuple(None if e[2] is None else channel_names.index(e[2]) for e in ordered),
            channel_names=tuple(channel_names),
        )


@dataclass(frozen=True)
class Event:
    """Um evento (t_i, e_i): timestamp em dias e índice interno do tipo."""
    t: float
    e: int


def _check_events(path_id: str, horizon: float, events: Sequence[Event], line: Optional[int] = None):
    if not (isinstance(horizon, (int, float)) and np.isfinite(horizon) and horizon > 0):
        raise invalid_path(path_id, f"horizon T must be positive, got {horizon!r}", line)
    previous = None
    for ev in events:
        if not (0.0 <= ev.t <= horizon):
            raise event_after_horizon(path_id, ev.t, horizon, line)
        if previous is not None:
            if ev.t == previous:
                raise duplicate_timestamp(path_id, ev.t, line)
            if ev.t < previous:
                raise invalid_path(path_id, "events must be sorted by time", line)
        previous = ev.t


@dataclass(frozen=True)
class Path:
    """
    Path de um cliente em [0, T], eventos em ordem estritamente crescente.

    Attributes:
        path_id: Identificador do path
        T: Horizonte (dias)
        events: Eventos ordenados
    """
    path_id: str
    T: float
    events: Tuple[Event, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        _check_events(self.path_id, self.T, self.events)

    def __len__(self) -> int:
        return len(self.events)

    @cached_property
    def times(self) -> np.ndarray:
        return np.array([ev.t for ev in self.events], dtype=float)

    @cached_property
    def types(self) -> np.ndarray:
        return np.array([ev.e for ev in self.events], dtype=int)

    @property
    def is_positive(self) -> bool:
        return any(ev.e == CONVERSION_INDEX for ev in self.events)

    @property
    def conversion_positions(self) -> List[int]:
        return [i for i, ev in enumerate(self.events) if ev.e == CONVERSION_INDEX]

    def touchpoint_positions(self, before: Optional[int] = None) -> List[int]:
        """Posições de eventos não-conversão anteriores à posição `before`."""
        end = len(self.events) if before is None else before
        return [i for i in range(end) if self.events[i].e != CONVERSION_INDEX]

    def without(self, positions: Iterable[int]) -> "Path":
        """Cópia do path sem os eventos nas posições dadas (D \\ R)."""
        drop = set(positions)
        return Path(self.path_id, self.T, tuple(ev for i, ev in enumerate(self.events) if i not in drop))


def truncate_before(path: Path, t: float, labels: Iterable[int]) -> List[Event]:
    """Eventos com t_i < t e tipo em labels, na ordem do path."""
    wanted = set(labels)
    return [ev for ev in path.events if ev.t < t and ev.e in wanted]


@dataclass(frozen=True)
class RemovalSet:
    """
    Removal set R sobre um path, com a conversão alvo i⋆.

    Attributes:
        indices: Posições removidas (todas < target)
        target: Posição da conversão alvo
    """
    indices: FrozenSet[int]
    target: int

    def __post_init__(self):
        object.__setattr__(self, "indices", frozenset(int(i) for i in self.indices))

    @property
    def i_min(self) -> int:
        return min(self.indices)

    def validate(self, path: Path, allow_conversions: bool = False, require_nonempty: bool = False) -> None:
        """Verifica alvo, posições e tipos contra o path."""
        if not 0 <= self.target < len(path.events) or path.events[self.target].e != CONVERSION_INDEX:
            raise invalid_removal_set(path.path_id, f"position {self.target} is not a conversion")
        if require_nonempty and not self.indices:
            raise invalid_removal_set(path.path_id, "removal set is empty")
        for i in self.indices:
            if not 0 <= i < self.target:
                raise invalid_removal_set(path.path_id, f"position {i} does not precede target {self.target}")
            if not allow_conversions and path.events[i].e == CONVERSION_INDEX:
                raise invalid_removal_set(path.path_id, f"position {i} is a conversion")
