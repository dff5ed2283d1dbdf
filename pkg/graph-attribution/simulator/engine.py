"""
Simulação de paths por thinning de uma medida de Poisson fixa, com entradas
Poisson firm-initiated.

Tipos firm-initiated: Poisson homogêneo em [0, T] por stream (path, tipo).
Tipos customer-initiated: cada tipo e tem uma medida de Poisson no plano
(tempo, marca) com intensidade 1, repartida em faixas de marca de largura
M_e = μ_e + max_k α_{k,e}·ψ_{k,e}(0+). A faixa b tem stream próprio
(path, e, b). Um ponto (s, u) vira evento sse u < λ_e(s), com λ avaliado
sobre o histórico antes de s.

Os pontos dependem só de (seed, path, tipo, faixa), nunca do histórico. Com
α >= 0, uma execução com tipos desabilitados tem intensidade menor ou igual
em todo instante, então seus eventos são um subconjunto dos eventos da
execução base com o mesmo seed.

Entre eventos as intensidades são não crescentes para os três kernels, então
B_e = λ_e(t+) limita λ_e até o próximo evento. Só as faixas com marca abaixo
de B_e precisam ser percorridas; uma faixa ativada em t descarta seus pontos
até t, que seriam rejeitados de qualquer forma.
"""

import logging
from dataclasses import dataclass, field
from typing import AbstractSet, Dict, List, Optional, Sequence, Tuple

import numpy as np

from catalog import CONVERSION_INDEX, Event, Path
from config import EXECUTION_CONFIG, SIMULATION_CONFIG
from errors import intensity_bound_violation
from kernels import ModelParams, history_intensities
from metrics import track_paths_simulated, track_thinning_candidates
from simulator.rng import PURPOSE_CUSTOMER, PURPOSE_FIRM, stream
from simulator.scenario import Scenario
from utils.parallel import parallel_map

logger = logging.getLogger("graph-attribution.simulator")

# pontos sorteados por vez em cada faixa; fixo para a sequência não depender do consumo
BAND_CHUNK = 64


@dataclass
class SimulationStats:
    """Estatísticas agregadas de uma simulação."""
    n_paths: int = 0
    events_per_type: Dict[str, int] = field(default_factory=dict)
    positive_paths: int = 0
    accepted: int = 0
    rejected: int = 0

    @property
    def positive_share(self) -> float:
        return self.positive_paths / self.n_paths if self.n_paths else 0.0

    def to_dict(self) -> dict:
        return {
            "n_paths": self.n_paths,
            "events_per_type": dict(self.events_per_type),
            "positive_paths": self.positive_paths,
            "positive_share": self.positive_share,
            "thinning_accepted": self.accepted,
            "thinning_rejected": self.rejected,
        }


def path_id_for(index: int) -> str:
    return f"sim-{index:06d}"


def band_widths(params: ModelParams) -> np.ndarray:
    """Largura M_e das faixas de marca: μ_e + max_k α_{k,e}·ψ_{k,e}(0+)."""
    widths = params.mu.copy()
    for e in range(params.q):
        jumps = [params.alpha[k, e] * params.kernel_for(k, e).right_limit(0.0) for k in range(params.p)]
        widths[e] += max(jumps)
    return widths


class _MarkBand:
    """Pontos de uma faixa [low, low + width) da medida de Poisson, em ordem de tempo."""

    def __init__(self, rng: np.random.Generator, low: float, width: float, after: float):
        self._rng = rng
        self._low = low
        self._width = width
        self._clock = 0.0
        self._refill()
        while self.peek() <= after:
            self.pop()

    def _refill(self) -> None:
        gaps = self._rng.exponential(1.0 / self._width, size=BAND_CHUNK)
        self._marks = self._low + self._width * self._rng.uniform(size=BAND_CHUNK)
        self._times = self._clock + np.cumsum(gaps)
        self._clock = float(self._times[-1])
        self._pos = 0

    def peek(self) -> float:
        return float(self._times[self._pos])

    def pop(self) -> Tuple[float, float]:
        point = (float(self._times[self._pos]), float(self._marks[self._pos]))
        self._pos += 1
        if self._pos == BAND_CHUNK:
            self._refill()
        return point


class _CustomerProposals:
    """Faixas ativas de um tipo customer-initiated."""

    def __init__(self, master_seed: int, path_index: int, type_index: int, width: float):
        self._key = (master_seed, path_index, type_index)
        self._width = width
        self._bands: List[_MarkBand] = []

    def ensure(self, bound: float, t: float) -> None:
        """Ativa faixas até cobrir marcas em [0, bound)."""
        while len(self._bands) * self._width < bound:
            b = len(self._bands)
            seed, path_index, type_index = self._key
            rng = stream(seed, path_index, type_index, PURPOSE_CUSTOMER, b)
            self._bands.append(_MarkBand(rng, b * self._width, self._width, t))

    def _earliest(self) -> Optional[_MarkBand]:
        return min(self._bands, key=lambda band: band.peek(), default=None)

    def next_time(self) -> float:
        band = self._earliest()
        return band.peek() if band is not None else np.inf

    def pop(self) -> Tuple[float, float]:
        band = self._earliest()
        assert band is not None
        return band.pop()


def _firm_events(scenario: Scenario, path_index: int, disabled: AbstractSet[int]) -> List[Event]:
    events = []
    T = scenario.horizon
    for k in scenario.catalog.firm_initiated:
        rate = scenario.firm_rates[k]
        if k in disabled or rate <= 0:
            continue
        rng = stream(scenario.master_seed, path_index, k, PURPOSE_FIRM)
        count = rng.poisson(rate * T)
        for t in np.sort(rng.uniform(0.0, T, size=count)):
            events.append(Event(float(t), k))
    events.sort(key=lambda ev: ev.t)
    return events


def simulate_path_with_stats(
    scenario: Scenario,
    path_index: int,
    disabled_types: AbstractSet[int] = frozenset(),
) -> Tuple[Path, int, int]:
    """Simula um path; retorna (path, candidatos aceitos, rejeitados)."""
    params = scenario.params
    catalog = scenario.catalog
    T = scenario.horizon
    tolerance = SIMULATION_CONFIG["bound_tolerance"]
    disabled = frozenset(disabled_types)
    widths = band_widths(params)

    firm = _firm_events(scenario, path_index, disabled)
    proposals: Dict[int, _CustomerProposals] = {
        e: _CustomerProposals(scenario.master_seed, path_index, e, float(widths[e]))
        for e in range(catalog.q)
        if e not in disabled and widths[e] > 0
    }

    times: List[float] = []
    types: List[int] = []
    accepted = rejected = 0

    def refresh(t: float) -> np.ndarray:
        bounds = history_intensities(np.asarray(times), np.asarray(types, dtype=int), params, t, right_limit=True)
        for e, source in proposals.items():
            source.ensure(float(bounds[e]), t)
        return bounds

    bounds = refresh(0.0)
    next_firm = 0

    while True:
        firm_time = firm[next_firm].t if next_firm < len(firm) else np.inf
        e, cand_time = min(
            ((k, source.next_time()) for k, source in proposals.items()),
            key=lambda item: item[1],
            default=(-1, np.inf),
        )
        if min(firm_time, cand_time) > T:
            break

        if firm_time <= cand_time:
            t = firm_time
            times.append(t)
            types.append(firm[next_firm].e)
            next_firm += 1
        else:
            s, mark = proposals[e].pop()
            if mark >= bounds[e]:
                rejected += 1
                continue
            lam = history_intensities(np.asarray(times), np.asarray(types, dtype=int), params, s)[e]
            if lam > bounds[e] * (1.0 + tolerance):
                raise intensity_bound_violation(catalog.type_names[e], s, float(lam), float(bounds[e]))
            if mark >= lam:
                rejected += 1
                bounds[e] = lam
                continue
            accepted += 1
            t = s
            times.append(t)
            types.append(e)

        bounds = refresh(t)

    events = tuple(Event(tt, kk) for tt, kk in zip(times, types))
    return Path(path_id_for(path_index), T, events), accepted, rejected


def simulate_path(
    scenario: Scenario,
    path_index: int,
    disabled_types: AbstractSet[int] = frozenset(),
) -> Path:
    """Simula o path `path_index`; tipos desabilitados são suprimidos na geração."""
    path, _, _ = simulate_path_with_stats(scenario, path_index, disabled_types)
    return path


def summarize(paths: Sequence[Path], scenario: Scenario, accepted: int = 0, rejected: int = 0) -> SimulationStats:
    counts = np.zeros(scenario.catalog.p, dtype=int)
    positive = 0
    for path in paths:
        if len(path):
            counts += np.bincount(path.types, minlength=scenario.catalog.p)
        positive += path.is_positive
    return SimulationStats(
        n_paths=len(paths),
        events_per_type={name: int(counts[k]) for k, name in enumerate(scenario.catalog.type_names)},
        positive_paths=positive,
        accepted=accepted,
        rejected=rejected,
    )


def simulate_paths(
    scenario: Scenario,
    disabled_types: AbstractSet[int] = frozenset(),
    threads: int = -1,
    kind: str = "base",
) -> Tuple[List[Path], SimulationStats]:
    """Simula os n_paths do cenário; a saída independe do número de threads."""
    threads = EXECUTION_CONFIG["threads"] if threads < 0 else threads
    results = parallel_map(
        lambda j: simulate_path_with_stats(scenario, j, disabled_types),
        range(scenario.n_paths),
        threads,
    )
    paths = [r[0] for r in results]
    accepted = sum(r[1] for r in results)
    rejected = sum(r[2] for r in results)
    track_paths_simulated(kind, len(paths))
    track_thinning_candidates(accepted, rejected)
    stats = summarize(paths, scenario, accepted, rejected)
    logger.debug(
        f"{len(paths)} paths simulados ({kind}); "
        f"conversões={stats.events_per_type.get(scenario.catalog.type_names[CONVERSION_INDEX], 0)}"
    )
    return paths, stats
