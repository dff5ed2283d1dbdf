"""
Cenário de simulação: catálogo, parâmetros, taxas Poisson dos tipos
firm-initiated, horizonte, número de paths e seed mestre.
"""

import json
import os
from dataclasses import dataclass, replace
from typing import Dict, Optional

import numpy as np

from catalog import EventCatalog, load_catalog
from errors import invalid_scenario
from kernels import ModelParams


@dataclass(frozen=True, eq=False)
class Scenario:
    """
    Attributes:
        catalog: Catálogo de eventos
        params: Parâmetros do modelo
        firm_rates: Taxa Poisson por tipo (eventos/dia), shape (p,); zero para customer
        horizon: T (dias)
        n_paths: Número de paths
        master_seed: Seed mestre (inteiro de 64 bits)
    """
    catalog: EventCatalog
    params: ModelParams
    firm_rates: np.ndarray
    horizon: float
    n_paths: int
    master_seed: int

    def __post_init__(self):
        rates = np.asarray(self.firm_rates, dtype=float)
        if rates.shape != (self.catalog.p,):
            raise invalid_scenario(f"firm_rates must have {self.catalog.p} entries")
        if np.any(rates < 0) or not np.all(np.isfinite(rates)):
            raise invalid_scenario("firm_rates must be finite and >= 0")
        if np.any(rates[: self.catalog.q] != 0):
            raise invalid_scenario("only firm-initiated types take a Poisson rate")
        if (self.params.p, self.params.q) != (self.catalog.p, self.catalog.q):
            raise invalid_scenario("model dimensions do not match the catalog")
        if not (self.horizon > 0 and np.isfinite(self.horizon)):
            raise invalid_scenario(f"horizon must be > 0, got {self.horizon}")
        if self.n_paths < 1:
            raise invalid_scenario(f"n_paths must be >= 1, got {self.n_paths}")
        if not 0 <= int(self.master_seed) < 2 ** 64:
            raise invalid_scenario("master_seed must be a 64-bit unsigned integer")
        rates.setflags(write=False)
        object.__setattr__(self, "firm_rates", rates)
        object.__setattr__(self, "horizon", float(self.horizon))
        object.__setattr__(self, "n_paths", int(self.n_paths))
        object.__setattr__(self, "master_seed", int(self.master_seed))

    def with_overrides(
        self,
        n_paths: Optional[int] = None,
        master_seed: Optional[int] = None,
        params: Optional[ModelParams] = None,
    ) -> "Scenario":
        changes = {}
        if n_paths is not None:
            changes["n_paths"] = n_paths
        if master_seed is not None:
            changes["master_seed"] = master_seed
        if params is not None:
            changes["params"] = params
        return replace(self, **changes)

    def rate_of(self, name: str) -> float:
        return float(self.firm_rates[self.catalog.index_of(name)])

    def to_dict(self) -> dict:
        return {
            "catalog": self.catalog.to_dict(),
            "model": self.params.to_dict(self.catalog),
            "firm_rates": {
                self.catalog.type_names[k]: float(self.firm_rates[k]) for k in self.catalog.firm_initiated
            },
            "horizon": self.horizon,
            "n_paths": self.n_paths,
            "master_seed": self.master_seed,
        }

    @classmethod
    def from_dict(cls, data: dict, base_dir: str = ".") -> "Scenario":
        """Lê o cenário; "catalog" pode ser objeto inline ou caminho relativo ao arquivo."""
        if not isinstance(data, dict):
            raise invalid_scenario("scenario must be a JSON object")
        raw_catalog = data.get("catalog")
        if isinstance(raw_catalog, str):
            catalog = load_catalog(os.path.join(base_dir, raw_catalog))
        elif isinstance(raw_catalog, dict):
            catalog = EventCatalog.from_dict(raw_catalog)
        else:
            raise invalid_scenario("missing 'catalog'")
        if not isinstance(data.get("model"), dict):
            raise invalid_scenario("missing 'model'")
        params = ModelParams.from_dict(data["model"], catalog)

        rates = np.zeros(catalog.p)
        raw_rates: Dict[str, float] = data.get("firm_rates", {})
        if not isinstance(raw_rates, dict):
            raise invalid_scenario("'firm_rates' must map firm type names to rates")
        for name, rate in raw_rates.items():
            if not catalog.has_type(name) or catalog.is_customer(catalog.index_of(name)):
                raise invalid_scenario(f"'{name}' is not a firm-initiated type")
            rates[catalog.index_of(name)] = float(rate)

        try:
            return cls(
                catalog=catalog,
                params=params,
                firm_rates=rates,
                horizon=float(data["horizon"]),
                n_paths=int(data["n_paths"]),
                master_seed=int(data.get("master_seed", 0)),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise invalid_scenario(f"missing or invalid field: {e}") from e


def load_scenario(source: str) -> Scenario:
    """Carrega Scenario de um arquivo JSON."""
    try:
        with open(source, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise invalid_scenario(f"invalid JSON: {e}") from e
    except OSError as e:
        raise invalid_scenario(f"cannot read '{source}': {e}") from e
    return Scenario.from_dict(data, base_dir=os.path.dirname(os.path.abspath(source)))
