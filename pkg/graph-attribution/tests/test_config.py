"""
Testes para a validação de configuração no startup.
"""

import sys
from pathlib import Path as FsPath

import pytest

sys.path.insert(0, str(FsPath(__file__).parent.parent))

import config
from config_validation import validate_config


class TestValidateConfig:
    """Testes para validate_config."""

    def test_defaults_are_valid(self):
        assert validate_config() is True

    @pytest.mark.parametrize("section,key,value,label", [
        ("LOG_CONFIG", "level", "VERBOSE", "[Log]"),
        ("METRICS_CONFIG", "port", 0, "[Metrics]"),
        ("EXECUTION_CONFIG", "threads", -2, "[Execution]"),
        ("FIT_CONFIG", "cv_folds", 1, "[Fit]"),
        ("FIT_CONFIG", "gamma_grid", [], "[Fit]"),
        ("FIT_CONFIG", "quadrature", "simpson", "[Fit]"),
        ("FIT_CONFIG", "selection_rule", "max", "[Fit]"),
        ("SIMULATION_CONFIG", "bound_tolerance", 0.1, "[Simulation]"),
        ("ATTRIBUTION_CONFIG", "method", "shapley", "[Attribution]"),
        ("ATTRIBUTION_CONFIG", "max_exhaustive_candidates", 64, "[Attribution]"),
        ("BASELINE_CONFIG", "decay_half_life_days", 0.0, "[Baseline]"),
        ("REPRODUCE_CONFIG", "runs", 0, "[Reproduce]"),
    ])
    def test_invalid_value(self, monkeypatch, section, key, value, label):
        monkeypatch.setitem(getattr(config, section), key, value)
        with pytest.raises(ValueError) as exc:
            validate_config()
        assert label in str(exc.value)

    def test_reports_every_section(self, monkeypatch):
        monkeypatch.setitem(config.FIT_CONFIG, "eta", 0.0)
        monkeypatch.setitem(config.ATTRIBUTION_CONFIG, "thinning_replicates", 0)
        with pytest.raises(ValueError) as exc:
            validate_config()
        assert "[Fit]" in str(exc.value)
        assert "[Attribution]" in str(exc.value)
