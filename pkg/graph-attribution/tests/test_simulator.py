"""
Testes unitários para o simulador: cenários, streams, thinning e ground truth.
"""

import json
import sys
from pathlib import Path as FsPath

import numpy as np
import pytest
from scipy import stats

sys.path.insert(0, str(FsPath(__file__).parent.parent))

from catalog import CONVERSION_INDEX
from errors import ModelError
from kernels import compensator, rescaled_intervals
from simulator import (
    GroundTruth,
    Scenario,
    band_widths,
    count_conversions,
    derived_seed,
    ground_truth_all,
    ground_truth_ccc,
    load_scenario,
    simulate_path,
    simulate_paths,
    stream,
)

SCENARIOS = FsPath(__file__).parent.parent / "scenarios"


# =============================================================================
# FIXTURES
# =============================================================================

@pytest.fixture
def display_search():
    return load_scenario(str(SCENARIOS / "display_search.json"))


@pytest.fixture
def line_graph():
    return load_scenario(str(SCENARIOS / "line_graph.json"))


def _zero_alpha(scenario, mu_conv):
    mu = np.zeros(scenario.catalog.q)
    mu[CONVERSION_INDEX] = mu_conv
    params = scenario.params.with_values(mu, np.zeros_like(scenario.params.alpha))
    return scenario.with_overrides(params=params)


# ==================== Cenário ====================

class TestScenario:
    """Testes para Scenario e load_scenario."""

    def test_bundled_scenario(self, display_search):
        catalog = display_search.catalog
        assert catalog.type_names == ("conv", "disp_click", "search_imp", "search_click", "disp_imp")
        assert catalog.channel_names == ("display", "search")
        assert display_search.horizon == 365.0
        assert display_search.n_paths == 10000
        assert display_search.rate_of("disp_imp") == pytest.approx(0.02)
        params = display_search.params
        assert params.mu[catalog.index_of("search_imp")] == pytest.approx(0.02)
        assert params.mu[CONVERSION_INDEX] == pytest.approx(1e-4)
        assert np.count_nonzero(params.alpha) == 7
        assert params.alpha[catalog.index_of("search_click"), CONVERSION_INDEX] == pytest.approx(0.1)

    def test_to_dict_reloads(self, display_search):
        again = Scenario.from_dict(json.loads(json.dumps(display_search.to_dict())))
        np.testing.assert_array_equal(again.params.alpha, display_search.params.alpha)
        np.testing.assert_array_equal(again.firm_rates, display_search.firm_rates)

    def test_rate_on_customer_type_rejected(self, display_search):
        data = display_search.to_dict()
        data["firm_rates"]["search_imp"] = 0.1
        with pytest.raises(ModelError):
            Scenario.from_dict(data)

    @pytest.mark.parametrize("field,value", [("horizon", 0), ("n_paths", 0)])
    def test_invalid_fields(self, display_search, field, value):
        data = display_search.to_dict()
        data[field] = value
        with pytest.raises(ModelError):
            Scenario.from_dict(data)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ModelError):
            load_scenario(str(tmp_path / "absent.json"))


# ==================== Streams ====================

class TestStreams:
    """Testes para streams determinísticos."""

    def test_stream_reproducible(self):
        assert stream(5, 1, 2, 0).random() == stream(5, 1, 2, 0).random()

    def test_streams_independent_of_key(self):
        assert stream(5, 1, 2, 0).random() != stream(5, 1, 3, 0).random()

    def test_band_key_selects_stream(self):
        assert stream(5, 1, 2, 1, 0).random() == stream(5, 1, 2, 1, 0).random()
        assert stream(5, 1, 2, 1, 0).random() != stream(5, 1, 2, 1, 1).random()

    def test_derived_seed(self):
        assert derived_seed(1, 2) == derived_seed(1, 2)
        assert derived_seed(1, 2) != derived_seed(1, 3)
        assert 0 <= derived_seed(1, 2) < 2 ** 64


# ==================== Thinning ====================

class TestSimulation:
    """Testes para simulate_path e simulate_paths."""

    def test_deterministic(self, display_search):
        sc = display_search.with_overrides(n_paths=20)
        first, _ = simulate_paths(sc, threads=1)
        second, _ = simulate_paths(sc, threads=4)
        assert first == second

    def test_paths_valid(self, display_search):
        sc = display_search.with_overrides(n_paths=50)
        paths, summary = simulate_paths(sc, threads=1)
        assert summary.n_paths == 50
        for path in paths:
            assert path.T == 365.0
            assert np.all(np.diff(path.times) > 0)
        assert sum(summary.events_per_type.values()) == sum(len(p) for p in paths)

    def test_poisson_means_with_zero_alpha(self, display_search):
        """μ_conv constante e α = 0: média de conversões ≈ μT."""
        c, n = 0.01, 2000
        sc = _zero_alpha(display_search, c).with_overrides(n_paths=n, master_seed=3)
        paths, summary = simulate_paths(sc, threads=1)
        T = sc.horizon
        mean_conv = count_conversions(paths) / n
        assert abs(mean_conv - c * T) <= 3 * np.sqrt(c * T / n)
        rate = sc.rate_of("disp_imp")
        mean_disp = summary.events_per_type["disp_imp"] / n
        assert abs(mean_disp - rate * T) <= 4 * np.sqrt(rate * T / n)

    def test_time_rescaling_ks(self, line_graph):
        """Paths concatenados na escala do compensador formam um Poisson de taxa 1."""
        sc = line_graph.with_overrides(n_paths=600, master_seed=99)
        paths, _ = simulate_paths(sc, threads=1)
        target = sc.catalog.index_of("email_open")
        stamps, offset = [], 0.0
        for path in paths:
            stamps.append(offset + np.cumsum(rescaled_intervals(path, sc.params, target)))
            offset += compensator(path, sc.params, target, 0.0, path.T)
        intervals = np.diff(np.concatenate([[0.0], *stamps]))
        assert len(intervals) > 500
        assert stats.kstest(intervals, "expon").pvalue > 0.01

    def test_counts_match_compensator(self, line_graph):
        """Σ N_e(T) - Λ_e(T) é um martingal: padronizado fica perto de zero."""
        sc = line_graph.with_overrides(n_paths=600, master_seed=99)
        paths, _ = simulate_paths(sc, threads=1)
        for target in range(sc.catalog.q):
            observed = sum(int(np.sum(path.types == target)) for path in paths if len(path))
            expected = sum(compensator(path, sc.params, target, 0.0, path.T) for path in paths)
            assert expected > 0
            assert abs(observed - expected) / np.sqrt(expected) < 4.0

    def test_off_run_is_subset_of_base(self, display_search):
        """Mesmo seed: desligar display só remove eventos, nunca cria."""
        sc = display_search.with_overrides(n_paths=300, master_seed=7)
        display = frozenset(sc.catalog.types_in_channel(sc.catalog.channel_index("display")))
        for j in range(sc.n_paths):
            base = simulate_path(sc, j)
            off = simulate_path(sc, j, display)
            assert set(off.events) <= set(base.events)
            assert off.is_positive <= base.is_positive
            assert len(off.conversion_positions) <= len(base.conversion_positions)

    def test_band_widths_cover_single_jump(self, display_search):
        widths = band_widths(display_search.params)
        params = display_search.params
        assert np.all(widths >= params.mu)
        e = display_search.catalog.index_of("search_click")
        k = display_search.catalog.index_of("search_imp")
        jump = params.alpha[k, e] * params.kernel_for(k, e).right_limit(0.0)
        assert widths[e] >= params.mu[e] + jump

    def test_disabled_types_never_generated(self, display_search):
        sc = display_search.with_overrides(n_paths=30)
        disabled = frozenset(sc.catalog.types_in_channel(sc.catalog.channel_index("display")))
        paths, _ = simulate_paths(sc, disabled, threads=1)
        for path in paths:
            assert not set(path.types.tolist()) & disabled

    def test_only_conversions_without_firm_and_customer_baselines(self, display_search):
        sc = _zero_alpha(display_search, 0.01).with_overrides(n_paths=40)
        firm = frozenset(sc.catalog.firm_initiated)
        paths, _ = simulate_paths(sc, firm, threads=1)
        assert count_conversions(paths) > 0
        for path in paths:
            assert set(path.types.tolist()) <= {CONVERSION_INDEX}

    def test_coupled_firm_streams(self, display_search):
        """Desligar search não altera as impressões de display."""
        sc = display_search.with_overrides(n_paths=30)
        search = frozenset(sc.catalog.types_in_channel(sc.catalog.channel_index("search")))
        disp = sc.catalog.index_of("disp_imp")
        for j in range(sc.n_paths):
            base = simulate_path(sc, j)
            off = simulate_path(sc, j, search)
            assert [ev.t for ev in base.events if ev.e == disp] == [ev.t for ev in off.events if ev.e == disp]


# ==================== Ground truth ====================

class TestGroundTruth:
    """Testes para CCC contrafactual."""

    def test_line_graph_all_conversions_from_email(self, line_graph):
        """Sem baseline, desligar o canal raiz elimina todas as conversões."""
        sc = line_graph.with_overrides(n_paths=200)
        email = sc.catalog.channel_index("email")
        total, off, ccc = ground_truth_ccc(sc, email, threads=1)
        assert off == 0
        assert ccc == total

    def test_ground_truth_all(self, line_graph):
        sc = line_graph.with_overrides(n_paths=200)
        truth = ground_truth_all(sc, threads=1)
        assert truth.channel_names == ["email", "web"]
        assert truth.conversions_off["email"] == 0
        assert truth.conversions_off["web"] == 0
        assert truth.proportions() == {"email": 0.5, "web": 0.5}

    def test_round_trip_dict(self):
        truth = GroundTruth(["display", "search"], 100, {"display": 80, "search": 40})
        again = GroundTruth.from_dict(json.loads(json.dumps(truth.to_dict())))
        assert again.ccc == {"display": 20, "search": 60}
        assert again.proportions() == pytest.approx({"display": 0.25, "search": 0.75})

    def test_undefined_proportions(self):
        assert GroundTruth(["a"], 5, {"a": 5}).proportions() is None
