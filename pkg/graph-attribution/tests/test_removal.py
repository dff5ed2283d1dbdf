"""
Testes unitários para DRE, TRE (thinning, backpropagation, exaustivo) e pmf.
"""

import itertools
import math
import sys
from pathlib import Path as FsPath

import numpy as np
import pytest

sys.path.insert(0, str(FsPath(__file__).parent.parent))

from attribution import (
    METHOD_TRE_THINNING,
    ExcitationTable,
    baseline_effect,
    dre,
    dre_breakdown,
    removal_pmf,
    tre,
    tre_backprop,
    tre_breakdown,
    tre_exhaustive,
    tre_thinning,
)
from catalog import Event, Path, RemovalSet
from errors import (
    ERROR_INVALID_REMOVAL_SET,
    ERROR_TOO_MANY_CANDIDATES,
    ERROR_ZERO_INTENSITY,
    AttributionError,
)
from kernels import Kernel, KernelShape, ModelParams
from simulator import load_scenario, simulate_paths

SCENARIOS = FsPath(__file__).parent.parent / "scenarios"


# =============================================================================
# FIXTURES
# =============================================================================
# Tipos internos: conv=0, search_imp=1 (customer), disp_imp=2 (firm)

@pytest.fixture
def params():
    alpha = np.array([
        [0.00, 0.00],
        [0.02, 0.00],
        [0.01, 0.08],
    ])
    return ModelParams.uniform([0.01, 0.02], alpha, Kernel(KernelShape.EXP_DECAY, 10.0))


@pytest.fixture
def path():
    """search@1, display@3, search@6, conversão@7."""
    return Path("fig", 20.0, (Event(1.0, 1), Event(3.0, 2), Event(6.0, 1), Event(7.0, 0)))


@pytest.fixture
def line_scenario():
    return load_scenario(str(SCENARIOS / "line_graph.json"))


@pytest.fixture
def line_path():
    """email_send@1 → email_open@2 → site_visit@3 → conversão@4."""
    return Path("line", 10.0, (Event(1.0, 3), Event(2.0, 1), Event(3.0, 2), Event(4.0, 0)))


def _lambda_star():
    return 0.01 + (0.02 * math.exp(-0.6) + 0.01 * math.exp(-0.4) + 0.02 * math.exp(-0.1)) / 10.0


def _expected_tre_display():
    lam = _lambda_star()
    c_disp_conv = 0.01 * math.exp(-0.4) / 10.0
    c_search_conv = 0.02 * math.exp(-0.1) / 10.0
    c_disp_search = 0.08 * math.exp(-0.3) / 10.0
    p_delete = c_disp_search / (0.02 + c_disp_search)
    return (c_disp_conv + p_delete * c_search_conv) / lam


def _removal(indices, target=3):
    return RemovalSet(frozenset(indices), target)


# ==================== DRE ====================

class TestDre:
    """Testes para Direct Removal Effect."""

    def test_target_intensity(self, path, params):
        table = ExcitationTable.build(path, params)
        assert table.lam[3] == pytest.approx(_lambda_star(), rel=1e-12)
        assert table.lam[3] == pytest.approx(0.0135776, abs=1e-7)

    def test_breakdown_values(self, path, params):
        breakdown = dre_breakdown(path, params, 3)
        assert breakdown.scores[0] == pytest.approx(0.0808, abs=5e-4)
        assert breakdown.scores[1] == pytest.approx(0.0494, abs=5e-4)
        assert breakdown.scores[2] == pytest.approx(0.1333, abs=5e-4)
        assert breakdown.baseline_effect == pytest.approx(0.7365, abs=5e-4)

    def test_breakdown_sums_to_one(self, path, params):
        assert dre_breakdown(path, params, 3).total == pytest.approx(1.0, abs=1e-12)

    def test_additive(self, path, params):
        single = [dre(path, params, _removal([i])) for i in range(3)]
        assert dre(path, params, _removal([0, 1, 2])) == pytest.approx(sum(single), abs=1e-15)
        assert dre(path, params, _removal([0, 2])) == pytest.approx(single[0] + single[2], abs=1e-15)

    def test_empty_set_is_zero(self, path, params):
        assert dre(path, params, _removal([])) == 0.0

    def test_baseline_effect(self, path, params):
        assert baseline_effect(path, params, 3) == pytest.approx(0.01 / _lambda_star(), rel=1e-12)


# ==================== TRE ====================

class TestTre:
    """Testes para Total Removal Effect."""

    def test_display_backprop(self, path, params):
        assert tre_backprop(path, params, _removal([1])) == pytest.approx(_expected_tre_display(), rel=1e-12)
        assert tre_backprop(path, params, _removal([1])) == pytest.approx(0.0798, abs=5e-4)

    def test_engines_agree(self, path, params):
        for indices in ([0], [1], [2], [0, 1], [1, 2], [0, 1, 2]):
            removal = _removal(indices)
            exact = tre_backprop(path, params, removal)
            assert tre_exhaustive(path, params, removal) == pytest.approx(exact, abs=1e-10)

    def test_thinning_within_standard_errors(self, path, params):
        mean, se = tre_thinning(path, params, _removal([1]), replicates=20000, seed=11)
        assert se > 0
        assert abs(mean - _expected_tre_display()) <= 4 * se

    def test_thinning_reproducible(self, path, params):
        first = tre_thinning(path, params, _removal([1]), replicates=500, seed=3)
        second = tre_thinning(path, params, _removal([1]), replicates=500, seed=3)
        assert first == second

    def test_no_downstream_equals_dre(self, path, params):
        """search@1 não excita search@6: TRE = DRE."""
        removal = _removal([0])
        assert tre_backprop(path, params, removal) == pytest.approx(dre(path, params, removal), abs=1e-15)

    def test_dominates_dre(self, path, params):
        for r in range(1, 4):
            for indices in itertools.combinations(range(3), r):
                removal = _removal(indices)
                assert tre_backprop(path, params, removal) >= dre(path, params, removal) - 1e-12

    def test_subadditive(self, path, params):
        for r in range(2, 4):
            for indices in itertools.combinations(range(3), r):
                joint = tre_backprop(path, params, _removal(indices))
                parts = sum(tre_backprop(path, params, _removal([i])) for i in indices)
                assert joint <= parts + 1e-9

    def test_dispatch(self, path, params):
        removal = _removal([1])
        assert tre(path, params, removal)[0] == pytest.approx(_expected_tre_display(), rel=1e-12)
        score, se = tre(path, params, removal, "tre-exhaustive")
        assert score == pytest.approx(_expected_tre_display(), abs=1e-10)
        assert se == 0.0

    def test_breakdown(self, path, params):
        breakdown = tre_breakdown(path, params, 3)
        assert set(breakdown.scores) == {0, 1, 2}
        assert breakdown.scores[1] == pytest.approx(_expected_tre_display(), rel=1e-12)
        assert breakdown.total >= 1.0 - 1e-12
        assert breakdown.std_errors == {}

    def test_thinning_breakdown_has_errors(self, path, params):
        breakdown = tre_breakdown(path, params, 3, METHOD_TRE_THINNING, replicates=200, seed=1)
        assert set(breakdown.std_errors) == {0, 1, 2}


# ==================== pmf ====================

class TestRemovalPmf:
    """Testes para a distribuição do removal set expandido."""

    def test_sums_to_one(self, path, params):
        removal = _removal([1])
        total = removal_pmf(path, params, removal, frozenset({1})) + removal_pmf(path, params, removal, frozenset({1, 2}))
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_deletion_probability(self, path, params):
        c = 0.08 * math.exp(-0.3) / 10.0
        assert removal_pmf(path, params, _removal([1]), frozenset({1, 2})) == pytest.approx(c / (0.02 + c), rel=1e-12)

    def test_candidate_outside_omega(self, path, params):
        with pytest.raises(AttributionError) as exc:
            removal_pmf(path, params, _removal([1]), frozenset({0, 1}))
        assert exc.value.code == ERROR_INVALID_REMOVAL_SET

    def test_candidate_must_contain_removal(self, path, params):
        with pytest.raises(AttributionError):
            removal_pmf(path, params, _removal([1]), frozenset({2}))


# ==================== Line graph ====================

class TestLineGraph:
    """Cadeia email_send → email_open → site_visit → conversão, sem baseline."""

    def test_dre_only_last_touch(self, line_scenario, line_path):
        breakdown = dre_breakdown(line_path, line_scenario.params, 3)
        assert breakdown.scores == pytest.approx({0: 0.0, 1: 0.0, 2: 1.0})
        assert breakdown.baseline_effect == 0.0

    def test_tre_full_credit_everywhere(self, line_scenario, line_path):
        for i in range(3):
            removal = _removal([i])
            assert tre_backprop(line_path, line_scenario.params, removal) == pytest.approx(1.0, abs=1e-12)
            assert tre_exhaustive(line_path, line_scenario.params, removal) == pytest.approx(1.0, abs=1e-12)

    def test_zero_intensity(self, line_scenario):
        lonely = Path("lonely", 10.0, (Event(4.0, 0),))
        with pytest.raises(AttributionError) as exc:
            dre_breakdown(lonely, line_scenario.params, 0)
        assert exc.value.code == ERROR_ZERO_INTENSITY


# ==================== Paths simulados ====================

class TestSimulatedPaths:
    """Propriedades sobre paths gerados pelo simulador."""

    def test_engines_agree_on_simulated_paths(self, line_scenario):
        paths, _ = simulate_paths(line_scenario.with_overrides(n_paths=40, master_seed=5), threads=1)
        params = line_scenario.params
        checked = 0
        for path in paths:
            for target in path.conversion_positions:
                table = ExcitationTable.build(path, params)
                for i in path.touchpoint_positions(target):
                    removal = RemovalSet(frozenset([i]), target)
                    try:
                        exhaustive = tre_exhaustive(path, params, removal, max_candidates=12, table=table)
                    except AttributionError as e:
                        assert e.code == ERROR_TOO_MANY_CANDIDATES
                        continue
                    exact = tre_backprop(path, params, removal, table)
                    assert exhaustive == pytest.approx(exact, abs=1e-10)
                    assert exact >= dre(path, params, removal, table) - 1e-12
                    checked += 1
        assert checked > 0


@pytest.mark.slow
@pytest.mark.timeout(3600)
class TestRandomRemovalProperties:
    """Propriedades do TRE em paths simulados e removal sets sorteados."""

    @pytest.fixture(scope="class")
    def cases(self):
        scenario = load_scenario(str(SCENARIOS / "display_search.json"))
        paths, _ = simulate_paths(scenario.with_overrides(n_paths=2000, master_seed=31), threads=0)
        positive = [p for p in paths if p.is_positive and p.touchpoint_positions(p.conversion_positions[-1])]
        rng = np.random.default_rng(17)
        picked = rng.choice(len(positive), size=min(100, len(positive)), replace=False)
        out = []
        for j in picked:
            path = positive[j]
            target = path.conversion_positions[-1]
            table = ExcitationTable.build(path, scenario.params)
            out.append((path, target, table))
        return scenario.params, out

    @staticmethod
    def _random_set(rng, touchpoints, size):
        return frozenset(int(i) for i in rng.choice(touchpoints, size=min(size, len(touchpoints)), replace=False))

    def test_tre_dominates_dre(self, cases):
        params, items = cases
        rng = np.random.default_rng(41)
        assert len(items) >= 50
        for path, target, table in items:
            touchpoints = path.touchpoint_positions(target)
            removal = RemovalSet(self._random_set(rng, touchpoints, int(rng.integers(1, 4))), target)
            assert tre_backprop(path, params, removal, table) >= dre(path, params, removal, table) - 1e-12

    def test_subadditive_on_disjoint_pairs(self, cases):
        params, items = cases
        rng = np.random.default_rng(42)
        checked = 0
        for path, target, table in items:
            touchpoints = path.touchpoint_positions(target)
            if len(touchpoints) < 2:
                continue
            chosen = [int(i) for i in rng.permutation(touchpoints)[: int(rng.integers(2, min(6, len(touchpoints)) + 1))]]
            cut = int(rng.integers(1, len(chosen)))
            first = RemovalSet(frozenset(chosen[:cut]), target)
            second = RemovalSet(frozenset(chosen[cut:]), target)
            joint = RemovalSet(first.indices | second.indices, target)
            parts = tre_backprop(path, params, first, table) + tre_backprop(path, params, second, table)
            assert tre_backprop(path, params, joint, table) <= parts + 1e-9
            checked += 1
        assert checked >= 30

    def test_exhaustive_matches_backprop(self, cases):
        params, items = cases
        rng = np.random.default_rng(43)
        checked = 0
        for path, target, table in items:
            removal = RemovalSet(self._random_set(rng, path.touchpoint_positions(target), 1), target)
            try:
                exhaustive = tre_exhaustive(path, params, removal, max_candidates=12, table=table)
            except AttributionError as e:
                assert e.code == ERROR_TOO_MANY_CANDIDATES
                continue
            assert exhaustive == pytest.approx(tre_backprop(path, params, removal, table), abs=1e-10)
            checked += 1
        assert checked >= 10

    def test_thinning_within_standard_errors(self, cases):
        params, items = cases
        rng = np.random.default_rng(44)
        for k, (path, target, table) in enumerate(items[:30]):
            removal = RemovalSet(self._random_set(rng, path.touchpoint_positions(target), 1), target)
            exact = tre_backprop(path, params, removal, table)
            mean, se = tre_thinning(path, params, removal, replicates=20000, seed=k, table=table)
            assert abs(mean - exact) <= 4.5 * se + 1e-9


# ==================== Erros ====================

class TestErrors:
    """Removal sets inválidos e limites."""

    def test_target_not_conversion(self, path, params):
        with pytest.raises(AttributionError) as exc:
            dre(path, params, RemovalSet(frozenset({0}), 2))
        assert exc.value.code == ERROR_INVALID_REMOVAL_SET

    def test_position_after_target(self, params):
        longer = Path("p", 20.0, (Event(1.0, 1), Event(7.0, 0), Event(8.0, 1), Event(9.0, 0)))
        with pytest.raises(AttributionError):
            dre(longer, params, RemovalSet(frozenset({2}), 1))

    def test_conversion_in_removal_set(self, params):
        twice = Path("p", 20.0, (Event(1.0, 1), Event(2.0, 0), Event(7.0, 0)))
        with pytest.raises(AttributionError):
            dre(twice, params, RemovalSet(frozenset({1}), 2))

    def test_empty_set_rejected_by_tre(self, path, params):
        with pytest.raises(AttributionError):
            tre_backprop(path, params, _removal([]))

    def test_too_many_candidates(self, path, params):
        with pytest.raises(AttributionError) as exc:
            tre_exhaustive(path, params, _removal([0]), max_candidates=0)
        assert exc.value.code == ERROR_TOO_MANY_CANDIDATES

    def test_invalid_replicates(self, path, params):
        with pytest.raises(AttributionError):
            tre_thinning(path, params, _removal([1]), replicates=0)

    def test_unknown_method(self, path, params):
        with pytest.raises(AttributionError):
            tre(path, params, _removal([1]), method="shapley")
