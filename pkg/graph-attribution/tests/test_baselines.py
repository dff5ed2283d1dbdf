"""
Testes unitários para os baselines: regras, regressão logística e Markov.
"""

import math
import random
import sys
from pathlib import Path as FsPath

import numpy as np
import pytest

sys.path.insert(0, str(FsPath(__file__).parent.parent))

from attribution import AGGREGATE_PATH_ID
from baselines import (
    MarkovChain,
    BaselineSpec,
    absorption_probability,
    baseline_reports,
    channel_sequence,
    logistic_attribution,
    markov_removal,
    newton_fit,
    rule_score,
)
from catalog import Event, EventCatalog, Path
from errors import AttributionError

# Tipos internos: conv=0, search_imp=1, disp_click=2 (customer), disp_imp=3 (firm)
CONV, SEARCH, CLICK, DISPLAY = 0, 1, 2, 3


# =============================================================================
# FIXTURES
# =============================================================================

@pytest.fixture
def catalog():
    return EventCatalog.from_dict({
        "conversion": "conv",
        "types": [
            {"name": "conv", "initiator": "customer", "channel": None},
            {"name": "search_imp", "initiator": "customer", "channel": "search"},
            {"name": "disp_click", "initiator": "customer", "channel": "display"},
            {"name": "disp_imp", "initiator": "firm", "channel": "display"},
        ],
    })


def make_path(path_id, types, T=50.0):
    """Eventos nos instantes 1, 2, 3, ..."""
    return Path(path_id, T, tuple(Event(float(k + 1), e) for k, e in enumerate(types)))


@pytest.fixture
def markov_paths():
    return [
        make_path("a", [SEARCH, DISPLAY, CONV]),
        make_path("b", [SEARCH]),
        make_path("c", [DISPLAY, CONV]),
    ]


# ==================== Regras ====================

class TestBaselineSpec:
    """Testes para BaselineSpec."""

    def test_parse_decay(self):
        spec = BaselineSpec.from_name("decay:14")
        assert spec.half_life == 14.0
        assert spec.label == "decay:14"

    def test_decay_default_half_life(self):
        assert BaselineSpec.from_name("decay").half_life == 7.0

    def test_u_shaped_alias(self):
        assert BaselineSpec.from_name("U-Shaped").method == "u_shaped"

    @pytest.mark.parametrize("name", ["shapley", "linear:3", "decay:abc", "decay:0"])
    def test_invalid(self, name):
        with pytest.raises(AttributionError):
            BaselineSpec.from_name(name)


class TestRules:
    """Testes para rule_score."""

    @pytest.fixture
    def path(self):
        # display@1, search@2, conv@3, search@4, display@5, conv@6
        return make_path("p", [DISPLAY, SEARCH, CONV, SEARCH, DISPLAY, CONV])

    def test_last_and_first(self, path):
        assert rule_score(path, 5, BaselineSpec("last")) == {0: 0.0, 1: 0.0, 3: 0.0, 4: 1.0}
        assert rule_score(path, 5, BaselineSpec("first")) == {0: 1.0, 1: 0.0, 3: 0.0, 4: 0.0}

    def test_linear(self, path):
        assert rule_score(path, 2, BaselineSpec("linear")) == {0: 0.5, 1: 0.5}

    @pytest.mark.parametrize("k,expected", [
        (1, [1.0]),
        (2, [0.5, 0.5]),
        (3, [0.4, 0.2, 0.4]),
        (4, [0.4, 0.1, 0.1, 0.4]),
    ])
    def test_u_shaped(self, k, expected):
        path = make_path("u", [SEARCH] * k + [CONV])
        scores = rule_score(path, k, BaselineSpec("u_shaped"))
        assert list(scores.values()) == pytest.approx(expected, abs=1e-12)

    def test_decay_with_huge_half_life_is_linear(self, path):
        scores = rule_score(path, 5, BaselineSpec("decay", 1e9))
        assert list(scores.values()) == pytest.approx([0.25] * 4, rel=1e-6)

    def test_decay_halves_per_half_life(self):
        path = make_path("d", [SEARCH, SEARCH, CONV])
        scores = rule_score(path, 2, BaselineSpec("decay", 1.0))
        assert scores[1] == pytest.approx(2 * scores[0], rel=1e-12)
        assert sum(scores.values()) == pytest.approx(1.0, abs=1e-12)

    def test_no_touchpoints(self):
        assert rule_score(make_path("n", [CONV]), 0, BaselineSpec("linear")) == {}

    def test_rejects_non_rule(self, path):
        with pytest.raises(AttributionError):
            rule_score(path, 5, BaselineSpec("markov"))


# ==================== Logística ====================

def _logistic_paths():
    """Busca aumenta a conversão, sem separação completa."""
    paths = []
    plan = [(0, 10, 2), (1, 10, 5), (2, 10, 8)]
    for searches, total, positives in plan:
        for n in range(total):
            types = [DISPLAY] * (n % 2) + [SEARCH] * searches
            if n < positives:
                types.append(CONV)
            paths.append(make_path(f"s{searches}-{n}", types))
    return paths


class TestLogistic:
    """Testes para a regressão logística."""

    def test_newton_intercept_only(self):
        X = np.ones((8, 1))
        y = np.array([1.0, 1.0, 0, 0, 0, 0, 0, 0])
        beta, converged, _ = newton_fit(X, y)
        assert converged
        assert beta[0] == pytest.approx(math.log(1.0 / 3.0), abs=1e-8)

    def test_fit_without_ridge(self, catalog):
        model = logistic_attribution(_logistic_paths(), catalog)
        assert model.converged
        assert model.ridge == 0.0
        assert model.coefficient_map()["search_imp"] > 0
        assert model.coefficient_map()["disp_click"] == 0.0

    def test_scores_normalized(self, catalog):
        model = logistic_attribution(_logistic_paths(), catalog)
        path = make_path("x", [DISPLAY, SEARCH, SEARCH, CONV])
        scores = model.score(path, 3)
        assert set(scores) == {0, 1, 2}
        assert sum(scores.values()) == pytest.approx(1.0, abs=1e-12)
        assert scores[1] == pytest.approx(scores[2], abs=1e-15)

    def test_separation_falls_back_to_ridge(self, catalog):
        paths = [make_path(f"pos{n}", [SEARCH, CONV]) for n in range(5)]
        paths += [make_path(f"neg{n}", [DISPLAY]) for n in range(5)]
        model = logistic_attribution(paths, catalog)
        assert model.ridge > 0
        assert model.coefficient_map()["search_imp"] > 0

    def test_duplication_keeps_coefficients(self, catalog):
        paths = _logistic_paths()
        single = logistic_attribution(paths, catalog)
        doubled = logistic_attribution(paths + paths, catalog)
        np.testing.assert_allclose(doubled.coefficients, single.coefficients, atol=1e-6)
        assert doubled.intercept == pytest.approx(single.intercept, abs=1e-6)

    def test_explicit_ridge(self, catalog):
        assert logistic_attribution(_logistic_paths(), catalog, ridge=0.5).ridge == 0.5

    def test_needs_both_classes(self, catalog):
        with pytest.raises(AttributionError):
            logistic_attribution([make_path("a", [SEARCH])], catalog)


# ==================== Markov ====================

class TestMarkov:
    """Testes para o removal effect de Markov."""

    def test_channel_sequence_collapses_repeats(self, catalog):
        path = make_path("p", [SEARCH, SEARCH, DISPLAY, CLICK, CONV, SEARCH])
        assert channel_sequence(path, catalog) == [0, 1]

    def test_sequence_negative_path_uses_all(self, catalog):
        assert channel_sequence(make_path("n", [DISPLAY, SEARCH]), catalog) == [1, 0]

    def test_hand_computed(self, catalog, markov_paths):
        chain = MarkovChain.from_paths(markov_paths, catalog)
        assert chain.state_names == ["START", "search", "display", "CONV", "NULL"]
        assert chain.conversion_probability() == pytest.approx(2.0 / 3.0, abs=1e-12)
        effects = markov_removal(markov_paths, catalog)
        assert effects["search"] == pytest.approx(0.5, abs=1e-12)
        assert effects["display"] == pytest.approx(1.0, abs=1e-12)

    def test_order_invariant(self, catalog, markov_paths):
        shuffled = list(markov_paths)
        random.Random(4).shuffle(shuffled)
        assert markov_removal(shuffled, catalog) == pytest.approx(markov_removal(markov_paths, catalog))

    def test_duplication_invariant(self, catalog, markov_paths):
        doubled = markov_paths + markov_paths
        assert markov_removal(doubled, catalog) == pytest.approx(markov_removal(markov_paths, catalog))

    def test_absorption_two_state(self):
        P = np.array([
            [0.0, 0.5, 0.5],
            [0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0],
        ])
        assert absorption_probability(P, 1) == pytest.approx(0.5)

    def test_single_channel_always_converting(self, catalog):
        paths = [make_path(f"p{n}", [SEARCH, CONV]) for n in range(3)]
        effects = markov_removal(paths, catalog)
        assert effects["search"] == pytest.approx(1.0)
        assert effects["display"] == 0.0

    def test_needs_positive_path(self, catalog):
        with pytest.raises(AttributionError):
            markov_removal([make_path("n", [SEARCH])], catalog)


# ==================== Runner ====================

class TestBaselineReports:
    """Testes para baseline_reports."""

    def test_markov_single_aggregate(self, catalog, markov_paths):
        reports = baseline_reports(markov_paths, catalog, BaselineSpec("markov"), threads=1)
        assert len(reports) == 1
        assert reports[0].path_id == AGGREGATE_PATH_ID
        assert reports[0].is_aggregate

    def test_rule_reports(self, catalog, markov_paths):
        reports = baseline_reports(markov_paths, catalog, BaselineSpec("decay"), threads=1)
        assert [r.path_id for r in reports] == ["a", "c"]
        assert all(r.method == "decay:7" for r in reports)
        for r in reports:
            assert sum(r.channel_scores.values()) == pytest.approx(1.0, abs=1e-12)
            assert r.baseline_effect is None

    def test_logistic_reports(self, catalog):
        reports = baseline_reports(_logistic_paths(), catalog, BaselineSpec("logistic"), threads=2)
        assert len(reports) == 15
        assert set(reports[0].channel_scores) == {"search", "display"}
