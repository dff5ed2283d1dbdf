"""
Testes unitários para relatórios de atribuição e scoring em lote.
"""

import io
import json
import sys
from pathlib import Path as FsPath

import numpy as np
import pytest

sys.path.insert(0, str(FsPath(__file__).parent.parent))

from attribution import (
    GRANULARITY_CHANNEL,
    METHOD_DRE,
    METHOD_TRE,
    METHOD_TRE_THINNING,
    AttributionReport,
    channel_removal_set,
    dre,
    dump_reports,
    load_reports,
    score_paths,
    tre_backprop,
)
from catalog import Event, EventCatalog, Path, RemovalSet
from errors import ERROR_MALFORMED_JSON_LINE, AttributionError, IngestError
from kernels import Kernel, KernelShape, ModelParams


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
            {"name": "disp_imp", "initiator": "firm", "channel": "display"},
        ],
    })


@pytest.fixture
def params():
    alpha = np.array([
        [0.00, 0.00],
        [0.02, 0.00],
        [0.01, 0.08],
    ])
    return ModelParams.uniform([0.01, 0.02], alpha, Kernel(KernelShape.EXP_DECAY, 10.0))


@pytest.fixture
def paths():
    return [
        Path("a", 20.0, (Event(1.0, 1), Event(3.0, 2), Event(6.0, 1), Event(7.0, 0))),
        Path("b", 20.0, (Event(2.0, 2),)),
        Path("c", 20.0, (Event(1.0, 2), Event(4.0, 0), Event(5.0, 1), Event(9.0, 0))),
    ]


# ==================== score_paths ====================

class TestScorePaths:
    """Testes para score_paths."""

    def test_one_report_per_conversion(self, paths, params, catalog):
        reports = score_paths(paths, params, catalog, METHOD_DRE, threads=1)
        assert [(r.path_id, r.conversion_position) for r in reports] == [("a", 3), ("c", 1), ("c", 3)]
        assert reports[0].conversion_time == 7.0

    def test_touchpoints_skip_conversions(self, paths, params, catalog):
        reports = score_paths(paths, params, catalog, METHOD_DRE, threads=1)
        last = reports[2]
        assert [tp.position for tp in last.touchpoints] == [0, 2]
        assert [tp.type_name for tp in last.touchpoints] == ["disp_imp", "search_imp"]

    def test_dre_channel_scores_sum_with_baseline(self, paths, params, catalog):
        """Sem conversões anteriores, canais + baseline = 1."""
        report = score_paths(paths[:1], params, catalog, METHOD_DRE, threads=1)[0]
        assert sum(report.channel_scores.values()) + report.baseline_effect == pytest.approx(1.0, abs=1e-12)

    def test_dre_channel_equals_sum_of_touchpoints(self, paths, params, catalog):
        report = score_paths(paths[:1], params, catalog, METHOD_DRE, threads=1)[0]
        by_type = {}
        for tp in report.touchpoints:
            channel = "search" if tp.type_name == "search_imp" else "display"
            by_type[channel] = by_type.get(channel, 0.0) + tp.score
        assert report.channel_scores == pytest.approx(by_type, abs=1e-14)

    def test_tre_channel_scores(self, paths, params, catalog):
        report = score_paths(paths[:1], params, catalog, METHOD_TRE, threads=1)[0]
        path = paths[0]
        assert report.channel_scores["display"] == pytest.approx(
            tre_backprop(path, params, RemovalSet(frozenset({1}), 3)), rel=1e-12)
        assert report.channel_scores["search"] == pytest.approx(
            tre_backprop(path, params, RemovalSet(frozenset({0, 2}), 3)), rel=1e-12)

    def test_absent_channel_scores_zero(self, paths, params, catalog):
        report = score_paths(paths, params, catalog, METHOD_TRE, threads=1)[1]
        assert report.path_id == "c" and report.conversion_position == 1
        assert report.channel_scores["search"] == 0.0
        assert report.channel_scores["display"] > 0.0

    def test_channel_granularity(self, paths, params, catalog):
        touch = score_paths(paths, params, catalog, METHOD_DRE, threads=1)
        channel = score_paths(paths, params, catalog, METHOD_DRE, GRANULARITY_CHANNEL, threads=1)
        for full, short in zip(touch, channel):
            assert short.touchpoints == []
            assert short.channel_scores == full.channel_scores
            assert short.baseline_effect == pytest.approx(full.baseline_effect, rel=1e-12)

    def test_thinning_independent_of_threads(self, paths, params, catalog):
        one = score_paths(paths, params, catalog, METHOD_TRE_THINNING, replicates=200, seed=9, threads=1)
        many = score_paths(paths, params, catalog, METHOD_TRE_THINNING, replicates=200, seed=9, threads=3)
        assert [r.to_dict() for r in one] == [r.to_dict() for r in many]
        assert all(tp.std_error is not None for tp in one[0].touchpoints)

    def test_unknown_method(self, paths, params, catalog):
        with pytest.raises(AttributionError):
            score_paths(paths, params, catalog, "shapley", threads=1)

    def test_unknown_granularity(self, paths, params, catalog):
        with pytest.raises(AttributionError):
            score_paths(paths, params, catalog, METHOD_DRE, "campaign", threads=1)


class TestChannelRemovalSet:
    """Testes para channel_removal_set."""

    def test_collects_channel_events_before_target(self, paths, catalog):
        search = catalog.channel_index("search")
        removal = channel_removal_set(paths[2], catalog, 3, search)
        assert removal == RemovalSet(frozenset({2}), 3)
        assert channel_removal_set(paths[2], catalog, 1, search).indices == frozenset()

    def test_matches_dre_of_set(self, paths, params, catalog):
        display = catalog.channel_index("display")
        removal = channel_removal_set(paths[0], catalog, 3, display)
        assert dre(paths[0], params, removal) == pytest.approx(0.0494, abs=5e-4)


# ==================== JSONL ====================

class TestReportJsonl:
    """Testes para dump_reports e load_reports."""

    def test_dump_and_load(self, paths, params, catalog, tmp_path):
        reports = score_paths(paths, params, catalog, METHOD_TRE, threads=1)
        target = tmp_path / "tre.jsonl"
        with open(target, "w", encoding="utf-8") as f:
            assert dump_reports(reports, f) == 3
        loaded = load_reports(str(target))
        assert [r.to_dict() for r in loaded] == [r.to_dict() for r in reports]

    def test_blank_lines_ignored(self):
        line = AttributionReport("x", METHOD_DRE, 0, 1.0, channel_scores={"search": 0.5}).to_dict()
        text = "\n" + json.dumps(line) + "\n\n"
        loaded = load_reports(io.StringIO(text))
        assert len(loaded) == 1
        assert loaded[0].channel_scores == {"search": 0.5}
        assert not loaded[0].is_aggregate

    def test_malformed_line(self):
        with pytest.raises(IngestError) as exc:
            load_reports(io.StringIO('{"path_id": "x", "method": "dre"}\n{oops\n'))
        assert exc.value.code == ERROR_MALFORMED_JSON_LINE
        assert exc.value.details["line"] == 2
