"""
Testes unitários para shared_config.parsing.
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from shared_config import parse_bool, parse_float_list, parse_list


class TestParseBool:
    """Testes para parse_bool."""

    @pytest.mark.parametrize("value", ["true", "1", "yes", "on", "TRUE"])
    def test_truthy(self, value):
        assert parse_bool(value) is True

    def test_empty_uses_default(self):
        assert parse_bool("", True) is True
        assert parse_bool("", False) is False

    def test_falsy(self):
        assert parse_bool("off", True) is False

    def test_surrounding_whitespace(self):
        assert parse_bool(" yes ") is True
        assert parse_bool("   ", True) is True


class TestParseList:
    """Testes para parse_list e parse_float_list."""

    def test_trims_items(self):
        assert parse_list(" a, b ,,c ", []) == ["a", "b", "c"]

    def test_empty_uses_default(self):
        assert parse_list("", ["x"]) == ["x"]

    def test_float_grid(self):
        assert parse_float_list("0, 1e-4,0.01", []) == [0.0, 1e-4, 0.01]

    def test_float_default_is_copied(self):
        default = [1.0]
        result = parse_float_list("", default)
        assert result == [1.0]
        assert result is not default

    def test_float_invalid_raises(self):
        with pytest.raises(ValueError, match="Lista numérica inválida"):
            parse_float_list("0.1,abc", [])
