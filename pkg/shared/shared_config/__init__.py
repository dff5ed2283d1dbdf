"""Modulo de configuracao compartilhada."""
from .parsing import parse_bool, parse_float_list, parse_list

__all__ = ["parse_bool", "parse_float_list", "parse_list"]
