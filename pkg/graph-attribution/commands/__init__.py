"""
Subcomandos da CLI
"""

from commands import attribute, baselines, evaluate, fit, reproduce, simulate
from commands.common import ExperimentConfig, format_table


def register_all(subparsers) -> None:
    """Registra os subcomandos na ordem do fluxo de trabalho."""
    simulate.add_parser(subparsers)
    evaluate.add_ground_truth_parser(subparsers)
    fit.add_parser(subparsers)
    attribute.add_parser(subparsers)
    baselines.add_parser(subparsers)
    evaluate.add_evaluate_parser(subparsers)
    reproduce.add_parser(subparsers)


__all__ = [
    'ExperimentConfig',
    'format_table',
    'register_all',
]
