"""
Estimação: designs V/b, ADMM e seleção de γ
"""

from estimation.design import (
    NodeDesign,
    PathContributions,
    build_contributions,
    build_design,
    build_designs,
    empirical_loss,
    kernel_grid,
    path_contributions,
)
from estimation.admm import AdmmDiagnostics, FitConfig, admm_fit, objective
from estimation.fit import FitResult, fit_all, fit_contributions
from estimation.selection import (
    RULE_MIN,
    RULE_ONE_SE,
    SelectionResult,
    fold_assignment,
    select_gamma,
    select_gamma_from_contributions,
)

__all__ = [
    'NodeDesign',
    'PathContributions',
    'build_contributions',
    'build_design',
    'build_designs',
    'empirical_loss',
    'kernel_grid',
    'path_contributions',
    'AdmmDiagnostics',
    'FitConfig',
    'admm_fit',
    'objective',
    'FitResult',
    'fit_all',
    'fit_contributions',
    'RULE_MIN',
    'RULE_ONE_SE',
    'SelectionResult',
    'fold_assignment',
    'select_gamma',
    'select_gamma_from_contributions',
]
