"""Spectral methods for fractional equations taken with respect to a monotone map psi."""

from .cases import CaseId, make_problem
from .errors import DomainError, InputError, NumericError, OracleError, ParameterError, PsiSpecError
from .frac_ops import Kind, Side
from .mjf import MjfExpansion
from .psi_map import PsiMap, make_map
from .runner import RunConfig, convergence_order, preset, run_case
from .solvers_colloc import BvpCollocSpec, IvpNonlinearSpec, build_dmfd, solve_bvp_colloc, solve_ivp_colloc
from .solvers_pg import BvpLinearSpec, IvpLinearSpec, solve_bvp_pg, solve_helmholtz_pg, solve_ivp_pg

__version__ = "0.1.0"

__all__ = [
    "BvpCollocSpec", "BvpLinearSpec", "CaseId", "DomainError", "InputError", "IvpLinearSpec",
    "IvpNonlinearSpec", "Kind", "MjfExpansion", "NumericError", "OracleError", "ParameterError",
    "PsiMap", "PsiSpecError", "RunConfig", "Side", "build_dmfd", "convergence_order", "make_map",
    "make_problem", "preset", "run_case", "solve_bvp_colloc", "solve_bvp_pg", "solve_helmholtz_pg",
    "solve_ivp_colloc", "solve_ivp_pg",
]
