"""Benchmark problems with known solutions.

Every exact solution is a (possibly truncated) sum of powers of
``t = psi(x) - psi_a``, so its fractional derivative follows term by term
from the power rule and the right-hand sides are manufactured analytically.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from . import jacobi
from .errors import ParameterError
from .psi_map import PsiMap


class CaseId(str, enum.Enum):
    C11 = "C11"
    C12 = "C12"
    C13 = "C13"
    C14 = "C14"
    C21 = "C21"
    C22 = "C22"
    C31 = "C31"
    C32 = "C32"
    C33 = "C33"

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).upper())
        except ValueError:
            raise ParameterError(f"unknown case {name!r}; expected one of {[c.value for c in cls]}") from None


@dataclass(frozen=True)
class PowerSum:
    """``sum_j coeffs[j] * t**exps[j]`` with ``t = psi - psi_a``."""

    coeffs: np.ndarray
    exps: np.ndarray

    def __call__(self, t):
        t = np.asarray(t, dtype=float)[..., None]
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(self.coeffs == 0, 0.0, self.coeffs * t**self.exps)
        return terms.sum(axis=-1)

    def frac_deriv(self, mu):
        """Left RL derivative; terms annihilated by the power rule drop out."""
        e = self.exps
        c = self.coeffs * special.poch(e + 1.0 - mu, mu)
        return PowerSum(np.where(special.rgamma(e + 1.0 - mu) == 0, 0.0, c), e - mu)

    @property
    def n_terms(self):
        return len(self.coeffs)


def _series_length(z_max, floor=30, cap=160):
    """Terms needed for the exp/sin Taylor tails at ``|z| <= z_max`` to fall below 1e-17."""
    k, term = 0, 1.0
    while k < cap and (k < floor or term > 1e-17 * max(1.0, math.exp(z_max))):
        k += 1
        term *= z_max / k
    return k + 5


def _exp_series(K, shift):
    k = np.arange(K, dtype=float)
    return PowerSum(1.0 / special.factorial(k), k + shift)


def _sin_series(K, freq, shift):
    m = np.arange(K, dtype=float)
    p = 2 * m + 1
    coeffs = (-1.0) ** m * np.exp(p * math.log(freq) - special.gammaln(p + 1))
    return PowerSum(coeffs, p + shift)


@dataclass(frozen=True)
class Problem:
    """A concrete problem instance: exact solution and right-hand side as callables of ``x``."""

    case: CaseId
    pmap: PsiMap
    mu: float
    lam: float
    exact: Callable
    rhs: Callable
    rhs_du: Callable | None = None
    nonlinear: bool = False
    series_terms: int = 0


IVP_LINEAR = {CaseId.C11, CaseId.C12, CaseId.C13, CaseId.C14}
IVP_NONLINEAR = {CaseId.C21, CaseId.C22}
BVP = {CaseId.C31, CaseId.C32, CaseId.C33}


def _linear_ivp_solution(case, pmap, mu):
    T = pmap.psi_b - pmap.psi_a
    shift = mu if case in (CaseId.C11, CaseId.C12) else 1.0
    if case in (CaseId.C11, CaseId.C13):
        return _exp_series(_series_length(T), shift)
    freq = math.pi * pmap.kappa
    return _sin_series(_series_length(freq * T) // 2 + 5, freq, shift)


def make_problem(case, pmap: PsiMap, mu, lam=0.0) -> Problem:
    """Build the exact solution and manufactured data of ``case`` on ``pmap``.

    Linear IVP cases: ``D^mu u = f``. Nonlinear cases: Caputo
    ``D^mu u = g - u^2``. BVP cases: ``lam^2 u - D^mu u = f``.
    """
    case = CaseId.parse(case)
    t_of = pmap.shifted
    if case in IVP_LINEAR:
        if not 0 < mu < 1:
            raise ParameterError("IVP cases need 0 < mu < 1")
        u = _linear_ivp_solution(case, pmap, mu)
        f = u.frac_deriv(mu)
        return Problem(case, pmap, mu, 0.0, lambda x: u(t_of(x)), lambda x: f(t_of(x)),
                       series_terms=u.n_terms)
    if case in IVP_NONLINEAR:
        if not 0 < mu < 1:
            raise ParameterError("IVP cases need 0 < mu < 1")
        if case is CaseId.C21:
            k = np.arange(1, 31, dtype=float)
            u = PowerSum(np.exp(special.gammaln(k - mu + 1) - special.gammaln(k + 1)), k)
        else:
            u = PowerSum(np.array([120.0 / math.gamma(mu + 6), math.gamma(mu + 4) / math.gamma(2 * mu + 4),
                                   math.gamma(2 * mu + 3) / math.gamma(3 * mu + 3)]),
                         np.array([5 + mu, 3 + 2 * mu, 2 + 3 * mu]))
        du = u.frac_deriv(mu)  # Caputo equals RL here since u(a) = 0 and mu < 1

        def g_rhs(x, v):
            return du(t_of(x)) + u(t_of(x)) ** 2 - np.asarray(v) ** 2

        return Problem(case, pmap, mu, 0.0, lambda x: u(t_of(x)), g_rhs, lambda x, v: -2.0 * np.asarray(v),
                       nonlinear=True, series_terms=u.n_terms)
    if not 1 < mu < 2:
        raise ParameterError("BVP cases need 1 < mu < 2")
    lam2 = float(lam) ** 2
    kappa = pmap.kappa
    if case is CaseId.C31:
        K = 30
        k = np.arange(1, K + 1)
        cu = 1.0 / special.factorial(k)
        # D^mu [t^(mu-1) J_k^{1-mu,mu-1}] = G(k+mu)/k! * kappa (k+1)/2 * J_{k-1}^{1,1}
        cd = cu * np.exp(special.gammaln(k + mu) - special.gammaln(k + 1)) * 0.5 * kappa * (k + 1)

        def exact(x):
            s = pmap.to_reference(x)
            P = jacobi.jacobi_all(K, 1.0 - mu, mu - 1.0, s)[1:]
            return t_of(x) ** (mu - 1.0) * np.tensordot(cu, P, axes=(0, 0))

        def rhs(x):
            s = pmap.to_reference(x)
            Q = jacobi.jacobi_all(K - 1, 1.0, 1.0, s)
            return lam2 * exact(x) - np.tensordot(cd, Q, axes=(0, 0))

        return Problem(case, pmap, mu, lam, exact, rhs, series_terms=K)
    if case is CaseId.C32:
        freq = kappa * math.pi
        T = pmap.psi_b - pmap.psi_a
        u = _sin_series(_series_length(freq * T) // 2 + 5, freq, 0.0)
        d = u.frac_deriv(mu)

        def exact(x):
            return np.sin(freq * t_of(x))

        return Problem(case, pmap, mu, lam, exact, lambda x: lam2 * exact(x) - d(t_of(x)),
                       series_terms=u.n_terms)
    T = pmap.psi_b - pmap.psi_a
    u = PowerSum(np.array([T, -1.0]), np.array([2 * mu, 2 * mu + 1]))
    d = u.frac_deriv(mu)

    def exact(x):
        return pmap.shifted_right(x) * t_of(x) ** (2 * mu)

    return Problem(case, pmap, mu, lam, exact, lambda x: lam2 * exact(x) - d(t_of(x)), series_terms=2)
