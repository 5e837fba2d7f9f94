"""Petrov-Galerkin spectral solvers with singular MJF trial functions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg
from scipy import special

from . import jacobi
from .errors import InputError, NumericError, ParameterError
from .frac_ops import Kind, _kind
from .mjf import MjfExpansion, lobatto_transform, mapped_rule
from .psi_map import PsiMap

ERROR_GRID_POINTS = 501


@dataclass(frozen=True)
class IvpLinearSpec:
    """``D^mu u = f`` on ``(a, b]``, ``0 < mu < 1``.

    ``g0`` is ``D^{-(1-mu)} u(a)`` for RL and ``u(a)`` for Caputo.
    """

    pmap: PsiMap
    mu: float
    rhs: Callable
    kind: Kind = Kind.RL
    g0: float = 0.0

    def __post_init__(self):
        if not 0 < self.mu < 1:
            raise ParameterError(f"IVP order must lie in (0, 1), got {self.mu}")
        object.__setattr__(self, "kind", _kind(self.kind))


@dataclass(frozen=True)
class BvpLinearSpec:
    """``lam^2 u - D^mu u = f`` on ``(a, b)``, ``1 < mu < 2``, homogeneous boundary data."""

    pmap: PsiMap
    mu: float
    rhs: Callable
    lam: float = 0.0

    def __post_init__(self):
        if not 1 < self.mu < 2:
            raise ParameterError(f"BVP order must lie in (1, 2), got {self.mu}")
        if self.lam < 0:
            raise ParameterError("lambda must be non-negative")


@dataclass(frozen=True)
class IvpSolution:
    """An MJF expansion plus the homogenizing term for nonzero initial data."""

    expansion: MjfExpansion
    g0: float
    mu: float
    kind: Kind

    def __call__(self, x):
        v = self.expansion(x)
        if self.g0 == 0:
            return v
        if self.kind is Kind.CAPUTO:
            return v + self.g0
        t = self.expansion.pmap.shifted(x)
        with np.errstate(divide="ignore"):
            return v + self.g0 * t ** (self.mu - 1.0) / math.gamma(self.mu)


def _samples(f, x):
    vals = np.asarray(f(x), dtype=float)
    if vals.shape != np.shape(x):
        vals = np.broadcast_to(vals, np.shape(x)).astype(float)
    if not np.all(np.isfinite(vals)):
        raise InputError("right-hand side is not finite at every quadrature node")
    return vals


def solve_ivp_pg(spec: IvpLinearSpec, N: int):
    """Trial space ``t^mu J_k^{-mu,mu}``, ``k <= N``, tested against ``J_k^{0,0}``.

    Since ``D^mu [t^mu J_k^{-mu,mu}] = G(k+mu+1)/k! J_k^{0,0}``, the scheme is
    diagonal: each coefficient is the Lobatto interpolation coefficient of
    ``f`` scaled by ``k!/G(k+mu+1)``.
    Returns an :class:`MjfExpansion` (or :class:`IvpSolution` if ``g0 != 0``).
    """
    if N < 0:
        raise ParameterError("N must be non-negative")
    mu = spec.mu
    rule = mapped_rule(spec.pmap, 0.0, 0.0, N + 1, "lobatto") if N > 0 else None
    if N == 0:
        fk = _samples(spec.rhs, np.array([spec.pmap.b]))
    else:
        fk = lobatto_transform(0.0, 0.0, _samples(spec.rhs, rule.x_nodes))
    k = np.arange(N + 1, dtype=float)
    coeffs = fk * np.exp(special.gammaln(k + 1) - special.gammaln(k + mu + 1))
    exp = MjfExpansion(spec.pmap, -mu, mu, mu, coeffs)
    if spec.g0 == 0:
        return exp
    return IvpSolution(exp, float(spec.g0), mu, spec.kind)


def _load_vector(pmap, f, N):
    """``(f, J_{i+1}^{-1,-1})`` for ``i = 1..N-1`` by an ``N + 2``-point Gauss rule.

    ``J_n^{-1,-1} = -(1 - s^2)/4 * P_{n-2}^{1,1}(s)`` and ``varpi^{0,0} dx = ds``.
    """
    rule = mapped_rule(pmap, 0.0, 0.0, N + 2, "gauss")
    s = rule.s_nodes
    fv = _samples(f, rule.x_nodes)
    Q = jacobi.jacobi_all(max(N - 2, 0), 1.0, 1.0, s)[: N - 1]
    return -0.25 * Q @ (rule.varpi * (1.0 - s * s) * fv)


def stiffness_diagonal(kappa, mu, N):
    i = np.arange(1, N, dtype=float)
    return kappa * np.exp(special.gammaln(i + mu) - special.gammaln(i)) / (2 * i + 1)


def mass_matrix(pmap: PsiMap, mu, N, n_points=None):
    """``m[j, i] = (phi_i, J_{j+1}^{-1,-1})``, rows indexed by test function."""
    n_points = max(n_points or N + 2, N + 2)
    rule = jacobi.gauss_rule(0.0, mu - 1.0, n_points)
    s = rule.nodes
    Phi = jacobi.jacobi_all(N - 1, 1.0 - mu, mu - 1.0, s)[1:]
    Q = jacobi.jacobi_all(max(N - 2, 0), 1.0, 1.0, s)[: N - 1]
    scale = -0.25 * pmap.kappa ** (1.0 - mu)
    return scale * (Q * (rule.weights * (1.0 - s * s))) @ Phi.T


def _bvp_expansion(pmap, mu, uhat):
    return MjfExpansion(pmap, 1.0 - mu, mu - 1.0, mu - 1.0, np.concatenate([[0.0], uhat]))


def solve_bvp_pg(spec: BvpLinearSpec, N: int) -> MjfExpansion:
    """Trial functions ``phi_i = t^(mu-1) J_i^{1-mu,mu-1}``, ``i = 1..N-1``; diagonal stiffness.

    Solves ``-D^mu u = f`` (the ``lam = 0`` case of :class:`BvpLinearSpec`).
    """
    if spec.lam != 0:
        raise ParameterError("solve_bvp_pg handles lam = 0; use solve_helmholtz_pg")
    if N < 2:
        raise ParameterError("N must be at least 2")
    fvec = _load_vector(spec.pmap, spec.rhs, N)
    return _bvp_expansion(spec.pmap, spec.mu, fvec / stiffness_diagonal(spec.pmap.kappa, spec.mu, N))


def solve_helmholtz_pg(spec: BvpLinearSpec, N: int) -> MjfExpansion:
    """``(lam^2 M + S) u = f`` with diagonal ``S`` and dense mass matrix ``M``."""
    if N < 2:
        raise ParameterError("N must be at least 2")
    S = np.diag(stiffness_diagonal(spec.pmap.kappa, spec.mu, N))
    A = spec.lam**2 * mass_matrix(spec.pmap, spec.mu, N) + S
    fvec = _load_vector(spec.pmap, spec.rhs, N)
    try:
        lu = scipy.linalg.lu_factor(A, check_finite=True)
    except (ValueError, np.linalg.LinAlgError) as exc:
        raise NumericError(f"Helmholtz system could not be factored: {exc}") from exc
    if np.any(np.diag(lu[0]) == 0):
        raise NumericError("Helmholtz system is singular")
    return _bvp_expansion(spec.pmap, spec.mu, scipy.linalg.lu_solve(lu, fvec))


def error_grid(pmap: PsiMap, n=ERROR_GRID_POINTS):
    return pmap.a + (pmap.b - pmap.a) * np.arange(n) / (n - 1)


def max_error(approx, exact, pmap: PsiMap, n=ERROR_GRID_POINTS):
    """Max abs error on ``n`` uniformly spaced points of ``[a, b]``, ends included."""
    x = error_grid(pmap, n)
    return float(np.max(np.abs(approx(x) - exact(x))))
