"""Mapped Jacobi functions ``J_n(x) = P_n^{alpha,beta}(s(x))``.

Also: the delta_psi derivative relations, Gauss-type rules pulled back
through psi, expansions carrying a singular prefactor ``(psi(x)-psi_a)^rho``,
and Lobatto interpolation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jacobi
from .errors import DomainError, InputError, ParameterError
from .psi_map import PsiMap


def mjf_eval(pmap: PsiMap, alpha, beta, n, x):
    return jacobi.jacobi_eval(n, alpha, beta, pmap.to_reference(x))


def mjf_all(pmap: PsiMap, alpha, beta, nmax, x):
    return jacobi.jacobi_all(nmax, alpha, beta, pmap.to_reference(x))


def delta_deriv_coeffs(alpha, beta, n, k, kappa):
    """Factor and new family for ``delta_psi^k J_n^{alpha,beta}``.

    Returns ``(d, (alpha + k, beta + k), n - k)`` with
    ``d = kappa^k Gamma(n+k+alpha+beta+1) / (2^k Gamma(n+alpha+beta+1))``;
    ``d = 0`` when ``k > n``.
    """
    if k < 0 or n < 0:
        raise ParameterError("n and k must be non-negative")
    if k > n:
        return 0.0, (alpha + k, beta + k), 0
    # ratio of Gammas as a finite product keeps negative arguments exact
    d = 1.0
    for i in range(k):
        d *= n + alpha + beta + 1 + i
    return d * (0.5 * kappa) ** k, (alpha + k, beta + k), n - k


def antideriv_combo(alpha, beta, n, kappa):
    """``(a_n, b_n, c_n)`` with ``J_n = delta_psi(a_n J_{n-1} + b_n J_n + c_n J_{n+1})``."""
    if n < 1:
        raise ParameterError("need n >= 1")
    ab = alpha + beta
    den_a = kappa * (n + ab) * (2 * n + ab) * (2 * n + ab + 1)
    den_b = kappa * (2 * n + ab) * (2 * n + ab + 2)
    den_c = kappa * (2 * n + ab + 1) * (2 * n + ab + 2)
    if den_a == 0 or den_b == 0 or den_c == 0:
        raise ParameterError(f"antiderivative coefficients undefined for n={n}, alpha+beta={ab}")
    a = -2.0 * (n + alpha) * (n + beta) / den_a
    b = 2.0 * (alpha - beta) / den_b
    c = 2.0 * (n + ab + 1) / den_c
    return a, b, c


@dataclass(frozen=True)
class MappedQuadRule:
    """A Jacobi rule pulled back to ``[a, b]``; weights are unchanged.

    ``s_nodes`` and ``t_nodes = psi(x) - psi_a`` are kept alongside
    ``x_nodes`` so that downstream code never loses digits re-deriving them.
    """

    base: jacobi.QuadRule
    pmap: PsiMap
    x_nodes: np.ndarray
    s_nodes: np.ndarray
    t_nodes: np.ndarray

    @property
    def varpi(self):
        return self.base.weights

    @property
    def alpha(self):
        return self.base.alpha

    @property
    def beta(self):
        return self.base.beta

    def integrate(self, values):
        """``int_a^b p(x) varpi^{alpha,beta}(x) dx`` from samples at ``x_nodes``."""
        return float(np.dot(self.base.weights, values))


def mapped_rule(pmap: PsiMap, alpha, beta, n_points, kind="lobatto"):
    if kind == "lobatto":
        base = jacobi.lobatto_rule(alpha, beta, n_points)
    elif kind == "gauss":
        base = jacobi.gauss_rule(alpha, beta, n_points)
    else:
        raise ParameterError(f"unknown rule kind {kind!r}")
    x = pmap.from_reference(base.nodes)
    t = (base.nodes + 1.0) / pmap.kappa
    return MappedQuadRule(base, pmap, np.atleast_1d(x), base.nodes.copy(), t)


def mjf_weight(pmap: PsiMap, alpha, beta, x):
    """``varpi^{alpha,beta}(x) = kappa^{alpha+beta+1} (psi_b-psi)^alpha (psi-psi_a)^beta psi'(x)``."""
    x = np.asarray(x, dtype=float)
    return (pmap.kappa ** (alpha + beta + 1) * pmap.shifted_right(x) ** alpha
            * pmap.shifted(x) ** beta * pmap.dpsi(x))


@dataclass(frozen=True)
class MjfExpansion:
    """``u(x) = (psi(x) - psi_a)^rho * sum_k coeffs[k] J_k^{alpha,beta}(x)``."""

    pmap: PsiMap
    alpha: float
    beta: float
    rho: float
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if not np.all(np.isfinite(c)):
            raise InputError("expansion coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def eval_reference(self, s):
        """Evaluate at reference coordinates ``s`` (avoids the psi round trip)."""
        s = np.asarray(s, dtype=float)
        P = jacobi.jacobi_all(self.degree, self.alpha, self.beta, s)
        val = np.tensordot(self.coeffs, P, axes=(0, 0))
        if self.rho == 0:
            return val
        t = (s + 1.0) / self.pmap.kappa
        if self.rho < 0 and np.any(t == 0.0):
            raise DomainError("negative prefactor exponent is singular at x = a")
        with np.errstate(divide="ignore"):
            return t**self.rho * val

    def __call__(self, x):
        return self.eval_reference(self.pmap.to_reference(x))


def expansion_eval(e: MjfExpansion, x):
    return e(x)


def lobatto_transform(alpha, beta, values):
    """Coefficients of the interpolant through Lobatto samples ``values``.

    ``c_k = sum_j v_j P_k(s_j) w_j / gamma_k`` for ``k < N``; the top mode is
    divided by ``(2 + (alpha+beta+1)/N) gamma_N`` instead, since the Lobatto
    rule does not integrate ``P_N^2`` exactly.
    """
    values = np.asarray(values, dtype=float)
    N = len(values) - 1
    if N < 1:
        return values.copy()
    rule = jacobi.lobatto_rule(alpha, beta, N + 1)
    P = jacobi.jacobi_all(N, alpha, beta, rule.nodes)
    norms = np.array([jacobi.jacobi_norm(alpha, beta, k) for k in range(N + 1)])
    norms[N] *= 2.0 + (alpha + beta + 1.0) / N
    return P @ (rule.weights * values) / norms


def interpolate(pmap: PsiMap, alpha, beta, N, f):
    """Interpolate ``f`` at the ``N + 1`` mapped Lobatto nodes; returns an expansion (rho = 0)."""
    jacobi.JacobiParams(alpha, beta).check_orthogonal()
    rule = mapped_rule(pmap, alpha, beta, N + 1, "lobatto")
    vals = np.asarray(f(rule.x_nodes), dtype=float)
    if vals.shape != rule.x_nodes.shape or not np.all(np.isfinite(vals)):
        raise InputError("f must return finite values at every Lobatto node")
    return MjfExpansion(pmap, alpha, beta, 0.0, lobatto_transform(alpha, beta, vals))


def weighted_norm_check(pmap, alpha, beta, nmax, n_points=None):
    """Gram matrix ``(J_n, J_m)_{varpi}`` by a mapped Gauss rule (diagnostic)."""
    n_points = n_points or nmax + 2
    rule = mapped_rule(pmap, alpha, beta, n_points, "gauss")
    P = jacobi.jacobi_all(nmax, alpha, beta, pmap.to_reference(rule.x_nodes))
    return (P * rule.varpi) @ P.T


__all__ = [
    "MappedQuadRule", "MjfExpansion", "antideriv_combo", "delta_deriv_coeffs", "expansion_eval",
    "interpolate", "lobatto_transform", "mapped_rule", "mjf_all", "mjf_eval", "mjf_weight",
    "weighted_norm_check",
]
