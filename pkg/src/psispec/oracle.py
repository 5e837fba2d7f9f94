"""Reference machinery that shares no code path with the spectral solvers.

* :func:`oracle_frac_int` evaluates the defining integral of the
  psi-fractional integral by adaptive quadrature in ``u = psi(tau)`` with
  the algebraic kernel singularity carried by the quadrature weight.
* :func:`oracle_volterra_solve` / :func:`oracle_fredholm_solve` discretize
  the equivalent integral equations by product integration (piecewise
  linear in ``t = psi - psi_a``, kernel integrated exactly) on a grid graded
  toward ``x = a``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import InputError, OracleError, ParameterError
from .psi_map import PsiMap


class OracleAccuracyWarning(UserWarning):
    pass


@dataclass(frozen=True)
class AdaptiveQuadSpec:
    abs_tol: float = 1e-14
    rel_tol: float = 1e-12
    max_depth: int = 200
    # f ~ (psi - psi_a)^e near a (left) or (psi_b - psi)^e near b (right)
    endpoint_exponent: float = 0.0

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ParameterError("tolerances must be positive")


DEFAULT_QUAD = AdaptiveQuadSpec()


def oracle_frac_int(pmap: PsiMap, mu, f, x, side="left", spec: AdaptiveQuadSpec = DEFAULT_QUAD):
    """Order-``mu`` psi-fractional integral of an arbitrary callable ``f(x)``."""
    if not mu > 0:
        raise ParameterError("order must be positive")
    x = float(x)
    y = float(pmap.psi(np.array(x)))
    e = spec.endpoint_exponent
    if side == "left":
        lo, hi = pmap.psi_a, y
        wvar = (e, mu - 1.0)
        if x <= pmap.a or hi <= lo:
            return 0.0

        def g(u):
            # the modified Clenshaw-Curtis rule samples the endpoint itself
            if e and u <= lo:
                u = lo + 1e-9 * (hi - lo)
            v = float(f(float(pmap.inv(np.array(u)))))
            return v / (u - lo) ** e if e else v
    elif side == "right":
        lo, hi = y, pmap.psi_b
        wvar = (mu - 1.0, e)
        if x >= pmap.b or hi <= lo:
            return 0.0

        def g(u):
            if e and u >= hi:
                u = hi - 1e-9 * (hi - lo)
            v = float(f(float(pmap.inv(np.array(u)))))
            return v / (hi - u) ** e if e else v
    else:
        raise ParameterError(f"side must be 'left' or 'right', got {side!r}")

    with np.errstate(divide="ignore", invalid="ignore"):
        val, err, *rest = integrate.quad(g, lo, hi, weight="alg", wvar=wvar, epsabs=spec.abs_tol,
                                         epsrel=spec.rel_tol, limit=spec.max_depth, full_output=1)
    if not np.isfinite(val):
        raise OracleError("oracle quadrature produced a non-finite value")
    if err > max(spec.abs_tol, spec.rel_tol * abs(val)) * 100:
        warnings.warn(f"oracle quadrature error estimate {err:.2e} exceeds tolerance",
                      OracleAccuracyWarning, stacklevel=2)
    return val / math.gamma(mu)


def oracle_frac_deriv(pmap: PsiMap, mu, f, x, kind="rl", spec: AdaptiveQuadSpec = DEFAULT_QUAD):
    """Left derivative of order ``mu`` (non-integer) via finite differences of the oracle integral.

    RL: ``delta_psi^n D^{-(n-mu)} f``. Caputo: ``D^{-(n-mu)} delta_psi^n f``
    with the inner derivative also taken by finite differences.
    """
    n = math.ceil(mu)
    if n == mu:
        raise ParameterError("integer orders are not fractional")
    if kind == "rl":
        return pmap.delta_psi(lambda z: oracle_frac_int(pmap, n - mu, f, z, "left", spec), x, n)
    if kind == "caputo":
        return oracle_frac_int(pmap, n - mu, lambda z: pmap.delta_psi(f, z, n), x, "left", spec)
    raise ParameterError(f"unknown derivative kind {kind!r}")


# -- product integration ---------------------------------------------------


def graded_grid(T, M, grading):
    i = np.arange(M + 1, dtype=float)
    t = T * (i / M) ** grading
    t[-1] = T
    return t


def _row_weights(t, i, nu):
    """Weights ``w_j`` with ``I^nu[phi](t_i) ~ sum_j w_j phi_j`` for piecewise-linear ``phi``."""
    w = np.zeros(i + 1)
    if i == 0:
        return w
    A = t[i] - t[:i]
    B = t[i] - t[1: i + 1]
    h = t[1: i + 1] - t[:i]
    Am, Bm = A**nu, B**nu
    m0 = (Am - Bm) / nu
    m1 = (A * (Am - Bm) / nu - (A * Am - B * Bm) / (nu + 1.0)) / h
    w[1: i + 1] += m1
    w[:i] += m0 - m1
    return w / math.gamma(nu)


def _fixed_point(rhs, wii, F, ti, xi, tol=1e-15, maxiter=200):
    """Solve ``u = rhs + wii F(x_i, u)`` for a scalar ``u``."""
    u = rhs + wii * F(xi, rhs)
    for _ in range(maxiter):
        un = rhs + wii * F(xi, u)
        if abs(un - u) <= tol * max(1.0, abs(un)):
            return un
        u = un
    # secant on the residual as a fallback
    u0, u1 = rhs, u
    r0 = u0 - rhs - wii * F(xi, u0)
    for _ in range(maxiter):
        r1 = u1 - rhs - wii * F(xi, u1)
        if abs(r1) <= tol * max(1.0, abs(u1)):
            return u1
        if r1 == r0:
            break
        u0, u1, r0 = u1, u1 - r1 * (u1 - u0) / (r1 - r0), r1
    raise OracleError(f"local fixed point failed at t={ti}")


@dataclass
class GridSolution:
    """Oracle solution on a graded grid; call it to interpolate (linear in ``t``)."""

    pmap: PsiMap
    t: np.ndarray
    x: np.ndarray
    u: np.ndarray
    sweeps: int = 1
    info: dict = field(default_factory=dict)

    def __call__(self, x):
        return np.interp(self.pmap.shifted(x), self.t, self.u)


def _march(pmap, mu, F, t, x, g_vals):
    M = len(t) - 1
    u = np.empty(M + 1)
    Fv = np.empty(M + 1)
    u[0] = g_vals[0]
    if not np.isfinite(u[0]):
        raise InputError("initial value of the oracle solution must be finite")
    Fv[0] = F(x[0], u[0])
    for i in range(1, M + 1):
        w = _row_weights(t, i, mu)
        rhs = g_vals[i] + np.dot(w[:i], Fv[:i])
        u[i] = _fixed_point(rhs, w[i], F, t[i], x[i])
        Fv[i] = F(x[i], u[i])
    return u, Fv


def oracle_volterra_solve(pmap: PsiMap, mu, f, M=2048, kind="caputo", init=(), grading=None):
    """Solve the Volterra equation equivalent to a left psi-fractional IVP.

    ``f(x, u)`` is the right-hand side of ``D^mu u = f(x, u)``.
    ``kind='caputo'``: ``init = (c_0, .., c_{n-1})`` are ``delta_psi^k u(a)``.
    ``kind='rl'``: ``init = (g_0, ..)`` are the RL initial data; the
    resulting ``t^(mu-n+k)`` terms must be finite at ``a``.
    The grid is marched point by point, each step solving its implicit scalar
    equation, which converges the Picard sweeps of a Gauss-Seidel ordering in
    one pass.
    """
    n = math.ceil(mu)
    init = tuple(init) + (0.0,) * (n - len(init))
    grading = grading if grading is not None else max(1.0, 2.0 / mu)
    T = pmap.psi_b - pmap.psi_a
    t = graded_grid(T, M, grading)
    x = np.asarray(pmap.inv(t + pmap.psi_a), dtype=float)
    x[0], x[-1] = pmap.a, pmap.b
    g_vals = np.zeros(M + 1)
    with np.errstate(divide="ignore"):
        for k, ck in enumerate(init):
            if ck == 0:
                continue
            if kind == "caputo":
                g_vals += ck * t**k / math.factorial(k)
            elif kind == "rl":
                g_vals += ck * t ** (mu - n + k) / math.gamma(mu - n + k + 1)
            else:
                raise ParameterError(f"unknown kind {kind!r}")
    u, _ = _march(pmap, mu, lambda xx, uu: float(f(xx, uu)), t, x, g_vals)
    return GridSolution(pmap, t, x, u)


def oracle_fredholm_solve(pmap: PsiMap, mu, f, M=2048, kind="caputo", grading=None, tol=1e-12,
                          maxiter=50):
    """Solve the Fredholm equation equivalent to the left psi-fractional BVP, ``1 < mu < 2``.

    ``kind='rl'``:  u = c t^(mu-1) + I^mu[F],  c = -kappa/(2 G(mu)) int (T - tau) F
    ``kind='caputo'``: u = d t + I^mu[F],     d = -(kappa/2) I^mu[F](T)
    The rank-one correction is handled by a scalar secant iteration on its
    coefficient around an exact Volterra march, so no contraction condition
    on ``f`` is needed.
    """
    if not 1 < mu < 2:
        raise ParameterError("Fredholm oracle needs 1 < mu < 2")
    grading = grading if grading is not None else max(1.0, 2.0 / mu)
    T = pmap.psi_b - pmap.psi_a
    t = graded_grid(T, M, grading)
    x = np.asarray(pmap.inv(t + pmap.psi_a), dtype=float)
    x[0], x[-1] = pmap.a, pmap.b
    kappa = pmap.kappa
    F = lambda xx, uu: float(f(xx, uu))  # noqa: E731
    if kind == "rl":
        rho = t ** (mu - 1.0)
        wT = _row_weights(t, M, 2.0) / math.gamma(mu)

        def coef(Fv):
            return -0.5 * kappa * np.dot(wT, Fv)
    elif kind == "caputo":
        rho = t.copy()
        wT = _row_weights(t, M, mu)

        def coef(Fv):
            return -0.5 * kappa * np.dot(wT, Fv)
    else:
        raise ParameterError(f"unknown kind {kind!r}")

    def residual(c):
        u, Fv = _march(pmap, mu, F, t, x, c * rho)
        return c - coef(Fv), u

    c0, c1 = 0.0, 1.0
    r0, u = residual(c0)
    for it in range(1, maxiter + 1):
        r1, u = residual(c1)
        if abs(r1) <= tol * max(1.0, abs(c1)):
            return GridSolution(pmap, t, x, u, sweeps=it + 1, info={"coef": c1})
        if r1 == r0:
            break
        c_next = c1 - r1 * (c1 - c0) / (r1 - r0)
        # a steep residual (fast-growing solutions) never gets below tol in absolute terms
        if it > 1 and abs(c_next - c1) <= tol * max(1.0, abs(c_next)):
            _, u = residual(c_next)
            return GridSolution(pmap, t, x, u, sweeps=it + 2, info={"coef": c_next})
        c0, c1, r0 = c1, c_next, r1
    raise OracleError("Fredholm coefficient iteration did not converge", iterations=maxiter)


def richardson_error_estimate(solve, M, order=2.0):
    """Estimate the max nodal error of ``solve(M)`` by comparing with ``solve(M // 2)``."""
    fine = solve(M)
    coarse = solve(M // 2)
    diff = np.max(np.abs(fine.u[::2] - coarse.u))
    return fine, diff / (2.0**order - 1.0)
