"""Classical Jacobi polynomials on [-1, 1] and Gauss-type quadrature.

Evaluation uses the three-term recurrence. Degenerate parameter pairs, i.e.
``-(alpha + beta + 1)`` a positive integer, go through the negative-integer
transformation formulas or, below their threshold degree, the explicit
hypergeometric series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError, NumericError, ParameterError

_INT_TOL = 1e-12


def gamma_fn(x):
    """Real Gamma function; raises :class:`DomainError` at the poles."""
    x = float(x)
    if x <= 0 and abs(x - round(x)) < _INT_TOL:
        raise DomainError(f"Gamma has a pole at {x}")
    return math.gamma(x)


def rgamma(x):
    """``1/Gamma(x)``, zero at the poles."""
    return special.rgamma(x)


def gamma_ratio(x, y):
    """``Gamma(x) / Gamma(y)`` computed in log space, ``x, y > 0``."""
    return np.exp(special.gammaln(x) - special.gammaln(y))


def _as_int(v):
    r = round(v)
    return int(r) if abs(v - r) < _INT_TOL else None


def is_degenerate(alpha, beta):
    """True when ``-(alpha + beta + 1)`` is a positive integer."""
    k = _as_int(-(alpha + beta + 1.0))
    return k is not None and k >= 1


@dataclass(frozen=True)
class JacobiParams:
    alpha: float
    beta: float

    def check_orthogonal(self):
        if not (self.alpha > -1.0 and self.beta > -1.0):
            raise ParameterError(f"need alpha, beta > -1, got ({self.alpha}, {self.beta})")


def recurrence_coeffs(alpha, beta, n):
    """``(A_n, B_n, C_n)`` with ``P_{n+1} = (A_n s - B_n) P_n - C_n P_{n-1}``."""
    ab = alpha + beta
    if n == 0:
        A = 0.5 * (ab + 2)
        # the closed form is 0/0 when alpha + beta = 0; read off P_1 instead
        B = -(alpha - beta) / 2.0
        C = 0.0
    else:
        A = (2 * n + ab + 1) * (2 * n + ab + 2) / (2 * (n + 1) * (n + ab + 1))
        B = (beta**2 - alpha**2) * (2 * n + ab + 1) / (2 * (n + 1) * (n + ab + 1) * (2 * n + ab))
        C = (n + alpha) * (n + beta) * (2 * n + ab + 2) / ((n + 1) * (n + ab + 1) * (2 * n + ab))
    return A, B, C


def _poch(c, j):
    out = 1.0
    for i in range(j):
        out *= c + i
    return out


def jacobi_series(n, alpha, beta, s):
    """``P_n^{alpha,beta}(s)`` from the explicit finite series (any parameters)."""
    s = np.asarray(s, dtype=float)
    z = 0.5 * (s - 1.0)
    out = np.zeros_like(s)
    for j in range(n, -1, -1):
        c = _poch(n + alpha + beta + 1.0, j) * _poch(alpha + j + 1.0, n - j)
        c /= math.factorial(j) * math.factorial(n - j)
        out = out * z + c
    return out


def _recurrence_all(nmax, alpha, beta, s):
    s = np.asarray(s, dtype=float)
    out = np.empty((nmax + 1,) + s.shape)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = 0.5 * (alpha + beta + 2.0) * s + 0.5 * (alpha - beta)
    for n in range(1, nmax):
        A, B, C = recurrence_coeffs(alpha, beta, n)
        out[n + 1] = (A * s - B) * out[n] - C * out[n - 1]
    return out


def _degenerate_eval(n, alpha, beta, s):
    s = np.asarray(s, dtype=float)
    l_ = _as_int(-alpha)
    m_ = _as_int(-beta)
    l_ = l_ if l_ is not None and l_ >= 1 else None
    m_ = m_ if m_ is not None and m_ >= 1 else None
    if l_ is not None and m_ is not None and n >= l_ + m_:
        return (0.5 * (s - 1.0)) ** l_ * (0.5 * (s + 1.0)) ** m_ * jacobi_eval(n - l_ - m_, l_, m_, s)
    if l_ is not None and m_ is None and n >= l_:
        c = math.factorial(n - l_) * _poch(beta + n - l_ + 1.0, l_) / math.factorial(n)
        return c * (0.5 * (s - 1.0)) ** l_ * jacobi_eval(n - l_, l_, beta, s)
    if m_ is not None and l_ is None and n >= m_:
        # P_n^{alpha,-m}(s) = (-1)^n P_n^{-m,alpha}(-s)
        return (-1) ** n * _degenerate_or_plain(n, -m_, alpha, -s)
    return jacobi_series(n, alpha, beta, s)


def _degenerate_or_plain(n, alpha, beta, s):
    if is_degenerate(alpha, beta):
        return _degenerate_eval(n, alpha, beta, s)
    return _recurrence_all(n, alpha, beta, s)[n]


def jacobi_eval(n, alpha, beta, s):
    """``P_n^{alpha,beta}(s)`` (vectorized in ``s``)."""
    if n < 0:
        raise ParameterError("degree must be non-negative")
    s = np.asarray(s, dtype=float)
    if n == 0:
        return np.ones_like(s)
    return _degenerate_or_plain(n, alpha, beta, s)


def jacobi_all(nmax, alpha, beta, s):
    """Rows ``P_0 .. P_nmax`` at ``s``; shape ``(nmax + 1,) + s.shape``."""
    s = np.asarray(s, dtype=float)
    if not is_degenerate(alpha, beta):
        return _recurrence_all(nmax, alpha, beta, s)
    return np.stack([jacobi_eval(n, alpha, beta, s) for n in range(nmax + 1)])


def jacobi_deriv(n, alpha, beta, s):
    """``d/ds P_n^{alpha,beta}(s) = (n + alpha + beta + 1)/2 P_{n-1}^{alpha+1,beta+1}``."""
    s = np.asarray(s, dtype=float)
    if n == 0:
        return np.zeros_like(s)
    return 0.5 * (n + alpha + beta + 1.0) * jacobi_eval(n - 1, alpha + 1.0, beta + 1.0, s)


def jacobi_norm(alpha, beta, n):
    """``gamma_n = int_{-1}^1 (P_n)^2 (1-s)^alpha (1+s)^beta ds``."""
    JacobiParams(alpha, beta).check_orthogonal()
    ab = alpha + beta
    if n == 0:
        logv = (ab + 1) * math.log(2.0) + math.lgamma(alpha + 1) + math.lgamma(beta + 1) - math.lgamma(ab + 2)
        return math.exp(logv)
    logv = ((ab + 1) * math.log(2.0) + math.lgamma(n + alpha + 1) + math.lgamma(n + beta + 1)
            - math.lgamma(n + 1) - math.lgamma(n + ab + 1))
    return math.exp(logv) / (2 * n + ab + 1)


def jacobi_moment(alpha, beta, k):
    """``int_{-1}^1 s^k (1-s)^alpha (1+s)^beta ds``.

    Integrating ``d/ds [s^k (1-s)^(alpha+1) (1+s)^(beta+1)]`` gives
    ``m_{k+1} = (k m_{k-1} + (beta - alpha) m_k) / (k + alpha + beta + 2)``,
    which avoids the cancellation of the binomial expansion.
    """
    JacobiParams(alpha, beta).check_orthogonal()
    m_prev = 0.0
    m = math.exp((alpha + beta + 1) * math.log(2.0) + math.lgamma(alpha + 1) + math.lgamma(beta + 1)
                 - math.lgamma(alpha + beta + 2))
    for j in range(k):
        m_prev, m = m, (j * m_prev + (beta - alpha) * m) / (j + alpha + beta + 2)
    return m


@dataclass(frozen=True)
class QuadRule:
    """Nodes and weights on [-1, 1] for the weight ``(1-s)^alpha (1+s)^beta``."""

    kind: str
    alpha: float
    beta: float
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def n_points(self):
        return len(self.nodes)

    def integrate(self, values):
        return float(np.dot(self.weights, values))


def _golub_welsch_nodes(alpha, beta, n):
    ab = alpha + beta
    k = np.arange(n, dtype=float)
    diag = np.empty(n)
    diag[0] = (beta - alpha) / (ab + 2.0)
    if n > 1:
        kk = k[1:]
        diag[1:] = (beta**2 - alpha**2) / ((2 * kk + ab) * (2 * kk + ab + 2))
    off = np.empty(max(n - 1, 0))
    if n > 1:
        off[0] = 4 * (1 + alpha) * (1 + beta) / ((2 + ab) ** 2 * (3 + ab))
        kk = k[2:]
        off[1:] = (4 * kk * (kk + alpha) * (kk + beta) * (kk + ab)
                   / ((2 * kk + ab) ** 2 * (2 * kk + ab + 1) * (2 * kk + ab - 1)))
    T = np.diag(diag) + np.diag(np.sqrt(off), 1) + np.diag(np.sqrt(off), -1)
    return np.sort(np.linalg.eigvalsh(T))


def _newton_polish(alpha, beta, n, x, maxiter=100):
    x = x.copy()
    for it in range(maxiter):
        p = jacobi_eval(n, alpha, beta, x)
        dp = jacobi_deriv(n, alpha, beta, x)
        dx = p / dp
        x -= dx
        if np.all(np.abs(dx) <= 4e-16 * np.maximum(1.0, np.abs(x))):
            return x
    if np.max(np.abs(dx)) > 1e-12:
        raise NumericError(f"Gauss-Jacobi Newton iteration stalled for n={n}", iterations=maxiter,
                           residual=float(np.max(np.abs(dx))))
    return x


def gauss_rule(alpha, beta, n_points):
    """``n_points``-point Gauss-Jacobi rule; exact through degree ``2 n_points - 1``."""
    JacobiParams(alpha, beta).check_orthogonal()
    n = int(n_points)
    if n < 1:
        raise ParameterError("need at least one Gauss point")
    x = _newton_polish(alpha, beta, n, _golub_welsch_nodes(alpha, beta, n))
    x = np.sort(x)
    ab = alpha + beta
    logG = ((ab + 1) * math.log(2.0) + math.lgamma(n + alpha + 1) + math.lgamma(n + beta + 1)
            - math.lgamma(n + ab + 1) - math.lgamma(n + 1))
    dp = jacobi_deriv(n, alpha, beta, x)
    w = math.exp(logG) / ((1.0 - x * x) * dp * dp)
    return QuadRule("gauss", alpha, beta, x, w)


def lobatto_rule(alpha, beta, n_points):
    """``n_points``-point Gauss-Jacobi-Lobatto rule (endpoints included)."""
    JacobiParams(alpha, beta).check_orthogonal()
    n = int(n_points)
    if n < 2:
        raise ParameterError("Gauss-Lobatto needs at least two points")
    N = n - 1
    ab = alpha + beta
    c = (ab + 1) * math.log(2.0) + math.lgamma(N) - math.lgamma(N + ab + 2)
    w_left = (beta + 1) * math.exp(c + 2 * math.lgamma(beta + 1) + math.lgamma(N + alpha + 1)
                                   - math.lgamma(N + beta + 1))
    w_right = (alpha + 1) * math.exp(c + 2 * math.lgamma(alpha + 1) + math.lgamma(N + beta + 1)
                                     - math.lgamma(N + alpha + 1))
    nodes = np.empty(n)
    weights = np.empty(n)
    nodes[0], nodes[-1] = -1.0, 1.0
    weights[0], weights[-1] = w_left, w_right
    if n > 2:
        inner = gauss_rule(alpha + 1.0, beta + 1.0, n - 2)
        nodes[1:-1] = inner.nodes
        weights[1:-1] = inner.weights / (1.0 - inner.nodes**2)
    return QuadRule("lobatto", alpha, beta, nodes, weights)
