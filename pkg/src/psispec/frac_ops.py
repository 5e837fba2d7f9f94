r"""psi-fractional integrals and derivatives of powers and mapped Jacobi functions.

Everything here is closed form (or a closed-form recurrence); arbitrary
functions go through :mod:`psispec.oracle` instead.

Notation: ``t = psi(x) - psi_a`` and ``r = psi_b - psi(x)``. The left-sided
integral of order ``mu`` is

.. math::

    {}_\psi D_{a,x}^{-\mu} f(x) = \frac{1}{\Gamma(\mu)}
        \int_a^x \psi'(\tau) (\psi(x) - \psi(\tau))^{\mu - 1} f(\tau)\, d\tau,

and the right-sided one integrates over ``[x, b]``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from . import jacobi
from .errors import DomainError, NumericError, ParameterError
from .mjf import antideriv_combo
from .psi_map import PsiMap


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


class Kind(enum.Enum):
    RL = "rl"
    CAPUTO = "caputo"


def _side(side):
    return side if isinstance(side, Side) else Side(str(side).lower())


def _kind(kind):
    return kind if isinstance(kind, Kind) else Kind(str(kind).lower())


@dataclass(frozen=True)
class FracOrder:
    mu: float
    kind: Kind = Kind.RL
    side: Side = Side.LEFT

    def __post_init__(self):
        if not self.mu > 0:
            raise ParameterError("fractional order must be positive")
        object.__setattr__(self, "kind", _kind(self.kind))
        object.__setattr__(self, "side", _side(self.side))

    @property
    def n_ceil(self):
        return math.ceil(self.mu)


def _distance(pmap: PsiMap, x, side):
    return pmap.shifted(x) if _side(side) is Side.LEFT else pmap.shifted_right(x)


def _log_gamma_ratio(x, y):
    """``Gamma(x)/Gamma(y)`` for ``x, y`` that may be non-positive (non-pole)."""
    if x > 0 and y > 0:
        return math.exp(math.lgamma(x) - math.lgamma(y))
    return jacobi.gamma_fn(x) * float(special.rgamma(y))


# -- powers ---------------------------------------------------------------


def frac_int_power(pmap: PsiMap, mu, gamma, x, side=Side.LEFT):
    """Integral of order ``mu`` of ``t^gamma`` (left) or ``r^gamma`` (right)."""
    if not gamma > -1:
        raise ParameterError("power rule needs gamma > -1")
    if not mu > 0:
        raise ParameterError("order must be positive")
    d = _distance(pmap, x, side)
    return _log_gamma_ratio(gamma + 1.0, gamma + mu + 1.0) * d ** (gamma + mu)


def frac_deriv_power(pmap: PsiMap, mu, gamma, x, side=Side.LEFT, kind=Kind.RL):
    """Derivative of order ``mu`` of ``t^gamma`` (left) or ``r^gamma`` (right).

    RL: ``Gamma(gamma+1)/Gamma(gamma-mu+1) d^(gamma-mu)``; vanishes when
    ``gamma - mu + 1`` is a non-positive integer. Caputo: zero for integer
    ``gamma < ceil(mu)``, equal to RL for ``gamma > ceil(mu) - 1``.
    """
    if not gamma > -1:
        raise ParameterError("power rule needs gamma > -1")
    kind = _kind(kind)
    n = math.ceil(mu)
    if kind is Kind.CAPUTO:
        g_int = jacobi._as_int(gamma)
        if g_int is not None and 0 <= g_int <= n - 1:
            return np.zeros_like(np.asarray(_distance(pmap, x, side), dtype=float))
        if gamma <= n - 1:
            raise ParameterError("Caputo derivative of this power is not defined")
    d = np.asarray(_distance(pmap, x, side), dtype=float)
    coef = math.gamma(gamma + 1.0) * float(special.rgamma(gamma - mu + 1.0))
    if coef == 0.0:
        return np.zeros_like(d)
    if gamma - mu < 0 and np.any(d == 0.0):
        raise DomainError("derivative is singular at the endpoint")
    return coef * d ** (gamma - mu)


# -- weighted MJFs ----------------------------------------------------------


def frac_int_weighted_mjf(pmap: PsiMap, alpha, beta, mu, n, x, side=Side.LEFT):
    """Integral of order ``mu`` of a weighted MJF.

    Left: ``D^{-mu}[t^beta J_n^{alpha,beta}] = G(n+beta+1)/G(n+beta+mu+1) t^(beta+mu) J_n^{alpha-mu,beta+mu}``.
    Right: ``D^{-mu}[r^alpha J_n^{alpha,beta}] = G(n+alpha+1)/G(n+alpha+mu+1) r^(alpha+mu) J_n^{alpha+mu,beta-mu}``.
    """
    side = _side(side)
    s = pmap.to_reference(x)
    if side is Side.LEFT:
        if not beta > -1:
            raise ParameterError("left weighted integral needs beta > -1")
        c = _log_gamma_ratio(n + beta + 1.0, n + beta + mu + 1.0)
        return c * pmap.shifted(x) ** (beta + mu) * jacobi.jacobi_eval(n, alpha - mu, beta + mu, s)
    if not alpha > -1:
        raise ParameterError("right weighted integral needs alpha > -1")
    c = _log_gamma_ratio(n + alpha + 1.0, n + alpha + mu + 1.0)
    return c * pmap.shifted_right(x) ** (alpha + mu) * jacobi.jacobi_eval(n, alpha + mu, beta - mu, s)


def frac_deriv_weighted_mjf(pmap: PsiMap, alpha, beta, mu, n, x, side=Side.LEFT):
    """RL derivative of order ``mu`` of a weighted MJF (mirror of the integral)."""
    side = _side(side)
    s = pmap.to_reference(x)
    if side is Side.LEFT:
        if not beta - mu > -1:
            raise ParameterError("left weighted derivative needs beta - mu > -1")
        c = _log_gamma_ratio(n + beta + 1.0, n + beta - mu + 1.0)
        d, e = pmap.shifted(x), beta - mu
        fam = (alpha + mu, beta - mu)
    else:
        if not alpha - mu > -1:
            raise ParameterError("right weighted derivative needs alpha - mu > -1")
        c = _log_gamma_ratio(n + alpha + 1.0, n + alpha - mu + 1.0)
        d, e = pmap.shifted_right(x), alpha - mu
        fam = (alpha - mu, beta + mu)
    if e < 0 and np.any(np.asarray(d) == 0.0):
        raise DomainError("weighted derivative is singular at the endpoint")
    return c * np.asarray(d) ** e * jacobi.jacobi_eval(n, fam[0], fam[1], s)


def sl_eigenvalue(alpha, beta, mu, n, sign="+"):
    """Eigenvalue of the fractional Sturm-Liouville operator acting on ``J_n^{alpha,beta}``.

    ``'+'`` (right derivative inside, left outside):
    ``G(n+alpha+1) G(n+beta+mu+1) / (G(n+alpha-mu+1) G(n+beta+1))``;
    ``'-'`` swaps alpha and beta.
    """
    if sign == "-":
        alpha, beta = beta, alpha
    elif sign != "+":
        raise ParameterError("sign must be '+' or '-'")
    return (_log_gamma_ratio(n + alpha + 1.0, n + alpha - mu + 1.0)
            * _log_gamma_ratio(n + beta + mu + 1.0, n + beta + 1.0))


def sturm_liouville_apply(pmap: PsiMap, alpha, beta, mu, n, x, sign="+"):
    """Apply a fractional Sturm-Liouville operator to ``J_n^{alpha,beta}`` at interior ``x``.

    ``'+'``: ``t^-beta D_left^mu { r^(mu-alpha) t^(beta+mu) D_right^mu [r^alpha J_n] }``;
    ``'-'``: ``r^-alpha D_right^mu { r^(alpha+mu) t^(mu-beta) D_left^mu [t^beta J_n] }``.
    Each derivative is taken with the weighted closed forms.
    """
    t, r = pmap.shifted(x), pmap.shifted_right(x)
    if sign == "+":
        # inner derivative: G(n+alpha+1)/G(n+alpha-mu+1) r^(alpha-mu) J_n^{alpha-mu,beta+mu}
        if not alpha - mu > -1:
            raise ParameterError("'+' operator needs alpha - mu > -1")
        c1 = _log_gamma_ratio(n + alpha + 1.0, n + alpha - mu + 1.0)
        outer = frac_deriv_weighted_mjf(pmap, alpha - mu, beta + mu, mu, n, x, Side.LEFT)
        return c1 * outer * t ** (-beta)
    if sign == "-":
        if not beta - mu > -1:
            raise ParameterError("'-' operator needs beta - mu > -1")
        c1 = _log_gamma_ratio(n + beta + 1.0, n + beta - mu + 1.0)
        outer = frac_deriv_weighted_mjf(pmap, alpha + mu, beta - mu, mu, n, x, Side.RIGHT)
        return c1 * outer * r ** (-alpha)
    raise ParameterError("sign must be '+' or '-'")


def fd_orthogonality_norm(alpha, beta, mu, n, kappa):
    """Norm of the left weighted derivatives under ``varpi^{alpha+mu, mu-beta}``."""
    logv = (2 * (mu - beta) * math.log(kappa) + (alpha + beta + 1) * math.log(2.0)
            + 2 * math.lgamma(n + beta + 1) + math.lgamma(n + alpha + mu + 1)
            - math.lgamma(n + 1) - math.lgamma(n + beta - mu + 1))
    if n == 0:
        # (2n+ab+1) Gamma(n+ab+1) -> Gamma(ab+2)
        return math.exp(logv - math.lgamma(alpha + beta + 2))
    return math.exp(logv - math.lgamma(n + alpha + beta + 1)) / (2 * n + alpha + beta + 1)


# -- the S_n recurrence ----------------------------------------------------


def frac_int_mjf_recurrence(pmap: PsiMap, alpha, beta, mu, n_max, x, side=Side.LEFT):
    """``S_0 .. S_{n_max}`` where ``S_n`` is the order-``mu`` integral of ``J_n^{alpha,beta}``.

    Forward three-term recurrence obtained by integrating ``t J_n`` by parts
    against the antiderivative combination ``a_n J_{n-1} + b_n J_n + c_n J_{n+1}``.
    """
    side = _side(side)
    if not mu > 0:
        raise ParameterError("order must be positive")
    kappa = pmap.kappa
    x = np.asarray(x, dtype=float)
    if side is Side.LEFT:
        d = pmap.shifted(x)
        end = -1.0
    else:
        d = pmap.shifted_right(x)
        end = 1.0
    S = np.empty((n_max + 1,) + x.shape)
    S[0] = d**mu / math.gamma(mu + 1)
    if n_max == 0:
        return S
    A0, B0, _ = jacobi.recurrence_coeffs(alpha, beta, 0)
    if side is Side.LEFT:
        S[1] = kappa * A0 * d ** (mu + 1) / math.gamma(mu + 2) - (A0 + B0) * d**mu / math.gamma(mu + 1)
    else:
        S[1] = -kappa * A0 * d ** (mu + 1) / math.gamma(mu + 2) + (A0 - B0) * d**mu / math.gamma(mu + 1)
    p_end = jacobi.jacobi_all(n_max + 1, alpha, beta, np.array(end))
    dmu = d**mu / math.gamma(mu)
    for n in range(1, n_max):
        A, B, C = jacobi.recurrence_coeffs(alpha, beta, n)
        a, b, c = antideriv_combo(alpha, beta, n, kappa)
        E = 1.0 + mu * kappa * A * c
        if E == 0.0:
            if beta == 0.0 and side is Side.LEFT:
                for m in range(n + 1, n_max + 1):
                    S[m] = frac_int_weighted_mjf(pmap, alpha, 0.0, mu, m, x, side)
                return S
            raise NumericError(f"S_n recurrence breaks down at n={n} (E_n = 0)", iterations=n)
        F = dmu * (a * p_end[n - 1] + b * p_end[n] + c * p_end[n + 1])
        if side is Side.LEFT:
            S[n + 1] = (kappa * A * d * S[n] - (mu * kappa * A * b + A + B) * S[n]
                        - (mu * kappa * A * a + C) * S[n - 1] + kappa * A * F) / E
        else:
            S[n + 1] = (-kappa * A * d * S[n] - (mu * kappa * A * b - A + B) * S[n]
                        - (mu * kappa * A * a + C) * S[n - 1] + kappa * A * F) / E
    return S


# -- derivatives of the mapped Legendre family -----------------------------


def frac_deriv_legendre_all(kappa, n_max, mu, s, kind=Kind.RL):
    """Left derivative of order ``mu`` of ``J_0^{0,0} .. J_{n_max}^{0,0}`` at reference points ``s > -1``.

    ``0 < mu < 1``: ``G(n+1)/G(n+1-mu) t^-mu J_n^{mu,-mu}``.
    ``1 < mu < 2``: one delta_psi applied to the order ``mu - 1`` result, by the
    product rule, so nothing is differentiated numerically.
    Caputo subtracts the Taylor terms at ``x = a`` (value, and first
    delta_psi derivative when ``mu > 1``).
    """
    kind = _kind(kind)
    s = np.asarray(s, dtype=float)
    if np.any(s <= -1.0):
        raise DomainError("the derivative is singular at x = a")
    if not (0 < mu < 2) or mu == 1:
        raise ParameterError("order must lie in (0, 1) or (1, 2)")
    t = (s + 1.0) / kappa
    n = np.arange(n_max + 1, dtype=float)
    shape = (n_max + 1,) + (1,) * s.ndim
    if mu < 1:
        c = np.exp(special.gammaln(n + 1) - special.gammaln(n + 1 - mu)).reshape(shape)
        out = c * t ** (-mu) * jacobi.jacobi_all(n_max, mu, -mu, s)
    else:
        c = np.exp(special.gammaln(n + 1) - special.gammaln(n + 2 - mu)).reshape(shape)
        P = jacobi.jacobi_all(n_max, mu - 1.0, 1.0 - mu, s)
        out = (1.0 - mu) * t ** (-mu) * P
        if n_max >= 1:
            Q = jacobi.jacobi_all(n_max - 1, mu, 2.0 - mu, s)
            out[1:] += t ** (1.0 - mu) * (0.5 * kappa * (n[1:] + 1.0)).reshape((n_max,) + (1,) * s.ndim) * Q
        out = c * out
    if kind is Kind.CAPUTO:
        at_a = jacobi.jacobi_all(n_max, 0.0, 0.0, np.array(-1.0)).reshape(shape)
        out = out - at_a * t ** (-mu) * float(special.rgamma(1.0 - mu))
        if mu > 1:
            d1 = np.zeros(n_max + 1)
            for k in range(1, n_max + 1):
                d1[k] = 0.5 * kappa * (k + 1) * float(jacobi.jacobi_eval(k - 1, 1.0, 1.0, -1.0))
            out = out - d1.reshape(shape) * t ** (1.0 - mu) * float(special.rgamma(2.0 - mu))
    return out


def frac_deriv_mjf_legendre(pmap: PsiMap, n, mu, x, kind=Kind.RL):
    """Left derivative of order ``mu`` of ``J_n^{0,0}`` at interior ``x``."""
    s = pmap.to_reference(x)
    return frac_deriv_legendre_all(pmap.kappa, n, mu, s, kind)[n]
