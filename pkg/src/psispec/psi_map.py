"""Increasing maps psi on [a, b] and the induced coordinate s in [-1, 1].

A :class:`PsiMap` bundles psi, its derivative and its inverse together with
the cached constants ``psi_a``, ``psi_b`` and ``kappa = 2/(psi_b - psi_a)``.
The affine transfer

    s(x) = kappa * (psi(x) - psi_a) - 1

sends ``[a, b]`` onto ``[-1, 1]``; every mapped Jacobi function is a
polynomial in ``s``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, NumericError, ParameterError

ArrayFn = Callable[[np.ndarray], np.ndarray]

_MONOTONE_SAMPLES = 1000
_ROUNDTRIP_SAMPLES = 33


@dataclass(frozen=True)
class PsiMap:
    """An increasing map ``psi`` on ``[a, b]`` with ``psi' > 0``.

    ``psi``, ``dpsi`` and ``inv`` must accept numpy arrays. When ``inv`` is
    omitted, a safeguarded bisection/Newton inverse is used.
    """

    name: str
    a: float
    b: float
    psi: ArrayFn
    dpsi: ArrayFn
    inv: ArrayFn | None = None
    psi_a: float = field(init=False)
    psi_b: float = field(init=False)
    kappa: float = field(init=False)

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (np.isfinite(a) and np.isfinite(b) and a < b):
            raise ParameterError(f"need finite a < b, got a={a}, b={b}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

        psi_a = float(self.psi(np.array(a)))
        psi_b = float(self.psi(np.array(b)))
        if not psi_a < psi_b:
            raise ParameterError(f"psi({a}) = {psi_a} is not below psi({b}) = {psi_b}")
        object.__setattr__(self, "psi_a", psi_a)
        object.__setattr__(self, "psi_b", psi_b)
        object.__setattr__(self, "kappa", 2.0 / (psi_b - psi_a))

        # endpoints excluded: x**2.3 on [0, 1] has psi'(0) = 0
        xs = np.linspace(a, b, _MONOTONE_SAMPLES + 2)[1:-1]
        d = np.asarray(self.dpsi(xs), dtype=float)
        if not np.all(np.isfinite(d)) or np.any(d <= 0.0):
            bad = xs[~(np.isfinite(d) & (d > 0.0))][0]
            raise ParameterError(f"psi' is not positive at x = {bad!r} for map {self.name!r}")

        if self.inv is None:
            object.__setattr__(self, "inv", self._bisect_newton_inverse)
        xs = np.linspace(a, b, _ROUNDTRIP_SAMPLES)
        back = np.asarray(self.inv(self.psi(xs)), dtype=float)
        if np.max(np.abs(back - xs)) > 1e-11 * max(b - a, 1.0):
            raise ParameterError(f"inverse of map {self.name!r} does not invert psi")

    # -- coordinates -------------------------------------------------------

    def _check_x(self, x):
        x = np.asarray(x, dtype=float)
        tol = 1e-14 * max(abs(self.a), abs(self.b), 1.0)
        if np.any(x < self.a - tol) or np.any(x > self.b + tol) or np.any(np.isnan(x)):
            raise DomainError(f"x outside [{self.a}, {self.b}]")
        return np.clip(x, self.a, self.b)

    def shifted(self, x):
        """``psi(x) - psi_a``, clipped at zero."""
        x = self._check_x(x)
        return np.maximum(self.psi(x) - self.psi_a, 0.0)

    def shifted_right(self, x):
        """``psi_b - psi(x)``, clipped at zero."""
        x = self._check_x(x)
        return np.maximum(self.psi_b - self.psi(x), 0.0)

    def to_reference(self, x):
        """Map ``x`` in ``[a, b]`` to ``s = kappa (psi(x) - psi_a) - 1``."""
        x = self._check_x(x)
        s = self.kappa * (self.psi(x) - self.psi_a) - 1.0
        s = np.where(x == self.a, -1.0, np.where(x == self.b, 1.0, s))
        s = np.clip(s, -1.0, 1.0)
        return float(s) if s.ndim == 0 else s

    def from_reference(self, s):
        """Inverse of :meth:`to_reference`."""
        s = np.asarray(s, dtype=float)
        if np.any(np.abs(s) > 1.0 + 1e-14) or np.any(np.isnan(s)):
            raise DomainError("s outside [-1, 1]")
        s = np.clip(s, -1.0, 1.0)
        x = np.asarray(self.inv((s + 1.0) / self.kappa + self.psi_a), dtype=float)
        x = np.where(s == -1.0, self.a, np.where(s == 1.0, self.b, x))
        x = np.clip(x, self.a, self.b)
        return float(x) if x.ndim == 0 else x

    def _bisect_newton_inverse(self, y):
        y = np.asarray(y, dtype=float)
        out = np.empty(y.shape)
        flat_y, flat_out = y.ravel(), out.ravel()
        for i, target in enumerate(flat_y):
            flat_out[i] = self._invert_scalar(float(target))
        return out if out.ndim else float(out)

    def _invert_scalar(self, y, tol=1e-14, maxiter=200):
        if y <= self.psi_a:
            return self.a
        if y >= self.psi_b:
            return self.b
        lo, hi = self.a, self.b
        x = lo + (hi - lo) * (y - self.psi_a) / (self.psi_b - self.psi_a)
        for _ in range(maxiter):
            r = float(self.psi(np.array(x))) - y
            if r > 0:
                hi = x
            else:
                lo = x
            d = float(self.dpsi(np.array(x)))
            step_ok = d > 0 and np.isfinite(d)
            xn = x - r / d if step_ok else 0.5 * (lo + hi)
            if not (lo < xn < hi):
                xn = 0.5 * (lo + hi)
            if abs(xn - x) <= tol * max(1.0, abs(x)) or hi - lo <= tol * max(1.0, abs(x)):
                return xn
            x = xn
        raise NumericError(f"inverse of {self.name!r} did not converge at y={y}")

    # -- generalized derivative ------------------------------------------

    def delta_psi(self, f, x, n=1):
        """``delta_psi^n f(x)`` where ``delta_psi = (1/psi') d/dx``.

        Since ``delta_psi`` is differentiation with respect to ``y = psi(x)``,
        this takes the n-th central difference of ``y -> f(psi^{-1}(y))`` and
        refines it by Richardson extrapolation (Ridders' tableau). Intended as
        a test utility; accuracy is roughly 1e-10 for smooth ``f``.
        """
        if n < 0 or int(n) != n:
            raise ParameterError("order must be a non-negative integer")
        x = float(x)
        if n == 0:
            return float(f(x))
        if not (self.a < x < self.b):
            raise DomainError("delta_psi needs an interior point")
        y0 = float(self.psi(np.array(x)))
        dist = min(y0 - self.psi_a, self.psi_b - y0)
        # Ridders stops early if the first step spans much curvature; start modestly
        h = min(0.02 * (self.psi_b - self.psi_a), 0.9 * dist / (0.5 * n))
        coef = [(-1) ** k * math.comb(n, k) for k in range(n + 1)]

        def g(y):
            return float(f(float(self.inv(np.array(y)))))

        def diff_quot(hh):
            return sum(c * g(y0 + (0.5 * n - k) * hh) for k, c in enumerate(coef)) / hh**n

        return _ridders(diff_quot, h)

    def __repr__(self):
        return f"PsiMap({self.name!r}, a={self.a!r}, b={self.b!r})"


def _ridders(quot, h, con=1.4, ntab=12):
    con2 = con * con
    tab = np.zeros((ntab, ntab))
    tab[0, 0] = quot(h)
    best, err = tab[0, 0], np.inf
    for i in range(1, ntab):
        h /= con
        tab[0, i] = quot(h)
        fac = con2
        for j in range(1, i + 1):
            tab[j, i] = (tab[j - 1, i] * fac - tab[j - 1, i - 1]) / (fac - 1.0)
            fac *= con2
            e = max(abs(tab[j, i] - tab[j - 1, i]), abs(tab[j, i] - tab[j - 1, i - 1]))
            if e <= err:
                err, best = e, tab[j, i]
        if abs(tab[i, i] - tab[i - 1, i - 1]) >= 2.0 * err:
            break
    return float(best)


# -- builtin maps --------------------------------------------------------


def identity(a=0.0, b=1.0):
    return PsiMap("identity", a, b, lambda x: np.asarray(x, float) * 1.0,
                  lambda x: np.ones_like(np.asarray(x, float)), lambda y: np.asarray(y, float) * 1.0)


def log(a=1.0, b=math.e):
    if a <= 0:
        raise ParameterError("log map needs a > 0")
    return PsiMap("log", a, b, np.log, lambda x: 1.0 / np.asarray(x, float), np.exp)


def exp(a=0.0, b=1.0):
    return PsiMap("exp", a, b, np.exp, np.exp, np.log)


def power(a=0.0, b=1.0, p=2.3):
    if a < 0 or p <= 0:
        raise ParameterError("power map needs a >= 0 and p > 0")
    return PsiMap(
        f"power{p:g}", a, b,
        lambda x: np.asarray(x, float) ** p,
        lambda x: p * np.asarray(x, float) ** (p - 1.0),
        lambda y: np.maximum(np.asarray(y, float), 0.0) ** (1.0 / p),
    )


def sin(a=0.0, b=math.pi / 3):
    if a < -math.pi / 2 or b > math.pi / 2:
        raise ParameterError("sin map needs [a, b] inside [-pi/2, pi/2]")
    return PsiMap("sin", a, b, np.sin, np.cos, lambda y: np.arcsin(np.clip(y, -1.0, 1.0)))


def tan(a=0.0, b=math.pi / 3):
    if a <= -math.pi / 2 or b >= math.pi / 2:
        raise ParameterError("tan map needs [a, b] inside (-pi/2, pi/2)")
    return PsiMap("tan", a, b, np.tan, lambda x: 1.0 / np.cos(x) ** 2, np.arctan)


def quadratic(a=0.0, b=0.7):
    """psi(x) = x (x + 1) / 2, increasing for x > -1/2."""
    if a <= -0.5:
        raise ParameterError("quadratic map needs a > -1/2")
    return PsiMap(
        "quadratic", a, b,
        lambda x: 0.5 * np.asarray(x, float) * (np.asarray(x, float) + 1.0),
        lambda x: np.asarray(x, float) + 0.5,
        lambda y: 0.5 * (np.sqrt(1.0 + 8.0 * np.asarray(y, float)) - 1.0),
    )


BUILTINS = {
    "identity": identity,
    "log": log,
    "exp": exp,
    "power": power,
    "sin": sin,
    "tan": tan,
    "quadratic": quadratic,
}


def make_map(name, a=None, b=None):
    """Build a builtin map by name; ``power`` accepts ``power:<p>``."""
    key, _, arg = name.partition(":")
    if key not in BUILTINS:
        raise ParameterError(f"unknown map {name!r}; choose from {sorted(BUILTINS)}")
    kwargs = {}
    if a is not None:
        kwargs["a"] = a
    if b is not None:
        kwargs["b"] = b
    if key == "power" and arg:
        kwargs["p"] = float(arg)
    elif arg:
        raise ParameterError(f"map {key!r} takes no parameter")
    return BUILTINS[key](**kwargs)
