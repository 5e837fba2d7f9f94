"""Invariant suite shared by ``psispec selftest`` and the acceptance tests.

Each check returns ``(passed, worst_observed_value, tolerance)``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import frac_ops as F
from . import jacobi, mjf, oracle, psi_map
from .cases import make_problem
from .solvers_colloc import build_dmfd

JACOBI_PARAMS = [(0.0, 0.0), (-0.5, -0.5), (0.5, 0.5), (1.5, 0.3), (-0.7, 2.0), (0.3, -0.4)]


def _maps():
    return [psi_map.identity(), psi_map.log(), psi_map.exp(), psi_map.power(), psi_map.sin(),
            psi_map.tan(), psi_map.quadratic()]


def _rel(a, b):
    a, b = np.asarray(a, float), np.asarray(b, float)
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))


@dataclass(frozen=True)
class Check:
    name: str
    tol: float
    run: Callable[[], float]

    def __call__(self):
        worst = float(self.run())
        return worst <= self.tol, worst, self.tol


def jacobi_orthogonality():
    worst = 0.0
    for a, b in JACOBI_PARAMS:
        n = 24
        rule = jacobi.gauss_rule(a, b, n + 2)
        P = jacobi.jacobi_all(n, a, b, rule.nodes)
        G = (P * rule.weights) @ P.T
        norms = np.array([jacobi.jacobi_norm(a, b, k) for k in range(n + 1)])
        worst = max(worst, float(np.max(np.abs(G / np.sqrt(np.outer(norms, norms)) - np.eye(n + 1)))))
    return worst


def quadrature_exactness():
    worst = 0.0
    for a, b in JACOBI_PARAMS:
        for npts in (3, 6, 11):
            g = jacobi.gauss_rule(a, b, npts)
            lo = jacobi.lobatto_rule(a, b, npts)
            for k in range(2 * npts):
                exact = jacobi.jacobi_moment(a, b, k)
                # odd moments of a symmetric weight vanish; measure those against the mass
                scale = jacobi.jacobi_moment(a, b, 0) if (a == b and k % 2) else abs(exact)
                worst = max(worst, abs(g.integrate(g.nodes**k) - exact) / scale)
                if k <= 2 * npts - 3:
                    worst = max(worst, abs(lo.integrate(lo.nodes**k) - exact) / scale)
    return worst


def mjf_orthogonality():
    worst = 0.0
    for pmap in _maps():
        for a, b in JACOBI_PARAMS[:4]:
            G = mjf.weighted_norm_check(pmap, a, b, 12)
            norms = np.array([jacobi.jacobi_norm(a, b, k) for k in range(13)])
            worst = max(worst, float(np.max(np.abs(G / np.sqrt(np.outer(norms, norms)) - np.eye(13)))))
    return worst


def lobatto_end_identity():
    worst = 0.0
    for a, b in JACOBI_PARAMS:
        for N in (2, 5, 16, 40):
            rule = jacobi.lobatto_rule(a, b, N + 1)
            lhs = rule.integrate(jacobi.jacobi_eval(N, a, b, rule.nodes) ** 2)
            rhs = (2.0 + (a + b + 1.0) / N) * jacobi.jacobi_norm(a, b, N)
            worst = max(worst, abs(lhs - rhs) / rhs)
    return worst


def recurrence_vs_closed_form():
    worst = 0.0
    pmap = psi_map.log()
    x = np.linspace(1.05, 2.7, 9)
    for alpha in (0.0, 0.4, -0.5, 1.2):
        for mu in (0.3, 0.5, 0.9, 1.4):
            for side in ("left", "right"):
                S = F.frac_int_mjf_recurrence(pmap, alpha if side == "left" else 0.0,
                                              0.0 if side == "left" else alpha, mu, 20, x, side)
                for n in range(21):
                    if side == "left":
                        ref = F.frac_int_weighted_mjf(pmap, alpha, 0.0, mu, n, x, side)
                    else:
                        ref = F.frac_int_weighted_mjf(pmap, 0.0, alpha, mu, n, x, side)
                    worst = max(worst, _rel(S[n], ref))
    return worst


def closed_forms_vs_oracle():
    """Power rule and weighted-MJF integrals/derivatives against adaptive quadrature.

    Derivative closed forms are checked by integrating them back with the
    oracle, which recovers the original weighted MJF.
    """
    worst = 0.0
    for pmap in (psi_map.log(), psi_map.power(), psi_map.sin()):
        xs = pmap.a + (pmap.b - pmap.a) * np.array([0.23, 0.61, 0.88])
        for x in xs:
            for gam in (0.0, 0.3, 2.0):
                for side in ("left", "right"):
                    d = pmap.shifted if side == "left" else pmap.shifted_right
                    spec = oracle.AdaptiveQuadSpec(endpoint_exponent=gam)
                    v = oracle.oracle_frac_int(pmap, 0.5, lambda z: float(d(z)) ** gam, x, side, spec)
                    worst = max(worst, _rel(v, F.frac_int_power(pmap, 0.5, gam, x, side)))
            a, b, mu, n = 0.4, 0.6, 0.7, 5
            for side in ("left", "right"):
                d = pmap.shifted if side == "left" else pmap.shifted_right
                wexp = b if side == "left" else a
                g = lambda z, d=d, e=wexp: float(d(z)) ** e * float(mjf.mjf_eval(pmap, a, b, n, z))  # noqa: E731
                v = oracle.oracle_frac_int(pmap, mu, g, x, side, oracle.AdaptiveQuadSpec(endpoint_exponent=wexp))
                worst = max(worst, _rel(v, F.frac_int_weighted_mjf(pmap, a, b, mu, n, x, side)))
                dd = 0.45

                def h(z, side=side):
                    return float(F.frac_deriv_weighted_mjf(pmap, a, b, dd, n, z, side))

                spec = oracle.AdaptiveQuadSpec(endpoint_exponent=wexp - dd)
                back = oracle.oracle_frac_int(pmap, dd, h, x, side, spec)
                worst = max(worst, _rel(back, g(x)))
    return worst


def identities_closed_form():
    """Semigroup, left inverse and Caputo-RL link using closed forms only."""
    pmap = psi_map.tan()
    x = pmap.a + (pmap.b - pmap.a) * np.linspace(0.1, 0.9, 5)
    worst = 0.0
    for gam in (0.0, 1.0, 2.5):
        for m1, m2 in ((0.3, 0.5), (0.7, 1.2)):
            lhs = math.gamma(gam + 1) / math.gamma(gam + m2 + 1) * F.frac_int_power(pmap, m1, gam + m2, x)
            worst = max(worst, _rel(lhs, F.frac_int_power(pmap, m1 + m2, gam, x)))
        for mu in (0.4, 1.6):
            c = math.gamma(gam + 1) / math.gamma(gam + mu + 1)
            worst = max(worst, _rel(c * F.frac_deriv_power(pmap, mu, gam + mu, x), pmap.shifted(x) ** gam))
    s = pmap.to_reference(x)
    for mu in (0.3, 0.8, 1.3, 1.7):
        rl = F.frac_deriv_legendre_all(pmap.kappa, 6, mu, s, "rl")
        cap = F.frac_deriv_legendre_all(pmap.kappa, 6, mu, s, "caputo")
        t = pmap.shifted(x)
        for n in range(7):
            link = float(jacobi.jacobi_eval(n, 0, 0, -1.0)) * t ** (-mu) / math.gamma(1 - mu)
            if mu > 1:
                d1 = 0.5 * pmap.kappa * (n + 1) * float(jacobi.jacobi_eval(n - 1, 1, 1, -1.0)) if n else 0.0
                link = link + d1 * t ** (1 - mu) / math.gamma(2 - mu)
            worst = max(worst, _rel(cap[n] + link, rl[n]))
    return worst


def identities_oracle():
    """Semigroup, left inverse and Caputo-RL link through the quadrature oracle."""
    pmap = psi_map.log()
    xs = pmap.a + (pmap.b - pmap.a) * np.linspace(0.15, 0.85, 5)
    t = pmap.shifted
    # (f, closed-form integral of f of order mu)
    funcs = [
        (lambda z: 1.0, lambda mu, z: F.frac_int_power(pmap, mu, 0.0, z)),
        (lambda z: float(t(z)), lambda mu, z: F.frac_int_power(pmap, mu, 1.0, z)),
        (lambda z: float(mjf.mjf_eval(pmap, 0, 0, 3, z)),
         lambda mu, z: F.frac_int_weighted_mjf(pmap, 0.0, 0.0, mu, 3, z)),
    ]
    worst = 0.0
    m1, m2 = 0.4, 0.5
    for f, closed in funcs:
        for x in xs:
            inner = lambda z, closed=closed: float(closed(m2, z))  # noqa: E731
            semi = oracle.oracle_frac_int(pmap, m1, inner, x, "left", oracle.AdaptiveQuadSpec(endpoint_exponent=m2))
            worst = max(worst, _rel(semi, closed(m1 + m2, x)))
            inv = oracle.oracle_frac_deriv(pmap, m2, lambda z, closed=closed: float(closed(m2, z)), x, "rl")
            worst = max(worst, _rel(inv, f(x)))
            rl = oracle.oracle_frac_deriv(pmap, m1, f, x, "rl")
            cap = oracle.oracle_frac_deriv(pmap, m1, f, x, "caputo")
            worst = max(worst, abs(rl - f(pmap.a) * float(t(x)) ** (-m1) / math.gamma(1 - m1) - cap)
                        / max(abs(rl), 1.0))
    return worst


def sturm_liouville():
    worst = 0.0
    pmap = psi_map.exp()
    x = np.linspace(0.1, 0.9, 7)
    for a, b, mu in ((0.7, 0.6, 0.4), (1.5, 1.2, 0.9), (0.2, 0.3, 0.1)):
        for sign in "+-":
            for n in range(9):
                lhs = F.sturm_liouville_apply(pmap, a, b, mu, n, x, sign)
                rhs = F.sl_eigenvalue(a, b, mu, n, sign) * mjf.mjf_eval(pmap, a, b, n, x)
                worst = max(worst, _rel(lhs, rhs))
    return worst


def dmfd_power_rows():
    worst = 0.0
    for pmap in (psi_map.log(), psi_map.power(), psi_map.sin(-math.pi / 3, math.pi / 3)):
        for mu in (0.5, 1.5):
            for N in (4, 8, 16, 32):
                for ab in ((0.0, 0.0), (-0.5, -0.5), (0.5, 1.0)):
                    dm = build_dmfd(pmap, ab, N, mu, "rl")
                    t = pmap.shifted(dm.nodes)
                    for k in range(N):
                        ref = F.frac_deriv_power(pmap, mu, float(k), dm.nodes[1:])
                        worst = max(worst, _rel(dm.entries[1:] @ t**k, ref))
    return worst


def oracle_integral_equations():
    p = psi_map.power()
    pr = make_problem("C22", p, 0.5)
    sol = oracle.oracle_volterra_solve(p, 0.5, lambda x, u: float(pr.rhs(x, u)), M=4096)
    err = float(np.max(np.abs(sol.u - pr.exact(sol.x))))
    q = psi_map.sin(-math.pi / 3, math.pi / 3)
    pr = make_problem("C33", q, 1.8, 2.0)
    sol = oracle.oracle_fredholm_solve(q, 1.8, lambda x, u: 4.0 * u - float(pr.rhs(x)), M=4096, kind="caputo")
    return max(err, float(np.max(np.abs(sol.u - pr.exact(sol.x)))))


CHECKS = [
    Check("jacobi orthogonality (Gauss rule Gram matrix)", 1e-12, jacobi_orthogonality),
    Check("Gauss/Lobatto quadrature exactness", 1e-12, quadrature_exactness),
    Check("MJF orthogonality under seven maps", 1e-12, mjf_orthogonality),
    Check("Lobatto end identity", 1e-11, lobatto_end_identity),
    Check("S_n recurrence vs closed form, n <= 20", 1e-9, recurrence_vs_closed_form),
    Check("closed forms vs quadrature oracle", 1e-8, closed_forms_vs_oracle),
    Check("semigroup / inverse / Caputo link (closed form)", 1e-9, identities_closed_form),
    Check("semigroup / inverse / Caputo link (oracle)", 1e-6, identities_oracle),
    Check("Sturm-Liouville eigen-relation, n <= 8", 1e-8, sturm_liouville),
    Check("DMFD power-rule rows, N <= 32", 1e-8, dmfd_power_rows),
    Check("oracle Volterra/Fredholm vs C22/C33 at M=4096", 1e-5, oracle_integral_equations),
]


def run_selftest(verbose=True, checks=None):
    all_ok = True
    start = time.perf_counter()
    for check in checks or CHECKS:
        t0 = time.perf_counter()
        ok, worst, tol = check()
        all_ok &= ok
        if verbose:
            print(f"{'PASS' if ok else 'FAIL'}  {check.name}: worst {worst:.2e} (tol {tol:.0e}) "
                  f"[{time.perf_counter() - t0:.1f}s]")
    if verbose:
        print(f"{'all passed' if all_ok else 'FAILURES'} in {time.perf_counter() - start:.1f}s")
    return all_ok
