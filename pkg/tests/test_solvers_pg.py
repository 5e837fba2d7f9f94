import math

import numpy as np
import pytest
import scipy.linalg
from scipy import integrate

from psispec import frac_ops as F
from psispec import jacobi, mjf, oracle, psi_map
from psispec.cases import make_problem
from psispec.errors import InputError, NumericError, ParameterError
from psispec.solvers_pg import (BvpLinearSpec, IvpLinearSpec, IvpSolution, mass_matrix, max_error,
                                solve_bvp_pg, solve_helmholtz_pg, solve_ivp_pg, stiffness_diagonal)

# m[j, i] on x(x+1)/2 over [1,3], mu=1.5, minted by adaptive quadrature (scipy quad, QAWS weight)
MASS_QUAD_MU15 = np.array([
    [0.19876159799998133, 0.08711953159090095, -0.02866753817307423, -0.00423497723011322],
    [-0.13939125054544144, 0.11467015269229694, 0.06775963568181183, -0.02655963095446579],
    [-0.05897322138460986, -0.08711953159090097, 0.08262996296944926, 0.05416312983776406],
    [0.01032527781818085, -0.04047181859728124, -0.06419333906697959, 0.06492354233313874],
])


def test_spec_validation(log_map):
    with pytest.raises(ParameterError):
        IvpLinearSpec(log_map, 1.2, lambda x: x)
    with pytest.raises(ParameterError):
        BvpLinearSpec(log_map, 0.5, lambda x: x)
    with pytest.raises(ParameterError):
        BvpLinearSpec(log_map, 1.5, lambda x: x, lam=-1.0)
    with pytest.raises(ParameterError):
        solve_ivp_pg(IvpLinearSpec(log_map, 0.5, lambda x: x), -1)


def test_ivp_constant_rhs_gives_power(any_map):
    mu = 0.4
    exp = solve_ivp_pg(IvpLinearSpec(any_map, mu, lambda x: np.full_like(x, math.gamma(mu + 1))), 10)
    assert exp.coeffs[0] == pytest.approx(1.0, rel=1e-14)
    assert np.max(np.abs(exp.coeffs[1:])) <= 1e-13
    x = np.linspace(any_map.a, any_map.b, 9)
    assert np.allclose(exp(x), any_map.shifted(x) ** mu, rtol=1e-13, atol=1e-14)


def test_ivp_n_zero(log_map):
    exp = solve_ivp_pg(IvpLinearSpec(log_map, 0.5, lambda x: math.gamma(1.5) + 0 * x), 0)
    assert exp.coeffs.tolist() == pytest.approx([1.0])


def test_ivp_spectral_decay_c11(log_map):
    pr = make_problem("C11", log_map, 0.5)
    errs = [max_error(solve_ivp_pg(IvpLinearSpec(log_map, 0.5, pr.rhs), N), pr.exact, log_map)
            for N in (2, 4, 6, 8, 12, 16, 20)]
    assert errs[-1] <= 1e-10
    # monotone until rounding takes over
    above = [e for e in errs if e > 1e-13]
    assert len(above) >= 3 and all(b < a for a, b in zip(above, above[1:]))


@pytest.mark.parametrize("case", ["C13", "C14"])
def test_ivp_algebraic_decay(log_map, case):
    pr = make_problem(case, log_map, 0.5)
    # a dense grid: 501 points alias the oscillating error of large N
    errs = [max_error(solve_ivp_pg(IvpLinearSpec(log_map, 0.5, pr.rhs), N), pr.exact, log_map, n=20001)
            for N in (16, 32, 64)]
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(np.isfinite(orders)) and np.all(orders > 0.5)
    assert abs(orders[1] - orders[0]) <= 1.0


@pytest.mark.parametrize("kind", ["rl", "caputo"])
def test_ivp_homogenization(kind):
    p = psi_map.exp()
    mu, g0 = 0.6, 1.7
    # exact: u = t^mu + homogenizing term; both kinds map that term to 0
    rhs = lambda x: np.full_like(np.asarray(x, float), math.gamma(mu + 1))  # noqa: E731
    sol = solve_ivp_pg(IvpLinearSpec(p, mu, rhs, kind=kind, g0=g0), 6)
    assert isinstance(sol, IvpSolution)
    x = np.linspace(0.1, 1.0, 7)
    t = p.shifted(x)
    extra = g0 if kind == "caputo" else g0 * t ** (mu - 1) / math.gamma(mu)
    assert np.allclose(sol(x), t**mu + extra, rtol=1e-13)


def test_ivp_rejects_nonfinite_rhs(log_map):
    with pytest.raises(InputError), np.errstate(divide="ignore"):
        solve_ivp_pg(IvpLinearSpec(log_map, 0.5, lambda x: 1.0 / (x - 1.0)), 6)


def test_stiffness_diagonal_formula():
    kappa, mu, N = 0.7, 1.3, 9
    d = stiffness_diagonal(kappa, mu, N)
    ref = [kappa * math.gamma(i + mu) / ((2 * i + 1) * math.gamma(i)) for i in range(1, N)]
    assert np.allclose(d, ref, rtol=1e-14)


def test_bvp_recovers_single_trial_function():
    # u = phi_1 = t^(mu-1) J_1^{1-mu,mu-1}; -D^mu u = -G(1+mu) kappa J_0^{1,1}
    p = psi_map.quadratic(1.0, 3.0)
    mu = 1.5
    rhs = lambda x: np.full_like(np.asarray(x, float), -math.gamma(1 + mu) * p.kappa)  # noqa: E731
    exp = solve_bvp_pg(BvpLinearSpec(p, mu, rhs), 8)
    target = np.zeros(8)
    target[1] = 1.0
    assert np.max(np.abs(exp.coeffs - target)) <= 1e-12


def test_bvp_boundary_compliance():
    p = psi_map.quadratic(1.0, 3.0)
    mu = 1.3
    pr = make_problem("C31", p, mu)
    exp = solve_bvp_pg(BvpLinearSpec(p, mu, pr.rhs), 12)
    # D^{-(2-mu)} phi_n = -kappa G(n+mu)/(2 n n!) r t J_{n-1}^{1,1}
    for x in (p.a, p.b):
        r, t = float(p.shifted_right(x)), float(p.shifted(x))
        total = 0.0
        for n in range(1, 12):
            c = -p.kappa * math.gamma(n + mu) / (2 * n * math.factorial(n))
            total += exp.coeffs[n] * c * r * t * float(mjf.mjf_eval(p, 1, 1, n - 1, x))
        assert abs(total) <= 1e-12


def test_bvp_trial_identity_against_closed_form():
    # the integral identity above, checked by the weighted-MJF closed form
    p = psi_map.quadratic(1.0, 3.0)
    mu = 1.4
    x = np.linspace(1.2, 2.8, 5)
    for n in range(1, 6):
        lhs = F.frac_int_weighted_mjf(p, 1 - mu, mu - 1, 2 - mu, n, x)
        rhs = (-p.kappa * math.gamma(n + mu) / (2 * n * math.factorial(n)) * p.shifted_right(x) * p.shifted(x)
               * mjf.mjf_eval(p, 1, 1, n - 1, x))
        assert np.allclose(lhs, rhs, rtol=1e-12)


@pytest.mark.parametrize("mu,N,tol", [(1.5, 16, 1e-11), (1.9, 18, 1e-12)])
def test_bvp_c31_accuracy(mu, N, tol):
    p = psi_map.quadratic(1.0, 3.0)
    pr = make_problem("C31", p, mu)
    err = max_error(solve_bvp_pg(BvpLinearSpec(p, mu, pr.rhs), N), pr.exact, p)
    assert err <= tol


def test_bvp_c31_preasymptotic_value():
    # published err(8) at mu = 1.1 is 2.470e-05; far from rounding, so it must match closely
    p = psi_map.quadratic(1.0, 3.0)
    pr = make_problem("C31", p, 1.1)
    err = max_error(solve_bvp_pg(BvpLinearSpec(p, 1.1, pr.rhs), 8), pr.exact, p)
    assert err == pytest.approx(2.470e-05, rel=5e-3)


def test_bvp_needs_lambda_zero(log_map):
    with pytest.raises(ParameterError):
        solve_bvp_pg(BvpLinearSpec(log_map, 1.5, lambda x: x, lam=1.0), 8)
    with pytest.raises(ParameterError):
        solve_bvp_pg(BvpLinearSpec(log_map, 1.5, lambda x: x), 1)


def test_mass_matrix_against_frozen_quadrature():
    p = psi_map.quadratic(1.0, 3.0)
    M = mass_matrix(p, 1.5, 5)
    assert np.allclose(M, MASS_QUAD_MU15, rtol=1e-9, atol=1e-12)


def test_mass_matrix_against_direct_quadrature():
    p = psi_map.tan()
    mu = 1.55
    M = mass_matrix(p, mu, 5)
    for j in range(1, 5):
        for i in range(1, 5):
            def g(s, i=i, j=j):
                phi = float(jacobi.jacobi_eval(i, 1 - mu, mu - 1, s))
                test = -0.25 * (1 - s * s) * float(jacobi.jacobi_eval(j - 1, 1, 1, s))
                return phi * test
            # phi_i carries t^(mu-1) = ((1+s)/kappa)^(mu-1)
            val = integrate.quad(g, -1, 1, weight="alg", wvar=(mu - 1.0, 0.0), epsabs=1e-15, epsrel=1e-13)[0]
            assert M[j - 1, i - 1] == pytest.approx(val * p.kappa ** (1 - mu), rel=1e-9, abs=1e-13)


def test_helmholtz_lambda_zero_matches_bvp():
    p = psi_map.quadratic(1.0, 3.0)
    pr = make_problem("C31", p, 1.7)
    a = solve_bvp_pg(BvpLinearSpec(p, 1.7, pr.rhs), 14)
    b = solve_helmholtz_pg(BvpLinearSpec(p, 1.7, pr.rhs, lam=0.0), 14)
    assert np.max(np.abs(a.coeffs - b.coeffs)) <= 1e-12


@pytest.mark.parametrize("lam", [1.0, 3.0])
def test_helmholtz_against_fredholm_oracle(lam):
    # for lam > 0 the solution has t^(k mu - 1) terms outside the trial space: algebraic decay
    p = psi_map.quadratic(1.0, 3.0)
    mu = 1.5
    ref = oracle.oracle_fredholm_solve(p, mu, lambda x, u: lam**2 * u - 1.0, M=4096, kind="rl")
    one = lambda x: np.ones_like(np.asarray(x, float))  # noqa: E731
    errs = [np.max(np.abs(solve_helmholtz_pg(BvpLinearSpec(p, mu, one, lam=lam), N)(ref.x[1:]) - ref.u[1:]))
            for N in (16, 32, 64)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] <= 1e-6


def test_helmholtz_singular_system_raises(monkeypatch):
    import psispec.solvers_pg as spg

    p = psi_map.quadratic(1.0, 3.0)
    monkeypatch.setattr(spg, "stiffness_diagonal", lambda k, m, N: np.zeros(N - 1))
    monkeypatch.setattr(spg, "mass_matrix", lambda *a, **k: np.zeros((3, 3)))
    with pytest.raises(NumericError), pytest.warns(scipy.linalg.LinAlgWarning):
        spg.solve_helmholtz_pg(BvpLinearSpec(p, 1.5, lambda x: x, lam=1.0), 4)
