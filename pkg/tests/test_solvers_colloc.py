import math

import numpy as np
import pytest
from scipy.interpolate import BarycentricInterpolator

from psispec import frac_ops as F
from psispec import jacobi, mjf, psi_map
from psispec.cases import make_problem
from psispec.errors import InputError, NumericError, ParameterError
from psispec.solvers_colloc import (BvpCollocSpec, IvpNonlinearSpec, build_dmfd, lagrange_to_legendre,
                                    solve_bvp_colloc, solve_ivp_colloc)
from psispec.solvers_pg import max_error

NODE_PARAMS = [(0.0, 0.0), (-0.5, -0.5), (0.5, 1.0), (1.0, -0.4)]


def test_lagrange_to_legendre_n0():
    assert lagrange_to_legendre(psi_map.log(), (0, 0), 0).tolist() == [[1.0]]


@pytest.mark.parametrize("ab", NODE_PARAMS)
def test_cardinal_reconstruction(ab):
    N = 14
    L = lagrange_to_legendre(psi_map.log(), ab, N)
    nodes = jacobi.lobatto_rule(*ab, N + 1).nodes
    P = jacobi.jacobi_all(N, 0.0, 0.0, nodes)
    assert np.max(np.abs(P.T @ L - np.eye(N + 1))) <= 1e-10
    # the cardinal functions sum to one
    e0 = np.zeros(N + 1)
    e0[0] = 1.0
    assert np.allclose(L.sum(axis=1), e0, atol=1e-12)


def test_lagrange_matches_interpolation():
    p = psi_map.sin()
    N = 10
    f = lambda x: np.cos(3 * np.asarray(x))  # noqa: E731
    dm_nodes = mjf.mapped_rule(p, 0, 0, N + 1, "lobatto").x_nodes
    coeffs = lagrange_to_legendre(p, (0, 0), N) @ f(dm_nodes)
    assert np.allclose(coeffs, mjf.interpolate(p, 0, 0, N, f).coeffs, atol=1e-13)


def test_dmfd_validation(log_map):
    with pytest.raises(ParameterError):
        build_dmfd(log_map, (0, 0), 0, 0.5)
    with pytest.raises(ParameterError):
        build_dmfd(log_map, (-1.0, 0), 4, 0.5)


@pytest.mark.parametrize("ab", NODE_PARAMS)
@pytest.mark.parametrize("mu", [0.5, 1.5])
def test_dmfd_power_rows(any_map, ab, mu):
    N = 12
    dm = build_dmfd(any_map, ab, N, mu)
    assert np.all(dm.entries[0] == 0.0)
    t = any_map.shifted(dm.nodes)
    for k in (1, 2, 5, N - 1):
        ref = F.frac_deriv_power(any_map, mu, float(k), dm.nodes[1:])
        assert np.max(np.abs(dm.entries[1:] @ t**k - ref)) <= 1e-8 * np.max(np.abs(ref))


def test_dmfd_caputo_annihilates_constants(log_map):
    for mu in (0.3, 0.8):
        dm = build_dmfd(log_map, (0.5, 0.5), 16, mu, "caputo")
        assert np.max(np.abs(dm.entries[1:] @ np.ones(17))) <= 1e-10 * np.max(np.abs(dm.entries))


def test_dmfd_mu_to_one_continuity():
    p = psi_map.exp()
    N = 8
    dm = build_dmfd(p, (0, 0), N, 1 - 1e-8, "caputo")
    x = dm.nodes
    card = BarycentricInterpolator(p.to_reference(x), np.eye(N + 1))
    # d/dx L_j / psi' = kappa dL_j/ds
    classical = p.kappa * card.derivative(p.to_reference(x[1:]))
    assert np.max(np.abs(dm.entries[1:] - classical)) <= 1e-4 * np.max(np.abs(classical))


def test_ivp_linear_one_step():
    p = psi_map.tan(0, math.pi / 5)
    mu = 0.6
    rep = solve_ivp_colloc(IvpNonlinearSpec(p, mu, lambda x, u: math.gamma(2) / math.gamma(2 - mu)
                                            * p.shifted(x) ** (1 - mu)), 10)
    assert rep.iterations == 1
    assert rep.node_error(lambda x: p.shifted(x)) <= 1e-12
    assert rep.u[0] == 0.0


def test_ivp_c21_table1_point():
    p = psi_map.power()
    pr = make_problem("C21", p, 0.5)
    rep = solve_ivp_colloc(IvpNonlinearSpec(p, 0.5, pr.rhs, pr.rhs_du), 30)
    assert rep.node_error(pr.exact) <= 1e-9
    assert 1 < rep.iterations <= 15
    assert rep.history[0] > rep.history[-1]


def test_ivp_c22_table2_point():
    p = psi_map.power()
    pr = make_problem("C22", p, 0.5)
    rep = solve_ivp_colloc(IvpNonlinearSpec(p, 0.5, pr.rhs, pr.rhs_du), 16)
    assert rep.node_error(pr.exact) <= 5.052e-10 * 100


def test_ivp_newton_failure_reports():
    p = psi_map.log()
    spec = IvpNonlinearSpec(p, 0.5, lambda x, u: np.exp(u) + 5.0, lambda x, u: np.exp(u))
    with pytest.raises(NumericError) as info:
        solve_ivp_colloc(spec, 8, maxiter=1)
    assert info.value.iterations == 1


def test_ivp_nonfinite_rhs():
    p = psi_map.log()
    with pytest.raises(InputError), np.errstate(divide="ignore"):
        solve_ivp_colloc(IvpNonlinearSpec(p, 0.5, lambda x, u: 1.0 / (x - p.b)), 6)


def test_ivp_spec_validation(log_map):
    with pytest.raises(ParameterError):
        IvpNonlinearSpec(log_map, 1.5, lambda x, u: u)
    with pytest.raises(ParameterError):
        BvpCollocSpec(log_map, 0.5, lambda x: x)
    with pytest.raises(ParameterError):
        solve_bvp_colloc(BvpCollocSpec(log_map, 1.5, lambda x: x), 1)


def test_interpolation_collocation_equivalence():
    p = psi_map.quadratic(1.0, 4.0)
    mu = 1.5
    f = lambda x: np.cos(np.asarray(x, float))  # noqa: E731
    N = 14
    rep = solve_bvp_colloc(BvpCollocSpec(p, mu, f), N)
    # re-differentiate the interpolant with closed forms and compare at the interior nodes
    coeffs = lagrange_to_legendre(p, (0, 0), N) @ rep.u
    xi = rep.x[1:N]
    Dleg = F.frac_deriv_legendre_all(p.kappa, N, mu, p.to_reference(xi), "rl")
    res = -(coeffs @ Dleg) - f(xi)
    assert np.max(np.abs(res)) <= 1e-11 * np.max(np.abs(f(xi)))
    assert rep.u[0] == 0.0 and rep.u[-1] == 0.0


def test_bvp_c32_table4_point():
    p = psi_map.quadratic(1.0, 4.0)
    pr = make_problem("C32", p, 1.5)
    assert max_error(solve_bvp_colloc(BvpCollocSpec(p, 1.5, pr.rhs), 20), pr.exact, p) <= 1e-10


def test_bvp_helmholtz_table5_point():
    p = psi_map.tan(0.0, math.pi / 3)
    pr = make_problem("C32", p, 1.55, 1e4)
    rep = solve_bvp_colloc(BvpCollocSpec(p, 1.55, pr.rhs, lam=1e4, node_params=(0.5, 0.5)), 16)
    # nodal error: it shrinks like 1/lam^2, while the interpolant's own error does not
    assert rep.node_error(pr.exact) <= 1e-12


@pytest.mark.parametrize("ab", [(-0.5, -0.5), (0.5, 0.5), (1.0, 1.0), (0.5, -0.5), (-0.5, 2.0)])
def test_node_parameter_robustness(ab):
    p = psi_map.quadratic(1.0, 4.0)
    pr = make_problem("C32", p, 1.45)
    rep = solve_bvp_colloc(BvpCollocSpec(p, 1.45, pr.rhs, node_params=ab), 20)
    assert max_error(rep, pr.exact, p) <= 1e-8


def test_bvp_c33_orders():
    p = psi_map.sin(-math.pi / 3, math.pi / 3)
    pr = make_problem("C33", p, 1.8, 2.0)
    errs = [max_error(solve_bvp_colloc(BvpCollocSpec(p, 1.8, pr.rhs, 2.0, (-0.5, -0.5)), N), pr.exact, p)
            for N in (16, 32, 64)]
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all((orders >= 6.2) & (orders <= 8.4))


def test_bvp_singular_system():
    p = psi_map.log()
    with pytest.raises(NumericError):
        solve_bvp_colloc(BvpCollocSpec(p, 1.5, lambda x: x, lam=float("nan")), 6)
