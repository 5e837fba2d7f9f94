"""Spectral collocation on mapped Jacobi-Gauss-Lobatto nodes.

The fractional differentiation matrix is built by expanding each Lagrange
cardinal function in the mapped Legendre family and applying the closed-form
derivative of ``J_i^{0,0}`` at the nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg
from scipy.interpolate import BarycentricInterpolator

from . import jacobi
from .errors import InputError, NumericError, ParameterError
from .frac_ops import FracOrder, Kind, Side, _kind, frac_deriv_legendre_all
from .jacobi import JacobiParams
from .mjf import MjfExpansion, lobatto_transform, mapped_rule
from .psi_map import PsiMap


def _params(node_params):
    if isinstance(node_params, JacobiParams):
        p = node_params
    else:
        p = JacobiParams(*map(float, node_params))
    p.check_orthogonal()
    return p


def lagrange_to_legendre(pmap: PsiMap, node_params, N):
    """``L[i, j]``: coefficient of ``J_i^{0,0}`` in the ``j``-th cardinal function.

    The cardinal functions are evaluated barycentrically at ``N + 1`` Gauss-Legendre
    points; that rule is exact for the degree-``2N`` products involved.
    """
    p = _params(node_params)
    if N == 0:
        return np.ones((1, 1))
    nodes = jacobi.lobatto_rule(p.alpha, p.beta, N + 1).nodes
    g = jacobi.gauss_rule(0.0, 0.0, N + 1)
    card = BarycentricInterpolator(nodes, np.eye(N + 1))(g.nodes)  # (gauss pt, j)
    P = jacobi.jacobi_all(N, 0.0, 0.0, g.nodes)
    norms = 2.0 / (2.0 * np.arange(N + 1) + 1.0)
    return (P * g.weights) @ card / norms[:, None]


@dataclass(frozen=True)
class DiffMatrix:
    """Row ``k``, column ``j``: ``[D^mu L_j](x_k)``. Row 0 (``x = a``) is left at zero."""

    order: FracOrder
    node_params: JacobiParams
    nodes: np.ndarray
    s_nodes: np.ndarray
    entries: np.ndarray

    @property
    def N(self):
        return len(self.nodes) - 1


def build_dmfd(pmap: PsiMap, node_params, N, mu, kind=Kind.RL) -> DiffMatrix:
    p = _params(node_params)
    kind = _kind(kind)
    if N < 1:
        raise ParameterError("N must be at least 1")
    rule = mapped_rule(pmap, p.alpha, p.beta, N + 1, "lobatto")
    L = lagrange_to_legendre(pmap, p, N)
    Dleg = frac_deriv_legendre_all(pmap.kappa, N, mu, rule.s_nodes[1:], kind)  # (i, k)
    D = np.zeros((N + 1, N + 1))
    D[1:] = Dleg.T @ L
    return DiffMatrix(FracOrder(mu, kind, Side.LEFT), p, rule.x_nodes, rule.s_nodes, D)


@dataclass(frozen=True)
class IvpNonlinearSpec:
    """``D^mu u = f(x, u)``, ``u(a) = 0``, ``0 < mu < 1``."""

    pmap: PsiMap
    mu: float
    rhs: Callable
    rhs_du: Callable | None = None
    kind: Kind = Kind.CAPUTO

    def __post_init__(self):
        if not 0 < self.mu < 1:
            raise ParameterError(f"IVP order must lie in (0, 1), got {self.mu}")
        object.__setattr__(self, "kind", _kind(self.kind))


@dataclass(frozen=True)
class BvpCollocSpec:
    """``lam^2 u - D^mu u = f`` with ``u(a) = u(b) = 0``, ``1 < mu < 2``."""

    pmap: PsiMap
    mu: float
    rhs: Callable
    lam: float = 0.0
    node_params: tuple = (0.0, 0.0)

    def __post_init__(self):
        if not 1 < self.mu < 2:
            raise ParameterError(f"BVP order must lie in (1, 2), got {self.mu}")
        if self.lam < 0:
            raise ParameterError("lambda must be non-negative")


@dataclass
class SolveReport:
    """Nodal solution plus diagnostics; calling it evaluates the polynomial interpolant."""

    x: np.ndarray
    u: np.ndarray
    node_params: JacobiParams
    pmap: PsiMap
    iterations: int = 0
    residual: float = 0.0
    history: list = field(default_factory=list)

    @property
    def expansion(self) -> MjfExpansion:
        a, b = self.node_params.alpha, self.node_params.beta
        return MjfExpansion(self.pmap, a, b, 0.0, lobatto_transform(a, b, self.u))

    def __call__(self, x):
        return self.expansion(x)

    def node_error(self, exact):
        return float(np.max(np.abs(self.u - exact(self.x))))


def _vec(f, *args):
    v = np.asarray(f(*args), dtype=float)
    return np.broadcast_to(v, np.shape(args[0])).astype(float)


def _lu_solve(A, b, what):
    try:
        lu, piv = scipy.linalg.lu_factor(A)
    except (ValueError, np.linalg.LinAlgError) as exc:
        raise NumericError(f"{what}: {exc}") from exc
    if np.any(np.abs(np.diag(lu)) == 0) or not np.all(np.isfinite(lu)):
        raise NumericError(f"{what}: matrix is singular")
    return scipy.linalg.lu_solve((lu, piv), b)


def solve_ivp_colloc(spec: IvpNonlinearSpec, N, node_params=(0.0, 0.0), tol=1e-13, maxiter=50,
                     max_halvings=10) -> SolveReport:
    """Collocate at ``x_1..x_N`` with ``u(x_0) = 0`` imposed by an identity row; damped Newton."""
    dm = build_dmfd(spec.pmap, node_params, N, spec.mu, spec.kind)
    D, x = dm.entries, dm.nodes
    xi = x[1:]
    Dint = D[1:, 1:]  # column 0 multiplies u_0 = 0

    def residual(v):
        fv = _vec(spec.rhs, xi, v)
        if not np.all(np.isfinite(fv)):
            raise InputError("right-hand side is not finite at a collocation node")
        return Dint @ v - fv

    def jacobian(v):
        if spec.rhs_du is None:
            return Dint
        return Dint - np.diag(_vec(spec.rhs_du, xi, v))

    v = np.zeros(N)
    r = residual(v)
    rn = float(np.max(np.abs(r)))
    history = [rn]
    it = 0
    scale = max(1.0, float(np.max(np.abs(_vec(spec.rhs, xi, v)))))
    while rn > tol * scale:
        if it >= maxiter:
            raise NumericError("Newton iteration did not converge", iterations=it, residual=rn)
        step = _lu_solve(jacobian(v), -r, "singular Newton Jacobian")
        it += 1
        lam = 1.0
        for _ in range(max_halvings + 1):
            cand = v + lam * step
            rc = residual(cand)
            rcn = float(np.max(np.abs(rc)))
            if rcn < rn or spec.rhs_du is None:
                break
            lam *= 0.5
        if rcn >= rn and it > 1:
            # stagnation at rounding level
            v, r = cand, rc
            rn = rcn
            history.append(rn)
            break
        v, r, rn = cand, rc, rcn
        history.append(rn)
        if spec.rhs_du is None:
            break
    u = np.concatenate([[0.0], v])
    return SolveReport(x, u, dm.node_params, spec.pmap, it, rn, history)


def solve_bvp_colloc(spec: BvpCollocSpec, N) -> SolveReport:
    """Interior collocation ``(lam^2 I - D) u = f`` with both end values eliminated."""
    if N < 2:
        raise ParameterError("N must be at least 2")
    dm = build_dmfd(spec.pmap, spec.node_params, N, spec.mu, Kind.RL)
    x = dm.nodes
    A = spec.lam**2 * np.eye(N - 1) - dm.entries[1:N, 1:N]
    f = _vec(spec.rhs, x[1:N])
    if not np.all(np.isfinite(f)):
        raise InputError("right-hand side is not finite at a collocation node")
    v = _lu_solve(A, f, "collocation system")
    u = np.concatenate([[0.0], v, [0.0]])
    res = float(np.max(np.abs(A @ v - f)))
    return SolveReport(x, u, dm.node_params, spec.pmap, 1, res, [res])
