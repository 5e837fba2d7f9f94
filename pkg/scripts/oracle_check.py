"""Compare spectral solutions with the product-integration oracle on two nonlinear/low-regularity cases.

The oracle discretizes the equivalent integral equations on graded grids, so
agreement here does not reuse any spectral code path.
"""

import argparse
import math

import numpy as np

from psispec import oracle, psi_map
from psispec.cases import make_problem
from psispec.solvers_colloc import BvpCollocSpec, IvpNonlinearSpec, solve_bvp_colloc, solve_ivp_colloc


def volterra(M):
    p = psi_map.power()
    pr = make_problem("C22", p, 0.5)
    sol, est = oracle.richardson_error_estimate(
        lambda m: oracle.oracle_volterra_solve(p, 0.5, lambda x, u: float(pr.rhs(x, u)), M=m), M)
    spec = solve_ivp_colloc(IvpNonlinearSpec(p, 0.5, pr.rhs, pr.rhs_du), 32)
    print(f"C22 power map, mu=0.5, M={M}")
    print(f"  oracle vs exact       {np.max(np.abs(sol.u - pr.exact(sol.x))):.2e} (Richardson estimate {est:.2e})")
    print(f"  collocation vs exact  {spec.node_error(pr.exact):.2e}")
    print(f"  collocation vs oracle {np.max(np.abs(spec(sol.x) - sol.u)):.2e}")


def fredholm(M):
    q = psi_map.sin(-math.pi / 3, math.pi / 3)
    mu, lam = 1.8, 2.0
    pr = make_problem("C33", q, mu, lam)
    sol = oracle.oracle_fredholm_solve(q, mu, lambda x, u: lam**2 * u - float(pr.rhs(x)), M=M)
    spec = solve_bvp_colloc(BvpCollocSpec(q, mu, pr.rhs, lam, (-0.5, -0.5)), 64)
    print(f"C33 sin map, mu={mu}, lam={lam}, M={M}")
    print(f"  oracle vs exact       {np.max(np.abs(sol.u - pr.exact(sol.x))):.2e} ({sol.sweeps} secant passes)")
    print(f"  collocation vs exact  {spec.node_error(pr.exact):.2e}")
    print(f"  collocation vs oracle {np.max(np.abs(spec(sol.x) - sol.u)):.2e}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--M", type=int, default=4096)
    args = ap.parse_args()
    volterra(args.M)
    fredholm(args.M)


if __name__ == "__main__":
    main()
