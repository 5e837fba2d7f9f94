"""Run configurations, error sweeps, table/figure presets and convergence orders."""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import psi_map
from .cases import BVP, IVP_LINEAR, IVP_NONLINEAR, CaseId, make_problem
from .errors import ParameterError
from .frac_ops import Kind
from .solvers_colloc import BvpCollocSpec, IvpNonlinearSpec, solve_bvp_colloc, solve_ivp_colloc
from .solvers_pg import BvpLinearSpec, IvpLinearSpec, max_error, solve_bvp_pg, solve_helmholtz_pg, solve_ivp_pg

METHODS = ("pg-ivp", "pg-bvp", "pg-helmholtz", "colloc-ivp", "colloc-bvp")

COMPATIBLE = {
    "pg-ivp": IVP_LINEAR,
    "colloc-ivp": IVP_LINEAR | IVP_NONLINEAR,
    "pg-bvp": {CaseId.C31},
    "pg-helmholtz": {CaseId.C31},
    "colloc-bvp": {CaseId.C32, CaseId.C33},
}

DEFAULT_MAP = {
    CaseId.C11: ("log", 1.0, math.e), CaseId.C12: ("log", 1.0, math.e),
    CaseId.C13: ("log", 1.0, math.e), CaseId.C14: ("log", 1.0, math.e),
    CaseId.C21: ("power", 0.0, 1.0), CaseId.C22: ("power", 0.0, 1.0),
    CaseId.C31: ("quadratic", 1.0, 3.0), CaseId.C32: ("quadratic", 1.0, 4.0),
    CaseId.C33: ("sin", -math.pi / 3, math.pi / 3),
}

CSV_HEADER = ("N", "mu", "alpha", "beta", "lambda", "psi", "method", "case", "err", "seconds")


@dataclass(frozen=True)
class RunConfig:
    method: str
    case: CaseId
    mu: float
    N: tuple = (16,)
    psi: str | None = None
    a: float | None = None
    b: float | None = None
    lam: float = 0.0
    alpha: float = 0.0
    beta: float = 0.0
    output: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "case", CaseId.parse(self.case))
        object.__setattr__(self, "N", tuple(int(n) for n in np.atleast_1d(self.N)))
        self.validate()

    def validate(self):
        if self.method not in METHODS:
            raise ParameterError(f"method: unknown {self.method!r}; choose from {', '.join(METHODS)}")
        if self.case not in COMPATIBLE[self.method]:
            ok = sorted(m for m, cs in COMPATIBLE.items() if self.case in cs)
            raise ParameterError(f"case: {self.case.value} cannot be run with {self.method}; use {', '.join(ok)}")
        ivp = self.method.endswith("ivp")
        if ivp and not 0 < self.mu < 1:
            raise ParameterError(f"mu: {self.method} needs 0 < mu < 1, got {self.mu}")
        if not ivp and not 1 < self.mu < 2:
            raise ParameterError(f"mu: {self.method} needs 1 < mu < 2, got {self.mu}")
        if self.method == "pg-bvp" and self.lam != 0:
            raise ParameterError("lambda: pg-bvp solves lambda = 0; use pg-helmholtz")
        if self.lam < 0:
            raise ParameterError("lambda: must be non-negative")
        if not (self.alpha > -1 and self.beta > -1):
            raise ParameterError("alpha/beta: node parameters must exceed -1")
        if not self.N or min(self.N) < (1 if ivp else 2):
            raise ParameterError(f"N: values must be at least {1 if ivp else 2}")

    def build_map(self):
        name, a, b = DEFAULT_MAP[self.case]
        name = self.psi or name
        if self.psi is not None:
            a, b = None, None
        a = self.a if self.a is not None else a
        b = self.b if self.b is not None else b
        return psi_map.make_map(name, a, b)


@dataclass(frozen=True)
class Row:
    N: int
    mu: float
    alpha: float
    beta: float
    lam: float
    psi: str
    method: str
    case: str
    err: float
    seconds: float
    extra: dict = field(default_factory=dict, compare=False)

    def sort_key(self):
        return (self.N, self.mu, self.alpha, self.beta, self.lam, self.psi, self.method, self.case)

    def csv_fields(self):
        fmt = "{:.5e}".format
        return [str(self.N), fmt(self.mu), fmt(self.alpha), fmt(self.beta), fmt(self.lam), self.psi,
                self.method, self.case, fmt(self.err), fmt(self.seconds)]


def _solve_one(cfg: RunConfig, pmap, problem, N):
    m = cfg.method
    if m == "pg-ivp":
        sol = solve_ivp_pg(IvpLinearSpec(pmap, cfg.mu, problem.rhs), N)
        return max_error(sol, problem.exact, pmap), {}
    if m == "pg-bvp":
        sol = solve_bvp_pg(BvpLinearSpec(pmap, cfg.mu, problem.rhs), N)
        return max_error(sol, problem.exact, pmap), {}
    if m == "pg-helmholtz":
        sol = solve_helmholtz_pg(BvpLinearSpec(pmap, cfg.mu, problem.rhs, cfg.lam), N)
        return max_error(sol, problem.exact, pmap), {}
    if m == "colloc-ivp":
        if problem.nonlinear:
            spec = IvpNonlinearSpec(pmap, cfg.mu, problem.rhs, problem.rhs_du, Kind.CAPUTO)
        else:
            rhs = problem.rhs
            spec = IvpNonlinearSpec(pmap, cfg.mu, lambda x, u: rhs(x), None, Kind.RL)
        rep = solve_ivp_colloc(spec, N, (cfg.alpha, cfg.beta))
        return rep.node_error(problem.exact), {"iterations": rep.iterations}
    rep = solve_bvp_colloc(BvpCollocSpec(pmap, cfg.mu, problem.rhs, cfg.lam, (cfg.alpha, cfg.beta)), N)
    return rep.node_error(problem.exact), {}


def run_case(cfg: RunConfig) -> list[Row]:
    """One row per N: max error (501-point grid for Petrov-Galerkin, nodes for collocation)."""
    pmap = cfg.build_map()
    problem = make_problem(cfg.case, pmap, cfg.mu, cfg.lam)
    rows = []
    for N in cfg.N:
        t0 = time.perf_counter()
        err, extra = _solve_one(cfg, pmap, problem, N)
        rows.append(Row(N, cfg.mu, cfg.alpha, cfg.beta, cfg.lam, pmap.name, cfg.method, cfg.case.value,
                        err, time.perf_counter() - t0, extra))
    return rows


def run_all(configs) -> list[Row]:
    rows = [r for c in configs for r in run_case(c)]
    return sorted(rows, key=Row.sort_key)


def write_csv(rows, stream=None):
    """Write rows with the fixed header; returns the text when ``stream`` is None."""
    buf = stream if stream is not None else io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.csv_fields())
    return None if stream is not None else buf.getvalue()


# -- convergence orders ----------------------------------------------------


@dataclass(frozen=True)
class OrderReport:
    pairs: tuple  # (N, 2N, order)
    classification: str  # "spectral", "algebraic" or "undetermined"

    @property
    def orders(self):
        return [p[2] for p in self.pairs]


def convergence_order(rows, floor=1e-12, growth=1.3) -> OrderReport:
    """Observed orders ``log2(err(N)/err(2N))`` over doubling pairs.

    Pairs whose finer error sits below ``floor`` are dropped as rounding
    noise. The curve is called spectral when the last orders keep growing by
    a factor of at least ``growth`` (exponential decay doubles the order per
    doubling of N), algebraic otherwise.
    """
    data = {}
    for r in rows:
        N, err = (r.N, r.err) if isinstance(r, Row) else r
        data[int(N)] = float(err)
    pairs = []
    for N in sorted(data):
        if 2 * N in data and data[2 * N] >= floor and data[N] > 0:
            pairs.append((N, 2 * N, math.log2(data[N] / data[2 * N])))
    orders = [p[2] for p in pairs]
    if len(orders) < 2:
        return OrderReport(tuple(pairs), "undetermined")
    tail = orders[-3:]
    growing = all(b >= growth * a and a > 0.5 for a, b in zip(tail, tail[1:]))
    return OrderReport(tuple(pairs), "spectral" if growing else "algebraic")


# -- presets ---------------------------------------------------------------

MU_IVP = (0.1, 0.3, 0.5, 0.7, 0.9)
MU_BVP = (1.1, 1.3, 1.5, 1.7, 1.9)
TABLE1_MAPS = (("quadratic", 0.0, 0.7), ("tan", 0.0, math.pi / 5), ("sin", 0.0, math.pi / 3),
               ("log", 1.0, math.e), ("power", 0.0, 1.0))
SIN_SYM = ("sin", -math.pi / 3, math.pi / 3)
FIG_N = (1, 2, 4, 8, 16, 32, 64, 128)


def _cfg(method, case, mu, N, m=None, **kw):
    if m is not None:
        kw.update(psi=m[0], a=m[1], b=m[2])
    return RunConfig(method, case, mu, tuple(N), **kw)


def _figure(method, case, vary):
    if vary == "psi":
        return [_cfg(method, case, 0.5, FIG_N, m) for m in TABLE1_MAPS]
    return [_cfg(method, case, mu, FIG_N, ("log", 1.0, math.e)) for mu in MU_IVP]


PRESETS = {
    "table1": lambda: [_cfg("colloc-ivp", "C21", mu, (30,), m) for m in TABLE1_MAPS for mu in MU_IVP],
    "table2": lambda: [_cfg("colloc-ivp", "C22", mu, (4, 8, 16, 32, 64), ("power", 0.0, 1.0)) for mu in MU_IVP],
    "table3": lambda: [_cfg("pg-bvp", "C31", mu, (4, 8, 12, 16, 18), ("quadratic", 1.0, 3.0)) for mu in MU_BVP],
    "table4": lambda: [_cfg("colloc-bvp", "C32", mu, (4, 8, 12, 16, 20), ("quadratic", 1.0, 4.0)) for mu in MU_BVP],
    "table5": lambda: [_cfg("colloc-bvp", "C32", 1.55, (4, 8, 12, 16, 20), ("tan", 0.0, math.pi / 3),
                            lam=lam, alpha=0.5, beta=0.5) for lam in (1.0, 10.0, 1e2, 1e3, 1e4)],
    "table6": lambda: [_cfg("colloc-bvp", "C32", 1.45, (4, 8, 12, 16, 20), SIN_SYM, lam=10.0, alpha=al, beta=be)
                       for al, be in ((-0.5, -0.5), (0.5, 0.5), (1.0, 1.0), (0.5, -0.5), (-0.5, 2.0))],
    "table7": lambda: [_cfg("colloc-bvp", "C33", mu, (4, 8, 16, 32, 64, 128, 256), SIN_SYM, lam=2.0,
                            alpha=-0.5, beta=-0.5) for mu in (1.02, 1.2, 1.4, 1.6, 1.8)],
    "fig1": lambda: _figure("pg-ivp", "C11", "psi"),
    "fig2": lambda: _figure("pg-ivp", "C11", "mu"),
    "fig3": lambda: _figure("pg-ivp", "C12", "psi"),
    "fig4": lambda: _figure("pg-ivp", "C13", "psi"),
    "fig5": lambda: _figure("pg-ivp", "C14", "psi"),
    "fig6": lambda: _figure("pg-ivp", "C14", "mu"),
    "fig7": lambda: _figure("colloc-ivp", "C11", "psi"),
    "fig8": lambda: _figure("colloc-ivp", "C11", "mu"),
    "fig9": lambda: _figure("colloc-ivp", "C12", "psi"),
    "fig10": lambda: _figure("colloc-ivp", "C13", "psi"),
    "fig11": lambda: _figure("colloc-ivp", "C14", "psi"),
    "fig12": lambda: _figure("colloc-ivp", "C14", "mu"),
}

# expected decay shape of each figure's curves
FIGURE_SHAPE = {f"fig{i}": ("spectral" if i in (1, 2, 3, 10, 11, 12) else "algebraic") for i in range(1, 13)}


def preset(name) -> list[RunConfig]:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ParameterError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None


def with_output(cfgs, output):
    return [replace(c, output=output) for c in cfgs]
