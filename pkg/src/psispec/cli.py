"""Command-line driver.

    psispec solve  --case C32 --method colloc-bvp --mu 1.5 --N 20
    psispec sweep  --case C33 --method colloc-bvp --mu 1.8 --lambda 2 --N 16,32,64
    psispec preset table3 [--output table3.csv]
    psispec selftest

A config file (``--config FILE``) holds ``key = value`` lines; ``#`` starts a
comment. Keys: method, case, psi, a, b, mu, lambda, alpha, beta, N, output.
Command-line flags override the file.
Exit codes: 0 success, 2 configuration error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import math
import sys

from .errors import InputError, NumericError, ParameterError
from .runner import RunConfig, convergence_order, preset, run_all, write_csv

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

_FLOAT_KEYS = {"a", "b", "mu", "lambda", "alpha", "beta"}
_KEYS = _FLOAT_KEYS | {"method", "case", "psi", "N", "output"}


class ConfigError(InputError):
    pass


def _parse_float(key, text, where):
    t = text.strip().lower()
    consts = {"pi": math.pi, "e": math.e, "-pi": -math.pi}
    try:
        if "/" in t:
            num, den = t.split("/", 1)
            return _parse_float(key, num, where) / _parse_float(key, den, where)
        return consts[t] if t in consts else float(t)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{where}: field {key!r}: cannot parse {text!r} as a number") from None


def _parse_n_list(text, where):
    try:
        return tuple(int(v) for v in text.replace(" ", "").split(",") if v)
    except ValueError:
        raise ConfigError(f"{where}: field 'N': expected comma-separated integers, got {text!r}") from None


def parse_config_text(text, source="<config>"):
    """Parse ``key = value`` lines into a dict of typed values."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        if "=" not in line:
            raise ConfigError(f"{where}: expected 'key = value', got {raw.strip()!r}")
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"{where}: unknown field {key!r}; known fields: {', '.join(sorted(_KEYS))}")
        if key in _FLOAT_KEYS:
            out[key] = _parse_float(key, value, where)
        elif key == "N":
            out[key] = _parse_n_list(value, where)
        else:
            out[key] = value
    return out


def parse_config_file(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config_text(fh.read(), str(path))
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None


def _merge(args):
    values = parse_config_file(args.config) if args.config else {}
    for key in _KEYS:
        flag = getattr(args, "lam" if key == "lambda" else key, None)
        if flag is None:
            continue
        if key in _FLOAT_KEYS:
            values[key] = _parse_float(key, flag, "command line")
        elif key == "N":
            values[key] = _parse_n_list(flag, "command line")
        else:
            values[key] = flag
    for required in ("method", "case", "mu"):
        if required not in values:
            raise ConfigError(f"missing required field {required!r}")
    return RunConfig(
        method=values["method"], case=values["case"], mu=values["mu"], N=values.get("N", (16,)),
        psi=values.get("psi"), a=values.get("a"), b=values.get("b"), lam=values.get("lambda", 0.0),
        alpha=values.get("alpha", 0.0), beta=values.get("beta", 0.0), output=values.get("output"),
    )


def _emit(rows, output):
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            write_csv(rows, fh)
    else:
        write_csv(rows, sys.stdout)


def _add_problem_flags(p):
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--method")
    p.add_argument("--case")
    p.add_argument("--psi", help="map name: identity, log, exp, power[:p], sin, tan, quadratic")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--mu")
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--N", help="comma-separated list")
    p.add_argument("--output", help="CSV path (default: stdout)")


def build_parser():
    parser = argparse.ArgumentParser(prog="psispec", description="Spectral solvers for psi-fractional equations.")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_problem_flags(sub.add_parser("solve", help="single run (first N only)"))
    _add_problem_flags(sub.add_parser("sweep", help="run over a list of N and report observed orders"))
    pp = sub.add_parser("preset", help="reproduce a table or figure data set")
    pp.add_argument("name", help="table1..table7 or fig1..fig12")
    pp.add_argument("--output")
    st = sub.add_parser("selftest", help="run the invariant suite")
    st.add_argument("--quiet", action="store_true")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "selftest":
            from .selftest import run_selftest

            ok = run_selftest(verbose=not args.quiet)
            return EXIT_OK if ok else EXIT_NUMERIC
        if args.command == "preset":
            _emit(run_all(preset(args.name)), args.output)
            return EXIT_OK
        cfg = _merge(args)
        if args.command == "solve":
            cfg = RunConfig(**{**cfg.__dict__, "N": cfg.N[:1]})
        rows = run_all([cfg])
        _emit(rows, cfg.output)
        if args.command == "sweep":
            rep = convergence_order(rows)
            for n1, n2, order in rep.pairs:
                print(f"order N={n1}->{n2}: {order:.3f}", file=sys.stderr)
            print(f"decay: {rep.classification}", file=sys.stderr)
        return EXIT_OK
    except (ParameterError, InputError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericError, ArithmeticError, ZeroDivisionError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
