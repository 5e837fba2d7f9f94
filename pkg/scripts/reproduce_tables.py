"""Run the table presets and write one CSV per table, plus a short console summary."""

import argparse
import time
from collections import defaultdict
from pathlib import Path

from psispec.runner import preset, run_all, write_csv


def summarize(name, rows):
    cols = defaultdict(dict)
    for r in rows:
        cols[(r.mu, r.lam, r.alpha, r.beta, r.psi)][r.N] = r.err
    print(f"== {name}")
    for key, errs in cols.items():
        mu, lam, al, be, psi = key
        cells = "  ".join(f"N={N}:{e:.3e}" for N, e in sorted(errs.items()))
        print(f"  psi={psi:<10} mu={mu:<5g} lam={lam:<6g} (a,b)=({al:g},{be:g})  {cells}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("tables", nargs="*", default=[f"table{i}" for i in range(1, 8)])
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for name in args.tables:
        t0 = time.perf_counter()
        rows = run_all(preset(name))
        with open(out / f"{name}.csv", "w", newline="") as fh:
            write_csv(rows, fh)
        summarize(name, rows)
        print(f"  ({time.perf_counter() - t0:.2f}s, {len(rows)} rows -> {out / (name + '.csv')})")


if __name__ == "__main__":
    main()
