"""Error-vs-N data for the figure presets with observed orders and decay classification."""

import argparse
from pathlib import Path

from psispec.runner import FIGURE_SHAPE, convergence_order, preset, run_all, write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("figures", nargs="*", default=list(FIGURE_SHAPE))
    ap.add_argument("--outdir", default=None, help="also write figN.csv files here")
    args = ap.parse_args()
    mismatches = 0
    for fig in args.figures:
        all_rows = []
        print(f"== {fig} (expected {FIGURE_SHAPE[fig]})")
        for cfg in preset(fig):
            rows = run_all([cfg])
            all_rows += rows
            rep = convergence_order(rows)
            orders = " ".join(f"{o:5.2f}" for o in rep.orders)
            flag = "" if rep.classification == FIGURE_SHAPE[fig] else "   <-- unexpected"
            mismatches += bool(flag)
            print(f"  {cfg.method} {cfg.case.value} psi={cfg.psi:<10} mu={cfg.mu:<4g} "
                  f"{rep.classification:<11} orders: {orders}{flag}")
        if args.outdir:
            Path(args.outdir).mkdir(parents=True, exist_ok=True)
            with open(Path(args.outdir) / f"{fig}.csv", "w", newline="") as fh:
                write_csv(sorted(all_rows, key=lambda r: r.sort_key()), fh)
    print(f"{mismatches} unexpected classifications")


if __name__ == "__main__":
    main()
