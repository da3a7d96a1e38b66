"""Redraw the mean-time chart and summary table from a benchmark CSV.

    python scripts/plot_benchmark.py results/bench.csv --p 0.2 0.8
"""

import argparse
from pathlib import Path

from cdo.harness import mean_times, plot_mean_times, read_csv, write_summary


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("csv")
    ap.add_argument("--p", type=float, nargs="+", default=[0.2, 0.8])
    ap.add_argument("--out", help="chart path (default: <csv stem>_mean_time.svg)")
    args = ap.parse_args(argv)

    src = Path(args.csv)
    records = read_csv(src)
    out = Path(args.out) if args.out else src.with_name(src.stem + "_mean_time.svg")
    plot_mean_times(records, out, p_values=tuple(args.p))
    write_summary(records, src.with_name(src.stem + "_summary.csv"))

    means = mean_times(records)
    print(f"{'|V|':>4} {'p':>4} {'rule':<12} {'mean ms':>10}")
    for (v, p, rule), t in means.items():
        if any(abs(p - q) < 1e-9 for q in args.p):
            print(f"{v:>4} {p:>4g} {rule:<12} {t:>10.2f}")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
