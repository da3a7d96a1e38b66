"""Full collective spanning-tree benchmark: 49 graphs x 10 base profiles x 9 p levels.

    python scripts/run_benchmark.py --out results/bench.csv

Writes the per-instance CSV, a mean-time summary next to it and an SVG
chart of mean time against |V| for p = 0.2 and p = 0.8.
"""

import argparse
import sys
import time
from pathlib import Path

from cdo.harness import (
    DEFAULT_RULES,
    RANK_RULES,
    BenchConfig,
    default_seed,
    plot_mean_times,
    run_benchmark,
    write_csv,
    write_summary,
)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/bench.csv")
    ap.add_argument("--nodes", type=int, nargs=2, default=(6, 8), metavar=("LO", "HI"))
    ap.add_argument("--voters", type=int, default=100)
    ap.add_argument("--profiles", type=int, default=10)
    ap.add_argument("--timeout", type=float, default=1200.0)
    ap.add_argument("--seed", type=int, default=default_seed())
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--include-rank", action="store_true")
    args = ap.parse_args(argv)

    rules = DEFAULT_RULES + (RANK_RULES if args.include_rank else ())
    cfg = BenchConfig(node_range=tuple(args.nodes), voters=args.voters,
                      profiles_per_graph=args.profiles, rules=rules, timeout=args.timeout,
                      seed=args.seed, workers=args.workers)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    total = cfg.grid_size() * len(rules)
    done = 0
    t0 = time.time()

    def progress(batch):
        nonlocal done
        done += len(batch)
        r = batch[0]
        print(f"[{time.time() - t0:7.0f}s] {done}/{total}  |V|={r.num_nodes} |E|={r.num_edges}",
              file=sys.stderr, flush=True)

    records = run_benchmark(cfg, progress)
    write_csv(records, out)
    write_summary(records, out.with_name(out.stem + "_summary.csv"))
    plot_mean_times(records, out.with_name(out.stem + "_mean_time.svg"))
    timeouts = sum(r.timed_out for r in records)
    print(f"{len(records)} records, {timeouts} timeouts, {time.time() - t0:.0f}s total")


if __name__ == "__main__":
    main()
