"""Compare the compiled and pure-Python folding kernels.

Workloads:
  random   random edge lists over four labels, about two edges per vertex
  stephen  the fold calls made while approximating the synthesized S3
           witness graph for one round (recorded, then replayed)

Usage: python3 benchmarks/bench_fold.py [--repeat 3] [--sizes 1000 10000 100000] [--json out.json]
"""

import argparse
import json
import random
import statistics
import sys
import time

from invmon import igraph
from invmon.folding import available_backends
from invmon.gimage import symmetric_group
from invmon.stephen import approximate
from invmon.synth import synthesize


def random_workload(n, seed):
    rnd = random.Random(seed)
    m = 2 * n
    src = [rnd.randrange(n) for _ in range(m)]
    dst = [rnd.randrange(n) for _ in range(m)]
    lab = [rnd.randrange(4) for _ in range(m)]
    return n, src, lab, dst, []


def stephen_workload():
    s = synthesize(symmetric_group(3))
    calls = []
    real = igraph.fold_edges

    def record(n, src, lab, dst, merges=()):
        calls.append((n, list(src), list(lab), list(dst), list(merges)))
        return real(n, src, lab, dst, merges)

    igraph.fold_edges = record
    try:
        approximate(s.presentation, s.witness, 1)
    finally:
        igraph.fold_edges = real
    return calls


def time_calls(fn, calls, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        for args in calls:
            fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--sizes", type=int, nargs="+", default=[1000, 10000, 100000])
    ap.add_argument("--json", help="also write results here")
    args = ap.parse_args(argv)

    backends = available_backends()
    if "cython" not in backends:
        print("note: compiled kernel not built; timing the Python kernel only",
              file=sys.stderr)
    workloads = [(f"random n={n}", [random_workload(n, n)]) for n in args.sizes]
    calls = stephen_workload()
    workloads.append((f"stephen S3 ({len(calls)} folds, "
                      f"{sum(len(c[1]) for c in calls)} edges)", calls))

    # both kernels must agree before timing means anything
    for _, calls in workloads:
        for c in calls:
            outs = [fn(*c) for fn in backends.values()]
            assert all(o == outs[0] for o in outs), "backends disagree"

    rows = []
    for name, calls in workloads:
        row = {"workload": name}
        for b, fn in backends.items():
            row[b] = time_calls(fn, calls, args.repeat)[0]
        if "cython" in row:
            row["speedup"] = row["python"] / row["cython"]
        rows.append(row)

    width = max(len(r["workload"]) for r in rows)
    head = f"{'workload':<{width}}  {'python s':>10}"
    if "cython" in backends:
        head += f"  {'cython s':>10}  {'speedup':>8}"
    print(head)
    for r in rows:
        line = f"{r['workload']:<{width}}  {r['python']:>10.4f}"
        if "cython" in r:
            line += f"  {r['cython']:>10.4f}  {r['speedup']:>7.1f}x"
        print(line)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
