"""Timing comparison of the two kernel builds on the hot paths.

Both kernel modules are imported directly, bypassing the
SPINOR_SECANT_BACKEND selection, so one run times both.  Workloads:

  * full sub-Pfaffian table plus Jacobian fill at one chart point
    (the per-point cost of every tangent matrix), and
  * modular row elimination on the three-point stacked tangent matrix
    at h = 12 (201 x 2048, the largest rank in the default tables).

Usage: python3 benchmarks/bench_backends.py [--h 10] [--repeat 5]
"""

import argparse
import time

import numpy as np

from spinor_secant import exact, spinor, terracini
from spinor_secant import _kernels_numpy
from spinor_secant._backend import HAS_NUMBA

P = exact.DEFAULT_PRIME


def best_of(repeat, fn):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--h", type=int, default=10,
                        help="chart size for the table workload (default 10)")
    parser.add_argument("--repeat", type=int, default=5,
                        help="repetitions; the best time is reported")
    args = parser.parse_args()

    backends = [("numpy", _kernels_numpy)]
    if HAS_NUMBA:
        from spinor_secant import _kernels_numba
        backends.insert(0, ("numba", _kernels_numba))
    else:
        print("numba not importable; timing the numpy build only")

    h = args.h
    rng = np.random.default_rng(0)
    u = spinor.SkewMatrix.random(h, rng, P)
    full = u.full(P)
    masks = spinor.enumerate_even_subsets(h)
    pi, pj = spinor.pair_arrays(h)
    stack = terracini.trial_stack(12, 3, seed=0, trial=0, prime=P)
    pu = np.uint64(P)

    def table_work(mod):
        def run():
            table = mod.pf_table(full, pu, h)
            mod.jacobian_fill(table, masks, pi, pj, pu)
        return run

    def rank_work(mod):
        def run():
            mod.rank_elim(stack.copy(), pu)
        return run

    workloads = [
        ("pf table + jacobian (h=%d)" % h, table_work),
        ("stacked rank %dx%d" % stack.shape, rank_work),
    ]

    if HAS_NUMBA:
        # first calls pay the JIT compile; keep that out of the timings
        backends[0][1].pf_table(full, pu, h)
        backends[0][1].jacobian_fill(
            backends[0][1].pf_table(full, pu, h), masks, pi, pj, pu)
        backends[0][1].rank_elim(stack.copy(), pu)

    header = "%-28s" + "%12s" * len(backends)
    print(header % (("workload",) + tuple(name for name, _ in backends))
          + ("     speedup" if len(backends) == 2 else ""))
    for label, make in workloads:
        times = [best_of(args.repeat, make(mod)) for _, mod in backends]
        row = "%-28s" % label + "".join("%11.4fs" % t for t in times)
        if len(times) == 2 and times[0] > 0:
            row += "%11.1fx" % (times[1] / times[0])
        print(row)

    # the outputs must agree bit for bit, not just in timing
    ref = None
    for _name, mod in backends:
        table = mod.pf_table(full, pu, h)
        jac = mod.jacobian_fill(table, masks, pi, pj, pu)
        r = mod.rank_elim(stack.copy(), pu)
        out = (table.tobytes(), jac.tobytes(), r)
        if ref is None:
            ref = out
        elif out != ref:
            raise SystemExit("backend outputs disagree")
    print("outputs identical across builds")


if __name__ == "__main__":
    main()
