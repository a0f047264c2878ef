"""Time the compiled and pure-Python float clearing kernels on random networks.

    python benchmarks/bench_kernels.py [--banks 40] [--networks 50] [--repeat 5]
"""

import argparse
import random
import timeit

from debtnet import _kernels_py, kernels
from debtnet.generators import random_network
from debtnet.network import _relative


def workload(rng, banks, count):
    out = []
    for _ in range(count):
        net = random_network(rng, banks, 10, density=0.3, alpha="1/2", beta="3/4", exact=False)
        out.append((list(net.externals), _relative(net), list(net.total_liabilities), net.alpha, net.beta))
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--banks", type=int, default=40)
    ap.add_argument("--networks", type=int, default=50)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    cases = workload(random.Random(args.seed), args.banks, args.networks)
    impls = {"python": _kernels_py.greatest_vector}
    if kernels.BACKEND == "compiled":
        impls["compiled"] = kernels.greatest_vector_float
    else:
        print("compiled extension not built; timing the fallback only")

    for args_ in cases:  # both must agree before timing means anything
        ref = _kernels_py.greatest_vector(*args_, 1e-9)
        for fn in impls.values():
            assert max(abs(a - b) for a, b in zip(fn(*args_, 1e-9), ref)) < 1e-7

    times = {}
    for name, fn in impls.items():
        t = min(timeit.repeat(lambda: [fn(*c, 1e-9) for c in cases], number=1, repeat=args.repeat))
        times[name] = t
        print(f"{name:9s} {t * 1e3:9.2f} ms for {len(cases)} networks of {args.banks} banks")
    if len(times) == 2:
        print(f"speedup   {times['python'] / times['compiled']:9.1f}x")


if __name__ == "__main__":
    main()
