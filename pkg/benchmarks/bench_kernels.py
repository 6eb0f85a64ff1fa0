"""Compare the compiled and pure-Python Bessel kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Times ``bessel_table`` and ``channel_sum`` (the inner loop of every scan) and
a full polarization map, for each available backend.
"""
import argparse
import importlib
import os
import timeit

import numpy as np

from twistex import kernels


def _time(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def bench_backend(name, repeat):
    mod = kernels.load_backend(name)
    x = np.linspace(0.0, 60.0, 20001)
    orders = np.arange(-6, 9)
    coeffs = np.linspace(1, 2, orders.size) * (1 + 0.5j)
    return {
        "bessel_table(nmax=12, 20001 pts)": _time(lambda: mod.bessel_table(12, x), repeat),
        "channel_sum(15 orders, 20001 pts)": _time(lambda: mod.channel_sum(orders, coeffs, x), repeat),
        "jn scalar x 1000": _time(lambda: [mod.jn(5, v) for v in x[:1000]], repeat),
    }


def bench_polmap(name, repeat):
    # reloading rebinds the kernel functions that the scan code looks up on the module
    os.environ["TWISTEX_PURE_PYTHON"] = "1" if name == "python" else ""
    importlib.reload(kernels)
    from twistex import scans
    req = scans.ScanRequest(sweep=True, alpha_steps=91, b_max=20, b_steps=401)
    elapsed = _time(lambda: scans.run_polmap(req), repeat)
    return elapsed, kernels.BACKEND


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    backends = kernels.available_backends()
    results = {b: bench_backend(b, args.repeat) for b in backends}
    width = max(len(k) for k in next(iter(results.values())))
    print(f"{'kernel':{width}}  " + "  ".join(f"{b:>10}" for b in backends)
          + ("     speedup" if len(backends) > 1 else ""))
    for key in results[backends[0]]:
        row = [results[b][key] for b in backends]
        line = f"{key:{width}}  " + "  ".join(f"{1e3 * t:8.2f}ms" for t in row)
        if len(backends) > 1:
            line += f"  {results['python'][key] / results['cython'][key]:9.1f}x"
        print(line)
    for b in backends:
        t, active = bench_polmap(b, args.repeat)
        print(f"polmap 91 x 801 ({active} backend): {1e3 * t:.1f}ms")


if __name__ == "__main__":
    main()
