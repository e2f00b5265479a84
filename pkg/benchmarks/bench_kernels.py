"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--threads N]

Prints the best wall time per case for each available backend and the
speed-up of the compiled kernels.  The last column reports how far the two
backends' outputs differ.
"""

import argparse
import math
import timeit

import numpy as np

from wgqed import _backend
from wgqed.cli import random_chain


def scatter_cases(rng):
    for n_sites in (2, 8, 32):
        chain, _ = random_chain(rng, n_sites, n_sites=n_sites)
        for n_probes in (1, 1_000, 100_000):
            probes = np.linspace(-5 * chain.gamma, 5 * chain.gamma, n_probes)
            args = (chain.detunings, chain.phases, chain.gamma, chain.gamma0, probes)
            yield f"scatter_grid N={n_sites:<2} probes={n_probes:<6}", "scatter_grid", args


def eta_cases():
    for nt, ns in ((61, 201), (401, 801)):
        args = (np.linspace(0, math.pi, nt), np.linspace(0, 4, ns), 1.0, 1.0, 0.0)
        yield f"eta_grid {nt}x{ns:<14}", "eta_grid", args


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--threads", type=int, default=_backend.thread_count())
    opts = parser.parse_args()

    backends = sorted(_backend.AVAILABLE)
    print(f"backends: {', '.join(backends)}; threads for compiled kernels: {opts.threads}")
    header = f"{'case':<38}" + "".join(f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"{'speed-up':>10}"
    print(header)

    rng = np.random.Generator(np.random.PCG64(2024))
    for label, name, args in [*scatter_cases(rng), *eta_cases()]:
        outputs, times = [], []
        for b in backends:
            fn = getattr(_backend.AVAILABLE[b], name)
            outputs.append(fn(*args, opts.threads))
            timer = timeit.Timer(lambda: fn(*args, opts.threads))
            number, _ = timer.autorange()
            times.append(min(timer.repeat(opts.repeat, number)) / number)
        line = f"{label:<38}" + "".join(f"{t * 1e3:>10.3f}ms" for t in times)
        if len(times) == 2:
            line += f"{times[1] / times[0]:>9.1f}x"
            diff = max(float(np.max(np.abs(x - y), initial=0.0)) for x, y in zip(outputs[0], outputs[1]))
            line += "  bitwise equal" if diff == 0 else f"  max |diff| {diff:.1e}"
        print(line)


if __name__ == "__main__":
    main()
