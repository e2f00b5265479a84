"""Command-line front end.

Usage::

    wgqed <config-path> [--out <path>] [--seed <u64>]

Writes one CSV and prints a one-line summary.  Exit status is 0 on success,
1 for invalid input or an unwritable output path, 2 for numerical
degeneracy or a failed oracle check.

Random draws in ``oracle-check`` come from NumPy's PCG64 bit generator
seeded with the 64-bit ``seed``.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

from .cavity import cavity_scan
from .config import U64_MAX, RunConfig, parse_config
from .errors import ConfigError, NumericalDegeneracyError, ValidationError
from .model import EmitterChain, build_chain, uniform_chain
from .nonreciprocity import eta_argmax, eta_map
from .transfer import chain_scatter, fabry_perot_two_atom, scatter_arrays, segment_solve
from .transparency import make_even_pairwise, make_odd_chain, odd_chain_residual

HEADERS = {
    "spectrum": ["delta", "re_r", "im_r", "re_t", "im_t", "R", "T", "loss"],
    "transparency": ["delta", "re_r", "im_r", "re_t", "im_t", "R", "T", "loss"],
    "cavity": ["delta_probe", "re_t", "im_t", "T"],
    "eta-map": ["theta", "s", "eta"],
    "eta-argmax": ["theta", "s", "eta"],
    "oracle-check": ["case", "max_abs_dr", "max_abs_dt"],
}
ORACLE_TOL = 1e-10


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _spectrum_rows(chain: EmitterChain, probes):
    r, t = scatter_arrays(chain, probes)
    R = np.abs(r) ** 2
    T = np.abs(t) ** 2
    rows = [
        (p, ri.real, ri.imag, ti.real, ti.imag, Ri, Ti, 1.0 - Ri - Ti)
        for p, ri, ti, Ri, Ti in zip(probes, r, t, R, T)
    ]
    k = int(np.argmin(T))
    return rows, f"min_T={fmt(T[k])} at delta={fmt(probes[k])} max_R={fmt(R.max())}"


def _run_spectrum(p, seed):
    chain = build_chain(p["gamma"], p["gamma0"], p["detunings"], p["phases"])
    return _spectrum_rows(chain, p["grid"].values())


def _run_transparency(p, seed):
    theta = p["phases"][0]
    perm = p.get("permutation")
    if "leftover" in p:
        dets = make_odd_chain(p["magnitudes"], p["leftover"], perm)
    else:
        dets = make_even_pairwise(p["magnitudes"], perm)
    chain = uniform_chain(p["gamma"], p["gamma0"], dets, theta)
    rows, extrema = _spectrum_rows(chain, p["grid"].values())
    if "leftover" in p:
        leftover_index = (perm or list(range(len(dets)))).index(len(dets) - 1)
        residual = odd_chain_residual(chain, p["grid"], leftover_index)
        extra = f"scheme=odd sites={len(dets)} odd_residual={fmt(residual)}"
    else:
        probe = p.get("probe", 0.0)
        deviation = abs(1 - chain_scatter(chain, probe).t)
        extra = f"scheme=even sites={len(dets)} deviation={fmt(deviation)} at delta={fmt(probe)}"
    return rows, f"{extra} {extrema}"


def _run_cavity(p, seed):
    scan = cavity_scan(p["kappa"], p["g"], p["cavity_detuning"], p["detunings"], p["grid"])
    T = np.abs(scan.t) ** 2
    rows = [(x, t.real, t.imag, Ti) for x, t, Ti in zip(scan.probes, scan.t, T)]
    k = int(np.argmin(T))
    poles = int(scan.poles.sum())
    return rows, f"min_T={fmt(T[k])} at delta_probe={fmt(scan.probes[k])} pole_points={poles}"


def _run_eta_map(p, seed):
    field = eta_map(p["theta_grid"], p["s_grid"], p["gamma"], p["gamma0"], p["mean_detuning"])
    theta, s, eta = field.argmax()
    lo = float(field.values.min())
    return list(field.rows()), f"max_eta={fmt(eta)} at theta={fmt(theta)} s={fmt(s)} min_eta={fmt(lo)}"


def _run_eta_argmax(p, seed):
    opt = eta_argmax(
        p["theta_range"], p["s_range"], p["gamma"], p["gamma0"], p["mean_detuning"],
        scan=p.get("scan", (61, 201)),
    )
    return [(opt.theta, opt.s, opt.eta)], f"eta*={fmt(opt.eta)} theta*={fmt(opt.theta)} s*={fmt(opt.s)}"


def random_chain(rng: np.random.Generator, max_sites: int, n_sites: int | None = None):
    """One randomized chain and probe for oracle comparisons."""
    n = int(rng.integers(1, max_sites + 1)) if n_sites is None else n_sites
    gamma = float(rng.uniform(0.2, 3.0))
    gamma0 = 0.0 if rng.random() < 0.5 else float(rng.uniform(0.0, 2.0))
    detunings = (gamma * rng.normal(0.0, 2.0, n)).tolist()
    phases = rng.uniform(0.0, 2 * math.pi, n).tolist()
    probe = float(gamma * rng.uniform(-5.0, 5.0))
    return build_chain(gamma, gamma0, detunings, phases), probe


def _run_oracle_check(p, seed):
    rng = np.random.Generator(np.random.PCG64(seed))
    cases = p.get("cases", 100)
    max_sites = p.get("max_sites", 32)
    rows = []
    worst_r = worst_t = 0.0
    for case in range(cases):
        chain, probe = random_chain(rng, max_sites)
        ref = chain_scatter(chain, probe)
        checks = [segment_solve(chain, probe)]
        if chain.n_sites == 2:
            checks.append(fabry_perot_two_atom(chain, probe))
        dr = max(abs(c.r - ref.r) for c in checks)
        dt = max(abs(c.t - ref.t) for c in checks)
        worst_r, worst_t = max(worst_r, dr), max(worst_t, dt)
        rows.append((case, dr, dt))
    ok = worst_r <= ORACLE_TOL and worst_t <= ORACLE_TOL
    verdict = "<=" if ok else ">"
    summary = (
        f"cases={cases} max |dr| = {worst_r:.3e}, max |dt| = {worst_t:.3e} "
        f"({verdict} {ORACLE_TOL:g}) {'PASS' if ok else 'FAIL'}"
    )
    return rows, summary, ok


RUNNERS = {
    "spectrum": _run_spectrum,
    "transparency": _run_transparency,
    "cavity": _run_cavity,
    "eta-map": _run_eta_map,
    "eta-argmax": _run_eta_argmax,
    "oracle-check": _run_oracle_check,
}


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def run(config: RunConfig, out=None, seed=None, stdout=None) -> int:
    """Execute ``config``; returns the process exit status."""
    stdout = stdout or sys.stdout
    out = out or config.out
    if out is None:
        raise ConfigError("no output path: set 'out' or pass --out", "out")
    seed = config.seed if seed is None else seed
    try:
        result = RUNNERS[config.mode](config.params, seed)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalDegeneracyError as exc:
        print(f"numerical degeneracy: {exc}", file=sys.stderr)
        return 2
    ok = True
    if len(result) == 3:
        rows, summary, ok = result
    else:
        rows, summary = result
    try:
        write_csv(out, HEADERS[config.mode], rows)
    except OSError as exc:
        print(f"error: cannot write {out}: {exc}", file=sys.stderr)
        return 1
    print(f"mode={config.mode} points={len(rows)} {summary}", file=stdout)
    return 0 if ok else 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors are invalid input (1); argparse's default 2 means degeneracy here
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _u64(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value <= U64_MAX:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def main(argv=None) -> int:
    parser = _Parser(prog="wgqed", description=__doc__.split("\n")[0])
    parser.add_argument("config", help="path to a key = value run configuration")
    parser.add_argument("--out", help="CSV output path (overrides 'out' in the config)")
    parser.add_argument("--seed", type=_u64, help="64-bit seed (overrides 'seed' in the config)")
    args = parser.parse_args(argv)

    path = Path(args.config)
    try:
        text = path.read_text()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return 1
    try:
        config = parse_config(text)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out = args.out or config.out or str(path.with_suffix(".csv"))
    return run(config, out=out, seed=args.seed)


if __name__ == "__main__":
    sys.exit(main())
