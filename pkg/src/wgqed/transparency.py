"""Detuning-assignment protocols and collective-spectrum diagnostics.

Even chains built from pairs ``+D_m, -D_m`` around the probe are transparent
at the pair midpoint.  Odd chains with one leftover emitter at ``D_0``
transmit exactly like that single emitter as long as the pairs stay
symmetric about the photon frequency.  Identical emitters give a
Lorentzian dip whose half-width grows linearly with their number.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ShapeError, ValidationError
from .model import EmitterChain, _finite, as_grid
from .transfer import SpectrumRow, chain_scatter, single_atom_amplitudes

KINDS = ("identical", "even_pairwise", "odd_pairwise_plus_one")


def _resolve_permutation(permutation, size):
    if permutation is None or permutation == "identity":
        return list(range(size))
    if permutation == "reversed":
        return list(range(size - 1, -1, -1))
    if permutation == "interleaved":
        return list(range(0, size, 2)) + list(range(1, size, 2))
    if isinstance(permutation, str):
        raise ValidationError(f"unknown permutation name {permutation!r}", "permutation")
    perm = [int(i) for i in permutation]
    if sorted(perm) != list(range(size)):
        raise ValidationError(
            f"permutation {perm} is not a permutation of 0..{size - 1}", "permutation"
        )
    return perm


def _check_magnitudes(magnitudes):
    mags = [_finite(m, "magnitudes") for m in magnitudes]
    if any(m <= 0 for m in mags):
        raise ValidationError("pair magnitudes must be positive", "magnitudes")
    if len(set(mags)) != len(mags):
        raise ValidationError("pair magnitudes must be distinct", "magnitudes")
    return mags


def make_even_pairwise(magnitudes: Sequence[float], permutation=None) -> list[float]:
    """Detunings ``+D_1, -D_1, ..., +D_n, -D_n`` reordered by ``permutation``.

    ``permutation`` is ``None``/``"identity"``, ``"reversed"``,
    ``"interleaved"`` (all ``+`` then all ``-``) or an index sequence with
    ``out[i] = base[permutation[i]]``.
    """
    mags = _check_magnitudes(magnitudes)
    if not mags:
        raise ValidationError("even scheme needs at least one pair", "magnitudes")
    base = [v for m in mags for v in (m, -m)]
    return [base[i] for i in _resolve_permutation(permutation, len(base))]


def make_odd_chain(magnitudes: Sequence[float], delta0: float, permutation=None) -> list[float]:
    """Pairs ``+D_m, -D_m`` plus one leftover ``delta0`` (last in the base order)."""
    mags = _check_magnitudes(magnitudes)
    base = [v for m in mags for v in (m, -m)] + [_finite(delta0, "delta0")]
    return [base[i] for i in _resolve_permutation(permutation, len(base))]


@dataclass(frozen=True)
class DetuningScheme:
    """Recipe for a chain's detunings.

    ``identical`` uses ``magnitudes[0]`` on ``n_atoms`` sites; the pairwise
    kinds follow :func:`make_even_pairwise` and :func:`make_odd_chain`.
    """

    kind: str
    magnitudes: tuple = ()
    leftover: float | None = None
    permutation: object = None
    n_atoms: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"kind must be one of {KINDS}, got {self.kind!r}", "kind")
        object.__setattr__(self, "magnitudes", tuple(self.magnitudes))
        if self.kind == "odd_pairwise_plus_one" and self.leftover is None:
            raise ValidationError("odd scheme needs a leftover detuning", "leftover")
        if self.kind != "odd_pairwise_plus_one" and self.leftover is not None:
            raise ValidationError("leftover only applies to the odd scheme", "leftover")
        if self.kind == "identical" and (self.n_atoms is None or self.n_atoms < 1):
            raise ValidationError("identical scheme needs n_atoms >= 1", "n_atoms")

    def detunings(self) -> list[float]:
        if self.kind == "identical":
            value = self.magnitudes[0] if self.magnitudes else 0.0
            return [float(value)] * self.n_atoms
        if self.kind == "even_pairwise":
            return make_even_pairwise(self.magnitudes, self.permutation)
        return make_odd_chain(self.magnitudes, self.leftover, self.permutation)


def transparency_deviation(chain: EmitterChain, probe: float = 0.0) -> float:
    """``|1 - t|`` at ``probe``; zero means perfect transparency."""
    return abs(1 - chain_scatter(chain, probe).t)


def find_leftover(detunings: Sequence[float]) -> int:
    """Index of the one detuning left after matching every ``d`` with ``-d``."""
    values = list(detunings)
    if len(values) % 2 == 0:
        raise ValidationError("an odd-scheme chain has an odd number of sites", "detunings")
    for idx, candidate in enumerate(values):
        rest = values[:idx] + values[idx + 1 :]
        pos = sorted(v for v in rest if v > 0)
        neg = sorted(-v for v in rest if v < 0)
        if len(pos) + len(neg) == len(rest) and pos == neg:
            return idx
    raise ValidationError("detunings are not +/- pairs plus one leftover", "detunings")


def odd_chain_residual(chain: EmitterChain, probe_grid, leftover_index: int | None = None) -> float:
    """Largest gap between the odd chain's transmission and the leftover emitter's.

    At each grid value ``p`` the leftover emitter keeps its offset ``D_0``
    while every paired emitter is re-centred on the photon (its detuning
    from the photon stays ``-d_j``).  The chain transmission is compared
    with that of the leftover emitter alone at detuning ``p - D_0``.
    """
    probes = as_grid(probe_grid, "probe_grid")
    idx = find_leftover(chain.detunings) if leftover_index is None else int(leftover_index)
    if not 0 <= idx < chain.n_sites:
        raise ValidationError(f"leftover_index {idx} out of range", "leftover_index")
    delta0 = chain.detunings[idx]
    worst = 0.0
    for p in probes:
        moved = [delta0 if j == idx else p + d for j, d in enumerate(chain.detunings)]
        t_chain = chain_scatter(chain.with_detunings(moved), p).t
        t_single = single_atom_amplitudes(p - delta0, chain.gamma, chain.gamma0).t
        worst = max(worst, abs(t_chain - t_single))
    return worst


def resonant_floor(n_atoms: int, gamma: float, gamma0: float) -> float:
    """Transmission of ``n_atoms`` identical emitters on resonance: ``gamma0/(gamma0 + N gamma)``."""
    if int(n_atoms) != n_atoms or n_atoms < 1:
        raise ValidationError(f"n_atoms must be a positive integer, got {n_atoms}", "n_atoms")
    return gamma0 / (gamma0 + n_atoms * gamma)


def _crossing(x, y, level, lo, hi):
    """Bisect indices on a monotone run of ``y`` for the ``level`` crossing; interpolate."""
    rising = y[hi] > y[lo]
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if (y[mid] >= level) == rising:
            hi = mid
        else:
            lo = mid
    return x[lo] + (level - y[lo]) * (x[hi] - x[lo]) / (y[hi] - y[lo])


def collective_linewidth_fit(spectrum: Sequence[SpectrumRow], max_residual: float = 1e-2) -> float:
    """Half-width at half-depth of the dip in ``1 - |t|^2``.

    Raises :class:`ShapeError` if the dip does not cross half depth on both
    sides or deviates from a Lorentzian by more than ``max_residual`` (as a
    fraction of the depth).
    """
    if len(spectrum) < 3:
        raise ShapeError("need at least three spectrum rows")
    x = np.array([row.probe for row in spectrum])
    y = 1.0 - np.array([row.result.transmittance for row in spectrum])
    peak = int(np.argmax(y))
    depth = y[peak]
    half = 0.5 * depth
    if depth <= 0 or y[0] >= half or y[-1] >= half:
        raise ShapeError("dip does not fall below half depth on both sides of the grid")
    left = _crossing(x, y, half, 0, peak)
    right = _crossing(x, y, half, peak, len(x) - 1)
    width = 0.5 * (right - left)
    center = 0.5 * (right + left)
    model = depth * width**2 / ((x - center) ** 2 + width**2)
    residual = float(np.max(np.abs(y - model))) / depth
    if residual > max_residual:
        raise ShapeError(f"spectrum is not Lorentzian (relative residual {residual:.3g})")
    return float(width)
