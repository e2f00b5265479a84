"""Data model for a chain of two-level emitters side-coupled to a waveguide.

All rates and frequency offsets are real numbers in the same (arbitrary)
unit; the waveguide decay rate ``gamma`` sets the scale.  Atoms are described
by their offsets ``d_j = omega_j - omega_ref`` from a reference frequency and
the photon by its probe detuning ``Delta_probe = v_g k - omega_ref``, so the
per-atom detuning is ``Delta_j = Delta_probe - d_j``.

Site ordering follows the transfer product ``P = L_N ... L_1``: amplitudes
computed from a chain describe a photon that reaches site ``N`` first and
site ``1`` last.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import ValidationError


def _finite(value, field):
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{field} must be a real number, got {value!r}", field) from None
    if not math.isfinite(x):
        raise ValidationError(f"{field} must be finite, got {x}", field)
    return x


@dataclass(frozen=True)
class EmitterChain:
    """Emitters on a waveguide.

    Attributes
    ----------
    gamma : float
        Waveguide-mediated decay rate, ``> 0``.
    gamma0 : float
        Decay rate into non-guided channels, ``>= 0``.
    detunings : tuple of float
        Atomic frequency offsets ``d_j`` from the reference frequency.
    phases : tuple of float
        Propagation phase ``k l_j`` (radians) attached to site ``j``.
    """

    gamma: float
    gamma0: float
    detunings: tuple
    phases: tuple

    def __post_init__(self):
        gamma = _finite(self.gamma, "gamma")
        gamma0 = _finite(self.gamma0, "gamma0")
        if gamma <= 0:
            raise ValidationError(f"gamma must be positive, got {gamma}", "gamma")
        if gamma0 < 0:
            raise ValidationError(f"gamma0 must be non-negative, got {gamma0}", "gamma0")
        dets = tuple(_finite(d, "detunings") for d in self.detunings)
        phases = tuple(_finite(p, "phases") for p in self.phases)
        if not dets:
            raise ValidationError("chain needs at least one emitter", "detunings")
        if len(dets) != len(phases):
            raise ValidationError(
                f"detunings has {len(dets)} entries but phases has {len(phases)}", "phases"
            )
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "gamma0", gamma0)
        object.__setattr__(self, "detunings", dets)
        object.__setattr__(self, "phases", phases)

    @property
    def n_sites(self) -> int:
        return len(self.detunings)

    def __len__(self):
        return len(self.detunings)

    def reordered(self, order: Sequence[int]) -> "EmitterChain":
        """Chain with sites (detuning and phase together) taken in ``order``."""
        return EmitterChain(
            self.gamma,
            self.gamma0,
            tuple(self.detunings[i] for i in order),
            tuple(self.phases[i] for i in order),
        )

    def with_detunings(self, detunings) -> "EmitterChain":
        return EmitterChain(self.gamma, self.gamma0, tuple(detunings), self.phases)

    def scaled(self, factor: float) -> "EmitterChain":
        """Every rate and offset multiplied by ``factor`` (phases untouched)."""
        return EmitterChain(
            self.gamma * factor,
            self.gamma0 * factor,
            tuple(d * factor for d in self.detunings),
            self.phases,
        )


def build_chain(gamma, gamma0, detunings, phases) -> EmitterChain:
    """Validated chain; ``phases`` must have one entry per emitter."""
    return EmitterChain(gamma, gamma0, tuple(detunings), tuple(phases))


def uniform_chain(gamma, gamma0, detunings, theta=math.pi) -> EmitterChain:
    """Chain with the same propagation phase ``theta`` on every site."""
    dets = tuple(detunings)
    return EmitterChain(gamma, gamma0, dets, (theta,) * len(dets))


def scaled_detunings(chain: EmitterChain, probe: float) -> list:
    """Complex ``delta_j = (probe - d_j + i gamma0) / gamma`` in site order."""
    probe = _finite(probe, "probe")
    return [complex(probe - d, chain.gamma0) / chain.gamma for d in chain.detunings]


@dataclass(frozen=True)
class ScatteringResult:
    """Reflection and transmission amplitudes at one probe detuning."""

    r: complex
    t: complex

    @property
    def reflectance(self) -> float:
        return abs(self.r) ** 2

    @property
    def transmittance(self) -> float:
        return abs(self.t) ** 2

    @property
    def loss(self) -> float:
        return 1.0 - self.reflectance - self.transmittance


@dataclass(frozen=True)
class Transfer2x2:
    """2x2 complex transfer matrix ``[[m11, m12], [m21, m22]]``."""

    m11: complex
    m12: complex
    m21: complex
    m22: complex

    @classmethod
    def identity(cls) -> "Transfer2x2":
        return cls(1.0 + 0j, 0j, 0j, 1.0 + 0j)

    @classmethod
    def from_array(cls, a) -> "Transfer2x2":
        a = np.asarray(a, dtype=complex)
        return cls(complex(a[0, 0]), complex(a[0, 1]), complex(a[1, 0]), complex(a[1, 1]))

    def det(self) -> complex:
        return self.m11 * self.m22 - self.m12 * self.m21

    def __matmul__(self, other: "Transfer2x2") -> "Transfer2x2":
        return Transfer2x2(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def as_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]], dtype=complex)


@dataclass(frozen=True)
class SweepGrid:
    """Evenly spaced grid of ``count`` points from ``start`` to ``stop`` inclusive."""

    start: float
    stop: float
    count: int

    def __post_init__(self):
        start = _finite(self.start, "start")
        stop = _finite(self.stop, "stop")
        if int(self.count) != self.count or self.count < 2:
            raise ValidationError(f"grid count must be an integer >= 2, got {self.count}", "count")
        if not start < stop:
            raise ValidationError(f"grid start {start} must be below stop {stop}", "start")
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "stop", stop)
        object.__setattr__(self, "count", int(self.count))

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    def __iter__(self) -> Iterator[float]:
        return iter(self.values().tolist())

    def __len__(self):
        return self.count


def as_grid(grid, field="grid") -> np.ndarray:
    """Grid values as a float array; must be non-empty, finite, strictly increasing."""
    values = grid.values() if isinstance(grid, SweepGrid) else np.asarray(grid, dtype=float).ravel()
    if values.size == 0:
        raise ValidationError(f"{field} is empty", field)
    if not np.all(np.isfinite(values)):
        raise ValidationError(f"{field} contains non-finite values", field)
    if values.size > 1 and not np.all(np.diff(values) > 0):
        raise ValidationError(f"{field} must be strictly increasing", field)
    return values
