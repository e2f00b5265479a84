"""Emitters at the antinodes of a driven two-sided cavity.

Atom detunings here follow the cavity convention ``Delta_j = omega_j -
omega_laser`` (atom minus laser), the opposite sign to the waveguide
modules.  Internal cavity loss and atomic damping are zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PoleError, ShapeError, ValidationError
from .model import ScatteringResult, _finite, as_grid, uniform_chain
from .transfer import commensurate_scatter


@dataclass(frozen=True)
class CavitySystem:
    kappa: float
    g: float
    cavity_detuning: float
    atom_detunings: tuple

    def __post_init__(self):
        kappa = _finite(self.kappa, "kappa")
        g = _finite(self.g, "g")
        if kappa <= 0:
            raise ValidationError(f"kappa must be positive, got {kappa}", "kappa")
        if g < 0:
            raise ValidationError(f"g must be non-negative, got {g}", "g")
        dets = tuple(_finite(d, "atom_detunings") for d in self.atom_detunings)
        if not dets:
            raise ValidationError("cavity needs at least one atom", "atom_detunings")
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "cavity_detuning", _finite(self.cavity_detuning, "cavity_detuning"))
        object.__setattr__(self, "atom_detunings", dets)

    @property
    def n_atoms(self) -> int:
        return len(self.atom_detunings)

    @property
    def collective_linewidth(self) -> float:
        """``N g^2 / (2 kappa)``."""
        return self.n_atoms * self.g**2 / (2 * self.kappa)


def cavity_transmission(sys: CavitySystem) -> complex:
    """``t = 2 kappa / (2 kappa + i (delta - g^2 sum_j 1/Delta_j))``."""
    if sys.g == 0:
        return 2 * sys.kappa / complex(2 * sys.kappa, sys.cavity_detuning)
    if any(d == 0 for d in sys.atom_detunings):
        raise PoleError("an atom is resonant with the laser; t -> 0 in the limit")
    shift = sys.cavity_detuning - sys.g**2 * sum(1.0 / d for d in sys.atom_detunings)
    return 2 * sys.kappa / complex(2 * sys.kappa, shift)


def waveguide_correspondence(sys: CavitySystem) -> ScatteringResult:
    """Equivalent waveguide chain for a resonant cavity (``delta = 0``).

    Maps to identical-phase commensurate emitters with ``gamma = g^2/(2
    kappa)``, ``gamma0 = 0`` and waveguide detunings ``-Delta_j``.
    """
    if sys.cavity_detuning != 0:
        raise ValidationError("correspondence requires cavity_detuning = 0", "cavity_detuning")
    if sys.g == 0:
        return ScatteringResult(0j, 1 + 0j)
    if any(d == 0 for d in sys.atom_detunings):
        raise PoleError("an atom is resonant with the laser; t -> 0 in the limit")
    # Probe 0 with offsets d_j = Delta_j gives waveguide detuning 0 - d_j = -Delta_j.
    chain = uniform_chain(sys.g**2 / (2 * sys.kappa), 0.0, sys.atom_detunings)
    return commensurate_scatter(chain, 0.0)


@dataclass(frozen=True)
class CavityScan:
    probes: np.ndarray
    t: np.ndarray
    poles: np.ndarray  # True where t was replaced by its limit 0


def cavity_scan(kappa, g, cavity_offset, atom_offsets, probe_grid) -> CavityScan:
    """Sweep the laser across a grid of offsets ``p = omega_laser - omega_ref``.

    ``cavity_offset`` and ``atom_offsets`` are measured from the same
    reference, so at each ``p`` the cavity detuning is ``cavity_offset - p``
    and atom ``j`` sits at ``atom_offsets[j] - p``.
    """
    probes = as_grid(probe_grid, "probe_grid")
    t = np.empty(probes.size, dtype=complex)
    poles = np.zeros(probes.size, dtype=bool)
    for i, p in enumerate(probes):
        sys = CavitySystem(kappa, g, cavity_offset - p, tuple(a - p for a in atom_offsets))
        try:
            t[i] = cavity_transmission(sys)
        except PoleError:
            t[i] = 0j
            poles[i] = True
    return CavityScan(probes, t, poles)


def identical_half_depth(kappa, g, n_atoms, detuning_grid) -> float:
    """Atom detuning where ``|t|^2`` of a resonant cavity with ``n_atoms``
    identical atoms climbs back to 1/2.

    The dip in ``1 - |t|^2`` has depth 1 (the pole at zero detuning), so
    this is the half-depth point.  ``detuning_grid`` must be positive; the
    first crossing is located by linear interpolation.
    """
    grid = as_grid(detuning_grid, "detuning_grid")
    if grid[0] <= 0:
        raise ValidationError("detuning_grid must be positive", "detuning_grid")
    T = np.array([abs(cavity_transmission(CavitySystem(kappa, g, 0.0, (d,) * n_atoms))) ** 2 for d in grid])
    above = np.flatnonzero(T >= 0.5)
    if above.size == 0 or above[0] == 0:
        raise ShapeError("half-depth point is not bracketed by the grid")
    k = int(above[0])
    x0, x1, y0, y1 = grid[k - 1], grid[k], T[k - 1], T[k]
    return float(x0 + (0.5 - y0) * (x1 - x0) / (y1 - y0))
