"""Reflection and transmission of a photon through an emitter chain.

``chain_scatter`` is the production path (transfer-matrix product evaluated
by the selected kernel).  ``commensurate_scatter`` is the closed form valid
when every phase is a multiple of pi.  ``fabry_perot_two_atom`` and
``segment_solve`` are independent cross-checks that never touch the transfer
matrices.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import CommensurabilityError, NumericalDegeneracyError, SingularSiteError
from .model import EmitterChain, ScatteringResult, Transfer2x2, _finite, as_grid

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
# Nilpotent: RHO_MINUS @ RHO_MINUS == 0.
RHO_MINUS = SIGMA_Y - 1j * SIGMA_Z

COMMENSURATE_TOL = 1e-9
# above this the segment system is singular to working precision
SEGMENT_MAX_COND = 1e12


def single_site_matrix(delta_scaled: complex, theta: float) -> Transfer2x2:
    """Transfer matrix of one emitter followed by a propagation phase ``theta``.

    Raises
    ------
    SingularSiteError
        If ``delta_scaled == 0`` (lossless emitter exactly on resonance); the
        limiting amplitudes are ``r = -1``, ``t = 0``.
    """
    delta_scaled = complex(delta_scaled)
    if delta_scaled == 0:
        raise SingularSiteError("transfer matrix diverges for delta = 0 (resonant lossless site)")
    inv = 1.0 / delta_scaled
    e = cmath.exp(1j * theta)
    ec = cmath.exp(-1j * theta)
    return Transfer2x2(e * (1 - 1j * inv), -1j * ec * inv, 1j * e * inv, ec * (1 + 1j * inv))


def chain_matrix(chain: EmitterChain, probe: float) -> Transfer2x2:
    """Plain product ``L_N ... L_1`` (site 1 applied first)."""
    from .model import scaled_detunings

    product = Transfer2x2.identity()
    for delta, theta in zip(scaled_detunings(chain, probe), chain.phases):
        product = single_site_matrix(delta, theta) @ product
    return product


def scatter_arrays(chain: EmitterChain, probes) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``chain_scatter``: complex arrays ``(r, t)`` over ``probes``."""
    probes = np.ascontiguousarray(probes, dtype=float)
    r, t, status = _backend.kernels.scatter_grid(
        np.asarray(chain.detunings),
        np.asarray(chain.phases),
        chain.gamma,
        chain.gamma0,
        probes,
        _backend.thread_count(),
    )
    if np.any(status):
        bad = probes[np.flatnonzero(status)[0]]
        raise NumericalDegeneracyError(f"transfer product has vanishing P22 at probe {bad!r}")
    return r, t


def chain_scatter(chain: EmitterChain, probe: float) -> ScatteringResult:
    """Amplitudes from the transfer product: ``r = P12/P22``, ``t = exp(-i sum theta)/P22``.

    A lossless site exactly on resonance is handled through its analytic
    limit, so no probe value is excluded.
    """
    probe = _finite(probe, "probe")
    r, t = scatter_arrays(chain, [probe])
    return ScatteringResult(complex(r[0]), complex(t[0]))


def _check_commensurate(chain):
    for j, theta in enumerate(chain.phases, start=1):
        n = round(theta / math.pi)
        if abs(theta - n * math.pi) > COMMENSURATE_TOL:
            raise CommensurabilityError(
                f"phase theta_{j} = {theta!r} is not a multiple of pi", field=f"phases[{j - 1}]"
            )


def commensurate_scatter(chain: EmitterChain, probe: float) -> ScatteringResult:
    """Closed form for phases that are all multiples of pi.

    With ``S = sum_j 1/(Delta_j + i gamma0)``: ``r = -i gamma S/(1 + i gamma S)``
    and ``t = 1/(1 + i gamma S)``.  The product prefactor ``(-1)^(sum n_j)``
    cancels the propagation phase ``exp(-i sum theta_j)`` exactly, so ``t``
    carries no extra sign.  A lossless resonant site sends ``S`` to infinity,
    giving ``r = -1``, ``t = 0``.
    """
    probe = _finite(probe, "probe")
    _check_commensurate(chain)
    total = 0j
    for d in chain.detunings:
        z = complex(probe - d, chain.gamma0)
        if z == 0:
            return ScatteringResult(-1 + 0j, 0j)
        total += 1.0 / z
    g = chain.gamma
    if not cmath.isfinite(total):
        # some |Delta_j + i gamma0| below ~1e-308: the mirror limit to double precision
        return ScatteringResult(-1 + 0j, 0j)
    if abs(total) <= 1:
        denom = 1 + 1j * g * total
        return ScatteringResult(-1j * g * total / denom, 1 / denom)
    inv = 1 / total
    denom = inv + 1j * g
    return ScatteringResult(-1j * g / denom, inv / denom)


def single_atom_amplitudes(delta: float, gamma: float, gamma0: float) -> ScatteringResult:
    """One emitter at detuning ``delta``; note ``t = 1 + r``."""
    denom = complex(delta, gamma + gamma0)
    return ScatteringResult(-1j * gamma / denom, complex(delta, gamma0) / denom)


def fabry_perot_two_atom(chain: EmitterChain, probe: float) -> ScatteringResult:
    """Two-emitter amplitudes summed as a multiple-reflection series.

    The photon meets site 2 first; site 1 sits a phase ``theta_2`` further
    on.  Single-atom amplitudes are combined as for a two-mirror cavity.
    """
    if chain.n_sites != 2:
        raise ValueError(f"fabry_perot_two_atom needs exactly 2 sites, got {chain.n_sites}")
    probe = _finite(probe, "probe")
    g, g0 = chain.gamma, chain.gamma0
    near = single_atom_amplitudes(probe - chain.detunings[1], g, g0)
    far = single_atom_amplitudes(probe - chain.detunings[0], g, g0)
    round_trip = cmath.exp(2j * chain.phases[1])
    denom = 1 - near.r * far.r * round_trip
    if abs(denom) < 1e-300:
        raise NumericalDegeneracyError("multiple-reflection series diverges (1 - r1 r2 e^{2i phi} = 0)")
    t = near.t * far.t / denom
    r = near.r + near.t**2 * far.r * round_trip / denom
    return ScatteringResult(r, t)


def segment_solve(chain: EmitterChain, probe: float) -> ScatteringResult:
    """Solve for all plane-wave amplitudes of the scattering state at once.

    The field between emitters is ``A_m e^{ikx} + B_m e^{-ikx}`` (segments
    ``m = 0..N`` in the order the photon meets them).  At an emitter at
    ``kx = phi`` with scaled detuning ``delta`` the field is continuous and
    its derivative jumps::

        delta [(A_m - A_{m-1}) e^{i phi} - (B_m - B_{m-1}) e^{-i phi}]
            + 2i (A_m e^{i phi} + B_m e^{-i phi}) = 0

    Boundary conditions ``A_0 = 1`` and ``B_N = 0`` close the system; then
    ``r = B_0`` and ``t = A_N``.  Raises ``NumericalDegeneracyError`` when the
    system's condition number exceeds ``SEGMENT_MAX_COND``.
    """
    probe = _finite(probe, "probe")
    n = chain.n_sites
    size = 2 * n + 2
    m = np.zeros((size, size), dtype=complex)
    rhs = np.zeros(size, dtype=complex)
    m[0, 0] = 1.0
    rhs[0] = 1.0
    m[1, 2 * n + 1] = 1.0
    phases = chain.phases
    for seg in range(1, n + 1):
        site = n - seg  # photon meets the last-listed site first
        phi = math.fsum(phases[site + 1 :])
        e = cmath.exp(1j * phi)
        ec = cmath.exp(-1j * phi)
        delta = complex(probe - chain.detunings[site], chain.gamma0) / chain.gamma
        a_prev, b_prev, a_next, b_next = 2 * seg - 2, 2 * seg - 1, 2 * seg, 2 * seg + 1
        row = 2 * seg
        m[row, a_prev] = e
        m[row, b_prev] = ec
        m[row, a_next] = -e
        m[row, b_next] = -ec
        row += 1
        m[row, a_next] = (delta + 2j) * e
        m[row, a_prev] = -delta * e
        m[row, b_next] = (2j - delta) * ec
        m[row, b_prev] = delta * ec
    cond = np.linalg.cond(m)
    if not cond < SEGMENT_MAX_COND:
        # nearly coincident mirrors: the solve would return noise
        raise NumericalDegeneracyError(f"segment system is numerically singular (condition number {cond:.3g})")
    x = np.linalg.solve(m, rhs)
    return ScatteringResult(complex(x[1]), complex(x[2 * n]))


@dataclass(frozen=True)
class SpectrumRow:
    probe: float
    result: ScatteringResult


def spectrum(chain: EmitterChain, probe_grid) -> list[SpectrumRow]:
    """``chain_scatter`` at every grid point, in grid order."""
    probes = as_grid(probe_grid, "probe_grid")
    r, t = scatter_arrays(chain, probes)
    return [
        SpectrumRow(float(p), ScatteringResult(complex(ri), complex(ti)))
        for p, ri, ti in zip(probes, r, t)
    ]
