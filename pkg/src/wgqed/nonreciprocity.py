"""Direction dependence of reflection from two detuned emitters.

Two emitters with frequencies ``omega_1`` and ``omega_2`` are parameterized
by the photon's mean detuning ``Dbar = v_g k - (omega_1 + omega_2)/2`` and the
splitting ``s = omega_1 - omega_2``.  ``r12`` is the reflection when the
photon meets ``omega_1`` first; swapping the emitters is the same as
flipping the sign of ``s``.  The ratio ``eta = |r12/r21|^2`` is 1 for
reciprocal transport, and ``eta(-s) = 1/eta(s)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from . import _backend
from .errors import PoleError, UndefinedRatioError, ValidationError
from .model import EmitterChain, _finite, as_grid
from .search import golden_section_max
from .transfer import chain_scatter

TAN_SINGULAR_COS = 1e-9


@dataclass(frozen=True)
class TwoAtomConfig:
    mean_detuning: float
    splitting: float
    gamma: float
    gamma0: float
    theta: float

    def __post_init__(self):
        for name in ("mean_detuning", "splitting", "gamma", "gamma0", "theta"):
            object.__setattr__(self, name, _finite(getattr(self, name), name))
        if self.gamma <= 0:
            raise ValidationError(f"gamma must be positive, got {self.gamma}", "gamma")
        if self.gamma0 < 0:
            raise ValidationError(f"gamma0 must be non-negative, got {self.gamma0}", "gamma0")

    def flipped(self) -> "TwoAtomConfig":
        """Same emitters in the opposite order (``s -> -s``)."""
        return replace(self, splitting=-self.splitting)

    def to_chain(self) -> EmitterChain:
        """Two-site chain, probed at ``mean_detuning``, with ``omega_1`` met first.

        The transfer product meets the last site first, so ``omega_1``
        (offset ``+s/2``) goes at the end of the list.
        """
        half = 0.5 * self.splitting
        return EmitterChain(self.gamma, self.gamma0, (-half, half), (self.theta, self.theta))


def _reflection_parts(cfg):
    a = cmath.exp(2j * cfg.theta)
    g = cfg.gamma
    base = g * g * (a - 1) + 1j * g * (a + 1) * complex(cfg.mean_detuning, cfg.gamma0)
    skew = 1j * g * (a - 1) * (0.5 * cfg.splitting)
    denom = complex(cfg.mean_detuning, g + cfg.gamma0) ** 2 + g * g * a - (0.5 * cfg.splitting) ** 2
    return base, skew, denom


def two_atom_reflection(cfg: TwoAtomConfig) -> complex:
    """Closed-form ``r12`` for phase ``alpha = 2 theta``.

    ``r = -[G^2 (e^{ia} - 1) + iG((e^{ia} + 1)(Dbar + iG0) - (e^{ia} - 1) s/2)]
    / [(Dbar + i(G + G0))^2 + G^2 e^{ia} - (s/2)^2]``
    """
    base, skew, denom = _reflection_parts(cfg)
    if denom == 0:
        raise PoleError("two-atom reflection denominator vanishes")
    return -(base - skew) / denom


def _ratio(num, den, r12=None, r21=None):
    if den == 0:
        if num == 0:
            return 1.0  # only at s = 0, theta = n pi or gamma0 = 0: reciprocal
        raise UndefinedRatioError("reverse reflection vanishes; eta is unbounded", r12, r21)
    return num / den


def eta_closed_form(cfg: TwoAtomConfig) -> float:
    """Non-reciprocity ratio from the tan-form expression.

    Where ``cos(theta)`` vanishes the tan form is singular and the ratio of
    the two closed-form reflection amplitudes is used instead.
    """
    if abs(math.cos(cfg.theta)) < TAN_SINGULAR_COS:
        base, skew, _ = _reflection_parts(cfg)
        return _ratio(abs(base - skew) ** 2, abs(base + skew) ** 2)
    tn = math.tan(cfg.theta)
    half = 0.5 * cfg.splitting
    common = (cfg.mean_detuning + cfg.gamma * tn) ** 2
    return _ratio(
        common + (half * tn - cfg.gamma0) ** 2,
        common + (half * tn + cfg.gamma0) ** 2,
    )


def eta_numeric(cfg: TwoAtomConfig) -> float:
    """``|r12/r21|^2`` with both orderings computed by the transfer engine."""
    r12 = chain_scatter(cfg.to_chain(), cfg.mean_detuning).r
    r21 = chain_scatter(cfg.flipped().to_chain(), cfg.mean_detuning).r
    if abs(r21) < 1e-300:
        raise UndefinedRatioError(f"r21 vanishes (r12 = {r12!r}, r21 = {r21!r})", r12, r21)
    return abs(r12 / r21) ** 2


def analytic_optimum(theta: float, gamma: float, gamma0: float) -> tuple[float, float]:
    """Stationary point of eta over ``s`` at ``mean_detuning = 0``.

    With ``c = sqrt(gamma0^2 + gamma^2 tan^2 theta)`` the maximum sits at
    ``(s/2) tan theta = -c`` and equals ``(c + gamma0)/(c - gamma0)``.
    Returns ``(s_star, eta_star)``; ``s_star`` is positive for
    ``tan theta < 0``.
    """
    tn = math.tan(theta)
    c = math.hypot(gamma0, gamma * tn)
    # c == gamma0 also catches tan(n pi) rounding to a tiny nonzero value
    if tn == 0 or gamma0 == 0 or c == gamma0:
        raise ValidationError("no isolated maximum when tan(theta) = 0 or gamma0 = 0", "theta")
    return -2 * c / tn, (c + gamma0) / (c - gamma0)


@dataclass(frozen=True)
class EtaField:
    """eta tabulated with ``theta_grid`` along rows and ``s_grid`` along columns."""

    theta_grid: np.ndarray
    s_grid: np.ndarray
    values: np.ndarray

    def rows(self):
        """``(theta, s, eta)`` triples in row-major order."""
        for i, theta in enumerate(self.theta_grid):
            for j, s in enumerate(self.s_grid):
                yield float(theta), float(s), float(self.values[i, j])

    def argmax(self) -> tuple[float, float, float]:
        """First maximum in row-major order."""
        i, j = np.unravel_index(int(np.argmax(self.values)), self.values.shape)
        return float(self.theta_grid[i]), float(self.s_grid[j]), float(self.values[i, j])

    def column_argmax(self, theta_index: int) -> tuple[float, float]:
        """``(s, eta)`` of the largest value at fixed ``theta_grid[theta_index]``."""
        j = int(np.argmax(self.values[theta_index]))
        return float(self.s_grid[j]), float(self.values[theta_index, j])


def eta_map(theta_grid, s_grid, gamma, gamma0, mean_detuning=0.0) -> EtaField:
    """Evaluate eta on the outer product of two strictly increasing grids."""
    thetas = as_grid(theta_grid, "theta_grid")
    splittings = as_grid(s_grid, "s_grid")
    TwoAtomConfig(mean_detuning, 0.0, gamma, gamma0, 0.0)  # parameter validation
    values, status = _backend.kernels.eta_grid(
        thetas, splittings, float(gamma), float(gamma0), float(mean_detuning), _backend.thread_count()
    )
    if np.any(status):
        i, j = np.argwhere(status)[0]
        raise UndefinedRatioError(
            f"eta unbounded at theta = {thetas[i]!r}, s = {splittings[j]!r}"
        )
    return EtaField(thetas, splittings, values)


@dataclass(frozen=True)
class EtaOptimum:
    theta: float
    s: float
    eta: float


def _interval(rng, name):
    try:
        lo, hi = (_finite(v, name) for v in rng)
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must be a (low, high) pair", name) from None
    if hi < lo:
        raise ValidationError(f"{name} low {lo} exceeds high {hi}", name)
    return lo, hi


def eta_argmax(theta_range, s_range, gamma, gamma0, mean_detuning=0.0, scan=(61, 201), tol=1e-10,
               max_sweeps=200) -> EtaOptimum:
    """Locate the largest eta in a (theta, s) rectangle.

    A coarse grid (``scan`` points per axis; a zero-width axis is held fixed)
    picks the first row-major maximum, then alternating golden-section
    searches refine theta and s inside the neighbouring grid cells.
    """
    t_lo, t_hi = _interval(theta_range, "theta_range")
    s_lo, s_hi = _interval(s_range, "s_range")
    if t_lo == t_hi and s_lo == s_hi:
        raise ValidationError("search region is a single point", "theta_range")
    nt, ns = scan
    thetas = np.array([t_lo]) if t_lo == t_hi else np.linspace(t_lo, t_hi, nt)
    splittings = np.array([s_lo]) if s_lo == s_hi else np.linspace(s_lo, s_hi, ns)
    field = eta_map(thetas, splittings, gamma, gamma0, mean_detuning)
    i, j = np.unravel_index(int(np.argmax(field.values)), field.values.shape)
    theta, s = float(thetas[i]), float(splittings[j])
    t_box = (float(thetas[max(i - 1, 0)]), float(thetas[min(i + 1, thetas.size - 1)]))
    s_box = (float(splittings[max(j - 1, 0)]), float(splittings[min(j + 1, splittings.size - 1)]))

    def eta_at(th, sv):
        return eta_closed_form(TwoAtomConfig(mean_detuning, sv, gamma, gamma0, th))

    best = eta_at(theta, s)
    for _ in range(max_sweeps):
        old = (theta, s)
        if s_box[0] < s_box[1]:
            s, best = golden_section_max(lambda v: eta_at(theta, v), *s_box, tol=tol)
        if t_box[0] < t_box[1]:
            theta, best = golden_section_max(lambda v: eta_at(v, s), *t_box, tol=tol)
        if abs(theta - old[0]) <= tol and abs(s - old[1]) <= tol:
            break
    return EtaOptimum(theta, s, best)
