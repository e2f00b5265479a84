"""NumPy implementation of the hot kernels.

Used when the compiled extension is unavailable or ``WGQED_PURE_PYTHON=1``.
Signatures and status codes match ``_ckernels.pyx`` exactly; ``num_threads``
is accepted and ignored.
"""

import math

import numpy as np

# Below this |cos(theta)| the tan-form ratio is replaced by the amplitude ratio.
TAN_SINGULAR_COS = 1e-9
DEGENERATE = 1e-300
# Below this many probes a plain Python loop beats NumPy's per-call overhead.
SCALAR_PROBES = 8


# The running product is rescaled only when its size leaves this window.
RESCALE_LOW = 2.0**-16
RESCALE_HIGH = 2.0**500
# Sites closer to resonance than this act as exact mirrors.  Below it delta^2
# terms of the product would underflow; the amplitude error is O(|delta|).
MIRROR_DELTA = 2.0**-480


def _scalar_shift(norm):
    if RESCALE_LOW <= norm <= RESCALE_HIGH:
        return 0
    return -math.frexp(norm)[1]


def _array_shift(norm):
    outside = (norm < RESCALE_LOW) | (norm > RESCALE_HIGH)
    return np.where(outside, -np.frexp(norm)[1], 0)


class _ScalarOps:
    select = staticmethod(lambda mask, x, y: x if mask else y)
    shift = staticmethod(_scalar_shift)
    exponent = staticmethod(lambda x: math.frexp(x)[1])
    ldexp = staticmethod(math.ldexp)


class _ArrayOps:
    select = staticmethod(np.where)
    shift = staticmethod(_array_shift)
    exponent = staticmethod(lambda x: np.frexp(x)[1])
    ldexp = staticmethod(np.ldexp)


def _mul(ar, ai, br, bi):
    return ar * br - ai * bi, ar * bi + ai * br


def _div(ar, ai, br, bi, ops):
    """Smith's complex division; ``b`` must be nonzero."""
    wide = abs(br) >= abs(bi)
    big = ops.select(wide, br, bi)
    small = ops.select(wide, bi, br)
    ratio = small / big
    den = big + small * ratio
    re = ops.select(wide, (ar + ai * ratio) / den, (ar * ratio + ai) / den)
    im = ops.select(wide, (ai - ar * ratio) / den, (ai * ratio - ar) / den)
    return re, im


def _product(sites, gamma, gamma0, probe, ops):
    """Rotated-basis chain product for one probe (float) or many (array).

    Written in real arithmetic only, so the scalar, vector and compiled
    paths perform the same IEEE operations and agree bit for bit.
    Returns ``(p12, p22, scale)`` as (re, im) pairs.
    """
    loss = gamma0 / gamma
    ar, ai, br, bi, cr, ci, dr_, di_ = 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0
    sr, si = 1.0, 0.0
    for det, cs, sn in sites:
        dr = (probe - det) / gamma
        # a lossless resonant site is a perfect mirror: sites already in the
        # product lie behind it, and its rank-1 matrix alone fixes r
        mirror = abs(dr) + abs(loss) < MIRROR_DELTA
        dr, di = ops.select(mirror, 0.0, dr), ops.select(mirror, 0.0, loss)
        w = 1.0 / (abs(dr) + abs(di) + 1.0)
        k11r, k11i = dr * cs * w, di * cs * w
        k12r, k12i = -di * sn * w, dr * sn * w
        k21r, k21i = -di * sn * w, (dr * sn - 2.0 * cs) * w
        k22r, k22i = (dr * cs + 2.0 * sn) * w, di * cs * w
        t1, t2 = _mul(k11r, k11i, ar, ai), _mul(k12r, k12i, cr, ci)
        n11 = (t1[0] + t2[0], t1[1] + t2[1])
        t1, t2 = _mul(k11r, k11i, br, bi), _mul(k12r, k12i, dr_, di_)
        n12 = (t1[0] + t2[0], t1[1] + t2[1])
        t1, t2 = _mul(k21r, k21i, ar, ai), _mul(k22r, k22i, cr, ci)
        n21 = (t1[0] + t2[0], t1[1] + t2[1])
        t1, t2 = _mul(k21r, k21i, br, bi), _mul(k22r, k22i, dr_, di_)
        n22 = (t1[0] + t2[0], t1[1] + t2[1])
        ar, ai = ops.select(mirror, k11r, n11[0]), ops.select(mirror, k11i, n11[1])
        br, bi = ops.select(mirror, k12r, n12[0]), ops.select(mirror, k12i, n12[1])
        cr, ci = ops.select(mirror, k21r, n21[0]), ops.select(mirror, k21i, n21[1])
        dr_, di_ = ops.select(mirror, k22r, n22[0]), ops.select(mirror, k22i, n22[1])
        # exact power-of-two rescaling so near-resonant chains cannot underflow
        shift = ops.shift(abs(ar) + abs(ai) + abs(br) + abs(bi) + abs(cr) + abs(ci) + abs(dr_) + abs(di_))
        ar, ai, br, bi = ops.ldexp(ar, shift), ops.ldexp(ai, shift), ops.ldexp(br, shift), ops.ldexp(bi, shift)
        cr, ci, dr_, di_ = ops.ldexp(cr, shift), ops.ldexp(ci, shift), ops.ldexp(dr_, shift), ops.ldexp(di_, shift)
        # shift first: multiplying by a power of two is exact, and sr * delta may underflow
        sr, si = _mul(ops.ldexp(sr, shift), ops.ldexp(si, shift), dr, di)
        sr, si = sr * w, si * w
    # one final normalization so the degeneracy test on P22 is relative to the product
    shift = -ops.exponent(abs(ar) + abs(ai) + abs(br) + abs(bi) + abs(cr) + abs(ci) + abs(dr_) + abs(di_))
    ar, ai, br, bi = ops.ldexp(ar, shift), ops.ldexp(ai, shift), ops.ldexp(br, shift), ops.ldexp(bi, shift)
    cr, ci, dr_, di_ = ops.ldexp(cr, shift), ops.ldexp(ci, shift), ops.ldexp(dr_, shift), ops.ldexp(di_, shift)
    sr, si = ops.ldexp(sr, shift), ops.ldexp(si, shift)
    # back to the original basis
    p12 = (0.5 * ((ar - dr_) - (br - cr)), 0.5 * ((ai - di_) - (bi - ci)))
    p22 = (0.5 * ((ar + dr_) - (br + cr)), 0.5 * ((ai + di_) - (bi + ci)))
    return p12, p22, (sr, si)


def scatter_grid(detunings, phases, gamma, gamma0, probes, num_threads=1):
    """Reflection/transmission of one chain at every probe detuning.

    Each site matrix is multiplied by ``c_j = delta_j w_j`` with ``w_j =
    1/(|Re delta_j| + |Im delta_j| + 1)``, which leaves ``r = P12/P22``
    unchanged, bounds the entries, and makes a lossless resonant site
    (``delta_j = 0``) finite; the factor is restored in ``t``.  The product
    is accumulated in the basis rotated by ``H = [[1, 1], [1, -1]]/sqrt(2)``,
    where a site matrix reads::

        w [[delta cos, i delta sin], [i delta sin - 2i cos, delta cos + 2 sin]]

    At commensurate phases its non-diagonal part is strictly triangular, so
    near-resonant sites multiply without cancellation.  The running product
    is rescaled by a power of two whenever its norm leaves
    ``[RESCALE_LOW, RESCALE_HIGH]``, and once more before the amplitudes are
    formed.  The factor is carried in ``t``.  A lossless site within
    ``MIRROR_DELTA`` of resonance is taken as an exact mirror.
    Returns ``(r, t, status)``; status 1 where ``P22`` vanished.
    """
    detunings = np.asarray(detunings, dtype=float)
    phases = np.asarray(phases, dtype=float)
    probes = np.asarray(probes, dtype=float)
    gamma, gamma0 = float(gamma), float(gamma0)
    total = 0.0
    for th in phases.tolist():
        total += th
    back = (math.cos(total), -math.sin(total))
    sites = [(float(x), math.cos(th), math.sin(th)) for x, th in zip(detunings.tolist(), phases.tolist())]
    n = probes.shape[0]
    r = np.full(n, np.nan, dtype=complex)
    t = np.full(n, np.nan, dtype=complex)
    status = np.zeros(n, dtype=np.int8)

    if n <= SCALAR_PROBES:
        for k, p in enumerate(probes.tolist()):
            p12, p22, scale = _product(sites, gamma, gamma0, p, _ScalarOps)
            if abs(p22[0]) + abs(p22[1]) < DEGENERATE:
                status[k] = 1
                continue
            r[k] = complex(*_div(*p12, *p22, _ScalarOps))
            t[k] = complex(*_div(*_mul(*back, *scale), *p22, _ScalarOps))
        return r, t, status

    with np.errstate(all="ignore"):
        p12, p22, scale = _product(sites, gamma, gamma0, probes, _ArrayOps)
        bad = abs(p22[0]) + abs(p22[1]) < DEGENERATE
        p22 = (np.where(bad, 1.0, p22[0]), np.where(bad, 0.0, p22[1]))
        rr, ri = _div(*p12, *p22, _ArrayOps)
        tr, ti = _div(*_mul(*back, *scale), *p22, _ArrayOps)
    ok = ~bad
    r.real[ok], r.imag[ok] = rr[ok], ri[ok]
    t.real[ok], t.imag[ok] = tr[ok], ti[ok]
    status[bad] = 1
    return r, t, status


def _ratio(num, den):
    """``num/den`` with 0/0 read as 1 and x/0 flagged; returns (value, status)."""
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    zero_den = den == 0.0
    both = zero_den & (num == 0.0)
    value = np.where(zero_den, np.where(both, 1.0, np.inf), num / np.where(zero_den, 1.0, den))
    status = (zero_den & ~both).astype(np.int8)
    return value, status


def eta_grid(thetas, splittings, gamma, gamma0, mean_detuning, num_threads=1):
    """Non-reciprocity ratio on a (theta, s) grid, theta along axis 0.

    Uses the tan-form expression away from ``cos(theta) = 0`` and the
    two-atom reflection-amplitude ratio on it.  Returns ``(eta, status)``;
    status 1 marks cells where the reverse reflection vanishes.
    """
    thetas = np.asarray(thetas, dtype=float)[:, None]
    s = np.asarray(splittings, dtype=float)[None, :]
    half = 0.5 * s
    cos = np.cos(thetas)
    singular = np.abs(cos) < TAN_SINGULAR_COS
    tan = np.where(singular, 0.0, np.tan(thetas))
    common = (mean_detuning + gamma * tan) ** 2
    eta5, st5 = _ratio(common + (half * tan - gamma0) ** 2, common + (half * tan + gamma0) ** 2)

    a = np.exp(2j * thetas)
    base = gamma**2 * (a - 1) + 1j * gamma * (a + 1) * (mean_detuning + 1j * gamma0)
    skew = 1j * gamma * (a - 1) * half
    eta4, st4 = _ratio(np.abs(base - skew) ** 2, np.abs(base + skew) ** 2)

    eta = np.where(singular, eta4, eta5)
    status = np.where(singular, st4, st5).astype(np.int8)
    return eta, status
