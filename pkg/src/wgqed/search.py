"""Bounded one-dimensional maximization."""

import math

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI2 = (3 - math.sqrt(5)) / 2


def golden_section_max(f, lo, hi, tol=1e-10, polish=True):
    """Maximize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``.

    Golden-section shrinks the bracket to ``tol``.  Near a smooth interior
    maximum the function values stop resolving ``x`` long before that (the
    peak is flat to second order), so an optional three-point parabolic step
    with a wider stencil finishes the job.  Endpoints are always compared.
    """
    if hi < lo:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    if hi == lo:
        return lo, f(lo)
    a, b = lo, hi
    h = b - a
    c = a + INV_PHI2 * h
    d = a + INV_PHI * h
    yc, yd = f(c), f(d)
    n = max(int(math.ceil(math.log(tol / h) / math.log(INV_PHI))), 1)
    for _ in range(n):
        if yc > yd:
            b, d, yd = d, c, yc
            h = INV_PHI * h
            c = a + INV_PHI2 * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)
    x, fx = (c, yc) if yc > yd else (d, yd)

    if polish:
        step = 1e-5 * max(1.0, abs(x), hi - lo)
        if lo <= x - step and x + step <= hi:
            fm, fp = f(x - step), f(x + step)
            curv = fm - 2 * fx + fp
            if curv < 0:
                shift = 0.5 * step * (fm - fp) / curv
                if abs(shift) <= step:
                    x = x + shift
                    fx = f(x)

    for edge in (lo, hi):
        fe = f(edge)
        if fe > fx:
            x, fx = edge, fe
    return x, fx
