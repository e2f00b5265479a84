import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wgqed.errors import ShapeError, ValidationError
from wgqed.model import uniform_chain
from wgqed.transfer import chain_scatter, spectrum
from wgqed.transparency import (
    DetuningScheme,
    collective_linewidth_fit,
    find_leftover,
    make_even_pairwise,
    make_odd_chain,
    odd_chain_residual,
    resonant_floor,
    transparency_deviation,
)

PI = math.pi
# Pair magnitudes in units of gamma.  float(n pi) misses n pi by ~n 1e-16 and
# the transmission responds to that phase error like 1/delta^2, so clusters
# of pairs well inside the linewidth are genuinely not transparent to 1e-12.
magnitude_lists = st.lists(st.integers(10, 400), min_size=1, max_size=6, unique=True).map(
    lambda ks: [0.05 * k for k in ks]
)


def test_even_examples():
    assert make_even_pairwise([1]) == [1, -1]
    assert make_even_pairwise([1], "identity") == [1, -1]
    assert make_even_pairwise([1, 2], "interleaved") == [1, 2, -1, -2]
    assert make_even_pairwise([1], "reversed") == [-1, 1]
    assert make_even_pairwise([1, 2], [3, 0, 2, 1]) == [-2, 1, 2, -1]


def test_reversed_pair_still_transparent():
    for perm in ("identity", "reversed"):
        chain = uniform_chain(1, 0, make_even_pairwise([1], perm))
        assert transparency_deviation(chain) <= 1e-12


@pytest.mark.parametrize(
    "mags, perm",
    [([0.0], None), ([-1.0], None), ([1.0, 1.0], None), ([], None), ([1.0], [0, 0]), ([1.0], [0]), ([1.0], "shuffled")],
)
def test_even_errors(mags, perm):
    with pytest.raises(ValidationError):
        make_even_pairwise(mags, perm)


def test_odd_examples():
    assert make_odd_chain([2.0], 0.3, [0, 2, 1]) == [2.0, 0.3, -2.0]
    assert make_odd_chain([], 0.7) == [0.7]
    out = make_odd_chain([1, 2], 0.5, "reversed")
    assert len(out) == 5 and sorted(out) == [-2, -1, 0.5, 1, 2]
    with pytest.raises(ValidationError):
        make_odd_chain([1, 1], 0.5)


def test_scheme():
    assert DetuningScheme("identical", (0.4,), n_atoms=3).detunings() == [0.4] * 3
    assert DetuningScheme("even_pairwise", (1, 2), permutation="interleaved").detunings() == [1, 2, -1, -2]
    odd = DetuningScheme("odd_pairwise_plus_one", (1,), leftover=0.2).detunings()
    assert odd == [1, -1, 0.2]
    with pytest.raises(ValidationError):
        DetuningScheme("odd_pairwise_plus_one", (1,))
    with pytest.raises(ValidationError):
        DetuningScheme("even_pairwise", (1,), leftover=0.1)
    with pytest.raises(ValidationError):
        DetuningScheme("identical", (1,))
    with pytest.raises(ValidationError):
        DetuningScheme("random", (1,))


@given(magnitude_lists, st.randoms(), st.floats(0.2, 5.0), st.integers(0, 3))
def test_even_transparency_any_order(mags, rnd, gamma, n):
    perm = list(range(2 * len(mags)))
    rnd.shuffle(perm)
    dets = make_even_pairwise([gamma * m for m in mags], perm)
    res = chain_scatter(uniform_chain(gamma, 0, dets, n * PI), 0.0)
    assert abs(res.t - 1) <= 1e-12 and abs(res.r) <= 1e-12


def test_float_phase_offset_is_physical():
    # small pairs amplify the offset of float(2 pi); the deviation is real, not rounding
    chain = uniform_chain(1.0, 0, make_even_pairwise([0.05, 0.1, 0.15], [1, 3, 5, 0, 2, 4]), 2 * PI)
    assert 1e-12 < transparency_deviation(chain) < 2e-12


def test_deviation_with_loss():
    # |1 - t| = 2 G G0 / (D^2 + G0^2 + 2 G G0) with G = D = 1, G0 = 0.01
    chain = uniform_chain(1, 0.01, make_even_pairwise([1]))
    assert abs(transparency_deviation(chain) - 0.02 / 1.0201) <= 1e-15


def test_deviation_opaque_identical():
    assert abs(transparency_deviation(uniform_chain(1, 0, [0, 0, 0])) - 1) <= 1e-12


def test_find_leftover():
    assert find_leftover([2.0, 0.3, -2.0]) == 1
    assert find_leftover([0.5]) == 0
    assert find_leftover([1, 2, -1, 3, -2]) == 3
    with pytest.raises(ValidationError):
        find_leftover([1, -1])
    with pytest.raises(ValidationError):
        find_leftover([1, 2, 3])


@given(magnitude_lists, st.floats(-5, 5), st.randoms(), st.floats(0.2, 3.0))
def test_odd_reduction(mags, delta0, rnd, gamma):
    perm = list(range(2 * len(mags) + 1))
    rnd.shuffle(perm)
    chain = uniform_chain(gamma, 0, make_odd_chain([gamma * m for m in mags], gamma * delta0, perm))
    grid = gamma * np.linspace(-8, 8, 33)
    assert odd_chain_residual(chain, grid, perm.index(2 * len(mags))) <= 1e-12


def test_odd_examples_residuals():
    grid = np.linspace(-6, 6, 241)
    fig = uniform_chain(1, 0, make_odd_chain([1.5], 0.4, [0, 2, 1]))
    assert odd_chain_residual(fig, grid) <= 1e-12
    five = uniform_chain(1, 0, make_odd_chain([1, 2.5], -0.3, "interleaved"))
    assert odd_chain_residual(five, grid) <= 1e-12
    lossy = uniform_chain(1, 0.1, make_odd_chain([1, 2.5], -0.3, "interleaved"))
    assert odd_chain_residual(lossy, grid) > 1e-6


def test_odd_residual_errors():
    chain = uniform_chain(1, 0, [1, -1, 0.2])
    with pytest.raises(ValidationError):
        odd_chain_residual(chain, [0.0, 1.0], leftover_index=3)
    with pytest.raises(ValidationError):
        odd_chain_residual(chain, [])


def test_resonant_floor():
    assert resonant_floor(4, 1, 1) == 0.2
    assert resonant_floor(3, 1, 0) == 0
    assert abs(resonant_floor(10, 1, 0.1) - 1 / 101) <= 1e-16
    for bad in (0, 2.5):
        with pytest.raises(ValidationError):
            resonant_floor(bad, 1, 1)


@pytest.mark.parametrize("n", [1, 3, 8])
def test_linewidth(backend, n):
    grid = np.linspace(-10 * n, 10 * n, 2001)
    width = collective_linewidth_fit(spectrum(uniform_chain(1, 0, [0] * n), grid))
    assert abs(width - n) <= 1e-3 * n


def test_linewidth_rejects_split_dip():
    grid = np.linspace(-20, 20, 2001)
    with pytest.raises(ShapeError):
        collective_linewidth_fit(spectrum(uniform_chain(0.3, 0, [-6, 6]), grid))


def test_linewidth_rejects_unbracketed():
    with pytest.raises(ShapeError):
        collective_linewidth_fit(spectrum(uniform_chain(1, 0, [0]), np.linspace(-0.5, 0.5, 11)))
    with pytest.raises(ShapeError):
        collective_linewidth_fit(spectrum(uniform_chain(1, 0, [0]), [0.0, 1.0]))
