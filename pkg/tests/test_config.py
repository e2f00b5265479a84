import math

import pytest

from wgqed.config import parse_config
from wgqed.errors import ConfigError, ValidationError
from wgqed.model import SweepGrid

MINIMAL = "mode = spectrum\ngamma = 1\ngamma0 = 0\ndetunings = 0\nphases = 3.141592653589793\ngrid = -5 5 1001"
FIG3 = """
# critical coupling, equal and opposite detunings
mode = eta-map
mean_detuning = 0
gamma = 1
gamma0 = 1
theta_grid = 0 3.141592653589793 181   # theta from 0 to pi
s_grid = 0 4 81
"""


def test_minimal_spectrum():
    cfg = parse_config(MINIMAL)
    assert cfg.mode == "spectrum"
    assert cfg.params["grid"] == SweepGrid(-5, 5, 1001)
    assert cfg.params["detunings"] == [0.0]
    assert cfg.params["phases"] == [math.pi]
    assert (cfg.out, cfg.format, cfg.seed) == (None, "csv", 0)


def test_fig3_config():
    cfg = parse_config(FIG3)
    assert cfg.mode == "eta-map"
    assert cfg.params["theta_grid"].count == 181
    assert cfg.params["gamma0"] == 1.0


def test_common_keys():
    cfg = parse_config("mode = oracle-check\ncases = 5\nseed = 18446744073709551615\nout = x.csv\nformat = csv")
    assert cfg.seed == 2**64 - 1 and cfg.out == "x.csv" and cfg.params == {"cases": 5}


def test_phase_broadcast():
    cfg = parse_config("mode = spectrum\ngamma = 1\ngamma0 = 0\ndetunings = 0 1 2\nphases = 0.5\ngrid = 0 1 2")
    assert cfg.params["phases"] == [0.5, 0.5, 0.5]


def test_negative_gamma_names_field():
    with pytest.raises(ConfigError) as info:
        parse_config(MINIMAL.replace("gamma = 1", "gamma = -1"))
    assert info.value.field == "gamma"
    assert info.value.line == 2
    assert "line 2" in str(info.value) and "gamma" in str(info.value)
    assert isinstance(info.value, ValidationError)


@pytest.mark.parametrize(
    "text, field, line",
    [
        (MINIMAL + "\ncolour = red", "colour", 7),
        (MINIMAL + "\ngamma = 2", "gamma", 7),
        (MINIMAL.replace("mode = spectrum", "mode = sweep"), "mode", 1),
        (MINIMAL.replace("mode = spectrum\n", ""), "mode", None),
        (MINIMAL.replace("grid = -5 5 1001", ""), "grid", None),
        (MINIMAL + "\nkappa = 1", "kappa", 7),
        (MINIMAL.replace("grid = -5 5 1001", "grid = -5 5"), "grid", 6),
        (MINIMAL.replace("grid = -5 5 1001", "grid = 5 -5 11"), "grid", 6),
        (MINIMAL.replace("grid = -5 5 1001", "grid = -5 5 1"), "grid", 6),
        (MINIMAL.replace("gamma0 = 0", "gamma0 = -0.1"), "gamma0", 3),
        (MINIMAL.replace("gamma = 1", "gamma = nan"), "gamma", 2),
        (MINIMAL.replace("gamma = 1", "gamma = 1 2"), "gamma", 2),
        (MINIMAL.replace("detunings = 0", "detunings = 0 x"), "detunings", 4),
        (MINIMAL.replace("phases = 3.141592653589793", "phases = 1 2"), "phases", 5),
        (MINIMAL + "\nseed = -1", "seed", 7),
        (MINIMAL + "\nseed = 18446744073709551616", "seed", 7),
        (MINIMAL + "\nformat = json", "format", 7),
        (MINIMAL + "\nout =", "out", 7),
    ],
)
def test_errors(text, field, line):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.field == field
    assert info.value.line == line


def test_malformed_line():
    with pytest.raises(ConfigError) as info:
        parse_config("mode = spectrum\njust words")
    assert info.value.line == 2
    with pytest.raises(ConfigError):
        parse_config(" = 3")


def test_other_modes():
    cfg = parse_config(
        "mode = transparency\ngamma = 1\ngamma0 = 0\nphases = 3.141592653589793\n"
        "magnitudes = 1 2\nleftover = 0.5\npermutation = 4 0 1 2 3\ngrid = -3 3 61"
    )
    assert cfg.params["permutation"] == [4, 0, 1, 2, 3] and cfg.params["leftover"] == 0.5
    with pytest.raises(ConfigError):
        parse_config("mode = transparency\ngamma = 1\ngamma0 = 0\nphases = 1 2\nmagnitudes = 1\ngrid = 0 1 2")
    cfg = parse_config("mode = cavity\nkappa = 1\ng = 0\ncavity_detuning = 0\ndetunings = 1 -1\ngrid = -2 2 5")
    assert cfg.params["g"] == 0.0
    with pytest.raises(ConfigError):
        parse_config("mode = cavity\nkappa = 0\ng = 1\ncavity_detuning = 0\ndetunings = 1\ngrid = -2 2 5")
    cfg = parse_config(
        "mode = eta-argmax\ngamma = 1\ngamma0 = 1\nmean_detuning = 0\ntheta_range = 2.6 2.6\n"
        "s_range = 0 10\nscan = 3 41"
    )
    assert cfg.params["theta_range"] == (2.6, 2.6) and cfg.params["scan"] == (3, 41)
    with pytest.raises(ConfigError):
        parse_config("mode = eta-argmax\ngamma = 1\ngamma0 = 1\nmean_detuning = 0\ntheta_range = 3 2\ns_range = 0 1")
    with pytest.raises(ConfigError):
        parse_config("mode = oracle-check\nmax_sites = 65")
