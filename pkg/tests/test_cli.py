import csv
import io
import math
import subprocess
import sys

import numpy as np
import pytest

from wgqed.cli import HEADERS, fmt, main, run
from wgqed.config import parse_config

SPECTRUM3 = "mode = spectrum\ngamma = 1\ngamma0 = 0\ndetunings = 0 0 0\nphases = 3.141592653589793\ngrid = -5 5 101\n"
FIG3 = "mode = eta-map\nmean_detuning = 0\ngamma = 1\ngamma0 = 1\ntheta_grid = 0 3.141592653589793 181\ns_grid = 0 4 81\n"
ORACLE = "mode = oracle-check\ncases = 100\nseed = 12345\n"


def _write(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return path


def _read(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], [[float(v) for v in row] for row in rows[1:]]


def test_fmt():
    assert fmt(0.1) == "0.10000000000000001"
    assert fmt(3) == "3" and fmt(np.int64(4)) == "4"
    assert float(fmt(math.pi)) == math.pi


def test_spectrum_minimum_at_resonance(tmp_path, capsys):
    cfg = _write(tmp_path, SPECTRUM3)
    assert main([str(cfg)]) == 0
    header, rows = _read(tmp_path / "run.csv")
    assert header == ["delta", "re_r", "im_r", "re_t", "im_t", "R", "T", "loss"]
    assert len(rows) == 101
    best = min(rows, key=lambda row: row[6])
    assert best[0] == 0.0 and best[6] == 0.0
    out = capsys.readouterr().out
    assert out.startswith("mode=spectrum points=101") and "at delta=0" in out


def test_fig3_map(tmp_path, capsys):
    out = tmp_path / "fig3.csv"
    assert main([str(_write(tmp_path, FIG3)), "--out", str(out)]) == 0
    header, rows = _read(out)
    assert header == ["theta", "s", "eta"]
    assert len(rows) == 181 * 81
    assert max(row[2] for row in rows) >= 13.7
    assert [row[:2] for row in rows[:2]] == [[0.0, 0.0], [0.0, 0.05]]  # row-major, theta outer


def test_oracle_check(tmp_path, capsys):
    assert main([str(_write(tmp_path, ORACLE))]) == 0
    out = capsys.readouterr().out
    assert "max |dr|" in out and "PASS" in out
    header, rows = _read(tmp_path / "run.csv")
    assert header == ["case", "max_abs_dr", "max_abs_dt"]
    assert len(rows) == 100 and max(row[1] for row in rows) <= 1e-10


def test_byte_identical_reruns(tmp_path):
    cfg = _write(tmp_path, ORACLE)
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    assert main([str(cfg), "--out", str(a)]) == 0
    assert main([str(cfg), "--out", str(b)]) == 0
    assert main([str(cfg), "--out", str(c), "--seed", "99"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes() != c.read_bytes()
    assert b"\r" not in a.read_bytes()


def test_threads_do_not_change_output(tmp_path, monkeypatch):
    cfg = _write(tmp_path, FIG3)
    outputs = []
    for threads in ("1", "4"):
        monkeypatch.setenv("WGQED_THREADS", threads)
        path = tmp_path / f"t{threads}.csv"
        assert main([str(cfg), "--out", str(path)]) == 0
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1]


@pytest.mark.parametrize(
    "text, count",
    [
        ("mode = transparency\ngamma = 1\ngamma0 = 0\nphases = 3.141592653589793\nmagnitudes = 1 2\n"
         "permutation = 3 1 0 2\ngrid = -4 4 81\n", 81),
        ("mode = transparency\ngamma = 1\ngamma0 = 0\nphases = 3.141592653589793\nmagnitudes = 1 2\n"
         "leftover = 0.5\npermutation = 0 4 1 2 3\ngrid = -4 4 41\n", 41),
        ("mode = cavity\nkappa = 1\ng = 0.8\ncavity_detuning = 0\ndetunings = 0.5 0.5\ngrid = -2 2 41\n", 41),
        ("mode = eta-argmax\ngamma = 1\ngamma0 = 1\nmean_detuning = 0\n"
         "theta_range = 2.6179938779914944 2.6179938779914944\ns_range = 0 10\n", 1),
    ],
)
def test_other_modes_round_trip(tmp_path, capsys, text, count):
    cfg = parse_config(text)
    out = tmp_path / "o.csv"
    assert run(cfg, out=str(out)) == 0
    header, rows = _read(out)
    assert header == HEADERS[cfg.mode]
    assert len(rows) == count
    assert all(len(row) == len(header) for row in rows)


def test_transparency_summaries(tmp_path, capsys):
    even = parse_config(
        "mode = transparency\ngamma = 1\ngamma0 = 0\nphases = 3.141592653589793\nmagnitudes = 1 2\ngrid = -4 4 81\n"
    )
    assert run(even, out=str(tmp_path / "e.csv")) == 0
    line = capsys.readouterr().out
    assert "scheme=even" in line and "deviation=" in line
    odd = parse_config(
        "mode = transparency\ngamma = 1\ngamma0 = 0\nphases = 3.141592653589793\nmagnitudes = 1\nleftover = 0.3\n"
        "grid = -4 4 81\n"
    )
    assert run(odd, out=str(tmp_path / "o.csv")) == 0
    residual = float(capsys.readouterr().out.split("odd_residual=")[1].split()[0])
    assert residual <= 1e-12


def test_eta_argmax_row(tmp_path):
    cfg = parse_config(
        "mode = eta-argmax\ngamma = 1\ngamma0 = 1\nmean_detuning = 0\n"
        "theta_range = 2.6179938779914944 2.6179938779914944\ns_range = 0 10\n"
    )
    run(cfg, out=str(tmp_path / "a.csv"), stdout=io.StringIO())
    _, rows = _read(tmp_path / "a.csv")
    assert abs(rows[0][1] - 4) <= 1e-8 and abs(rows[0][2] - (7 + 4 * math.sqrt(3))) <= 1e-8


def test_invalid_config_exit_1(tmp_path, capsys):
    cfg = _write(tmp_path, SPECTRUM3.replace("gamma = 1", "gamma = -1"))
    assert main([str(cfg)]) == 1
    err = capsys.readouterr().err
    assert "gamma" in err and "line 2" in err
    assert main([str(tmp_path / "missing.cfg")]) == 1


def test_domain_error_at_run_exit_1(tmp_path, capsys):
    text = "mode = transparency\ngamma = 1\ngamma0 = 0\nphases = 3.141592653589793\nmagnitudes = 1 1\ngrid = -4 4 9\n"
    assert main([str(_write(tmp_path, text))]) == 1
    assert "distinct" in capsys.readouterr().err


def test_unwritable_output_exit_1(tmp_path, capsys):
    cfg = _write(tmp_path, SPECTRUM3)
    assert main([str(cfg), "--out", str(tmp_path / "no" / "such" / "dir" / "x.csv")]) == 1
    assert "cannot write" in capsys.readouterr().err


def test_bad_seed_exit_1(tmp_path, capsys):
    cfg = _write(tmp_path, ORACLE)
    for bad in ("-1", "18446744073709551616", "abc"):
        with pytest.raises(SystemExit) as info:
            main([str(cfg), "--seed", bad])
        assert info.value.code == 1


def test_degeneracy_exit_2(tmp_path, capsys):
    # at theta = 2, s = 2 the reverse reflection vanishes exactly
    g0 = repr(-math.tan(2.0))
    text = (
        f"mode = eta-map\ngamma = 1\ngamma0 = {g0}\nmean_detuning = {g0}\n"
        "theta_grid = 2 3 2\ns_grid = 0 2 2\n"
    )
    assert main([str(_write(tmp_path, text))]) == 2
    assert "degeneracy" in capsys.readouterr().err


def test_module_entry_point(tmp_path):
    cfg = _write(tmp_path, SPECTRUM3)
    proc = subprocess.run(
        [sys.executable, "-m", "wgqed", str(cfg), "--out", str(tmp_path / "m.csv")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.startswith("mode=spectrum")
