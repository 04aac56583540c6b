# Copyright 2026 The Macrofacet Authors
# SPDX-License-Identifier: Apache-2.0

import csv
import hashlib
import io
import math
import os
import struct
import subprocess
from pathlib import Path

import pytest

CLI = os.environ.get("MACROFACET_CLI", "macrofacet")
SCENES = Path(__file__).resolve().parents[2] / "scenes"
SMALL_ORACLE = ["--realizations", "64", "--rays", "64", "--grid-n", "32", "--cells-per-length", "4"]


def run(*args, check=True):
    proc = subprocess.run([CLI, *map(str, args)], capture_output=True, text=True)
    if check and proc.returncode != 0:
        raise AssertionError(f"exit {proc.returncode}: {proc.stderr}")
    return proc


def table(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    rows = list(csv.reader(io.StringIO("\n".join(body))))
    return rows[0], [[float(v) for v in r] for r in rows[1:]]


def params(text):
    out = {}
    for line in text.splitlines():
        if line.startswith("# ") and " = " in line:
            key, value = line[2:].split(" = ", 1)
            out[key] = value
    return out


def test_render_writes_a_valid_pfm(tmp_path):
    out = tmp_path / "img.pfm"
    proc = run("render", SCENES / "flat_shell.ini", "--spp", 4, "--out", out)
    assert "spp=4" in proc.stdout
    data = out.read_bytes()
    header = b"PF\n64 48\n-1.0\n"
    assert data.startswith(header)
    assert len(data) == len(header) + 64 * 48 * 12
    values = struct.unpack(f"<{64 * 48 * 3}f", data[len(header):])
    assert all(math.isfinite(v) and v >= 0 for v in values)


def test_render_is_deterministic(tmp_path):
    digests = []
    for name in ("a.pfm", "b.pfm"):
        run("render", SCENES / "flat_shell.ini", "--spp", 2, "--seed", 5, "--out", tmp_path / name)
        digests.append(hashlib.sha256((tmp_path / name).read_bytes()).hexdigest())
    assert digests[0] == digests[1]


def test_render_ppm(tmp_path):
    out = tmp_path / "img.ppm"
    run("render", SCENES / "flat_shell.ini", "--spp", 1, "--out", out, "--format", "ppm")
    assert out.read_bytes().startswith(b"P6\n64 48\n255\n")


def test_unknown_key_exits_1_and_names_it(tmp_path):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[scene]\nwidht = 4\n")
    proc = run("render", cfg, check=False)
    assert proc.returncode == 1
    assert "widht" in proc.stderr


def test_missing_config_is_an_io_error(tmp_path):
    assert run("render", tmp_path / "none.ini", check=False).returncode == 3


def test_unwritable_output_is_an_io_error(tmp_path):
    proc = run("render", SCENES / "flat_shell.ini", "--spp", 1, "--out", tmp_path / "no" / "dir.pfm", check=False)
    assert proc.returncode == 3


def test_lambda_curve_row_at_45_degrees():
    proc = run("curves", "lambda", "--theta-min", 45, "--theta-max", 45)
    cols, rows = table(proc.stdout)
    assert cols[0] == "theta [deg]"
    assert rows[0][0] == 45
    assert abs(rows[0][1] - 0.0833155) < 1e-6
    assert params(proc.stdout)["ax"] == "1"


def test_transmittance_curve_starts_at_one():
    cols, rows = table(run("curves", "transmittance", "--theta", 45, "--t-max", 2).stdout)
    assert rows[0][0] == 0 and rows[0][-1] == 1
    assert all(b[-1] <= a[-1] for a, b in zip(rows, rows[1:]))


def test_ndf_curve_matches_quadrature():
    _, rows = table(run("curves", "ndf", "--alpha", 0.6).stdout)
    assert len(rows) == 37
    for row in rows:
        assert abs(row[1] - row[2]) <= 5e-3 * row[2]


def test_conflicting_kernel_flags_exit_1():
    assert run("curves", "lambda", "--lx", 1, "--ax", 1, check=False).returncode == 1


def test_validate_passes():
    proc = run("validate", "lambda")
    assert all(line.startswith("PASS") for line in proc.stdout.splitlines()[:-1])


def test_validate_detects_mutation():
    proc = run("validate", "ndf", "--mutation", "ndf-sign", check=False)
    assert proc.returncode == 4
    assert "FAIL ndf.oracle-equivalence" in proc.stdout


def test_validate_unknown_suite():
    assert run("validate", "nope", check=False).returncode == 1


def test_oracle_transmittance_first_row():
    proc = run("oracle", "gp-transmittance", *SMALL_ORACLE, "--t-max", 1, "--t-step", 0.25)
    _, rows = table(proc.stdout)
    assert rows[0][:2] == [0, 1]
    assert params(proc.stdout)["realizations"] == "64"


def test_oracle_vndf_integrates_to_one():
    _, rows = table(run("oracle", "gp-vndf", *SMALL_ORACLE, "--theta", 150).stdout)
    assert abs(sum(r[5] for r in rows) - 1) < 1e-6
    assert abs(sum(r[7] for r in rows) - 1) < 1e-3


def test_oracle_ensemble_furnace(tmp_path):
    proc = run("oracle", "gp-ensemble", "--realizations", 32, "--grid-n", 32, "--cells-per-length", 4,
               "--width", 8, "--height", 8, "--spp", 2, "--out", tmp_path / "ens.pfm")
    mean = float(proc.stdout.split("mean pixel = ")[1].split()[0])
    assert abs(mean - 1) < 0.02
    assert (tmp_path / "ens.pfm").read_bytes().startswith(b"PF\n8 8\n-1.0\n")


def test_oracle_rejects_too_many_realizations():
    proc = run("oracle", "gp-transmittance", "--realizations", 5000, check=False)
    assert proc.returncode == 1
    assert "realizations" in proc.stderr


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
