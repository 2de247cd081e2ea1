"""End-to-end tests that run the installed ``chaocrypt`` executable."""
import shutil
import subprocess
import sys

import numpy as np
import pytest

from chaocrypt.cli import EXIT_DOMAIN, EXIT_FORMAT, EXIT_IO, EXIT_USAGE
from chaocrypt.formats import read_key, write_ppm

from conftest import DATA

_EXE = shutil.which("chaocrypt")
BASE = [_EXE] if _EXE else [sys.executable, "-m", "chaocrypt"]


def run(*args, check=True):
    proc = subprocess.run(BASE + [str(a) for a in args], capture_output=True, text=True)
    if check and proc.returncode != 0:
        raise AssertionError(f"exit {proc.returncode}: {proc.stderr}")
    return proc


def kv(stdout):
    return dict(line.split("=", 1) for line in stdout.strip().splitlines())


@pytest.fixture
def keyfile(tmp_path):
    path = tmp_path / "key.txt"
    run("keygen", "--out", path, "--seed", 1234)
    return path


@pytest.fixture
def small_ppm(tmp_path):
    img = np.random.default_rng(5).integers(0, 256, (64, 64, 3), dtype=np.uint8)
    path = tmp_path / "small.ppm"
    write_ppm(img, path)
    return path


def test_keygen_deterministic(tmp_path):
    run("keygen", "--out", tmp_path / "a", "--seed", 7)
    run("keygen", "--out", tmp_path / "b", "--seed", 7)
    run("keygen", "--out", tmp_path / "c", "--seed", 8)
    a = (tmp_path / "a").read_bytes()
    assert a == (tmp_path / "b").read_bytes()
    assert a != (tmp_path / "c").read_bytes()
    k = read_key(tmp_path / "a")
    assert all(0.01 <= getattr(k, n) <= 0.99 for n in "xyvw")
    assert (k.mu, k.a, k.b, k.n_iter) == (3.99, 2.75, 0.2, 1000)


def test_keygen_unseeded_is_valid(tmp_path):
    run("keygen", "--out", tmp_path / "k")
    read_key(tmp_path / "k")


def test_encrypt_decrypt_roundtrip(tmp_path, keyfile):
    run("encrypt", "--in", DATA / "lena.ppm", "--key", keyfile, "--block", 32,
        "--out", tmp_path / "lena.cbpx")
    run("decrypt", "--in", tmp_path / "lena.cbpx", "--key", keyfile, "--out", tmp_path / "back.ppm")
    assert (tmp_path / "back.ppm").read_bytes() == (DATA / "lena.ppm").read_bytes()


def test_encrypt_is_reproducible(tmp_path, keyfile, small_ppm):
    for name in ("a", "b"):
        run("encrypt", "--in", small_ppm, "--key", keyfile, "--block", 16, "--out", tmp_path / name)
    assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()


def test_exit_codes(tmp_path, keyfile, small_ppm):
    p = run("encrypt", "--in", DATA / "lena.ppm", "--key", keyfile, "--block", 33,
            "--out", tmp_path / "x", check=False)
    assert p.returncode == EXIT_DOMAIN and "divide" in p.stderr
    assert len(p.stderr.strip().splitlines()) == 1

    p = run("encrypt", "--in", small_ppm, "--key", tmp_path / "missing", "--out", tmp_path / "x",
            check=False)
    assert p.returncode == EXIT_IO

    (tmp_path / "bad.ppm").write_bytes(b"P5\n1 1\n255\n\x00")
    p = run("encrypt", "--in", tmp_path / "bad.ppm", "--key", keyfile, "--out", tmp_path / "x",
            check=False)
    assert p.returncode == EXIT_FORMAT

    (tmp_path / "badkey").write_text(keyfile.read_text().replace("mu=3.9900000000000002", "mu=5"))
    p = run("encrypt", "--in", small_ppm, "--key", tmp_path / "badkey", "--out", tmp_path / "x",
            check=False)
    assert p.returncode == EXIT_DOMAIN

    assert run("encrypt", "--in", small_ppm, check=False).returncode == EXIT_USAGE
    assert run("frobnicate", check=False).returncode == EXIT_USAGE
    assert run("encrypt", "--in", small_ppm, "--key", keyfile, "--block", "abc",
               "--out", tmp_path / "x", check=False).returncode == EXIT_USAGE
    assert not (tmp_path / "x").exists()


def test_analyze_envelope_and_plain(tmp_path, keyfile):
    run("encrypt", "--in", DATA / "lena.ppm", "--key", keyfile, "--out", tmp_path / "e")
    enc = kv(run("analyze", "--in", tmp_path / "e").stdout)
    for ch in ("red", "green", "blue"):
        assert float(enc[f"{ch}.entropy"]) >= 7.998
    plain = kv(run("analyze", "--in", DATA / "lena.ppm", "--against", DATA / "lena.ppm").stdout)
    assert plain["red.psnr"] == "inf"
    assert float(plain["red.correlation.horizontal"]) == pytest.approx(0.98, abs=0.01)


def test_analyze_histogram_export(tmp_path, small_ppm):
    out = tmp_path / "hist"
    out.mkdir()
    run("analyze", "--in", small_ppm, "--histogram-dir", out)
    lines = (out / "histogram_red.csv").read_text().splitlines()
    assert len(lines) == 257 and sum(int(l.split(",")[1]) for l in lines[1:]) == 64 * 64


def test_diff(tmp_path, keyfile, images):
    img = images["lena"].copy()
    write_ppm(img, tmp_path / "a.ppm")
    img[100, 200, 1] ^= 1
    write_ppm(img, tmp_path / "b.ppm")
    for name in ("a", "b"):
        run("encrypt", "--in", tmp_path / f"{name}.ppm", "--key", keyfile, "--out", tmp_path / f"{name}.e")
    same = kv(run("diff", "--a", tmp_path / "a.e", "--b", tmp_path / "a.e").stdout)
    assert float(same["red.npcr"]) == 0 and float(same["blue.uaci"]) == 0
    d = kv(run("diff", "--a", tmp_path / "a.e", "--b", tmp_path / "b.e").stdout)
    for ch in ("red", "green", "blue"):
        assert 99.4 <= float(d[f"{ch}.npcr"]) <= 99.8
        assert 33.0 <= float(d[f"{ch}.uaci"]) <= 33.9


def test_diff_shape_mismatch(tmp_path, keyfile, small_ppm):
    run("encrypt", "--in", small_ppm, "--key", keyfile, "--block", 16, "--out", tmp_path / "s.e")
    p = run("diff", "--a", tmp_path / "s.e", "--b", DATA / "lena.ppm", check=False)
    assert p.returncode == EXIT_DOMAIN


def test_attack_crop_and_speckle(keyfile):
    out = run("attack", "--in", DATA / "lena.ppm", "--key", keyfile,
              "--crop", 0.05, "--speckle", 0.05, 0.1, 0.3, 0.5, "--seed", 3).stdout
    lines = out.strip().splitlines()
    assert lines[0] == "kind,parameter,channel,psnr_db,incorrect_fraction"
    rows = [l.split(",") for l in lines[1:]]
    crop = [r for r in rows if r[0] == "crop"]
    assert all(abs(float(r[4]) - 0.05) <= 0.01 for r in crop)
    for ch in ("red", "green", "blue"):
        ps = [float(r[3]) for r in rows if r[0] == "speckle" and r[2] == ch]
        assert len(ps) == 4 and all(a >= b for a, b in zip(ps, ps[1:]))
    again = run("attack", "--in", DATA / "lena.ppm", "--key", keyfile,
                "--crop", 0.05, "--speckle", 0.05, 0.1, 0.3, 0.5, "--seed", 3).stdout
    assert again == out


def test_attack_without_flags_is_usage_error(keyfile):
    p = run("attack", "--in", DATA / "lena.ppm", "--key", keyfile, check=False)
    assert p.returncode == EXIT_USAGE


def test_bench(tmp_path):
    out = kv(run("bench", "--size", 128, "--block", 16, "--iterations", 3).stdout)
    assert out["iterations"] == "3"
    assert [k for k in out if k.startswith("run.")] == ["run.0.total", "run.1.total", "run.2.total"]
    phases = sum(float(out[f"{p}.mean"]) for p in ("keystream", "permutation", "diffusion"))
    assert phases <= float(out["total.mean"])
    p = run("bench", "--size", 100, "--block", 32, check=False)
    assert p.returncode == EXIT_DOMAIN


def test_bench_python_backend():
    out = kv(run("bench", "--size", 64, "--block", 16, "--iterations", 1, "--backend", "python").stdout)
    assert out["backend"] == "python"


def test_seed_must_be_u64(tmp_path):
    assert run("keygen", "--out", tmp_path / "k", "--seed", -1, check=False).returncode == EXIT_USAGE
    assert run("keygen", "--out", tmp_path / "k", "--seed", 2 ** 64, check=False).returncode == EXIT_USAGE
