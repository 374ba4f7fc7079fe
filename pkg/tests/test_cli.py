import csv
import json

import pytest

from randfb import cli
from randfb.errors import ConvergenceError


def rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def test_parse_int_list():
    assert cli.parse_int_list("2^3..2^5") == [8, 16, 32]
    assert cli.parse_int_list("4, 5,40") == [4, 5, 40]
    with pytest.raises(ValueError):
        cli.parse_int_list("a,b")


def test_fmt_round_trips():
    for v in (0.1, 1 / 3, 2.5e-300, 123456789.0):
        assert float(cli.fmt(v)) == v
    assert cli.fmt(None) == ""


def test_energy_hist(tmp_path):
    out = tmp_path / "eh"
    code = cli.main(["energy-hist", "--signal", "synth:impulse", "--n", "64", "--filters", "10", "--len", "8",
                     "--trials", "500", "--bins", "10", "--out", str(out)])
    assert code == 0
    assert len(rows(out / "energy_samples.csv")) == 500
    assert len(rows(out / "energy_histogram.csv")) == 10
    assert b"\r\n" in (out / "energy_samples.csv").read_bytes()
    m = json.loads((out / "manifest.json").read_text())
    assert m["command"] == "energy-hist" and "energy_summary.csv" in m["outputs"]


def test_deviation_writes_skip_record(tmp_path):
    out = tmp_path / "dev"
    assert cli.main(["deviation", "--signal", "synth:sine?cycles=2", "--n", "32", "--len", "8,16,64",
                     "--trials", "200", "--out", str(out)]) == 0
    assert [r["T"] for r in rows(out / "deviation.csv")] == ["8", "16"]
    assert [r["T"] for r in rows(out / "deviation_skipped.csv")] == ["64"]


def test_framebounds_header(tmp_path):
    out = tmp_path / "fb"
    assert cli.main(["framebounds", "--len", "4,8", "--trials", "100", "--extreme-trials", "200",
                     "--out", str(out)]) == 0
    header = (out / "framebounds.csv").read_text().splitlines()[0].split(",")
    assert header[:9] == ["T", "mean_A", "mean_B", "p2.5_A", "p97.5_B", "thm1_lo", "thm1_hi", "asym_lo", "asym_hi"]


def test_condition(tmp_path):
    out = tmp_path / "cond"
    assert cli.main(["condition", "--filters", "2,3", "--len", "4,8", "--trials", "100", "--out", str(out)]) == 0
    assert len(rows(out / "condition.csv")) == 4
    assert [r["T"] for r in rows(out / "condition_diagonal.csv")] == ["4", "8"]


def test_bounds_json(tmp_path, capsys):
    out = tmp_path / "b"
    assert cli.main(["bounds", "--signal", "synth:impulse", "--filters", "10", "--len", "8", "--out", str(out)]) == 0
    rep = json.loads((out / "bounds.json").read_text())
    assert rep["variance"] == pytest.approx(0.025)
    assert rep["mean"] == pytest.approx(1.0)
    assert rep["cantelli"]["alpha"] == pytest.approx(0.6892, abs=1e-4)
    assert rep["chernoff"]["alpha"] == pytest.approx(0.31366, abs=1e-5)
    assert json.loads(capsys.readouterr().out) == rep


def test_seed_env_fallback(tmp_path, monkeypatch):
    args = ["energy-hist", "--signal", "synth:constant", "--n", "16", "--len", "4", "--trials", "50"]
    monkeypatch.setenv("RANDFB_SEED", "77")
    assert cli.main(args + ["--out", str(tmp_path / "a")]) == 0
    assert json.loads((tmp_path / "a" / "manifest.json").read_text())["master_seed"] == 77
    assert cli.main(args + ["--seed", "77", "--out", str(tmp_path / "b")]) == 0
    assert (tmp_path / "a" / "energy_samples.csv").read_bytes() == (tmp_path / "b" / "energy_samples.csv").read_bytes()
    monkeypatch.setenv("RANDFB_SEED", "x")
    assert cli.main(args + ["--out", str(tmp_path / "c")]) == 2


@pytest.mark.parametrize("threads", [1, 4])
def test_replay_is_byte_identical(tmp_path, threads):
    out = tmp_path / "orig"
    assert cli.main(["deviation", "--signal", "synth:brownian?seed=7", "--n", "64", "--len", "4,16",
                     "--trials", "300", "--seed", "5", "--out", str(out)]) == 0
    again = tmp_path / "again"
    assert cli.main(["replay", str(out / "manifest.json"), "--out", str(again), "--threads", str(threads)]) == 0
    assert (out / "deviation.csv").read_bytes() == (again / "deviation.csv").read_bytes()


def test_exit_codes(tmp_path, wav_dir, monkeypatch):
    o = str(tmp_path / "x")
    assert cli.main(["bounds", "--signal", "wav:/nonexistent.wav", "--out", o]) == 3
    assert cli.main(["bounds", "--signal", f"wav:{wav_dir / 'pcm8.wav'}", "--out", o]) == 3
    assert cli.main(["bounds", "--signal", "synth:nope", "--out", o]) == 2
    assert cli.main(["bounds", "--signal", "synth:impulse", "--len", "4096", "--out", o]) == 2
    assert cli.main(["energy-hist", "--signal", "synth:impulse", "--level", "2", "--out", o]) == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["energy-hist", "--out", o])
    assert exc.value.code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["replay", str(bad)]) == 2

    def boom(*a, **k):
        raise ConvergenceError("no", estimate=1.0, iterations=3)

    monkeypatch.setattr(cli, "spectral_stats", boom)
    assert cli.main(["bounds", "--signal", "synth:impulse", "--out", o]) == 4
