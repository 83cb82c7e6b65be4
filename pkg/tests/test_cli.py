"""Command line surface: flows, file formats, and the exit code contract."""

import csv
import json
import random
import time

import pytest

from conftest import TINY_CATALOG_TEXT, TINY_PARAMS
from wzkit import cli
from wzkit.builder import load_code
from wzkit.codec import CSV_COLUMNS, encode
from wzkit.gf2 import BitVector


def word_line(vec):
    return "".join(str(b) for b in vec.to_list())


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    """Catalog file, built code directory, and a two-word source file."""
    root = tmp_path_factory.mktemp("cli")
    catalog = root / "catalog.txt"
    catalog.write_text(TINY_CATALOG_TEXT)
    code_dir = root / "tiny-code"
    rc = cli.main([
        "build", "--n", str(TINY_PARAMS.n), "--m", str(TINY_PARAMS.m),
        "--k1", str(TINY_PARAMS.k1), "--k2", str(TINY_PARAMS.k2),
        "--zeta", str(TINY_PARAMS.zeta),
        "--poisson-lam", str(TINY_PARAMS.poisson_lam),
        "--poisson-imax", str(TINY_PARAMS.poisson_imax),
        "--dist", "tiny", "--catalog", str(catalog),
        "--seed", "5", "--out", str(code_dir),
    ])
    assert rc == 0
    rng = random.Random(1)
    sources = root / "sources.txt"
    sources.write_text("".join(
        f"{rng.getrandbits(TINY_PARAMS.n):0{TINY_PARAMS.n}b}\n"
        for _ in range(2)))
    return root


class TestBuild:
    def test_directory_layout(self, workdir):
        assert (workdir / "tiny-code" / "manifest.json").is_file()

    def test_unknown_profile_is_usage_error(self, workdir, tmp_path, capsys):
        rc = cli.main([
            "build", "--n", "96", "--m", "92", "--k1", "20", "--k2", "60",
            "--zeta", "4", "--dist", "nope",
            "--catalog", str(workdir / "catalog.txt"),
            "--out", str(tmp_path / "x"),
        ])
        assert rc == 1
        assert "unknown degree profile" in capsys.readouterr().err

    def test_invalid_geometry_exits_two(self, workdir, tmp_path, capsys):
        rc = cli.main([
            "build", "--n", "3000", "--m", "2000", "--k1", "548",
            "--k2", "1212", "--zeta", "10", "--poisson-lam", "128.77",
            "--poisson-imax", "300", "--dist", "tiny",
            "--catalog", str(workdir / "catalog.txt"),
            "--out", str(tmp_path / "x"),
        ])
        assert rc == 2
        captured = capsys.readouterr()
        report = captured.out + captured.err
        assert "syndrome_capacity" in report
        assert "generator_tail_fits" in report
        assert "split_fits_top_half" in report

    def test_missing_flag_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["build", "--n", "96"])
        assert exc.value.code == 1


class TestQuantizeEncodeDecode:
    def test_quantize_writes_messages(self, workdir, capsys):
        out = workdir / "messages.txt"
        rc = cli.main(["quantize", "--code", str(workdir / "tiny-code"),
                       "--in", str(workdir / "sources.txt"),
                       "--out", str(out)])
        assert rc == 0
        assert "mean distortion" in capsys.readouterr().out
        lines = out.read_text().splitlines()
        assert len(lines) == 2
        assert all(len(l) == TINY_PARAMS.info_rows for l in lines)
        assert all(set(l) <= {"0", "1"} for l in lines)

    def test_encode_writes_syndromes(self, workdir, capsys):
        out = workdir / "syndromes.txt"
        rc = cli.main(["encode", "--code", str(workdir / "tiny-code"),
                       "--in", str(workdir / "sources.txt"),
                       "--out", str(out)])
        assert rc == 0
        assert "rate" in capsys.readouterr().out
        lines = out.read_text().splitlines()
        assert len(lines) == 2
        assert all(len(l) == TINY_PARAMS.k2 for l in lines)

    def test_decode_recovers_quantized_word(self, workdir, tmp_path):
        code = load_code(workdir / "tiny-code")
        src_line = (workdir / "sources.txt").read_text().splitlines()[0]
        src = BitVector.from_bits_list([int(c) for c in src_line])
        enc = encode(code, src)
        side = tmp_path / "side.txt"
        side.write_text(word_line(enc.word) + "\n")
        syndrome = tmp_path / "syndrome.txt"
        syndrome.write_text(word_line(enc.syndrome) + "\n")
        out = tmp_path / "decoded.txt"
        rc = cli.main(["decode", "--code", str(workdir / "tiny-code"),
                       "--side", str(side), "--syndrome", str(syndrome),
                       "--crossover", "0.05", "--out", str(out)])
        assert rc == 0
        assert out.read_text().splitlines() == [word_line(enc.word)]

    def test_malformed_word_file_is_usage_error(self, workdir, tmp_path,
                                                capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("01x01\n")
        rc = cli.main(["quantize", "--code", str(workdir / "tiny-code"),
                       "--in", str(bad), "--out", str(tmp_path / "o.txt")])
        assert rc == 1
        assert "0/1 only" in capsys.readouterr().err

    def test_wrong_length_is_usage_error(self, workdir, tmp_path):
        bad = tmp_path / "short.txt"
        bad.write_text("0101\n")
        rc = cli.main(["quantize", "--code", str(workdir / "tiny-code"),
                       "--in", str(bad), "--out", str(tmp_path / "o.txt")])
        assert rc == 1

    def test_missing_code_dir_exits_three(self, workdir, tmp_path):
        rc = cli.main(["quantize", "--code", str(tmp_path / "nowhere"),
                       "--in", str(workdir / "sources.txt"),
                       "--out", str(tmp_path / "o.txt")])
        assert rc == 3


class TestRun:
    def experiment(self):
        return {"code_id": "tiny", "dist": "tiny",
                "n": TINY_PARAMS.n, "m": TINY_PARAMS.m,
                "k1": TINY_PARAMS.k1, "k2": TINY_PARAMS.k2,
                "zeta": TINY_PARAMS.zeta,
                "poisson_lam": TINY_PARAMS.poisson_lam,
                "poisson_imax": TINY_PARAMS.poisson_imax,
                "p": 0.25, "trials": 2, "seed": 3, "build_seed": 5}

    def test_run_writes_csv_deterministically(self, workdir, tmp_path,
                                              capsys):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"experiments": [self.experiment()]}))
        outs = []
        for name in ("a.csv", "b.csv"):
            out = tmp_path / name
            rc = cli.main(["run", "--config", str(config),
                           "--catalog", str(workdir / "catalog.txt"),
                           "--workers", "1", "--out", str(out)])
            assert rc == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
        lines = outs[0].decode().splitlines()
        assert lines[0] == "# wzkit 0.1.0"
        assert lines[1] == ",".join(CSV_COLUMNS)
        row = next(csv.DictReader(lines[1:]))
        assert row["code_id"] == "tiny"
        assert int(row["trials"]) == 2
        assert "tiny" in capsys.readouterr().out

    def test_config_without_experiments_is_usage_error(self, workdir,
                                                       tmp_path, capsys):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"runs": []}))
        rc = cli.main(["run", "--config", str(config),
                       "--catalog", str(workdir / "catalog.txt"),
                       "--out", str(tmp_path / "o.csv")])
        assert rc == 1

    def test_missing_experiment_key_is_usage_error(self, workdir, tmp_path,
                                                   capsys):
        entry = self.experiment()
        del entry["seed"]
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"experiments": [entry]}))
        rc = cli.main(["run", "--config", str(config),
                       "--catalog", str(workdir / "catalog.txt"),
                       "--out", str(tmp_path / "o.csv")])
        assert rc == 1
        assert "seed" in capsys.readouterr().err

    def test_missing_config_file_exits_three(self, tmp_path):
        rc = cli.main(["run", "--config", str(tmp_path / "absent.json"),
                       "--out", str(tmp_path / "o.csv")])
        assert rc == 3


class TestBound:
    def test_boundary_point(self, capsys):
        assert cli.main(["bound", "--p", "0.25"]) == 0
        out = capsys.readouterr().out
        assert "distortion=0.088" in out
        assert "rate=0.444" in out

    def test_rate_query(self, capsys):
        assert cli.main(["bound", "--p", "0.25", "--rate", "0.6"]) == 0
        d = float(capsys.readouterr().out.strip())
        assert 0.0 < d < 0.25

    def test_distortion_query(self, capsys):
        assert cli.main(["bound", "--p", "0.25", "--distortion", "0.05"]) == 0
        r = float(capsys.readouterr().out.strip())
        assert r == pytest.approx(0.58, abs=0.05)

    def test_curve_file(self, tmp_path, capsys):
        out = tmp_path / "curve.csv"
        assert cli.main(["bound", "--p", "0.25", "--points", "5",
                         "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 7
        assert lines[1] == "distortion,rate"

    def test_bad_crossover_exits_three(self, capsys):
        assert cli.main(["bound", "--p", "0.75"]) == 3


class TestVerifyExample:
    def test_passes_quickly(self, capsys):
        start = time.monotonic()
        rc = cli.main(["verify-example"])
        elapsed = time.monotonic() - start
        out = capsys.readouterr().out
        assert rc == 0
        assert elapsed < 1.0
        assert "PASS" in out
        assert "FAIL" not in out


class TestParser:
    def test_unknown_subcommand_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["frobnicate"])
        assert exc.value.code == 1

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["--version"])
        assert exc.value.code == 0
        assert "0.1.0" in capsys.readouterr().out
