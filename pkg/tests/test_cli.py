import json
import hashlib

import pytest

from infosel.cli import main
from infosel.data import write_toy_csv


@pytest.fixture
def toy_csv(tmp_path):
    path = tmp_path / "toy.csv"
    write_toy_csv(path)
    return str(path)


class TestSelect:
    def test_hocmim_fixed_two_on_toy(self, toy_csv, capsys, tmp_path):
        out = tmp_path / "r.json"
        rc = main(["select", "--dataset", toy_csv, "--target", "Y",
                   "--criterion", "hocmim", "--n", "2", "--k", "5",
                   "--out", str(out)])
        assert rc == 0
        printed = capsys.readouterr().out
        order = [ln.split()[1] for ln in printed.strip().splitlines()[1:]]
        assert order == ["X3", "X2", "X4", "X1", "X5"]
        saved = json.loads(out.read_text())
        assert saved["names"] == order

    def test_mim_k1_picks_x3(self, toy_csv, capsys):
        rc = main(["select", "--dataset", toy_csv, "--target", "Y",
                   "--criterion", "mim", "--k", "1"])
        assert rc == 0
        assert "X3" in capsys.readouterr().out

    def test_embedded_toy_source(self, capsys):
        rc = main(["select", "--dataset", "toy", "--criterion", "cmim", "--k", "2"])
        assert rc == 0

    def test_unknown_criterion_fails(self, toy_csv, capsys):
        rc = main(["select", "--dataset", toy_csv, "--target", "Y",
                   "--criterion", "gini"])
        assert rc != 0
        assert "selection" in capsys.readouterr().err

    def test_missing_file_names_load_stage(self, capsys):
        rc = main(["select", "--dataset", "/nope.csv", "--target", "Y"])
        assert rc != 0
        assert "load" in capsys.readouterr().err

    def test_gamma_rejected(self, toy_csv, capsys):
        rc = main(["select", "--dataset", toy_csv, "--target", "Y",
                   "--criterion", "jmi", "--gamma", "0.5"])
        assert rc != 0

    def test_csv_format_and_traces(self, toy_csv, tmp_path, capsys):
        out = tmp_path / "r.csv"
        traces = tmp_path / "t.json"
        rc = main(["select", "--dataset", toy_csv, "--target", "Y",
                   "--criterion", "hocmim", "--k", "3",
                   "--out", str(out), "--format", "csv",
                   "--traces", str(traces)])
        assert rc == 0
        assert out.read_text().splitlines()[0] == "rank,feature"
        dump = json.loads(traces.read_text())
        assert len(dump["steps"]) == 3


class TestBenchmark:
    def test_deterministic_outputs(self, toy_csv, tmp_path, capsys):
        digests = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            rc = main(["benchmark", "--dataset", toy_csv, "--target", "Y",
                       "--criterion", "mim,hocmim-n2", "--repeats", "5",
                       "--seed", "7", "--k", "4", "--out", str(out)])
            assert rc == 0
            digests.append(hashlib.sha256(out.read_bytes()).hexdigest())
        assert digests[0] == digests[1]

    def test_zero_repeats_rejected(self, toy_csv, capsys):
        rc = main(["benchmark", "--dataset", toy_csv, "--target", "Y",
                   "--criterion", "mim,cmim", "--repeats", "0"])
        assert rc != 0

    def test_single_criterion_rejected(self, toy_csv, capsys):
        rc = main(["benchmark", "--dataset", toy_csv, "--target", "Y",
                   "--criterion", "mim", "--repeats", "2"])
        assert rc != 0

    def test_xor_source(self, tmp_path, capsys):
        out = tmp_path / "x.csv"
        rc = main(["benchmark", "--xor", "--criterion", "mim,hocmim",
                   "--repeats", "2", "--k", "4", "--seed", "3",
                   "--out", str(out), "--format", "csv"])
        assert rc == 0
        assert out.read_text().startswith("criterion,")


class TestToy:
    def test_runs_clean(self, capsys):
        rc = main(["toy"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "PASS" in out
        assert "FAIL" not in out.replace("FAILURES", "")
        assert "rounding slip" in out


class TestOracleCheck:
    def test_small_run_passes(self, capsys):
        rc = main(["oracle-check", "--instances", "10", "--seed", "1"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "0 failed" in out.splitlines()[-1]
