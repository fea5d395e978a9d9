import json

import pytest

from bergecycle.cli import main
from bergecycle.hypergraph import parse


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def h2_file(tmp_path, capsys):
    path = tmp_path / "h2.bhg"
    assert main(["gen", "--family", "h2", "--n", "7", "--r", "3", "--output", str(path)]) == 0
    capsys.readouterr()
    return path


class TestGen:
    def test_h4_stdout_and_sidecar(self, capsys):
        code, out, err = run(capsys, "gen", "--family", "h4", "--n", "13", "--r", "3", "--k", "6")
        assert code == 0
        h = parse(out)
        assert (h.n, h.r, h.num_edges) == (13, 3, 30)
        meta = json.loads(err)
        assert meta["expected_min_degree"] == meta["min_degree"] == 6

    def test_sidecar_file(self, h2_file):
        meta = json.loads((h2_file.parent / "h2.bhg.json").read_text())
        assert meta["hamiltonian"] is False and meta["edges"] == 13

    def test_random(self, capsys):
        code, out, _ = run(capsys, "gen", "--family", "random_min_degree", "--n", "8", "--r", "3",
                           "--delta", "5", "--seed", "4")
        assert code == 0 and parse(out).num_edges > 0

    def test_bad_params(self, capsys):
        code, _, err = run(capsys, "gen", "--family", "h1", "--n", "9", "--r", "5")
        assert code == 2 and "error" in json.loads(err)


class TestSolve:
    def test_ham_exhausted_exit_zero(self, capsys, h2_file):
        code, out, _ = run(capsys, "solve", "--input", str(h2_file), "--target", "ham")
        assert code == 0 and json.loads(out)["verdict"] == "exhausted"

    def test_targets(self, capsys, h2_file):
        code, out, _ = run(capsys, "solve", "--input", str(h2_file), "--target", "circumference", "--deterministic")
        data = json.loads(out)
        assert code == 0 and data["length"] == 6 and "seconds" not in data
        code, out, _ = run(capsys, "solve", "--input", str(h2_file), "--target", "k=5", "--seed-order", "3")
        assert json.loads(out)["witness"]["kind"] == "cycle"
        code, out, _ = run(capsys, "solve", "--input", str(h2_file), "--target", "path")
        assert json.loads(out)["length"] == 6

    def test_budget_exit(self, capsys, tmp_path):
        p = tmp_path / "big.bhg"
        main(["gen", "--family", "h2", "--n", "12", "--r", "3", "--output", str(p)])
        capsys.readouterr()
        code, out, _ = run(capsys, "solve", "--input", str(p), "--node-limit", "3")
        assert code == 1 and json.loads(out)["detail"] == "budget_exceeded"

    def test_errors(self, capsys, tmp_path):
        code, _, err = run(capsys, "solve", "--input", str(tmp_path / "missing.bhg"))
        assert code == 2 and json.loads(err)["detail"] == "file_not_found"
        bad = tmp_path / "bad.bhg"
        bad.write_text("5 3\n0 1\n")
        code, _, err = run(capsys, "solve", "--input", str(bad))
        assert code == 2 and json.loads(err)["detail"] == "malformed_input"
        good = tmp_path / "g.bhg"
        good.write_text("5 3\n0 1 2\n")
        code, _, _ = run(capsys, "solve", "--input", str(good), "--target", "k=x")
        assert code == 2


class TestOther:
    def test_threshold(self, capsys):
        code, out, _ = run(capsys, "threshold", "--n", "9", "--r", "5", "--k", "7")
        assert code == 0 and json.loads(out) == {"regime": "main4", "bound": 4}
        _, out, _ = run(capsys, "threshold", "--n", "9", "--r", "3")
        assert json.loads(out) == {"regime": "main_a", "bound": 7}
        _, out, _ = run(capsys, "threshold", "--n", "9", "--r", "5", "--k", "8", "--half-k")
        assert json.loads(out) == {"regime": "main41", "bound": 4, "min_edges": 8}
        _, out, _ = run(capsys, "threshold", "--n", "9", "--r", "3", "--k", "6", "--bermond")
        assert json.loads(out) == {"regime": "bermond", "bound": 8}
        code, _, _ = run(capsys, "threshold", "--n", "9", "--r", "3", "--k", "8", "--half-k")
        assert code == 2

    def test_engine(self, capsys, h2_file):
        code, out, _ = run(capsys, "engine", "--input", str(h2_file), "--trace")
        data = json.loads(out)
        assert code == 1 and data["status"] == "stuck" and data["pair"]["cycle"]["kind"] == "cycle"
        code, out, _ = run(capsys, "engine", "--input", str(h2_file), "--target", "5", "--human")
        assert code == 0 and "status: found" in out

    def test_lemmas(self, capsys, tmp_path):
        rows = tmp_path / "rows.ndjson"
        code, out, _ = run(capsys, "lemmas", "--max-s-indep", "6", "--max-s-verc", "6", "--output", str(rows))
        data = json.loads(out)
        assert code == 0 and data["passed"]
        assert len(rows.read_text().splitlines()) == len(data["rows"])

    def test_verify_sharpness(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "sharpness", "--deterministic")
        data = json.loads(out)
        assert code == 0 and data["passed"] and "elapsed_seconds" not in data

    def test_verify_config(self, capsys, tmp_path):
        cfg = tmp_path / "sweep.cfg"
        cfg.write_text("grid = [[7, 4, 6]]\nsamples_per_cell = 3\nsharpness = false\n")
        records = tmp_path / "out.ndjson"
        code, out, _ = run(capsys, "verify", "--config", str(cfg), "--deterministic", "--output", str(records))
        # r = 4 > t = 3: sampled under both large-r bounds
        assert code == 0 and json.loads(out)["totals"]["instances"] == 6
        assert len(records.read_text().splitlines()) == 2
        cfg.write_text("samples_per_cell = -1\n")
        code, _, _ = run(capsys, "verify", "--config", str(cfg))
        assert code == 2

    def test_bench(self, capsys):
        code, out, _ = run(capsys, "bench", "--n-max", "8", "--deterministic")
        data = json.loads(out)
        assert code == 0 and data["exhaustive"]["passed"] and all("seconds" not in r for r in data["constructions"])

    def test_usage(self, capsys):
        assert main(["nope"]) == 2
        assert main(["solve", "--jobs", "0"]) == 2
