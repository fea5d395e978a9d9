import io
import json
from itertools import combinations

import numpy as np
import pytest

from bergecycle import verify
from bergecycle.cli import main
from bergecycle.thresholds import hamiltonian_threshold
from bergecycle.verify import (ConfigError, SweepConfig, cmd_verify, edge_subsets_with_floor, run_exhaustive_cell,
                               run_sampled_cell, run_sharpness_cell, sharpness_instances)


def numpy_floor_count(n, r, floor):
    """Count edge subsets with min degree >= floor by evaluating every mask."""
    edges = list(combinations(range(n), r))
    masks = np.arange(1 << len(edges), dtype=np.int64)
    low = np.full(masks.shape, np.iinfo(np.int64).max)
    for v in range(n):
        deg = np.zeros(masks.shape, dtype=np.int64)
        for i, e in enumerate(edges):
            if v in e:
                deg += (masks >> i) & 1
        low = np.minimum(low, deg)
    return int((low >= floor).sum())


class TestEnumeration:
    @pytest.mark.parametrize("n,r,floor", [(5, 3, 0), (5, 3, 3), (5, 3, 5), (5, 2, 2), (6, 3, 4), (4, 3, 3)])
    def test_counts_match_numpy(self, n, r, floor):
        masks = list(edge_subsets_with_floor(n, r, floor))
        assert len(masks) == len(set(masks)) == numpy_floor_count(n, r, floor)

    def test_unreachable_floor(self):
        assert list(edge_subsets_with_floor(5, 3, 7)) == []


class TestCells:
    def test_exhaustive_n5(self):
        cell = run_exhaustive_cell(5, 3, 5, with_engine=True)
        assert cell.passed and cell.threshold == hamiltonian_threshold(5, 3).bound == 3
        assert cell.instances == numpy_floor_count(5, 3, 3)
        assert cell.details["edge_subsets"] == 1024
        assert cell.engine_runs == cell.details["solver_calls"]

    def test_sampled_deterministic(self):
        a = run_sampled_cell(8, 3, 7, "main3_c", 4, 0, 5, seed=11)
        b = run_sampled_cell(8, 3, 7, "main3_c", 4, 0, 5, seed=11)
        assert a.passed and a.to_json() == b.to_json()

    def test_sampled_half_k(self):
        cell = run_sampled_cell(9, 5, 8, "main41", 4, 8, 5, seed=1)
        assert cell.passed and cell.details["min_edges"] == 8

    def test_sharpness(self):
        cells = [run_sharpness_cell(*inst) for inst in sharpness_instances(n_max=10)]
        assert cells and all(c.passed for c in cells)
        h1 = next(c for c in cells if c.details["family"] == "h1" and c.n == 9 and c.r == 3)
        assert h1.details["min_degree"] == 6 and h1.details["circumference"] == 5

    def test_violation_payload_reproduces(self, capsys, tmp_path):
        label, ans, _ = next(i for i in sharpness_instances() if i[0][0] == "h2")
        cell = run_sharpness_cell(label, ans, {"hamiltonian": True})
        assert not cell.passed
        path = tmp_path / "v.bhg"
        path.write_text(cell.violations[0]["bhg"])
        assert main(["solve", "--input", str(path), "--target", "ham", "--deterministic"]) == 0
        assert json.loads(capsys.readouterr().out)["verdict"] == cell.details["hamiltonian_verdict"]


class TestConfig:
    def test_exhaustive_limits(self):
        with pytest.raises(ConfigError):
            SweepConfig(exhaustive_cells=[(7, 3, 7)])
        with pytest.raises(ConfigError):
            SweepConfig(exhaustive_cells=[(6, 4, 6)])

    def test_load_json_and_kv(self, tmp_path):
        j = tmp_path / "c.json"
        j.write_text(json.dumps({"grid": [[7, 3, 7]], "samples_per_cell": 2, "seed": 5}))
        kv = tmp_path / "c.cfg"
        kv.write_text("# sweep\ngrid = [[7, 3, 7]]\nsamples_per_cell = 2\nseed = 5\n")
        assert SweepConfig.load(j) == SweepConfig.load(kv)

    def test_unknown_key(self, tmp_path):
        p = tmp_path / "c.cfg"
        p.write_text("bogus = 1\n")
        with pytest.raises(ConfigError):
            SweepConfig.load(p)


class TestReport:
    def config(self):
        return SweepConfig(grid=[(7, 3, 6), (8, 5, 7)], samples_per_cell=3, exhaustive_cells=[(5, 3, 5)],
                           sharpness=False, seed=3)

    def test_reproducible(self):
        a = json.dumps(cmd_verify(self.config(), deterministic=True).to_json(), sort_keys=True)
        b = json.dumps(cmd_verify(self.config(), deterministic=True).to_json(), sort_keys=True)
        assert a == b

    def test_jobs_do_not_change_output(self):
        a = cmd_verify(self.config(), deterministic=True).to_json()
        b = cmd_verify(self.config(), jobs=2, deterministic=True).to_json()
        assert a == b

    def test_records(self):
        buf = io.StringIO()
        rep = cmd_verify(self.config(), deterministic=True, records=buf)
        lines = buf.getvalue().splitlines()
        assert len(lines) == len(rep.cells) and rep.passed
        # (8, 5, 7) has r > t, so it is sampled under both large-r bounds
        regimes = [json.loads(x)["regime"] for x in lines]
        assert regimes == ["main_b", "main3_c", "main4", "main41"]

    def test_default_grid(self):
        grid = verify.default_grid()
        assert (7, 3, 3) in grid and (11, 10, 11) in grid and (7, 4, 3) not in grid
