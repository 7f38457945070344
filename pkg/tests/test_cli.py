import json

import pytest
from click.testing import CliRunner

from levyfluct.cli import main
from levyfluct.experiments import default_specs

BM_JSON = '{"drift": 0.0, "sigma": 1.0, "jumps": {"type": "none"}}'


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def model_file(tmp_path):
    p = tmp_path / "model.json"
    p.write_text(BM_JSON)
    return str(p)


class TestScaleCommand:
    def test_stdout_grid(self, runner, model_file):
        res = runner.invoke(main, ["scale", "--model", model_file,
                                   "--gamma", "0.5", "--x-max", "0.05",
                                   "--h-grid", "0.005"])
        assert res.exit_code == 0
        lines = res.output.splitlines()
        assert lines[0] == "x,W,Wprime,Z"
        assert lines[1].startswith("0,0,2,1")

    def test_file_output(self, runner, model_file, tmp_path):
        out = tmp_path / "grid.csv"
        res = runner.invoke(main, ["scale", "--model", model_file,
                                   "--gamma", "0.5", "--x-max", "1.0",
                                   "--h-grid", "0.01", "--out", str(out)])
        assert res.exit_code == 0
        assert out.read_text().splitlines()[0] == "x,W,Wprime,Z"

    def test_inline_model(self, runner):
        res = runner.invoke(main, ["scale", "--model", BM_JSON,
                                   "--gamma", "0.5", "--x-max", "0.05",
                                   "--h-grid", "0.005"])
        assert res.exit_code == 0


class TestEvalCommand:
    def test_grid_cross_product(self, runner, model_file):
        res = runner.invoke(main, ["eval", "joint-cdf", "--model", model_file,
                                   "--gamma", "0.5",
                                   "--param", "a=-1.5:-0.5:3",
                                   "--param", "b=0.5:1.5:2"])
        assert res.exit_code == 0
        lines = res.output.strip().splitlines()
        assert lines[0] == "a,b,value"
        assert len(lines) == 7

    def test_known_value(self, runner, model_file):
        res = runner.invoke(main, ["eval", "joint-cdf", "--model", model_file,
                                   "--gamma", "0.5", "--param", "a=-1",
                                   "--param", "b=1"])
        value = float(res.output.strip().splitlines()[1].split(",")[2])
        assert value == pytest.approx(0.3519457263361146, rel=1e-9)

    def test_missing_param_rejected(self, runner, model_file):
        res = runner.invoke(main, ["eval", "exit-up", "--model", model_file,
                                   "--gamma", "0.5", "--param", "x=1"])
        assert res.exit_code != 0
        assert "missing" in res.output

    def test_unknown_param_rejected(self, runner, model_file):
        res = runner.invoke(main, ["eval", "exit-up", "--model", model_file,
                                   "--gamma", "0.5", "--param", "zz=1"])
        assert res.exit_code != 0


class TestVerifyCommand:
    def joint_spec_file(self, tmp_path, n_paths=4000):
        spec = default_specs("joint_law")[0].to_dict()
        spec.update({"n_paths": n_paths, "dt": 1e-3, "tolerance": 0.06})
        p = tmp_path / "spec.json"
        p.write_text(json.dumps(spec))
        return p

    def test_custom_spec_passes(self, runner, tmp_path):
        spec = self.joint_spec_file(tmp_path)
        out = tmp_path / "out"
        res = runner.invoke(main, ["verify", "joint_law", "--spec", str(spec),
                                   "--out", str(out), "--workers", "2"])
        assert res.exit_code == 0, res.output
        assert "[PASS] joint_law" in res.output
        report = (out / "joint_law" / "report.csv").read_text()
        assert report.startswith("experiment,label,analytic")
        assert (out / "joint_law" / "summary.txt").exists()

    def test_rerun_is_byte_identical(self, runner, tmp_path):
        spec = self.joint_spec_file(tmp_path)
        outs = []
        for sub in ("o1", "o2"):
            res = runner.invoke(main, ["verify", "joint_law", "--spec", str(spec),
                                       "--out", str(tmp_path / sub),
                                       "--workers", "1" if sub == "o1" else "2"])
            assert res.exit_code == 0
            outs.append((tmp_path / sub / "joint_law" / "report.csv").read_bytes())
        assert outs[0] == outs[1]

    def test_insufficient_bin_fails_with_message(self, runner, tmp_path):
        spec = default_specs("post_inf_sup")[0].to_dict()
        spec.update({"n_paths": 1000, "dt": 1e-3})
        p = tmp_path / "spec.json"
        p.write_text(json.dumps(spec))
        res = runner.invoke(main, ["verify", "post_inf_sup", "--spec", str(p),
                                   "--out", str(tmp_path / "out")])
        assert res.exit_code == 1
        assert "insufficient conditional sample" in res.output

    def test_spec_name_mismatch_rejected(self, runner, tmp_path):
        spec = self.joint_spec_file(tmp_path)
        res = runner.invoke(main, ["verify", "sup_marginal", "--spec", str(spec)])
        assert res.exit_code != 0

    def test_dump_paths(self, runner, tmp_path):
        spec = self.joint_spec_file(tmp_path, n_paths=200)
        dump = tmp_path / "paths.csv"
        res = runner.invoke(main, ["verify", "joint_law", "--spec", str(spec),
                                   "--out", str(tmp_path / "out"),
                                   "--dump-paths", str(dump)])
        assert res.exit_code in (0, 1)  # tolerances may fail at n=200
        lines = dump.read_text().splitlines()
        assert lines[0].startswith("seed_index,T,S,I")
        assert len(lines) == 201
