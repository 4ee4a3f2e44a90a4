import json
import os

import pytest

from risingbandits.cli import main

CONFIG = """
horizon_trials = 10
policies = rising_bandit, average
replications = 2
base_seed = 3

[arm]
kind = exponential
limit = 0.9
initial = 0.5
decay = 0.5

[arm]
kind = exponential
limit = 0.95
initial = 0.3
decay = 0.8
"""


@pytest.fixture()
def config_path(tmp_path):
    path = tmp_path / "experiment.cfg"
    path.write_text(CONFIG)
    return str(path)


class TestRunCommand:
    def test_writes_all_artifacts(self, config_path, tmp_path, capsys):
        out = str(tmp_path / "results")
        assert main(["run", config_path, "--output", out]) == 0
        for name in ("trace.csv", "report.json", "manifest.json"):
            assert os.path.exists(os.path.join(out, name))

    def test_trace_has_expected_shape(self, config_path, tmp_path):
        out = str(tmp_path / "results")
        main(["run", config_path, "--output", out])
        lines = open(os.path.join(out, "trace.csv")).read().splitlines()
        header = lines[0].split(",")
        assert header == [
            "step",
            "policy",
            "replication",
            "arm",
            "reward",
            "cost",
            "candidate_set_size",
            "best_so_far",
        ]
        # 2 policies x 2 replications x 10 steps.
        assert len(lines) == 1 + 40

    def test_report_contents(self, config_path, tmp_path):
        out = str(tmp_path / "results")
        main(["run", config_path, "--output", out])
        report = json.load(open(os.path.join(out, "report.json")))
        assert report["horizon"] == 10
        assert report["oracle_arm"] == 1
        assert set(report["policies"]) == {"rising_bandit", "average"}
        assert report["regrets"]["rising_bandit"] >= 0.0

    def test_manifest_echoes_config_and_seed(self, config_path, tmp_path):
        out = str(tmp_path / "results")
        main(["run", config_path, "--output", out, "--seed", "77"])
        manifest = json.load(open(os.path.join(out, "manifest.json")))
        assert manifest["base_seed"] == 77
        assert manifest["config_echo"] == CONFIG
        assert manifest["replications"] == 2

    def test_seed_env_override(self, config_path, tmp_path, monkeypatch):
        monkeypatch.setenv("RB_SEED", "123")
        out = str(tmp_path / "results")
        main(["run", config_path, "--output", out])
        manifest = json.load(open(os.path.join(out, "manifest.json")))
        assert manifest["base_seed"] == 123

    def test_parallel_jobs_match_serial(self, config_path, tmp_path):
        serial = str(tmp_path / "serial")
        parallel = str(tmp_path / "parallel")
        main(["run", config_path, "--output", serial])
        main(["run", config_path, "--output", parallel, "--jobs", "2"])
        assert (
            open(os.path.join(serial, "trace.csv"), "rb").read()
            == open(os.path.join(parallel, "trace.csv"), "rb").read()
        )

    def test_missing_config_exits_one(self, tmp_path, capsys):
        assert main(["run", str(tmp_path / "absent.cfg")]) == 1

    def test_invalid_config_exits_one(self, tmp_path, capsys):
        path = tmp_path / "bad.cfg"
        path.write_text("horizon_trials = 5\n")
        assert main(["run", str(path)]) == 1


class TestVerifyCommand:
    def test_lemma1_suite_passes(self, capsys):
        assert main(["verify", "lemma1"]) == 0
        out = capsys.readouterr().out
        assert "lemma1: 200/200 checks passed" in out

    def test_unknown_suite_exits_one(self, capsys):
        assert main(["verify", "no_such_suite"]) == 1
