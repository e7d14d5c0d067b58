import json
import os
import subprocess
import sys

import pytest

from e3real import cli
from e3real.cli import ScenarioConfig, main
from e3real.errors import IntegrationError

EULER = ["simulate", "--scenario", "euler", "--inertia", "1,2,3", "--initial-J", "1,1,1",
         "--initial-Gamma", "0,0,1"]


def read_rows(path):
    with open(path, newline="") as fh:
        text = fh.read()
    assert "\r" not in text
    return text.splitlines()


class TestSimulate:
    def test_contract_example(self, tmp_path):
        out = tmp_path / "traj.csv"
        rc = main(EULER + ["--dt", "1e-3", "--t-max", "10", "--out", str(out)])
        assert rc == 0
        rows = read_rows(out)
        assert rows[0] == "t,J1,J2,J3,Gamma1,Gamma2,Gamma3,K1,K2,H,K_extra"
        assert len(rows) == 10001 + 1
        report = json.loads((tmp_path / "traj.drift.json").read_text())
        assert max(report["drift"]["max_rel_drift"].values()) < 1e-6

    def test_record_stride(self, tmp_path):
        out = tmp_path / "traj.csv"
        assert main(EULER + ["--t-max", "1", "--record-stride", "100", "--out", str(out)]) == 0
        assert len(read_rows(out)) == 11 + 1

    def test_missing_inertia(self, tmp_path, capsys):
        rc = main(["simulate", "--scenario", "euler", "--initial-J", "1,1,1", "--initial-Gamma", "0,0,1",
                   "--out", str(tmp_path / "x.csv")])
        assert rc == 2
        assert "inertia" in capsys.readouterr().err
        assert not (tmp_path / "x.csv").exists()

    def test_zero_zeta_on_twistor(self, tmp_path):
        rc = main(["simulate", "--scenario", "euler", "--inertia", "1,2,3", "--realization", "twistor",
                   "--initial-theta", "1,0,0,0", "--initial-zeta", "0,0,0,0", "--out", str(tmp_path / "x.csv")])
        assert rc == 2

    def test_potential_rejected_for_lmg(self, tmp_path):
        rc = main(["simulate", "--scenario", "lmg", "--eps", "1", "--V", ".3", "--W", "1", "--chi", "0,0,1",
                   "--initial-J", "1,0,0", "--initial-Gamma", "0,0,1", "--out", str(tmp_path / "x.csv")])
        assert rc == 2

    def test_unknown_method(self):
        with pytest.raises(SystemExit) as exc:
            main(EULER + ["--method", "leapfrog"])
        assert exc.value.code == 2

    @pytest.mark.parametrize("realization", ["twistor", "monopole", "sphere", "sphere-embedded"])
    def test_lifted_from_e3(self, tmp_path, realization):
        out = tmp_path / "t.csv"
        rc = main(["simulate", "--scenario", "kovalevskaya", "--I", "2", "--chi1", "1", "--chi2", ".5",
                   "--realization", realization, "--from-e3", "--initial-J", ".3,.2,.5",
                   "--initial-Gamma", ".4,.1,.9", "--t-max", "1", "--dt", "1e-3", "--out", str(out)])
        assert rc == 0
        report = json.loads((tmp_path / "t.drift.json").read_text())
        assert max(report["drift"]["max_rel_drift"].values()) < 1e-6

    def test_inconsistent_level(self, tmp_path):
        rc = main(["simulate", "--scenario", "euler", "--inertia", "1,2,3", "--realization", "monopole",
                   "--from-e3", "--mu", "5", "--initial-J", "1,0,0", "--initial-Gamma", "0,0,1",
                   "--out", str(tmp_path / "x.csv")])
        assert rc == 2

    def test_byte_identical(self, tmp_path):
        for name in ("a", "b"):
            assert main(EULER + ["--t-max", "2", "--out", str(tmp_path / f"{name}.csv")]) == 0
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
        assert (tmp_path / "a.drift.json").read_bytes() == (tmp_path / "b.drift.json").read_bytes()

    def test_integration_failure_exit_3(self, tmp_path, monkeypatch):
        def boom(cfg):
            raise IntegrationError("non-finite state")

        monkeypatch.setattr(cli, "run_simulation", boom)
        assert main(EULER + ["--out", str(tmp_path / "x.csv")]) == 3


CONFIG = """\
scenario = "clebsch"
realization = "e3"

[inertia]
I1 = 1.0
I2 = 2.0
I3 = 3.0

[potential]
eps = 0.7

[initial]
J = [0.1, 0.2, 0.3]
Gamma = [0.0, 0.6, 0.8]

[integrator]
method = "rk4"
dt = 0.01
t_max = 1.0
"""


class TestConfigFile:
    def test_runs_and_echoes(self, tmp_path):
        cfg_path = tmp_path / "c.toml"
        cfg_path.write_text(CONFIG)
        out = tmp_path / "c.csv"
        assert main(["simulate", "--config", str(cfg_path), "--out", str(out)]) == 0
        meta = json.loads((tmp_path / "c.drift.json").read_text())["metadata"]
        echoed = ScenarioConfig.from_dict(meta["config"])
        assert echoed == ScenarioConfig.from_dict(json.loads(json.dumps(echoed.to_dict())))
        assert echoed.scenario == "clebsch" and echoed.params["eps"] == 0.7
        assert echoed.integrator == {"method": "rk4", "dt": 0.01, "t_max": 1.0}

    def test_flags_override_file(self, tmp_path):
        cfg_path = tmp_path / "c.toml"
        cfg_path.write_text(CONFIG)
        assert main(["simulate", "--config", str(cfg_path), "--t-max", "0.5", "--eps", "0.1",
                     "--out", str(tmp_path / "c.csv")]) == 0
        meta = json.loads((tmp_path / "c.drift.json").read_text())["metadata"]
        assert meta["config"]["integrator"]["t_max"] == 0.5
        assert meta["config"]["params"]["eps"] == 0.1

    def test_invalid_toml(self, tmp_path):
        cfg_path = tmp_path / "bad.toml"
        cfg_path.write_text("scenario = \n")
        assert main(["simulate", "--config", str(cfg_path)]) == 2

    def test_unknown_section_key(self, tmp_path):
        cfg_path = tmp_path / "bad.toml"
        cfg_path.write_text(CONFIG.replace("eps = 0.7", "epsilon = 0.7"))
        assert main(["simulate", "--config", str(cfg_path)]) == 2


class TestSeed:
    def test_env_fallback(self, tmp_path, monkeypatch):
        monkeypatch.setenv("E3REAL_SEED", "17")
        assert main(EULER + ["--t-max", "0.1", "--out", str(tmp_path / "x.csv")]) == 0
        assert json.loads((tmp_path / "x.drift.json").read_text())["metadata"]["seed"] == 17

    def test_flag_wins(self, tmp_path, monkeypatch):
        monkeypatch.setenv("E3REAL_SEED", "17")
        assert main(EULER + ["--t-max", "0.1", "--seed", "4", "--out", str(tmp_path / "x.csv")]) == 0
        assert json.loads((tmp_path / "x.drift.json").read_text())["metadata"]["seed"] == 4

    def test_bad_env(self, monkeypatch):
        monkeypatch.setenv("E3REAL_SEED", "abc")
        assert main(["verify", "dual-pair", "--samples", "5"]) == 2


class TestVerify:
    def test_unknown_suite(self):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "nope"])
        assert exc.value.code == 2

    def test_impossible_tolerance(self, tmp_path):
        assert main(["verify", "brackets", "--tol", "1e-30", "--out", str(tmp_path / "v.json")]) == 1

    def test_regression_exit_zero(self, tmp_path):
        out = tmp_path / "r.json"
        assert main(["verify", "regression", "--samples", "20", "--out", str(out)]) == 0
        report = json.loads(out.read_text())
        summary = next(r for r in report["results"] if r["check"] == "regression.allowlist")
        table = summary["details"]["deviation_table"]
        assert any(e["observed"] == "deviates" for e in table)

    def test_json_to_stdout(self, capsys):
        assert main(["verify", "dual-pair", "--samples", "10", "--seed", "42"]) == 0
        assert json.loads(capsys.readouterr().out)["seed"] == 42

    def test_per_check_tolerance(self, tmp_path):
        rc = main(["verify", "dual-pair", "--samples", "5", "--tol-check", "dual-pair=1e-40",
                   "--out", str(tmp_path / "v.json")])
        assert rc == 1


class TestListScenarios:
    def test_entries(self, capsys):
        assert main(["list-scenarios"]) == 0
        lines = {ln.split(":")[0]: ln for ln in capsys.readouterr().out.splitlines()}
        assert "euler" in lines
        assert all(k in lines["kovalevskaya"] for k in ("I", "chi1", "chi2"))
        assert all(k in lines["lmg"] for k in ("eps", "V", "W"))


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "e3real", "list-scenarios"], capture_output=True, text=True,
                          env=dict(os.environ))
    assert proc.returncode == 0 and "clebsch" in proc.stdout
