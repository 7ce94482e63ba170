import numpy as np
import pytest

from ratematch import cli
from ratematch.config import SystemConfig, db_to_linear, load_config, load_users


def test_defaults_match_reference_setup():
    cfg = SystemConfig()
    assert cfg.n_t == 36
    assert cfg.sigma2_over_p == pytest.approx(0.02)
    assert cfg.rician_k == pytest.approx(db_to_linear(12.0))


def test_invalid_config_rejected():
    with pytest.raises(ValueError):
        SystemConfig(tx_power=0.0)
    with pytest.raises(ValueError):
        SystemConfig(nt_x=0)


def test_load_config_db_keys_take_precedence(tmp_path):
    p = tmp_path / "cfg.yaml"
    p.write_text("tx_power: 10\ntx_gain: 99\ntx_gain_db: 3\nnt_x: 4\nnt_y: 2\n")
    cfg = load_config(p)
    assert cfg.tx_power == 10.0
    assert cfg.tx_gain == pytest.approx(db_to_linear(3.0))
    assert cfg.n_t == 8


def test_load_config_unknown_key(tmp_path):
    p = tmp_path / "cfg.yaml"
    p.write_text("tx_powerr: 10\n")
    with pytest.raises(ValueError, match="unknown config key"):
        load_config(p)


def test_load_users_degrees(tmp_path):
    p = tmp_path / "cfg.yaml"
    p.write_text(
        "angle_unit: degrees\n"
        "users:\n"
        "  - {azimuth: 90, off_nadir: 10, distance: 610000}\n")
    users = load_users(p)
    assert len(users) == 1
    assert users[0].azimuth == pytest.approx(np.pi / 2)
    assert users[0].off_nadir == pytest.approx(np.radians(10))
    assert load_users(tmp_path / "cfg.yaml") is not None


def test_load_users_absent_section(tmp_path):
    p = tmp_path / "cfg.yaml"
    p.write_text("tx_power: 10\n")
    assert load_users(p) is None


def test_cli_run_writes_outputs(tmp_path, capsys):
    rc = cli.main(["run", "--realizations", "1", "--users", "2",
                   "--scheme", "ldm", "--out", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "results.csv").exists()
    assert (tmp_path / "summary.json").exists()
    assert "ldm: amae=" in capsys.readouterr().out


def test_cli_run_trace_flag(tmp_path, capsys):
    rc = cli.main(["run", "--realizations", "1", "--users", "2",
                   "--scheme", "ldm", "--trace", "--out", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "trace.csv").exists()


def test_cli_sweep(tmp_path, capsys):
    rc = cli.main(["sweep", "--axis", "mc-demand", "--values", "1.0",
                   "--realizations", "1", "--users", "2",
                   "--scheme", "ldm", "--out", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "sweep.json").exists()


def test_cli_convergence_trace(tmp_path, capsys):
    rc = cli.main(["convergence", "--users", "2", "--out", str(tmp_path)])
    assert rc == 0
    lines = (tmp_path / "trace.csv").read_text().strip().split("\n")
    assert lines[0] == "iter,residual_f,residual_v,objective,eigenvalue"
    assert len(lines) > 2


def test_cli_validate(tmp_path, capsys):
    p = tmp_path / "cfg.yaml"
    p.write_text("nt_x: 2\nnt_y: 2\n")
    assert cli.main(["validate", "--config", str(p)]) == 0
    assert "config ok" in capsys.readouterr().out
