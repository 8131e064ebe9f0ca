"""CLI and sweep-runner behaviour: exit codes, persistence, cache, determinism."""

import json
from pathlib import Path

import pytest

from wgslab.cli import main
from wgslab.errors import DomainError
from wgslab.runner import ResultTable, SweepConfig, config_hash, csv_body, run


def test_help_exits_zero():
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0


def test_unknown_experiment_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2  # argparse's own code for bad subcommands


def test_bad_grid_flag_is_usage_error():
    with pytest.raises(SystemExit):
        main(["entropy", "--alpha", "nonsense"])


def test_dry_run_prints_plan(capsys, tmp_path):
    code = main(
        ["entropy", "--n", "50", "--alpha", "1.0:0.5:2", "--out", str(tmp_path), "--dry-run"]
    )
    assert code == 0
    plan = json.loads(capsys.readouterr().out)
    assert plan["experiment"] == "entropy"
    assert plan["n_sites"] == 50
    assert plan["alpha"] == [1.0, 0.5, 2]
    assert "config_hash" in plan
    assert not list(tmp_path.iterdir())  # dry run writes nothing


def test_entropy_run_writes_csv_and_sidecar(tmp_path):
    code = main(
        [
            "entropy", "--n", "60", "--d", "2", "--alpha", "1.0:1.0:1",
            "--blocks", "1,2,5", "--sub-len", "1", "--t", "0.5",
            "--out", str(tmp_path),
        ]
    )
    assert code == 0
    csv_text = (tmp_path / "entropy.csv").read_text()
    header, *rows = csv_text.strip().split("\n")
    assert header == "alpha,block_len,entropy_bits,u_l_bound_bits"
    assert len(rows) == 3
    sidecar = json.loads((tmp_path / "entropy.json").read_text())
    assert sidecar["experiment"] == "entropy"
    assert sidecar["config"]["n_sites"] == 60
    assert sidecar["cache_hit"] is False


def test_validate_subcommand_passes(tmp_path):
    code = main(
        ["validate", "--trials", "10", "--seed", "3", "--out", str(tmp_path)]
    )
    assert code == 0
    sidecar = json.loads((tmp_path / "validate.json").read_text())
    assert sidecar["derived"]["passed"] is True
    assert sidecar["derived"]["worst_error"] < 1e-9


def test_cache_hit_on_rerun(tmp_path):
    args = ["ggm-time", "--n", "40", "--alpha", "1.0:1.0:1", "--t0", "3.0",
            "--out", str(tmp_path)]
    assert main(args) == 0
    first = json.loads((tmp_path / "ggm-time.json").read_text())
    assert first["cache_hit"] is False
    assert main(args) == 0
    second = json.loads((tmp_path / "ggm-time.json").read_text())
    assert second["cache_hit"] is True
    assert second["config_hash"] == first["config_hash"]


def test_no_cache_flag_bypasses(tmp_path):
    args = ["ggm-time", "--n", "40", "--alpha", "1.0:1.0:1", "--t0", "3.0",
            "--out", str(tmp_path), "--no-cache"]
    assert main(args) == 0
    assert main(args) == 0
    sidecar = json.loads((tmp_path / "ggm-time.json").read_text())
    assert sidecar["cache_hit"] is False
    assert not (tmp_path / ".cache").exists()


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n_sites": 30, "alpha": [1.0, 0.5, 2]}))
    code = main(
        ["ggm-time", "--config", str(cfg), "--n", "25", "--t0", "2.0",
         "--out", str(tmp_path / "res")]
    )
    assert code == 0
    sidecar = json.loads((tmp_path / "res" / "ggm-time.json").read_text())
    assert sidecar["config"]["n_sites"] == 25  # flag wins over file
    assert sidecar["config"]["alpha"] == [1.0, 0.5, 2]


def test_missing_config_file_is_usage_error(tmp_path, capsys):
    code = main(["entropy", "--config", str(tmp_path / "absent.json")])
    assert code == 1
    assert "usage error" in capsys.readouterr().err


def test_jobs_do_not_change_bytes(tmp_path):
    base = ["mi-average", "--n", "40", "--alpha", "0.8:0.4:2", "--r", "1,2,3,4",
            "--t0", "6.0", "--no-cache"]
    assert main(base + ["--jobs", "1", "--out", str(tmp_path / "serial")]) == 0
    assert main(base + ["--jobs", "8", "--out", str(tmp_path / "parallel")]) == 0
    serial = (tmp_path / "serial" / "mi-average.csv").read_bytes()
    parallel = (tmp_path / "parallel" / "mi-average.csv").read_bytes()
    assert serial == parallel


def test_sweep_config_validation():
    with pytest.raises(DomainError):
        SweepConfig(experiment="nope")
    with pytest.raises(DomainError):
        SweepConfig(experiment="entropy", alpha=(1.0, 0.1, 0))
    with pytest.raises(DomainError):
        SweepConfig(experiment="entropy", jobs=0)


def test_config_hash_sensitivity():
    a = SweepConfig(experiment="entropy", n_sites=100)
    b = SweepConfig(experiment="entropy", n_sites=101)
    c = SweepConfig(experiment="entropy", n_sites=100)
    assert config_hash(a) != config_hash(b)
    assert config_hash(a) == config_hash(c)


def test_csv_body_full_precision():
    table = ResultTable(
        experiment="entropy",
        columns=["x", "y"],
        rows=[(1, 0.1 + 0.2), (2, None)],
    )
    text = csv_body(table)
    assert "0.30000000000000004" in text  # 17 significant digits round-trip
    assert text.endswith("2,\n")


def test_run_returns_table(tmp_path):
    cfg = SweepConfig(
        experiment="validate", n_trials=5, out_dir=str(tmp_path), use_cache=False
    )
    table = run(cfg)
    assert len(table.rows) == 5
    assert table.derived["passed"] is True


def test_alpha_grid_construction():
    cfg = SweepConfig(experiment="entropy", alpha=(0.5, 0.25, 4))
    assert cfg.alphas.tolist() == [0.5, 0.75, 1.0, 1.25]
