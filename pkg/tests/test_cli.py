import json

from hybridmc.cli import EXIT_CONFIG, EXIT_OK, EXIT_UNCONVERGED, main

SMC = """
[model]
name = "brownian"
params = {{ mu = 0.0, sigma = 1.0 }}

[run]
mode = "smc"
level = 3
samples = 500
seed = 4
output_dir = "{out}"
"""


def _config(tmp_path, text, name="experiment.toml"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_estimate_succeeds(tmp_path, capsys):
    out = tmp_path / "out"
    code = main(["estimate", "--config", _config(tmp_path, SMC.format(out=out.as_posix()))])
    assert code == EXIT_OK
    assert (out / "report.json").exists()
    assert "estimate = " in capsys.readouterr().out


def test_seed_and_output_overrides(tmp_path):
    path = _config(tmp_path, SMC.format(out=(tmp_path / "ignored").as_posix()))
    out = tmp_path / "override"
    assert main(["estimate", "--config", path, "--seed", "9", "--out", str(out), "--quiet"]) == EXIT_OK
    report = json.loads((out / "report.json").read_text(encoding="utf-8"))
    assert report["seed"] == 9
    assert not (tmp_path / "ignored").exists()


def test_unconverged_run_exit_code(tmp_path):
    text = f"""
model = {{ name = "brownian", params = {{ mu = 0.0, sigma = 1.0 }} }}

[run]
mode = "adaptive"
epsilon = 0.001
max_cost = 100000
seed = 2
output_dir = "{(tmp_path / 'out').as_posix()}"
"""
    assert main(["estimate", "--config", _config(tmp_path, text), "--quiet"]) == EXIT_UNCONVERGED
    report = json.loads((tmp_path / "out" / "report.json").read_text(encoding="utf-8"))
    assert report["converged"] is False
    assert report["unconverged_reason"] == "max_cost"


def test_invalid_config_exit_code(tmp_path, capsys):
    path = _config(tmp_path, 'model = "tcl"\n\n[run]\nmode = "adaptive"\nepsilon = 0.1\n')
    assert main(["estimate", "--config", path]) == EXIT_CONFIG
    assert "run.seed" in capsys.readouterr().err


def test_missing_config_file(tmp_path):
    assert main(["estimate", "--config", str(tmp_path / "absent.toml")]) == EXIT_CONFIG


def test_mode_must_match_command(tmp_path):
    path = _config(tmp_path, SMC.format(out=(tmp_path / "out").as_posix()))
    assert main(["decay", "--config", path]) == EXIT_CONFIG
    assert main(["cost-compare", "--config", path]) == EXIT_CONFIG


def test_negative_seed_override_rejected(tmp_path):
    path = _config(tmp_path, SMC.format(out=(tmp_path / "out").as_posix()))
    assert main(["estimate", "--config", path, "--seed", "-1"]) == EXIT_CONFIG


def test_validate_model(tmp_path, capsys):
    path = _config(tmp_path, 'model = "tcl"\n\n[run]\nmode = "adaptive"\nepsilon = 0.1\nseed = 1\n')
    assert main(["validate", "--config", path]) == EXIT_OK
    assert "model tcl: ok" in capsys.readouterr().out


def test_decay_command(tmp_path, capsys):
    text = f"""
[model]
name = "linear"
params = {{ rate = -1.0 }}

[functional]
threshold = 0.5

[run]
mode = "decay-diagnostics"
levels = 2
samples = 20
smoothing_indices = [3]
seed = 1
output_dir = "{(tmp_path / 'decay').as_posix()}"
"""
    assert main(["decay", "--config", _config(tmp_path, text)]) == EXIT_OK
    assert (tmp_path / "decay" / "decay_summary.json").exists()
    assert "m3: alpha_hat = None" in capsys.readouterr().out


def test_recorded_runs_are_listed(tmp_path, capsys):
    path = _config(tmp_path, SMC.format(out=(tmp_path / "out").as_posix()))
    assert main(["estimate", "--config", path, "--record", "--quiet"]) == EXIT_OK
    capsys.readouterr()
    assert main(["runs", "--limit", "5"]) == EXIT_OK
    listing = capsys.readouterr().out.strip().splitlines()
    assert len(listing) == 1
    assert "\tsmc\tseed=4\t" in listing[0]


def test_cost_cap_below_initial_samples_exit_code(tmp_path, capsys):
    text = f"""
model = {{ name = "brownian", params = {{ mu = 0.0, sigma = 1.0 }} }}

[run]
mode = "adaptive"
epsilon = 0.1
max_cost = 500
seed = 1
output_dir = "{(tmp_path / 'out').as_posix()}"
"""
    assert main(["estimate", "--config", _config(tmp_path, text)]) == EXIT_CONFIG
    assert "max_cost" in capsys.readouterr().err
    assert not (tmp_path / "out").exists()
