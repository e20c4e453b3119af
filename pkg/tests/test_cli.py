"""Command-line interface: outputs, manifests, exit codes."""

import json
import subprocess
import sys

import pytest

from voxpop import list_catalog
from voxpop.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# list / validate


def test_list_prints_the_catalog(capsys):
    code, out, _ = run_cli(capsys, "list")
    assert code == 0
    assert out.split() == list_catalog()


def test_validate_summarizes_a_scenario(capsys):
    code, out, _ = run_cli(capsys, "validate", "--scenario", "toy_half")
    assert code == 0
    assert "name:         toy_half" in out
    assert "agent-steps:" in out and "within budget" in out


def test_validate_flags_oversized_runs_without_refusing(capsys):
    code, out, _ = run_cli(capsys, "validate", "--scenario", "fig1_right")
    assert code == 0
    assert "above budget" in out


# ---------------------------------------------------------------------------
# simulate


SMALL = ("--set", "N=200", "--set", "T=10", "--set", "replications=2")


def test_simulate_writes_csv_and_manifest(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "simulate", "--scenario", "toy_half",
                           *SMALL, "--out", str(tmp_path))
    assert code == 0
    csv_path = tmp_path / "toy_half" / "trajectories.csv"
    manifest_path = tmp_path / "toy_half" / "manifest.json"
    assert str(csv_path) in out and str(manifest_path) in out
    header = csv_path.read_text().splitlines()[0]
    assert header == "mechanism,replication,t,k,p"

    manifest = json.loads(manifest_path.read_text())
    assert manifest["scenario"] == "toy_half"
    assert manifest["n_agents"] == 200
    assert manifest["overrides"] == ["N=200", "T=10", "replications=2"]
    assert manifest["files"] == ["trajectories.csv"]
    assert len(manifest["config_sha256"]) == 64
    assert set(manifest["versions"]) == {"voxpop", "python", "numpy"}


def test_simulate_reruns_byte_identically(tmp_path, capsys):
    args = ("simulate", "--scenario", "snowball", *SMALL)
    run_cli(capsys, *args, "--out", str(tmp_path / "a"))
    run_cli(capsys, *args, "--out", str(tmp_path / "b"))
    first = (tmp_path / "a" / "snowball" / "trajectories.csv").read_bytes()
    second = (tmp_path / "b" / "snowball" / "trajectories.csv").read_bytes()
    assert first == second


def test_simulate_seed_flag_changes_the_run(tmp_path, capsys):
    args = ("simulate", "--scenario", "toy_half", *SMALL)
    run_cli(capsys, *args, "--out", str(tmp_path / "a"), "--seed", "1")
    run_cli(capsys, *args, "--out", str(tmp_path / "b"), "--seed", "2")
    a = (tmp_path / "a" / "toy_half" / "trajectories.csv").read_bytes()
    b = (tmp_path / "b" / "toy_half" / "trajectories.csv").read_bytes()
    assert a != b
    manifest = json.loads((tmp_path / "b" / "toy_half" / "manifest.json").read_text())
    assert manifest["seed_override"] == 2
    assert manifest["master_seed"] == 2


def test_simulate_threads_match_serial(tmp_path, capsys):
    args = ("simulate", "--scenario", "toy_half", *SMALL)
    run_cli(capsys, *args, "--out", str(tmp_path / "serial"))
    run_cli(capsys, *args, "--out", str(tmp_path / "par"), "--threads", "2")
    serial = (tmp_path / "serial" / "toy_half" / "trajectories.csv").read_bytes()
    par = (tmp_path / "par" / "toy_half" / "trajectories.csv").read_bytes()
    assert serial == par


# ---------------------------------------------------------------------------
# analytics


def get_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_analytics_fluctuation_matches_closed_form(capsys):
    doc = get_json(capsys, "analytics", "fluctuation",
                   "--c", "0.8", "--c0", "0.15", "--T", "20")
    assert doc["name"] == "fluctuation_limits"
    assert doc["outputs"]["p_min_inf"] == pytest.approx(0.0085484, abs=5e-8)
    assert doc["outputs"]["p_max_inf"] == pytest.approx(0.7414516, abs=5e-8)
    assert doc["outputs"]["ceiling"] == pytest.approx(0.75, abs=1e-12)


def test_analytics_cycle_payload(capsys):
    doc = get_json(capsys, "analytics", "cycle", "--c", "0.8", "--c0", "0.15")
    assert doc["outputs"]["argmax_T"] == 1
    assert doc["outputs"]["v_star"] == pytest.approx(0.0833333, abs=5e-8)
    assert len(doc["outputs"]["v_table"]) == 50


def test_analytics_stationary_payload(capsys):
    doc = get_json(capsys, "analytics", "stationary", "--c", "0.6", "--c0", "0.4",
                   "--alpha", "0.2", "--beta", "0.3")
    assert doc["outputs"]["chain_on_fraction"] == pytest.approx(0.6)
    assert doc["outputs"]["mean"] == pytest.approx(0.4 * 0.6 / 0.4, rel=1e-12)
    assert doc["outputs"]["variance"] > 0


def test_analytics_cumulants_payload(capsys):
    doc = get_json(capsys, "analytics", "cumulants", "--c", "0.5",
                   "--k1", "0.25", "--k2", "0.0625", "--k3", "0")
    assert doc["outputs"]["k1"] == pytest.approx(0.5)
    assert doc["outputs"]["k2"] == pytest.approx(1 / 12)
    assert doc["outputs"]["k3"] == 0


def test_analytics_diffusion_payload(capsys):
    doc = get_json(capsys, "analytics", "diffusion", "--alpha", "0.2",
                   "--rho", "0.9", "--c", "0.5", "--theta", "0.2")
    assert doc["outputs"]["decision"] == "beta=1"
    assert doc["outputs"]["threshold"] == pytest.approx(0.138675, abs=5e-7)
    low = get_json(capsys, "analytics", "diffusion", "--alpha", "0.2",
                   "--rho", "0.9", "--c", "0.5", "--theta", "0.1")
    assert low["outputs"]["decision"] == "beta=0"


def test_analytics_echo_payload(capsys):
    doc = get_json(capsys, "analytics", "echo", "--epsilon", "0.05", "--nu", "0.5")
    assert doc["outputs"]["class1_mean"] == pytest.approx(0.95)
    assert doc["outputs"]["class1_variance"] == pytest.approx(0.035625)
    assert doc["outputs"]["class2_limit"] == 0.0
    assert doc["outputs"]["check_class2_final"] < 1e-3


# ---------------------------------------------------------------------------
# errors


def test_errors_local_writes_schema_csv(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "errors", "--scenario", "toy_half",
                           "--metric", "local", "--mechanism", "common", "--M", "50",
                           "--T", "5", "--replications", "8",
                           "--set", "N=500", "--out", str(tmp_path))
    assert code == 0
    lines = (tmp_path / "toy_half" / "errors.csv").read_text().splitlines()
    assert lines[0] == "metric,mechanism,N,M,T,estimate,std_error,bound,replications"
    assert len(lines) == 2
    fields = lines[1].split(",")
    assert fields[0] == "local" and fields[1] == "common(50)"
    assert fields[2] == "500" and fields[3] == "50" and fields[4] == "5"
    assert "estimate" in out


def test_errors_grid_sweeps_survey_sizes(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "errors", "--scenario", "toy_half",
                           "--metric", "local", "--mechanism", "common",
                           "--grid", "M=25,100,400",
                           "--T", "5", "--replications", "6",
                           "--set", "N=400", "--out", str(tmp_path))
    assert code == 0
    lines = (tmp_path / "toy_half" / "errors.csv").read_text().splitlines()
    assert len(lines) == 4
    ms = [line.split(",")[3] for line in lines[1:]]
    assert ms == ["25", "100", "400"]
    estimates = [float(line.split(",")[5]) for line in lines[1:]]
    assert estimates[0] > estimates[1] > estimates[2] == 0.0


def test_errors_global_marks_order_only_bound(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "errors", "--scenario", "toy_half",
                           "--metric", "global", "--mechanism", "meanfield",
                           "--T", "10", "--replications", "4",
                           "--set", "N=300", "--out", str(tmp_path))
    assert code == 0
    assert "(order-only)" in out


def test_errors_mechanism_flag_validation(capsys):
    code, _, err = run_cli(capsys, "errors", "--scenario", "toy_half",
                           "--metric", "local", "--mechanism", "common")
    assert code == 2 and "--M" in err
    code, _, err = run_cli(capsys, "errors", "--scenario", "toy_half",
                           "--metric", "local", "--mechanism", "meanfield", "--M", "10")
    assert code == 2 and "survey size" in err


# ---------------------------------------------------------------------------
# exit codes


def test_exit_code_2_for_configuration_errors(capsys):
    code, _, err = run_cli(capsys, "simulate", "--scenario", "no_such_scenario")
    assert code == 2 and "config error" in err
    code, _, err = run_cli(capsys, "simulate", "--scenario", "toy_half",
                           "--set", "h=0")
    assert code == 2
    code, _, err = run_cli(capsys, "simulate", "--scenario", "toy_half",
                           "--set", "nonsense=1")
    assert code == 2 and "unknown override key" in err


def test_exit_code_3_for_budget_refusal(capsys):
    code, _, err = run_cli(capsys, "simulate", "--scenario", "fig1_right")
    assert code == 3 and "budget refusal" in err and "--allow-large" in err


def test_exit_code_4_for_domain_errors(capsys):
    code, _, err = run_cli(capsys, "analytics", "fluctuation",
                           "--c", "1.0", "--c0", "0.15", "--T", "20")
    assert code == 4 and "domain error" in err
    code, _, err = run_cli(capsys, "analytics", "diffusion", "--alpha", "0.2",
                           "--rho", "0.9", "--c", "0.5", "--theta", "-1")
    assert code == 4


def test_installed_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "voxpop.cli", "--version"],
                          capture_output=True, text=True)
    # argparse --version exits 0 and prints the package version
    assert proc.returncode == 0
    assert "voxpop" in proc.stdout
