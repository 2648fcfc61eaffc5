import json
import math

import numpy as np
import pytest

from dirac_entangle import cli
from dirac_entangle.dynamics import integrate_schrodinger_oracle
from dirac_entangle.entanglement import concurrence
from dirac_entangle.errors import ConfigError, OutputError
from dirac_entangle.experiments import (
    COMMANDS,
    FIGURE_FOR_COMMAND,
    LAMBDA,
    RunConfig,
    ResultTable,
    cmd_avg_sweep,
    cmd_chsh,
    cmd_dynamics,
    cmd_eigen_sweep,
    cmd_ensemble_sweep,
    emit_plot_script,
    mark_extrema,
    parse_csv,
    run,
    sweep_ratios,
    to_csv,
    to_json,
    write_table,
)
from dirac_entangle.model import ModelParams
from dirac_entangle.states import named_state

# small but complete configurations, one per command
SMALL = {
    "eigen-sweep": {},
    "dynamics": {"n_samples": 201},
    "avg-sweep": {"sweep_points": 21, "avg_samples": 4096, "lambda_r": [37.5, 375.0]},
    "ensemble-sweep": {"n": 24, "avg_samples": 4096, "epsilon": [0.0, 37.5, 3750.0]},
    "chsh": {},
}


def small(command, **extra):
    return RunConfig.from_mapping({"command": command, **SMALL[command], **extra})


def numeric_part(text):
    return "\n".join(ln for ln in text.splitlines() if not ln.startswith("#"))


# -- config --------------------------------------------------------------


def test_config_defaults_follow_reference_parameters():
    c = RunConfig(command="chsh")
    assert c.n == 1000 and c.seed == 1935
    assert LAMBDA == 37.5


@pytest.mark.parametrize("bad", [
    {"command": "nope"},
    {"command": "chsh", "format": "xml"},
    {"command": "chsh", "threads": 0},
    {"command": "chsh", "seed": -1},
    {"command": "chsh", "lambda_r": [0.0]},
    {"command": "chsh", "epsilon": []},
    {"command": "dynamics", "states": ["psi_q"]},
    {"command": "ensemble-sweep", "n": 1},
    {"command": "avg-sweep", "sweep_points": 400},
    {"command": "avg-sweep", "avg_samples": 10},
    {"command": "chsh", "tau": 3},
    {"command": "chsh", "sampling": "cube"},
    {"command": "chsh", "colour": "red"},
])
def test_config_rejects(bad):
    with pytest.raises(ConfigError):
        RunConfig.from_mapping(bad)


def test_unknown_state_lists_valid_names():
    with pytest.raises(ConfigError, match="psi_x_up"):
        RunConfig.from_mapping({"command": "dynamics", "states": ["psi_q"]})


def test_config_file_and_overrides(tmp_path):
    f = tmp_path / "c.json"
    f.write_text(json.dumps({"command": "chsh", "seed": 5, "n": 7}))
    c = RunConfig.from_file(f, seed=9, n=None)
    assert c.seed == 9 and c.n == 7
    f.write_text("[1, 2]")
    with pytest.raises(ConfigError):
        RunConfig.from_file(f)
    f.write_text("{")
    with pytest.raises(ConfigError):
        RunConfig.from_file(f)
    with pytest.raises(ConfigError):
        RunConfig.from_file(tmp_path / "missing.json")


def test_digest_ignores_runtime_keys():
    a = RunConfig(command="chsh", threads=1, out="a.csv")
    b = RunConfig(command="chsh", threads=8, out="b.csv", format="json")
    assert a.digest() == b.digest()
    assert a.digest() != RunConfig(command="chsh", seed=2).digest()


# -- eigen-sweep ---------------------------------------------------------


def test_eigen_sweep_laws():
    t = cmd_eigen_sweep(RunConfig(command="eigen-sweep"))
    eps, lam = t.column("epsilon_ueV"), t.column("lambda_R_ueV")
    root = np.hypot(eps, lam)
    assert np.abs(t.column("concurrence") - lam / root).max() <= 1e-12
    assert np.abs(t.column("bloch_magnitude") - np.abs(eps) / root).max() <= 1e-12
    assert sorted(set(lam)) == [37.5, 375.0, 3750.0]


def test_eigen_sweep_examples():
    t = cmd_eigen_sweep(RunConfig(command="eigen-sweep", lambda_r=[37.5], epsilon=[0.0, 37.5, 300.0]))
    c, b = t.column("concurrence"), t.column("bloch_magnitude")
    assert c[0] == pytest.approx(1, abs=1e-14) and b[0] == pytest.approx(0, abs=1e-14)
    assert c[1] == pytest.approx(1 / math.sqrt(2), abs=1e-14) == b[1]
    assert c[2] == pytest.approx(0.12403, abs=5e-6)


def test_eigen_sweep_other_valley_uses_numeric_path():
    t = cmd_eigen_sweep(RunConfig(command="eigen-sweep", lambda_r=[37.5], epsilon=[-80.0, 20.0], tau=-1))
    eps = t.column("epsilon_ueV")
    assert np.allclose(t.column("concurrence"), 37.5 / np.hypot(eps, 37.5), atol=1e-12)


# -- dynamics ------------------------------------------------------------


def test_dynamics_bell_2_at_cnp():
    t = cmd_dynamics(RunConfig(command="dynamics", states=["bell_2"], epsilon=[0.0]))
    x = t.column("t_over_hbar_lambdaR")
    assert np.abs(t.column("C") - np.abs(np.cos(4 * x))).max() <= 1e-10


def test_dynamics_beta_consistent():
    t = cmd_dynamics(small("dynamics"))
    assert np.abs(t.column("beta") - np.sqrt(1 + t.column("C") ** 2)).max() <= 1e-14
    assert np.allclose(t.column("t_ns"), t.column("t_over_hbar_lambdaR") / 37.5 * 6.582119569e-10 * 1e9)


def test_dynamics_psi_x_at_ten_lambda():
    # measured exact-evolution peak is 0.1941; the oracle integrator agrees
    t = cmd_dynamics(RunConfig(command="dynamics", states=["psi_x_up"], epsilon=[375.0], n_samples=8001))
    c = t.column("C")
    k = int(np.argmax(c))
    assert c[k] == pytest.approx(0.1941, abs=5e-4)
    time = t.column("t_over_hbar_lambdaR")[k] / 37.5
    ref = integrate_schrodinger_oracle(ModelParams(375.0, 37.5), named_state("psi_x_up"), time)
    assert concurrence(ref) == pytest.approx(c[k], abs=1e-8)


def test_dynamics_literal_state_and_bloch():
    lit = json.dumps([[1 / math.sqrt(2), 0], [0, 0], [0, 0], [1 / math.sqrt(2), 0]])
    t = cmd_dynamics(RunConfig(command="dynamics", states=[lit], epsilon=[0.0], bloch=True, n_samples=11))
    assert np.allclose(t.column("C"), 1.0)
    for col in ("sx", "sy", "sz", "sigma_x", "sigma_y", "sigma_z"):
        assert np.allclose(t.column(col), 0.0, atol=1e-12)


# -- avg-sweep -----------------------------------------------------------


def test_sweep_ratio_grid():
    r = sweep_ratios(401)
    assert len(r) == 401 and r[200] == 0 and np.allclose(r[:200], -r[:200:-1])
    assert r[-1] == pytest.approx(1e3)


def test_mark_extrema():
    r = np.array([-3.0, -2, -1, 0, 1, 2, 3])
    v = np.array([0.0, 1, 0, 0, 0, -1, 0])
    assert list(mark_extrema(r, v)) == [0, 1, 0, 0, 0, -1, 0]


def test_avg_sweep_schema_and_bell_1_cnp_dropped():
    t = cmd_avg_sweep(small("avg-sweep"))
    assert t.names == ["state", "lambda_R_ueV", "epsilon_ueV", "epsilon_over_lambdaR", "avg_concurrence", "extremum"]
    state, ratio = np.array(t.data["state"]), t.column("epsilon_over_lambdaR")
    assert not np.any((state == "bell_1") & (ratio == 0))
    assert np.any((state == "bell_2") & (ratio == 0))
    assert len(t) == 2 * (4 * 21 - 1)


def test_avg_sweep_explicit_energies():
    t = cmd_avg_sweep(RunConfig(command="avg-sweep", lambda_r=[37.5], epsilon=[3750.0],
                                states=["bell_1", "bell_2", "psi_y_up"], avg_samples=8192))
    assert np.allclose(t.column("avg_concurrence"), 2 / math.pi, atol=0.01)


# -- ensemble-sweep ------------------------------------------------------


def test_ensemble_sweep_rows():
    t = cmd_ensemble_sweep(small("ensemble-sweep"))
    ens = np.array(t.data["ensemble"])
    assert sorted(set(ens)) == ["haar", "haar_t0", "separable"]
    assert all((ens == e).sum() == 3 for e in set(ens))
    assert np.all(t.column("n") == 24)
    assert t.provenance["sampling"] == "sphere"
    t0 = t.column("mean")[ens == "haar_t0"]
    assert np.all(t0 == t0[0])


# -- chsh ----------------------------------------------------------------


def test_chsh_bounds_and_labels():
    t = cmd_chsh(RunConfig(command="chsh"))
    for s in ("bell_1", "haar", "separable"):
        b = t.column(f"beta_{s}")
        assert b.min() >= 1 - 1e-15 and b.max() <= math.sqrt(2) + 1e-15
    assert t.provenance["seed"] == "1935"
    amps = np.array(json.loads(t.provenance["haar_state"]))
    assert np.sum(amps ** 2) == pytest.approx(1.0)
    bell = t.column("beta_bell_1")
    assert bell.max() == pytest.approx(math.sqrt(2), abs=1e-6)
    assert bell.min() == pytest.approx(1.0, abs=1e-4)


# -- serialization and plots ---------------------------------------------


@pytest.mark.parametrize("command", COMMANDS)
def test_csv_round_trip(command, tmp_path):
    table = run(small(command))
    path = tmp_path / "out.csv"
    write_table(table, path)
    back = parse_csv(path.read_text())
    assert back.columns == table.columns
    assert back.provenance == table.provenance
    for name in table.names:
        a, b = table.data[name], back.data[name]
        if isinstance(a[0], str):
            assert a == b
        else:
            assert np.array_equal(np.asarray(a, float), np.asarray(b, float))


def test_csv_layout():
    t = ResultTable([("x", "ueV"), ("y", "-")], {"x": [1.5, 2.0], "y": [0.1, 3]}, {"seed": "1"})
    assert to_csv(t) == "x[ueV],y[-]\n1.5,0.1\n2.0,3\n# seed: 1\n"


def test_json_mirrors_csv():
    t = run(small("chsh"))
    doc = json.loads(to_json(t))
    assert [c["name"] for c in doc["columns"]] == t.names
    assert len(doc["rows"]) == len(t)
    assert doc["rows"][5][2] == t.data[t.names[2]][5]


def test_write_table_unwritable(tmp_path):
    t = run(small("chsh"))
    bad = tmp_path / "no" / "such" / "dir" / "x.csv"
    with pytest.raises(OutputError, match="x.csv"):
        write_table(t, bad)


@pytest.mark.parametrize("command", COMMANDS)
def test_plot_scripts(command):
    table = run(small(command))
    script = emit_plot_script(table, FIGURE_FOR_COMMAND[command], "data.csv")
    assert "'data.csv'" in script and script.count("plot ") >= 1


def test_fig1_and_fig2_layout():
    s1 = emit_plot_script(run(small("eigen-sweep")), "fig1", "d.csv")
    assert "lambda_R = 37.5 ueV" in s1 and "lambda_R = 3750 ueV" in s1
    s2 = emit_plot_script(run(small("dynamics")), "fig2", "d.csv")
    assert "layout 4,1" in s2 and s2.count("\nplot ") == 4


def test_plot_schema_mismatch_names_column():
    t = ResultTable([("epsilon_ueV", "ueV"), ("concurrence", "-")], {"epsilon_ueV": [0.0], "concurrence": [1.0]})
    with pytest.raises(ConfigError, match="lambda_R_ueV"):
        emit_plot_script(t, "fig1", "d.csv")
    with pytest.raises(ConfigError):
        emit_plot_script(t, "fig9", "d.csv")


# -- determinism ---------------------------------------------------------


@pytest.mark.parametrize("command", COMMANDS)
def test_thread_count_does_not_change_output(command):
    one = to_csv(run(small(command, threads=1)))
    eight = to_csv(run(small(command, threads=8)))
    assert numeric_part(one) == numeric_part(eight)
    assert one == eight


# -- CLI -----------------------------------------------------------------


def test_cli_stdout(capsys):
    assert cli.main(["eigen-sweep", "--lambda-r", "37.5", "--epsilon", "0,300"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("epsilon_ueV[ueV],lambda_R_ueV[ueV],concurrence[-],bloch_magnitude[-]\n")
    assert "0.12403" in out.splitlines()[2]


def test_cli_file_plot_and_config(tmp_path):
    cfg = tmp_path / "chsh.json"
    cfg.write_text(json.dumps({"command": "chsh", "seed": 3}))
    out = tmp_path / "chsh.csv"
    assert cli.main(["chsh", "--config", str(cfg), "--seed", "4", "--out", str(out), "--plot"]) == 0
    table = parse_csv(out.read_text())
    assert table.provenance["seed"] == "4"
    assert "chsh.csv" in (tmp_path / "chsh.gp").read_text()


def test_cli_json(tmp_path):
    out = tmp_path / "e.json"
    assert cli.main(["eigen-sweep", "--epsilon", "1", "--format", "json", "--out", str(out)]) == 0
    assert len(json.loads(out.read_text())["rows"]) == 3


@pytest.mark.parametrize("argv, code", [
    (["chsh", "--threads", "0"], 2),
    (["dynamics", "--state", "psi_q"], 2),
    (["chsh", "--plot"], 2),
    (["eigen-sweep", "--out", "/nonexistent-dir/x.csv"], 3),
    (["eigen-sweep", "--lambda-r", "37.5", "--epsilon", "nan"], 4),
])
def test_cli_exit_codes(argv, code, capsys):
    assert cli.main(argv) == code
    assert "dirac-entangle: error:" in capsys.readouterr().err


def test_cli_help_per_command(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["avg-sweep", "--help"])
    assert exc.value.code == 0
    assert "--lambda-r" in capsys.readouterr().out


def test_shipped_configs_load():
    from pathlib import Path

    files = sorted((Path(__file__).parents[1] / "configs").glob("*.json"))
    assert len(files) == 5
    commands = {RunConfig.from_file(f).command for f in files}
    assert commands == set(COMMANDS)
