import os
import json
import subprocess
import sys

import pandas
import pytest

from solspace import io
from solspace.formulas import read_dimacs
from solspace.scaling import ScalingFit
from solspace.script.harness import ConfigError, ExperimentConfig, SCHEMA_VERSION, report, run
from solspace.utils.mpl import emit_chart
from solspace.utils.tools import derive_seed


def get_config(experiment, output_dir, **kwargs):
    record = {"schema_version": SCHEMA_VERSION, "experiment": experiment, "output_dir": output_dir}
    record.update(kwargs)
    return ExperimentConfig.from_dict(record)


# ---------- #
#  Config    #
# ---------- #
def test_config_roundtrip():
    config = ExperimentConfig(experiment="shatter", n=80, alpha=4.1, probes=30, strategies=["S1", "S4"])
    again = ExperimentConfig.from_json(config.to_json())
    assert again == config
    assert again.validate() is again


def test_config_requires_schema_and_experiment():
    with pytest.raises(ConfigError) as error:
        ExperimentConfig.from_dict({"experiment": "solve"})
    assert error.value.errors == ["schema_version: missing"]
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"schema_version": 1})
    with pytest.raises(ConfigError) as error:
        ExperimentConfig.from_dict({"schema_version": 1, "experiment": "solve", "colour": "red"})
    assert "colour: unknown field" in error.value.errors
    with pytest.raises(ConfigError):
        ExperimentConfig.from_json("{not json")
    with pytest.raises(ConfigError):
        ExperimentConfig.from_json("[1, 2]")


@pytest.mark.parametrize("name,value", [
    ("schema_version", 2),
    ("experiment", "survey"),
    ("family", "pigeonhole"),
    ("n", 0),
    ("n", 2.5),
    ("n", True),
    ("alpha", -1.0),
    ("alpha", "4.2"),
    ("parity", 2),
    ("fraction", 1.0),
    ("tau", -1),
    ("seeds", 0),
    ("workers", 0),
    ("master_seed", -1),
    ("master_seed", 2**64),
    ("strategies", []),
    ("strategies", ["S9"]),
    ("strategies", "S1"),
    ("form", "cubic"),
    ("form", ["affine"]),
    ("model", "polynomial"),
    ("solver", "minisat"),
    ("steps", -1),
])
def test_config_field_errors(name, value):
    config = ExperimentConfig(experiment="shatter")
    setattr(config, name, value)
    errors = config.get_errors()
    assert len(errors) >= 1
    assert any(e.startswith(name + ":") for e in errors)
    with pytest.raises(ConfigError):
        config.validate()


def test_config_experiment_errors(tmp_path):
    # homology is limited to 24 variables
    assert ExperimentConfig(experiment="homology", n=30).get_errors()[0].startswith("n:")
    assert ExperimentConfig(experiment="homology", family="tseitin", m=3).get_errors()[0].startswith("m:")
    assert ExperimentConfig(experiment="homology", n=24).get_errors() == []
    assert ExperimentConfig(experiment="scaling", sizes=[]).get_errors()[0].startswith("sizes:")
    assert ExperimentConfig(experiment="scaling", sizes=[20, 10]).get_errors()[0].startswith("sizes:")
    assert ExperimentConfig(experiment="scaling", family="twosat", sizes=[10]).get_errors()[0].startswith("family:")
    assert ExperimentConfig(experiment="scaling", family="tseitin", sizes=[1, 2]).get_errors() != []
    assert ExperimentConfig(experiment="drunkwalk", family="tseitin").get_errors()[0].startswith("family:")
    assert ExperimentConfig(experiment="solve", dimacs=str(tmp_path / "missing.cnf")).get_errors()[0].startswith("dimacs:")
    assert ExperimentConfig(experiment="gen", k=5, n=4).get_errors()[0].startswith("k:")
    missing = ExperimentConfig(experiment="solve", solver="external", solver_path=str(tmp_path / "nosolver"))
    assert missing.get_errors()[0].startswith("solver_path:")


def test_config_accepts_empty_families():
    assert ExperimentConfig(experiment="gen", family="random-ksat", n=10, alpha=0).get_errors() == []
    assert ExperimentConfig(experiment="gen", family="twosat", n=2, alpha=0, m=0).get_errors() == []
    assert ExperimentConfig(experiment="gen", family="xorsat", n=2, alpha=0).get_errors() == []
    assert ExperimentConfig(experiment="gen", family="xorsat", n=2, alpha=1.0).get_errors()[0].startswith("n:")


def test_gen_run_without_clauses(output_dir):
    record = run(get_config("gen", output_dir, family="random-ksat", n=10, alpha=0, seeds=2))
    assert record.nerrors == 0
    assert list(record.data["clauses"]) == [0, 0]


def test_invalid_config_runs_nothing(output_dir):
    config = get_config("homology", output_dir, n=30)
    with pytest.raises(ConfigError):
        run(config)
    assert os.listdir(output_dir) == []


# ---------- #
#  Runs      #
# ---------- #
def test_shatter_run(output_dir):
    config = get_config("shatter", output_dir, n=30, alpha=3.0, probes=8, seeds=5, master_seed=3)
    record = run(config)
    assert record.nerrors == 0
    assert len(record.data) == 5
    assert list(record.data["seed"]) == [derive_seed(3, i) for i in range(5)]
    assert io.parse_runname(record.run_dir)["seed"] == 3
    files = io.get_run_files(record.run_dir)
    assert {"data", "json", "record"} <= set(files)
    assert "traces" not in files
    data = pandas.read_csv(files["data"])
    assert len(data) == 5
    stored = io.read_json(files["json"])
    assert stored["config"]["experiment"] == "shatter"
    assert "workers" not in stored["config"]
    runrecord = io.read_json(files["record"])
    assert runrecord["config"] == config.to_dict()
    assert runrecord["solver"]["restarts"] == "luby"
    assert len(runrecord["items"]) == 5


def test_output_independent_of_workers(output_dir):
    outputs = []
    for workers in [1, 2]:
        config = get_config("shatter", output_dir, n=30, alpha=3.0, probes=6, seeds=3, workers=workers)
        files = io.get_run_files(run(config).run_dir)
        outputs.append([open(files[kind]).read() for kind in ["data", "json"]])
    assert outputs[0] == outputs[1]


def test_gen_run(output_dir):
    config = get_config("gen", output_dir, family="tseitin", m=2, seeds=2)
    record = run(config)
    assert list(record.data["clauses"]) == [record.data["clauses"][0]] * 2
    for i in range(2):
        formula = read_dimacs(os.path.join(record.run_dir, "instance-%d.cnf" % i))
        assert formula.num_vars == 16


def test_solve_run_from_dimacs(output_dir, tmp_path, small_sat):
    filename = str(tmp_path / "small.cnf")
    small_sat.write_dimacs(filename)
    record = run(get_config("solve", output_dir, dimacs=filename, seeds=4))
    assert len(record.data) == 1
    assert record.data["status"][0] == "SAT"
    assert "wall_time" not in pandas.read_csv(record.files["data"]).columns


def test_solve_run_with_solver_path(output_dir, tmp_path, small_sat, solver_script):
    filename = str(tmp_path / "small.cnf")
    small_sat.write_dimacs(filename)
    config = get_config("solve", output_dir, dimacs=filename, solver="external", solver_path=solver_script)
    assert config.get_errors() == []
    record = run(config)
    assert record.nerrors == 0
    assert record.data["status"][0] == "SAT"
    # external solvers do not report conflicts
    assert record.data["conflicts"].isna().all()


def test_homology_run(output_dir):
    record = run(get_config("homology", output_dir, family="twosat", n=10, alpha=1.0, seeds=3))
    assert record.nerrors == 0
    assert list(record.data["b2"]) == [0, 0, 0]
    assert record.data["euler_ok"].all()


def test_drunkwalk_run(output_dir):
    config = get_config("drunkwalk", output_dir, n=30, alpha=3.0, steps=5, trials=2,
                        strategies=["S2", "S4"], probes=5)
    record = run(config)
    assert record.nerrors == 0
    assert list(record.data["strategy"]) == ["S2", "S4"]
    # a step of S2 and S4 is a batch of ceil(30 / 5) flips
    assert list(record.data["step_unit"]) == ["flip batch"] * 2
    assert list(record.data["flips_per_step"]) == [6, 6]
    assert "a batch of 6 flips" in open(record.files["chart"]).read()
    traces = io.read_jsonl(record.files["traces"])
    assert len(traces) == 4
    assert all("wall_time" not in step for t in traces for step in t["steps"])


def test_xortest_run(output_dir):
    record = run(get_config("xortest", output_dir, family="xorsat", n=12, alpha=0.25, triples=20))
    assert record.nerrors == 0
    assert record.data["violations"][0] == 0
    assert record.data["pool_source"][0] == "enumerate"


def test_item_errors_are_collected(output_dir):
    # walks cannot start on unsatisfiable instances
    config = get_config("drunkwalk", output_dir, n=8, alpha=10.0, seeds=2, trials=1, steps=1, probes=2)
    with pytest.warns(UserWarning):
        record = run(config)
    assert record.nerrors == 2
    assert len(record.items) == 2
    assert all("ValueError" in e["error"] for e in record.errors)
    assert os.path.isfile(record.files["record"])


def test_scaling_run(output_dir):
    config = get_config("scaling", output_dir, family="tseitin", sizes=[2, 3], seeds_per_size=1,
                        payload_n=10, payload_alpha=1.0)
    record = run(config)
    # two sizes: every fit is refused, the points are kept
    assert record.nerrors == 4
    assert all("FitRefused" in e["error"] for e in record.errors)
    assert sorted(set(record.data["variant"])) == ["bare", "conjoined"]
    assert len(record.data) == 4
    assert "fits" not in record.files


@pytest.mark.slow
def test_scaling_run_with_fits(output_dir):
    config = get_config("scaling", output_dir, family="tseitin", sizes=[2, 3, 4], seeds_per_size=2)
    record = run(config)
    assert record.nerrors == 0
    fits = io.read_json(record.files["fits"])
    assert sorted(f["model"] for f in fits) == ["exp-linear", "exp-two-thirds"]
    assert 'id="fit"' in open(record.files["chart"]).read()


def test_report(output_dir):
    record = run(get_config("homology", output_dir, family="twosat", n=8, alpha=1.0, seeds=2))
    before = open(record.files["chart"]).read()
    os.remove(record.files["chart"])
    filename = report(record.run_dir)
    assert open(filename).read() == before
    with pytest.raises(IOError):
        report(output_dir)


# ---------- #
#  Charts    #
# ---------- #
def test_emit_chart():
    points = [{"n": n, "conflicts": 2**(n/10)} for n in [10, 20, 30]]
    fit = ScalingFit("exp-linear", 0.1, 0.0, 1.0, 3, 3)
    svg = emit_chart(points, model_overlay=fit, band=(1, 2))
    assert svg.lstrip().startswith("<?xml")
    for gid in ["data", "fit", "band"]:
        assert 'id="%s"' % gid in svg
    assert emit_chart(points) == emit_chart(points)
    assert 'id="fit"' not in emit_chart(points)


def test_emit_chart_empty():
    with pytest.raises(ValueError):
        emit_chart([])
    with pytest.raises(ValueError):
        emit_chart(pandas.DataFrame({"n": [], "conflicts": []}))


# ---------- #
#  CLI       #
# ---------- #
@pytest.fixture
def cli(root_dir, output_dir):
    env = dict(os.environ, PYTHONPATH=root_dir, SOLSPACE_OUTPUT=output_dir)
    def _run(*args):
        return subprocess.run([sys.executable, os.path.join(root_dir, "bin", "solspace.py")] + list(args),
                              capture_output=True, text=True, env=env)
    return _run


def test_cli_run(cli, output_dir):
    process = cli("shatter", "--n", "30", "--alpha", "3.0", "--probes", "4", "--seeds", "2")
    assert process.returncode == 0, process.stderr
    run_dir = process.stdout.strip().splitlines()[-1]
    assert run_dir.startswith(output_dir)
    assert len(pandas.read_csv(os.path.join(run_dir, "data.csv"))) == 2


def test_cli_invalid(cli, tmp_path):
    assert cli("homology", "--n", "30").returncode == 1
    assert cli("shatter", "--fraction", "1.5").returncode == 1
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"experiment": "shatter"}))
    assert cli("shatter", "--config", str(config)).returncode == 1
    assert cli("shatter", "--config", str(tmp_path / "missing.json")).returncode == 1


def test_cli_config_file(cli, tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"schema_version": 1, "experiment": "solve", "n": 12, "alpha": 3.0}))
    process = cli("solve", "--config", str(config), "--seeds", "2")
    assert process.returncode == 0, process.stderr
    run_dir = process.stdout.strip().splitlines()[-1]
    stored = io.read_json(os.path.join(run_dir, "run.json"))
    assert stored["config"]["n"] == 12
    assert stored["config"]["seeds"] == 2


def test_cli_item_failure(cli):
    process = cli("drunkwalk", "--n", "8", "--alpha", "10", "--trials", "1", "--steps", "1", "--probes", "2")
    assert process.returncode == 2
    assert "ERROR" in process.stderr


def test_cli_competition(cli, tmp_path, small_sat, contradiction):
    sat, unsat = str(tmp_path / "sat.cnf"), str(tmp_path / "unsat.cnf")
    small_sat.write_dimacs(sat)
    contradiction.write_dimacs(unsat)
    process = cli("solve", "--competition", sat)
    assert process.returncode == 10
    assert "s SATISFIABLE" in process.stdout
    values = [int(v) for line in process.stdout.splitlines() if line.startswith("v ")
              for v in line.split()[1:]]
    assert values[-1] == 0 and 2 in values
    assert cli("solve", "--competition", unsat).returncode == 20
    bad = tmp_path / "bad.cnf"
    bad.write_text("p cnf 1 1\n2 0\n")
    assert cli("solve", "--competition", str(bad)).returncode == 1


def test_cli_solver_path(cli, tmp_path, small_sat, contradiction, solver_script):
    sat, unsat = str(tmp_path / "sat.cnf"), str(tmp_path / "unsat.cnf")
    small_sat.write_dimacs(sat)
    contradiction.write_dimacs(unsat)
    for filename, status in [(sat, "SAT"), (unsat, "UNSAT")]:
        process = cli("solve", "--dimacs", filename, "--solver-path", solver_script)
        assert process.returncode == 0, process.stderr
        run_dir = process.stdout.strip().splitlines()[-1]
        assert pandas.read_csv(os.path.join(run_dir, "data.csv"))["status"][0] == status
        assert io.read_json(os.path.join(run_dir, "run.json"))["config"]["solver"] == "external"
    assert cli("solve", "--dimacs", sat, "--solver", "external",
               "--solver-path", str(tmp_path / "nosolver")).returncode == 1
