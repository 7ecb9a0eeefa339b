#! /usr/bin/env python
# -*- coding: utf-8 -*-

""" Experiment orchestration: configs, batch execution and run directories """

import os
import json
import time
import shutil
import getpass
import warnings
from datetime import datetime
from dataclasses import dataclass, field, fields, asdict

import numpy as np
import pandas

from .. import io
from ..formulas import (ALPHA_C, CONTROL_FAMILIES, gen_random_ksat, gen_control_family,
                        margulis_expander, random_charges, tseitin, read_dimacs, regime)
from ..solver import solve, external_solve, solver_fingerprint, DEFAULT_CONFLICT_BUDGET
from ..topology import betti_of_formula, HOMOLOGY_MAX_VARS, DEFAULT_MAX_DIM
from ..shattering import shatter_report, DEFAULT_FRACTION, DEFAULT_PROBES, INTER_OVER_N_BAND
from ..drunkwalk import select_target, run_trials, get_step_unit, STRATEGIES, DEFAULT_STEPS, DEFAULT_TRIALS
from ..lineartest import xor_closure_test, FORMS, DEFAULT_TRIPLES
from ..scaling import (FamilySpec, FitRefused, run_scaling, conjoined_scaling, fit_scaling,
                       MODELS, FAMILY_KINDS, ScalingFit)
from ..utils.tools import derive_seed
from ..utils.mpl import emit_chart
from ..dask.base import compute_items

SCHEMA_VERSION = 1
EXPERIMENTS = ["gen", "solve", "homology", "shatter", "drunkwalk", "xortest", "scaling"]
FAMILIES = ["random-ksat", "tseitin"] + CONTROL_FAMILIES
SOLVERS = ["internal", "external"]
TIMING_COLUMNS = ["wall_time"]

__all__ = ["ExperimentConfig", "ConfigError", "RunRecord", "run", "report", "build_instance"]


class ConfigError(ValueError):
    """ invalid experiment configuration. `errors` lists 'field: message' entries """
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("invalid configuration:\n  " + "\n  ".join(self.errors))


# ================= #
#                   #
#   Config          #
#                   #
# ================= #
@dataclass
class ExperimentConfig:
    """ all the parameters of an experiment.

    Family parameters: family, n, alpha, k, m (Margulis side), parity
    (Tseitin total charge), dimacs (input file for solve).
    Control families get round(alpha * n) clauses. solver_path selects the
    external solver, SOLSPACE_SOLVER being used when it is None.
    """
    experiment: str
    schema_version: int = SCHEMA_VERSION
    # family
    family: str = "random-ksat"
    n: int = 50
    alpha: float = 4.0
    k: int = 3
    m: int = 3
    parity: int = 1
    dimacs: str = None
    # protocol
    seeds: int = 1
    fraction: float = DEFAULT_FRACTION
    probes: int = DEFAULT_PROBES
    tau: int = None
    budget: int = DEFAULT_CONFLICT_BUDGET
    steps: int = DEFAULT_STEPS
    trials: int = DEFAULT_TRIALS
    strategies: list = field(default_factory=lambda: list(STRATEGIES))
    triples: int = DEFAULT_TRIPLES
    form: str = "affine"
    max_dim: int = DEFAULT_MAX_DIM
    sizes: list = field(default_factory=list)
    seeds_per_size: int = 5
    model: str = "exp-linear"
    payload_n: int = 0
    payload_alpha: float = 3.0
    solver: str = "internal"
    solver_path: str = None
    # run
    master_seed: int = 0
    workers: int = 1
    output_dir: str = None
    alpha_c: float = ALPHA_C

    def __post_init__(self):
        """ """
        if isinstance(self.strategies, tuple):
            self.strategies = list(self.strategies)
        if isinstance(self.sizes, tuple):
            self.sizes = list(self.sizes)

    # --------- #
    #  I/O      #
    # --------- #
    @classmethod
    def from_dict(cls, record):
        """ """
        errors = []
        known = {f.name for f in fields(cls)}
        if "schema_version" not in record:
            errors.append("schema_version: missing")
        if "experiment" not in record:
            errors.append("experiment: missing")
        errors += ["%s: unknown field" % key for key in record if key not in known]
        if len(errors) > 0:
            raise ConfigError(errors)
        return cls(**record)

    @classmethod
    def from_json(cls, text):
        """ """
        try:
            record = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(["json: %s" % e])
        if not isinstance(record, dict):
            raise ConfigError(["json: an object is expected"])
        return cls.from_dict(record)

    @classmethod
    def read(cls, filename):
        """ """
        with open(filename) as f:
            return cls.from_json(f.read())

    def to_dict(self):
        """ """
        return asdict(self)

    def to_json(self):
        """ """
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def get_data_config(self):
        """ the fields that determine the data outputs (run location and pool size excluded) """
        record = self.to_dict()
        for key in ["workers", "output_dir"]:
            record.pop(key)
        return record

    # --------- #
    #  Checks   #
    # --------- #
    def get_errors(self):
        """ list of 'field: message' entries. Empty when the config is valid """
        errors = []
        def check(name, condition, message):
            if not condition:
                errors.append("%s: %s (%r given)" % (name, message, getattr(self, name)))

        check("schema_version", self.schema_version == SCHEMA_VERSION, "must be %d" % SCHEMA_VERSION)
        check("experiment", self.experiment in EXPERIMENTS, "must be one of %s" % ", ".join(EXPERIMENTS))
        check("family", self.family in FAMILIES, "must be one of %s" % ", ".join(FAMILIES))
        for name in ["n", "k", "seeds", "probes", "budget", "trials", "triples", "seeds_per_size", "workers"]:
            check(name, _is_int(getattr(self, name)) and getattr(self, name) >= 1, "must be an integer >= 1")
        for name in ["m", "steps", "max_dim", "payload_n"]:
            check(name, _is_int(getattr(self, name)) and getattr(self, name) >= 0, "must be an integer >= 0")
        check("alpha", _is_number(self.alpha) and self.alpha >= 0, "must be >= 0")
        check("payload_alpha", _is_number(self.payload_alpha) and self.payload_alpha > 0, "must be > 0")
        check("parity", self.parity in [0, 1], "must be 0 or 1")
        check("fraction", _is_number(self.fraction) and 0 <= self.fraction < 1, "must be in [0, 1)")
        check("tau", self.tau is None or (_is_int(self.tau) and self.tau >= 0), "must be None or an integer >= 0")
        check("master_seed", _is_int(self.master_seed) and 0 <= self.master_seed < 2**64, "must be a 64-bit unsigned integer")
        check("strategies", isinstance(self.strategies, list) and len(self.strategies) > 0 and all(s in STRATEGIES for s in self.strategies),
              "must be a non empty subset of %s" % ", ".join(STRATEGIES))
        check("form", self.form in list(FORMS), "must be one of %s" % ", ".join(FORMS))
        check("model", self.model in list(MODELS), "must be one of %s" % ", ".join(MODELS))
        check("solver", self.solver in SOLVERS, "must be one of %s" % ", ".join(SOLVERS))
        check("solver_path", self.solver_path is None or isinstance(self.solver_path, str), "must be None or a path")
        if len(errors) > 0:
            return errors

        # family specific
        if self.family == "random-ksat" or self.family == "twosat":
            width = self.k if self.family == "random-ksat" else 2
            check("k" if self.family == "random-ksat" else "n", width <= self.n, "clause width exceeds n")
        if self.family == "xorsat" and round(self.alpha*self.n) > 0:
            check("n", self.n >= 3, "xorsat constraints need n >= 3")
        if self.family == "tseitin":
            check("m", self.m >= 2, "Margulis side must be >= 2")

        # experiment specific
        if self.experiment == "solve":
            check("dimacs", self.dimacs is None or os.path.isfile(self.dimacs), "file not found")
            if self.solver == "external" and self.solver_path is not None:
                check("solver_path", shutil.which(self.solver_path) is not None, "not an executable")
            elif self.solver == "external":
                check("solver", io.SOLVER_PATH is not None, "external solver requires SOLSPACE_SOLVER or solver_path")
        elif self.experiment == "homology":
            nvars = 4*self.m**2 if self.family == "tseitin" else self.n
            check("n" if self.family != "tseitin" else "m", nvars <= HOMOLOGY_MAX_VARS,
                  "homology is limited to %d variables (%d requested)" % (HOMOLOGY_MAX_VARS, nvars))
        elif self.experiment == "drunkwalk":
            check("family", self.family != "tseitin" or self.parity == 0, "walks need a satisfiable family")
        elif self.experiment == "xortest":
            check("family", self.family != "tseitin" or self.parity == 0, "xortest needs a satisfiable family")
        elif self.experiment == "scaling":
            check("family", self.family in FAMILY_KINDS, "scaling supports %s" % ", ".join(FAMILY_KINDS))
            check("sizes", isinstance(self.sizes, list) and len(self.sizes) > 0 and all(_is_int(s) and s >= 1 for s in self.sizes)
                  and all(b > a for a, b in zip(self.sizes[:-1], self.sizes[1:])),
                  "must be non empty, strictly ascending positive integers")
            if self.family == "tseitin":
                check("sizes", all(s >= 2 for s in self.sizes), "Margulis sides must be >= 2")
        return errors

    def validate(self):
        """ raises ConfigError listing every invalid field """
        errors = self.get_errors()
        if len(errors) > 0:
            raise ConfigError(errors)
        return self

    @property
    def nvars(self):
        """ variable count of the configured instances """
        return 4*self.m**2 if self.family == "tseitin" else self.n


def _is_int(value):
    return isinstance(value, (int, np.integer)) and not isinstance(value, bool)

def _is_number(value):
    return isinstance(value, (int, float, np.integer, np.floating)) and not isinstance(value, bool)


# ================= #
#                   #
#   Record          #
#                   #
# ================= #
@dataclass
class RunRecord:
    """ what a run did: config snapshot, versions, per-item results and timing """
    config: dict
    version: str
    solver: dict
    user: str
    started: str
    items: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    wall_time: float = 0.0
    run_dir: str = None
    files: dict = field(default_factory=dict)
    data: object = field(default=None, repr=False)
    extras: dict = field(default_factory=dict, repr=False)

    def to_dict(self):
        """ """
        return {"config": self.config, "version": self.version, "solver": self.solver,
                "user": self.user, "started": self.started, "items": self.items,
                "errors": self.errors, "wall_time": self.wall_time, "run_dir": self.run_dir,
                "files": self.files}

    def get_config(self):
        """ ExperimentConfig of the run """
        return ExperimentConfig.from_dict(self.config)

    @property
    def nerrors(self):
        """ """
        return len(self.errors)


# ================= #
#                   #
#   Items           #
#                   #
# ================= #
def build_instance(config, seed):
    """ instance of the configured family for the given seed """
    if config.family == "random-ksat":
        return gen_random_ksat(config.n, config.alpha, k=config.k, seed=seed)
    if config.family == "tseitin":
        graph = margulis_expander(config.m)
        return tseitin(graph, random_charges(graph, parity=config.parity, seed=seed)).cnf
    return gen_control_family(config.family, config.n, int(round(config.alpha*config.n)), seed=seed)

def _run_gen(config, formula, seed):
    """ """
    density = formula.density
    return {"rows": [{"n": formula.num_vars, "clauses": formula.nclauses, "family": formula.family_tag,
                      "density": None if density is None else float(density),
                      "regime": regime(float(density)) if config.family == "random-ksat" and density else None}],
            "dimacs": formula.to_dimacs()}

def _run_solve(config, formula, seed):
    """ """
    if config.solver == "external":
        result = external_solve(formula, solver_path=config.solver_path)
    else:
        result = solve(formula, seed=seed, conflict_budget=config.budget)
    row = {"n": formula.num_vars, "clauses": formula.nclauses, "status": result.status}
    row.update({k: result.stats.get(k) for k in ["conflicts", "decisions", "propagations", "restarts", "wall_time"]})
    return {"rows": [row]}

def _run_homology(config, formula, seed):
    """ """
    vector = betti_of_formula(formula, max_dim=config.max_dim)
    row = {"n": formula.num_vars, "solutions": int(vector.face_counts[0]) if len(vector.face_counts) else 0,
           "euler_ok": vector.check_euler()}
    row.update({"f%d" % d: int(c) for d, c in enumerate(vector.face_counts)})
    row.update({"b%d" % d: int(b) for d, b in enumerate(vector.betti)})
    return {"rows": [row]}

def _run_shatter(config, formula, seed):
    """ """
    report_ = shatter_report(formula, fraction=config.fraction, probes=config.probes, tau=config.tau,
                             seed=seed, conflict_budget=config.budget)
    return {"rows": [report_.get_row()]}

def _run_drunkwalk(config, formula, seed):
    """ """
    target = select_target(formula, fraction=config.fraction, probes=config.probes, seed=derive_seed(seed, 0),
                           tau=config.tau,
                           conflict_budget=config.budget)
    rows, traces = [], []
    for index, strategy in enumerate(config.strategies):
        walks = run_trials(formula, strategy, target, budget=config.steps, trials=config.trials,
                           seed=derive_seed(seed, index + 1), fraction=config.fraction,
                           conflict_budget=config.budget)
        hits = sum(t.hit for t in walks)
        unit, flips = get_step_unit(strategy, formula.num_vars, config.steps)
        rows.append({"n": formula.num_vars, "strategy": strategy,
                     "strategy_index": STRATEGIES.index(strategy) + 1, "trials": len(walks), "hits": hits,
                     "hit_rate": hits / len(walks), "tau": target.tau, "steps": config.steps,
                     "step_unit": unit, "flips_per_step": flips})
        traces += [t.to_dict() for t in walks]
    return {"rows": rows, "traces": traces}

def _run_xortest(config, formula, seed):
    """ """
    report_ = xor_closure_test(formula, triples=config.triples, seed=seed, form=config.form,
                               probes=config.probes, fraction=config.fraction,
                               conflict_budget=config.budget)
    row = report_.get_row()
    row["alpha"] = config.alpha
    row["sampling"] = report_.sampling
    return {"rows": [row]}

ITEM_RUNNERS = {"gen": _run_gen, "solve": _run_solve, "homology": _run_homology,
                "shatter": _run_shatter, "drunkwalk": _run_drunkwalk, "xortest": _run_xortest}

def run_item(config, index):
    """ one item of a batch. Errors are caught and reported, they do not stop the batch """
    seed = derive_seed(config.master_seed, index)
    t0 = time.perf_counter()
    try:
        if config.experiment == "solve" and config.dimacs is not None:
            formula = read_dimacs(config.dimacs)
        else:
            formula = build_instance(config, seed)
        result = ITEM_RUNNERS[config.experiment](config, formula, seed)
    except Exception as e:
        result = {"rows": [], "error": "%s: %s" % (type(e).__name__, e)}
    for row in result["rows"]:
        row["item"] = index
        row["seed"] = seed
    result["item"] = index
    result["seed"] = seed
    result["wall_time"] = time.perf_counter() - t0
    return result


# ================= #
#                   #
#   Run             #
#                   #
# ================= #
def _run_scaling_batch(config, verbose=False):
    """ scaling points, with the conjoined variant when payload_n > 0, and both model fits """
    family = FamilySpec(config.family, {"alpha": config.alpha, "k": config.k, "parity": config.parity})
    variants = [("bare", None)]
    if config.payload_n > 0:
        payload = gen_random_ksat(config.payload_n, config.payload_alpha,
                                  seed=derive_seed(config.master_seed, 2**32))
        variants.append(("conjoined", payload))

    rows, fits, errors = [], [], []
    for variant, payload in variants:
        try:
            if payload is None:
                points = run_scaling(family, config.sizes, seeds_per_size=config.seeds_per_size,
                                     budget=config.budget, seed=config.master_seed,
                                     workers=config.workers, verbose=verbose)
            else:
                points = conjoined_scaling(family, payload, config.sizes, seeds_per_size=config.seeds_per_size,
                                           budget=config.budget, seed=config.master_seed,
                                           workers=config.workers, verbose=verbose)
        except Exception as e:
            errors.append({"item": variant, "error": "%s: %s" % (type(e).__name__, e)})
            continue

        for point in points:
            rows.append(dict(point.to_dict(), variant=variant))
        for model in MODELS:
            try:
                fits.append(dict(fit_scaling(points, model=model).to_dict(), variant=variant))
            except FitRefused as e:
                errors.append({"item": "%s/%s" % (variant, model), "error": "FitRefused: %s" % e})
    return rows, fits, errors

def run(config, write=True, verbose=False):
    """ runs an experiment.

    Parameters
    ----------
    config: [ExperimentConfig]
        validated first; nothing is run if invalid.

    write: [bool] -optional-
        write the run directory (data.csv, data.json, run.json, chart.svg...)

    Raises
    ------
    ConfigError

    Returns
    -------
    RunRecord
    """
    config.validate()
    from .. import __version__
    started = datetime.now()
    t0 = time.perf_counter()
    record = RunRecord(config=config.to_dict(), version=__version__, solver=solver_fingerprint(),
                       user=io.SOLSPACE_USER if io.SOLSPACE_USER != "auto" else getpass.getuser(),
                       started=started.isoformat(timespec="seconds"))

    traces, fits = [], []
    if config.experiment == "scaling":
        rows, fits, record.errors = _run_scaling_batch(config, verbose=verbose)
    else:
        nitems = 1 if (config.experiment == "solve" and config.dimacs is not None) else config.seeds
        results = compute_items(run_item, [(config, i) for i in range(nitems)], workers=config.workers)
        rows = []
        for result in results:
            rows += result["rows"]
            traces += result.get("traces", [])
            record.items.append({"item": result["item"], "seed": result["seed"],
                                 "wall_time": result["wall_time"], "error": result.get("error")})
            if "error" in result:
                record.errors.append({"item": result["item"], "error": result["error"]})
            if "dimacs" in result:
                record.extras.setdefault("dimacs", {})[result["item"]] = result["dimacs"]
        if verbose:
            print("INFO: %d items run, %d errors" % (len(results), len(record.errors)))

    record.data = pandas.DataFrame(rows)
    record.extras["traces"] = traces
    record.extras["fits"] = fits
    record.wall_time = time.perf_counter() - t0

    if len(record.errors) > 0:
        warnings.warn("%d items failed, see the run record" % len(record.errors))
    if write:
        _write_run(config, record, started)
    return record

def _write_run(config, record, started):
    """ fills the run directory """
    dirname = io.get_run_dirname(config.experiment, config.master_seed, output_dir=config.output_dir,
                                 timestamp=started)
    record.run_dir = dirname
    files = {}
    files["data"] = io.write_dataframe(record.data, os.path.join(dirname, io.RUN_FILES["data"]),
                                       drop=TIMING_COLUMNS)
    data = record.data.drop(columns=[c for c in TIMING_COLUMNS if c in record.data.columns])
    files["json"] = io.write_json({"config": config.get_data_config(), "rows": data.to_dict(orient="records")},
                                  os.path.join(dirname, io.RUN_FILES["json"]))
    if len(record.extras["traces"]) > 0:
        traces = [{k: v for k, v in t.items()} for t in record.extras["traces"]]
        for t in traces:
            t["steps"] = [{k: v for k, v in s.items() if k not in TIMING_COLUMNS} for s in t["steps"]]
        files["traces"] = io.write_jsonl(traces, os.path.join(dirname, io.RUN_FILES["traces"]))
    if len(record.extras["fits"]) > 0:
        files["fits"] = io.write_json(record.extras["fits"], os.path.join(dirname, io.RUN_FILES["fits"]))
    for item, text in record.extras.get("dimacs", {}).items():
        filename = os.path.join(dirname, "instance-%d.cnf" % item)
        with open(filename, "w") as f:
            f.write(text)

    chart = _get_chart(config.experiment, record.data, record.extras["fits"], model=config.model)
    if chart is not None:
        filename = os.path.join(dirname, io.RUN_FILES["chart"])
        with open(filename, "w") as f:
            f.write(chart)
        files["chart"] = filename

    files["record"] = os.path.join(dirname, io.RUN_FILES["record"])
    record.files = files
    io.write_json(record, files["record"])
    return dirname


# ================= #
#                   #
#   Charts          #
#                   #
# ================= #
CHARTS = {"gen": dict(x="n", y="clauses"),
          "solve": dict(x="n", y="conflicts"),
          "homology": dict(x="n", y="b0", ylabel="beta_0"),
          "shatter": dict(x="n", y="inter_over_n", ylabel="inter / n", band=INTER_OVER_N_BAND),
          "drunkwalk": dict(x="strategy_index", y="hit_rate", xlabel="strategy (S1..S4)"),
          "xortest": dict(x="n", y="violation_rate"),
          "scaling": dict(x="n", y="conflicts")}

def _get_chart(experiment, data, fits, model="exp-linear"):
    """ SVG chart of a run table, or None when there is nothing to draw """
    prop = dict(CHARTS[experiment])
    if len(data) == 0 or prop["y"] not in data.columns:
        warnings.warn("no data to chart for %s" % experiment)
        return None
    data = data[data[prop["y"]].notna()]
    if experiment == "scaling" and "excluded" in data.columns:
        data = data[~data["excluded"].astype(bool)]
    if len(data) == 0:
        warnings.warn("no data to chart for %s" % experiment)
        return None

    title = experiment
    if experiment == "drunkwalk" and "flips_per_step" in data.columns:
        flips = pandas.to_numeric(data["flips_per_step"], errors="coerce").dropna()
        if len(flips) > 0:
            title = "drunkwalk: an S2/S4 step is a batch of %d flips" % flips.max()

    overlay = None
    if experiment == "scaling":
        selected = [f for f in fits if f["model"] == model and f.get("variant", "bare") == "bare"]
        if len(selected) > 0:
            overlay = ScalingFit(**{k: v for k, v in selected[0].items() if k != "variant"})
        if "variant" in data.columns:
            data = data[data["variant"] == "bare"]
    return emit_chart(data, model_overlay=overlay, title=title, **prop)

def report(run_dir, model=None):
    """ re-renders chart.svg of an existing run directory. Returns the chart path """
    files = io.get_run_files(run_dir)
    if "data" not in files or "record" not in files:
        raise IOError("%s is not a complete run directory" % run_dir)
    runrecord = io.read_json(files["record"])
    config = ExperimentConfig.from_dict(runrecord["config"])
    data = pandas.read_csv(files["data"])
    fits = io.read_json(files["fits"]) if "fits" in files else []
    chart = _get_chart(config.experiment, data, fits, model=config.model if model is None else model)
    if chart is None:
        raise ValueError("nothing to chart in %s" % run_dir)
    filename = os.path.join(run_dir, io.RUN_FILES["chart"])
    with open(filename, "w") as f:
        f.write(chart)
    return filename
