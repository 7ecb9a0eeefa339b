#! /usr/bin/env python
# -*- coding: utf-8 -*-

""" Walk strategies trying to reach a designated target cluster.

- S1: random probing. Every step is an independent forced-probe solve.
- S2: local walk. Random single flips, kept only when the formula stays satisfied.
- S3: CDCL with diversification. Every step re-solves with a fresh polarity
  seed, previous witnesses being blocked.
- S4: descent with knowledge of the target. Flips a variable on which the
  current state and the target differ, the one leaving the most clauses
  satisfied (lowest index on ties). Intermediate states may violate the formula.

A step hits the target when its assignment satisfies the formula and lies
within Hamming distance tau of the target. Step 0 is the starting solution.
"""

import math
import time
import warnings
from dataclasses import dataclass, field

import numpy as np
import pandas

from .solver import CDCLSolver, BudgetExhausted, check_assignment, DEFAULT_CONFLICT_BUDGET
from .shattering import DEFAULT_FRACTION, default_tau, forced_probe_sample, _run_probe
from .utils.tools import derive_rng, derive_seed, hamming
from .dask.base import compute_items

DEFAULT_STEPS = 40
DEFAULT_TRIALS = 50
STRATEGIES = ["S1", "S2", "S3", "S4"]
STRATEGY_NAMES = {"S1": "random probing",
                  "S2": "local walk",
                  "S3": "CDCL with diversification",
                  "S4": "descent with target knowledge"}

__all__ = ["TargetSpec", "WalkStep", "WalkTrace",
           "select_target", "run_walk", "run_trials", "hit_rate", "get_step_unit", "get_hit_table"]


# ================= #
#                   #
#   RECORDS         #
#                   #
# ================= #
@dataclass
class TargetSpec:
    """ verified target solution and the hit radius """
    target: np.ndarray
    tau: int

    def to_dict(self):
        """ """
        return {"target": "".join(str(int(b)) for b in self.target), "tau": int(self.tau)}


@dataclass
class WalkStep:
    """ state of a walk after a step (assignment is None when the step produced no state) """
    step_index: int
    assignment: np.ndarray
    satisfies: bool
    hit_target: bool
    distance: int = None
    wall_time: float = 0.0
    status: str = None

    def to_dict(self):
        """ """
        return {"step_index": self.step_index,
                "assignment": None if self.assignment is None else "".join(str(int(b)) for b in self.assignment),
                "satisfies": bool(self.satisfies), "hit_target": bool(self.hit_target),
                "distance": self.distance, "wall_time": self.wall_time, "status": self.status}


@dataclass
class WalkTrace:
    """ all steps of one walk """
    strategy: str
    budget: int
    seed: int = 0
    steps: list = field(default_factory=list)
    hit_step: int = None

    def add_step(self, step):
        """ appends a step and records the first hit """
        if step.hit_target and not step.satisfies:
            raise ValueError("a hit must satisfy the formula")
        self.steps.append(step)
        if step.hit_target and self.hit_step is None:
            self.hit_step = step.step_index

    def get_distances(self):
        """ distance to target per step (None where no state) """
        return [s.distance for s in self.steps]

    def to_dict(self):
        """ """
        return {"strategy": self.strategy, "budget": self.budget, "seed": self.seed,
                "hit_step": self.hit_step, "steps": [s.to_dict() for s in self.steps]}

    @property
    def hit(self):
        """ """
        return self.hit_step is not None

    @property
    def nmoves(self):
        """ steps taken after the start (step 0) """
        return len(self.steps) - 1


# ================= #
#                   #
#   Target          #
#                   #
# ================= #
def _unconstrained_solve(formula, seed, index=0, conflict_budget=DEFAULT_CONFLICT_BUDGET):
    """ random-polarity solve keyed by (seed, index). Raises if no solution comes out """
    solver = CDCLSolver(formula, seed=derive_seed(seed, index), random_polarity=True,
                        conflict_budget=conflict_budget)
    result = solver.solve()
    if result.is_budget_exhausted:
        raise BudgetExhausted("conflict budget exhausted while looking for a starting solution")
    if not result.is_sat:
        raise ValueError("the formula is unsatisfiable, no walk can be run")
    return result.witness

def select_target(formula, fraction=DEFAULT_FRACTION, probes=50, seed=0, tau=None,
                      conflict_budget=DEFAULT_CONFLICT_BUDGET, workers=1):
    """ target = probe witness farthest from a reference unconstrained solve.

    Ties go to the lexicographically smallest witness.

    Returns
    -------
    TargetSpec
    """
    reference = _unconstrained_solve(formula, seed, 0, conflict_budget=conflict_budget)
    records = forced_probe_sample(formula, fraction=fraction, probes=probes, seed=derive_seed(seed, 1),
                                  conflict_budget=conflict_budget, workers=workers)
    witnesses = [r.witness for r in records if r.outcome == "SAT"]
    if len(witnesses) == 0:
        warnings.warn("no probe found a solution; the reference solve is used as target")
        witnesses = [reference]
    candidates = np.unique(np.asarray(witnesses, dtype=np.uint8), axis=0)
    distances = np.count_nonzero(candidates != reference, axis=1)
    target = candidates[int(np.argmax(distances))]
    tau = default_tau(formula.num_vars) if tau is None else int(tau)
    return TargetSpec(target, tau)


# ================= #
#                   #
#   Walks           #
#                   #
# ================= #
def _make_step(formula, index, assignment, target, t0, status=None):
    """ """
    if assignment is None:
        return WalkStep(index, None, False, False, None, time.perf_counter() - t0, status)
    satisfies = check_assignment(formula, assignment)
    distance = hamming(assignment, target.target)
    return WalkStep(index, assignment.copy(), satisfies, satisfies and distance <= target.tau,
                    distance, time.perf_counter() - t0, status)

def _s4_flip(formula, current, target):
    """ one target-knowledge flip: best clause count among the differing bits, lowest index on ties """
    differing = np.flatnonzero(current != target)
    candidates = np.repeat(current[None, :], len(differing), axis=0)
    candidates[np.arange(len(differing)), differing] ^= 1
    scores = formula.count_satisfied(candidates)
    best = differing[int(np.argmax(scores))]
    current = current.copy()
    current[best] ^= 1
    return current

def run_walk(formula, strategy, target, budget=DEFAULT_STEPS, seed=0, start=None,
                 fraction=DEFAULT_FRACTION, flips_per_step=None, stop_at_hit=True,
                 conflict_budget=DEFAULT_CONFLICT_BUDGET):
    """ runs one walk.

    Parameters
    ----------
    formula: [CnfFormula]

    strategy: [string]
        S1, S2, S3 or S4.

    target: [TargetSpec]
        the target must satisfy the formula.

    budget: [int] -optional-
        number of steps after the start (0 allowed: only step 0 is checked).

    seed: [int] -optional-

    start: [array/None] -optional-
        starting solution. Default: an unconstrained random-polarity solve.
        When that solve runs out of conflicts the trace holds a single step 0
        without state (status BUDGET) and no hit.

    fraction: [float] -optional-
        fraction of fixed variables of S1 probes.

    flips_per_step: [int/None] -optional-
        flips attempted per step by S2 and S4. Default ceil(n / budget) so
        that one step of every strategy covers the same share of the
        cube walk.

    stop_at_hit: [bool] -optional-
        stop at the first hit.

    Returns
    -------
    WalkTrace
    """
    if strategy not in STRATEGIES:
        raise ValueError("unknown strategy %s. Known: %s" % (strategy, ", ".join(STRATEGIES)))
    budget = int(budget)
    if budget < 0:
        raise ValueError("budget must be >= 0 (%d given)" % budget)
    target_bits = np.asarray(target.target, dtype=np.uint8)
    if not check_assignment(formula, target_bits):
        raise ValueError("the target does not satisfy the formula")
    target = TargetSpec(target_bits, int(target.tau))

    n = formula.num_vars
    flips_per_step = get_step_unit("S2", n, budget, flips_per_step)[1]

    t0 = time.perf_counter()
    trace = WalkTrace(strategy, budget, seed=int(seed))
    if start is None:
        try:
            current = _unconstrained_solve(formula, seed, 0, conflict_budget=conflict_budget)
        except BudgetExhausted:
            # no starting solution: the walk ends at step 0 without a state
            trace.add_step(_make_step(formula, 0, None, target, t0, status="BUDGET"))
            return trace
    else:
        current = np.asarray(start, dtype=np.uint8).copy()
        if not check_assignment(formula, current):
            raise ValueError("the starting assignment does not satisfy the formula")

    trace.add_step(_make_step(formula, 0, current, target, t0, status="SAT"))
    rng = derive_rng(seed, 1)
    visited = [current.copy()]

    for index in range(1, budget + 1):
        if stop_at_hit and trace.hit:
            break
        t0 = time.perf_counter()
        status = None
        if strategy == "S1":
            record = _run_probe(formula, fraction, derive_seed(seed, 2), index,
                                random_polarity=True, conflict_budget=conflict_budget)
            status = record.outcome
            current = record.witness

        elif strategy == "S2":
            for variable in rng.integers(0, n, size=flips_per_step) if n > 0 else []:
                proposal = current.copy()
                proposal[variable] ^= 1
                if check_assignment(formula, proposal):
                    current = proposal

        elif strategy == "S3":
            solver = CDCLSolver(formula, seed=derive_seed(seed, 100 + index), random_polarity=True,
                                conflict_budget=conflict_budget)
            for witness in visited:
                solver.add_clause([-(v+1) if b else v+1 for v, b in enumerate(witness)])
            result = solver.solve()
            status = result.status
            current = result.witness
            if current is not None:
                visited.append(current.copy())

        else:  # S4
            for _ in range(flips_per_step):
                if np.array_equal(current, target_bits):
                    break
                current = _s4_flip(formula, current, target_bits)

        trace.add_step(_make_step(formula, index, current, target, t0, status=status))

    return trace

def _run_trial(formula, strategy, target, budget, seed, trial, kwargs):
    """ """
    return run_walk(formula, strategy, target, budget=budget, seed=derive_seed(seed, trial), **kwargs)

def run_trials(formula, strategy, target, budget=DEFAULT_STEPS, trials=DEFAULT_TRIALS, seed=0,
                   workers=1, **kwargs):
    """ independent walks, trial i seeded from (seed, i)

    Returns
    -------
    list of WalkTrace
    """
    if int(trials) < 1:
        raise ValueError("trials must be >= 1 (%s given)" % trials)
    items = [(formula, strategy, target, budget, seed, i, kwargs) for i in range(int(trials))]
    return compute_items(_run_trial, items, workers=workers)

def hit_rate(formula, strategy, target, budget=DEFAULT_STEPS, trials=DEFAULT_TRIALS, seed=0,
                 workers=1, **kwargs):
    """ fraction of trials reaching the target within the budget """
    traces = run_trials(formula, strategy, target, budget=budget, trials=trials, seed=seed,
                        workers=workers, **kwargs)
    return sum(t.hit for t in traces) / len(traces)

def get_step_unit(strategy, n, budget, flips_per_step=None):
    """ what one step of `strategy` is: (unit, flips).

    S1 and S3 steps are one solver call (flips is None). S2 and S4 steps are
    a batch of flips, ceil(n / budget) by default.
    """
    if strategy in ["S1", "S3"]:
        return "solver call", None
    if flips_per_step is None:
        flips_per_step = max(1, int(math.ceil(n / max(int(budget), 1))))
    return "flip batch", int(flips_per_step)

def get_hit_table(rows):
    """ hit-rate table: strategies as rows, n as columns.

    Parameters
    ----------
    rows: [list of dict]
        with keys 'strategy', 'n' and 'hit_rate'. When the rows also carry
        'flips_per_step' the table gets a second column block with it, a step
        of S2 and S4 being that many flips (NaN for the solver-call steps of
        S1 and S3).

    Returns
    -------
    pandas.DataFrame
    """
    rows = list(rows)
    if len(rows) > 0 and all("flips_per_step" in row for row in rows):
        data = pandas.DataFrame(rows, columns=["strategy", "n", "hit_rate", "flips_per_step"])
        data["flips_per_step"] = pandas.to_numeric(data["flips_per_step"], errors="coerce")
        return data.pivot_table(index="strategy", columns="n", values=["hit_rate", "flips_per_step"],
                                aggfunc="mean", dropna=False)[["hit_rate", "flips_per_step"]]
    data = pandas.DataFrame(rows, columns=["strategy", "n", "hit_rate"])
    return data.pivot_table(index="strategy", columns="n", values="hit_rate", aggfunc="mean")
