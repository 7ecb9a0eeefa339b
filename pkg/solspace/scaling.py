#! /usr/bin/env python
# -*- coding: utf-8 -*-

""" Conflict-count scaling of the internal CDCL solver across instance families """

import time
import warnings
from dataclasses import dataclass, asdict

import numpy as np
import pandas
from scipy import stats

from .formulas import gen_random_ksat, margulis_expander, random_charges, tseitin, conjoin
from .solver import solve, DEFAULT_CONFLICT_BUDGET
from .utils.tools import derive_seed
from .dask.base import compute_items

MODELS = {"exp-linear": lambda n: np.asarray(n, dtype=float),
          "exp-two-thirds": lambda n: np.asarray(n, dtype=float)**(2/3)}
FAMILY_KINDS = ["tseitin", "random-ksat"]
MIN_FIT_POINTS = 3

__all__ = ["FamilySpec", "ScalingPoint", "ScalingFit", "FitRefused",
           "run_scaling", "fit_scaling", "conjoined_scaling", "get_scaling_table"]


class FitRefused(ValueError):
    """ not enough usable points for a fit """


# ================= #
#                   #
#   Families        #
#                   #
# ================= #
class FamilySpec( object ):
    """ generator descriptor: how to build the instance of a given size and seed.

    - tseitin: size is the Margulis side m (4m^2 edge variables).
      params: parity (total charge parity, default 1).
    - random-ksat: size is n. params: alpha (default 4.5), k (default 3).
    """
    def __init__(self, kind, params=None, target_status="UNSAT", payload=None):
        """ """
        if kind not in FAMILY_KINDS:
            raise ValueError("unknown family kind %s. Known: %s" % (kind, ", ".join(FAMILY_KINDS)))
        if target_status not in ["SAT", "UNSAT", None]:
            raise ValueError("target_status must be SAT, UNSAT or None")
        self._kind = kind
        self._params = {} if params is None else dict(params)
        self._target_status = target_status
        self._payload = payload

    def __repr__(self):
        return "<FamilySpec %s %s%s>" % (self.kind, self.params, " +payload" if self.payload is not None else "")

    @classmethod
    def from_dict(cls, record):
        """ """
        return cls(record["kind"], record.get("params"), record.get("target_status", "UNSAT"))

    def to_dict(self):
        """ """
        return {"kind": self.kind, "params": self.params, "target_status": self.target_status,
                "payload": None if self.payload is None else
                    {"num_vars": self.payload.num_vars, "nclauses": self.payload.nclauses}}

    def with_payload(self, payload):
        """ same family, each instance conjoined with `payload` """
        return self.__class__(self.kind, self.params, self.target_status, payload=payload)

    def build(self, size, seed=0):
        """ instance of the given size. Returns (formula, core variable count) """
        size = int(size)
        if self.kind == "tseitin":
            graph = margulis_expander(size)
            charges = random_charges(graph, parity=self.params.get("parity", 1), seed=seed)
            core = tseitin(graph, charges).cnf
        else:
            core = gen_random_ksat(size, self.params.get("alpha", 4.5), k=self.params.get("k", 3), seed=seed)
        if self.payload is None:
            return core, core.num_vars
        return conjoin(core, self.payload), core.num_vars

    @property
    def kind(self):
        """ """
        return self._kind

    @property
    def params(self):
        """ """
        return self._params

    @property
    def target_status(self):
        """ expected status. Points with another status are excluded from fits """
        return self._target_status

    @property
    def payload(self):
        """ """
        return self._payload


# ================= #
#                   #
#   Records         #
#                   #
# ================= #
@dataclass
class ScalingPoint:
    """ one (size, seed) solve """
    n: int
    size: int
    seed: int
    conflicts: float
    status: str
    wall_time: float = 0.0
    excluded: bool = False
    reason: str = None

    def to_dict(self):
        """ """
        return asdict(self)

    @property
    def censored(self):
        """ conflict budget exhausted """
        return self.status == "BUDGET"


@dataclass
class ScalingFit:
    """ least squares of log2(conflicts) against the model's size transform """
    model: str
    coefficient: float
    intercept: float
    r_squared: float
    points_used: int
    sizes_used: int
    censored: int = 0
    excluded: int = 0
    aggregate: str = "median"

    def predict(self, n):
        """ fitted conflict count at size n """
        return 2**(self.coefficient * MODELS[self.model](n) + self.intercept)

    def to_dict(self):
        """ """
        return asdict(self)


# ================= #
#                   #
#   Runs            #
#                   #
# ================= #
def _run_point(family, size, seed, budget):
    """ """
    formula, n = family.build(size, seed)
    t0 = time.perf_counter()
    result = solve(formula, conflict_budget=budget)
    wall_time = time.perf_counter() - t0

    excluded, reason = False, None
    if result.is_budget_exhausted:
        excluded, reason = True, "censored"
    elif family.target_status is not None and result.status != family.target_status:
        excluded, reason = True, "status %s" % result.status
    return ScalingPoint(n=n, size=int(size), seed=int(seed), conflicts=int(result.stats["conflicts"]),
                        status=result.status, wall_time=wall_time, excluded=excluded, reason=reason)

def get_instance_seed(seed, size, index):
    """ instance seed of the index-th repetition at a size (independent of the other sizes) """
    return derive_seed(derive_seed(seed, int(size)), int(index))

def run_scaling(family, sizes, seeds_per_size=5, budget=DEFAULT_CONFLICT_BUDGET, seed=0,
                    workers=1, verbose=False):
    """ solves every (size, seed) instance of a family with the internal CDCL.

    Parameters
    ----------
    family: [FamilySpec]

    sizes: [list of int]
        non empty, strictly ascending.

    seeds_per_size: [int] -optional-

    budget: [int] -optional-
        conflict cap per solve. Exhausted points are kept, flagged censored.

    seed: [int] -optional-
        master seed.

    Returns
    -------
    list of ScalingPoint, ordered by size then repetition.
    """
    sizes = [int(s) for s in sizes]
    if len(sizes) == 0:
        raise ValueError("sizes must not be empty")
    if any(b <= a for a, b in zip(sizes[:-1], sizes[1:])):
        raise ValueError("sizes must be strictly ascending (%s given)" % sizes)
    if int(seeds_per_size) < 1:
        raise ValueError("seeds_per_size must be >= 1")
    if int(budget) < 1:
        raise ValueError("budget must be >= 1")

    items = [(family, size, get_instance_seed(seed, size, j), int(budget))
             for size in sizes for j in range(int(seeds_per_size))]
    points = compute_items(_run_point, items, workers=workers)

    mismatched = [p for p in points if p.excluded and not p.censored]
    if len(mismatched) > 0:
        warnings.warn("%d instances did not reach the %s status; they are excluded from fits"
                      % (len(mismatched), family.target_status))
    if verbose:
        for size in sizes:
            sub = [p for p in points if p.size == size]
            print("INFO: size %d: median conflicts %s, %d censored" % (
                size, np.median([p.conflicts for p in sub]), sum(p.censored for p in sub)))
    return points

def conjoined_scaling(core_family, payload, sizes, seeds_per_size=5, budget=DEFAULT_CONFLICT_BUDGET,
                          seed=0, workers=1, verbose=False):
    """ run_scaling over conjoin(core instance, payload).

    The payload must be satisfiable so that the conjunction keeps the core
    status. Points report the core variable count as n.
    """
    result = solve(payload, conflict_budget=budget)
    if not result.is_sat:
        raise ValueError("the payload must be satisfiable (%s)" % result.status)
    return run_scaling(core_family.with_payload(payload), sizes, seeds_per_size=seeds_per_size,
                       budget=budget, seed=seed, workers=workers, verbose=verbose)


# ================= #
#                   #
#   Fits            #
#                   #
# ================= #
def get_scaling_table(points):
    """ per size: n, median conflicts of usable points, and point accounting """
    data = pandas.DataFrame([p.to_dict() for p in points])
    if len(data) == 0:
        return pandas.DataFrame(columns=["size", "n", "median_conflicts", "used", "censored", "excluded"])
    usable = data[~data["excluded"]]
    table = data.groupby("size").agg(n=("n", "first"),
                                     censored=("status", lambda s: int((s == "BUDGET").sum())),
                                     excluded=("excluded", "sum"))
    table["median_conflicts"] = usable.groupby("size")["conflicts"].median()
    table["used"] = usable.groupby("size")["conflicts"].size()
    table["used"] = table["used"].fillna(0).astype(int)
    return table.reset_index()[["size", "n", "median_conflicts", "used", "censored", "excluded"]]

def fit_scaling(points, model="exp-linear"):
    """ fits log2(conflicts) = coefficient * T(n) + intercept.

    T(n) = n (exp-linear) or n^(2/3) (exp-two-thirds). Censored and
    excluded points never enter the fit; the usable points are aggregated by
    their median per n before the least squares. Conflict counts below 1
    count as 1.

    Raises
    ------
    FitRefused if fewer than 3 usable points or 3 distinct sizes remain.

    Returns
    -------
    ScalingFit
    """
    if model not in MODELS:
        raise ValueError("unknown model %s. Known: %s" % (model, ", ".join(MODELS)))
    usable = [p for p in points if not p.excluded and not p.censored]
    censored = sum(p.censored for p in points)
    excluded = sum(p.excluded and not p.censored for p in points)
    sizes = sorted(set(p.n for p in usable))
    if len(usable) < MIN_FIT_POINTS or len(sizes) < MIN_FIT_POINTS:
        raise FitRefused("%d usable points over %d sizes (%d needed of each)"
                         % (len(usable), len(sizes), MIN_FIT_POINTS))

    medians = np.asarray([np.median([p.conflicts for p in usable if p.n == n]) for n in sizes], dtype=float)
    x = MODELS[model](sizes)
    y = np.log2(np.maximum(medians, 1))
    fit = stats.linregress(x, y)
    r_squared = float(np.clip(fit.rvalue**2, 0, 1)) if np.isfinite(fit.rvalue) else 0.
    return ScalingFit(model=model, coefficient=float(fit.slope), intercept=float(fit.intercept),
                      r_squared=r_squared, points_used=len(usable), sizes_used=len(sizes),
                      censored=int(censored), excluded=int(excluded))
