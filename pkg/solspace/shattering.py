#! /usr/bin/env python
# -*- coding: utf-8 -*-

""" Forced-probe sampling of solution spaces and cluster distance statistics.

Each probe fixes a small random fraction of the variables to random values
and asks the solver for a solution under these assumptions. Distinct
witnesses are clustered by single linkage at Hamming threshold tau, and the
intra / inter cluster distances are reported.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import pandas

from .formulas import _as_fraction
from .solver import CDCLSolver, SolverError, check_assignment, enumerate_solutions, \
     DEFAULT_CONFLICT_BUDGET
from .topology import canonical_labels
from .utils.tools import derive_rng, derive_seed, pairwise_hamming
from .dask.base import compute_items

DEFAULT_FRACTION = 0.05
DEFAULT_PROBES = 200
INTER_OVER_N_BAND = (0.35, 0.41)
METHODS = ["probes", "blocking"]

__all__ = ["ProbeRecord", "ClusterReport", "default_tau", "probe_size",
           "forced_probe_sample", "cluster_assign", "shatter_report", "get_shatter_table"]


def default_tau(n):
    """ single-linkage threshold: max(4, ceil(n/10)) """
    return max(4, int(math.ceil(n / 10)))

def probe_size(n, fraction):
    """ number of variables fixed per probe, round(fraction*n) half to even """
    return int(round(_as_fraction(fraction) * int(n)))


# ================= #
#                   #
#   RECORDS         #
#                   #
# ================= #
@dataclass
class ProbeRecord:
    """ one forced probe: the fixed variables and the solver outcome """
    probe_id: int
    fixed_vars: list
    outcome: str
    witness: np.ndarray = None
    conflicts: int = 0

    def to_dict(self):
        """ """
        return {"probe_id": self.probe_id,
                "fixed_vars": [[int(v), int(b)] for v, b in self.fixed_vars],
                "outcome": self.outcome,
                "witness": None if self.witness is None else "".join(str(int(b)) for b in self.witness),
                "conflicts": self.conflicts}

    @property
    def assumptions(self):
        """ signed literals of the fixed variables """
        return [v if b else -v for v, b in self.fixed_vars]


@dataclass
class ClusterReport:
    """ distance statistics of the sampled clusters. Undefined values are NaN. """
    n: int
    probes_run: int
    solutions_found: int
    cluster_count_lower_bound: int
    intra_mean: float
    intra_diameter: float
    inter_mean: float
    ratio: float
    inter_over_n: float
    linkage_threshold: int
    fraction: float = DEFAULT_FRACTION
    seed: int = 0
    method: str = "probes"
    sat_probes: int = 0
    unsat_probes: int = 0
    budget_probes: int = 0
    probes: list = field(default_factory=list, repr=False)
    witnesses: np.ndarray = field(default=None, repr=False)
    labels: np.ndarray = field(default=None, repr=False)

    ROW_KEYS = ["n", "seed", "method", "fraction", "probes_run", "sat_probes", "unsat_probes",
                "budget_probes", "solutions_found", "cluster_count_lower_bound",
                "intra_mean", "intra_diameter", "inter_mean", "ratio", "inter_over_n",
                "linkage_threshold"]

    def get_row(self):
        """ flat record (one CSV row) """
        return {k: getattr(self, k) for k in self.ROW_KEYS}

    def to_dict(self, with_probes=True):
        """ JSON record, with the full probe list """
        out = self.get_row()
        if with_probes:
            out["probes"] = [p.to_dict() for p in self.probes]
        return out

    @property
    def has_inter(self):
        """ at least two clusters """
        return not np.isnan(self.inter_mean)


# ================= #
#                   #
#   Sampling        #
#                   #
# ================= #
def _run_probe(formula, fraction, seed, probe_id, random_polarity=True,
                   conflict_budget=DEFAULT_CONFLICT_BUDGET):
    """ one forced probe, fully determined by (seed, probe_id) """
    rng = derive_rng(seed, probe_id)
    n = formula.num_vars
    k = probe_size(n, fraction)
    variables = rng.choice(n, size=k, replace=False) + 1 if k > 0 else np.zeros(0, dtype=int)
    values = rng.integers(0, 2, size=k)
    fixed = [(int(v), int(b)) for v, b in zip(variables, values)]

    solver = CDCLSolver(formula, seed=derive_seed(seed, probe_id), random_polarity=random_polarity,
                        conflict_budget=conflict_budget)
    result = solver.solve([v if b else -v for v, b in fixed])
    return ProbeRecord(probe_id, fixed, result.status, result.witness, int(result.stats["conflicts"]))

def forced_probe_sample(formula, fraction=DEFAULT_FRACTION, probes=DEFAULT_PROBES, seed=0,
                            random_polarity=True, conflict_budget=DEFAULT_CONFLICT_BUDGET,
                            workers=1, verbose=False):
    """ samples solutions with forced probes.

    Parameters
    ----------
    formula: [CnfFormula]

    fraction: [float] -optional-
        fraction of the variables fixed per probe (0 <= fraction < 1).

    probes: [int] -optional-
        number of probes.

    seed: [int] -optional-
        probe i draws from the (seed, i) random stream.

    random_polarity: [bool] -optional-
        random initial phases per probe.

    conflict_budget: [int] -optional-
        per probe. An exhausted probe is recorded as 'BUDGET'.

    workers: [int] -optional-
        parallel workers (results do not depend on it).

    Returns
    -------
    list of ProbeRecord (ordered by probe_id)
    """
    if not 0 <= float(fraction) < 1:
        raise ValueError("fraction must be in [0, 1) (%s given)" % fraction)
    if int(probes) < 1:
        raise ValueError("probes must be >= 1 (%s given)" % probes)

    items = [(formula, fraction, seed, i, random_polarity, conflict_budget) for i in range(int(probes))]
    records = compute_items(_run_probe, items, workers=workers)
    nbudget = sum(r.outcome == "BUDGET" for r in records)
    if nbudget > 0:
        warnings.warn("%d probes exhausted their conflict budget" % nbudget)
    if verbose:
        print("INFO: %d probes, %d SAT, %d UNSAT, %d BUDGET" % (len(records),
              sum(r.outcome == "SAT" for r in records), sum(r.outcome == "UNSAT" for r in records), nbudget))
    return records


# ================= #
#                   #
#   Clustering      #
#                   #
# ================= #
def cluster_assign(solutions, tau):
    """ single-linkage partition: transitive closure of "Hamming distance <= tau".

    Parameters
    ----------
    solutions: [(k, n) array]
        assignments of the same length.

    tau: [int]
        distance threshold.

    Returns
    -------
    int array of labels. Clusters are numbered by their lexicographically
    smallest member, so the partition does not depend on the input order.
    """
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import connected_components
    points = np.asarray(solutions, dtype=np.uint8)
    k = len(points)
    if k == 0:
        return np.zeros(0, dtype=int)

    adjacency = pairwise_hamming(points) <= tau
    _, labels = connected_components(csr_matrix(adjacency), directed=False)
    order = np.lexsort(points.T[::-1]) if points.shape[1] > 0 else np.arange(k)
    canonical = np.empty(k, dtype=int)
    canonical[order] = canonical_labels(labels[order])
    return canonical

def get_medoids(distances, labels):
    """ per cluster, the member minimising its largest in-cluster distance (lowest index on ties) """
    medoids = []
    for label in range(labels.max() + 1 if len(labels) else 0):
        members = np.flatnonzero(labels == label)
        sub = distances[np.ix_(members, members)]
        medoids.append(int(members[np.argmin(sub.max(axis=1))]))
    return np.asarray(medoids, dtype=int)

def get_cluster_statistics(points, labels):
    """ intra mean, intra diameter, medoids and inter mean of a labelled point set """
    distances = pairwise_hamming(points)
    same = labels[:, None] == labels[None, :]
    upper = np.triu(np.ones_like(same, dtype=bool), k=1)
    intra = distances[same & upper]
    intra_mean = float(intra.mean()) if len(intra) else np.nan
    intra_diameter = float(intra.max()) if len(intra) else np.nan

    medoids = get_medoids(distances, labels)
    if len(medoids) >= 2:
        inter = distances[np.ix_(medoids, medoids)][np.triu_indices(len(medoids), k=1)]
        inter_mean = float(inter.mean())
    else:
        inter_mean = np.nan
    return intra_mean, intra_diameter, medoids, inter_mean

def shatter_report(formula, fraction=DEFAULT_FRACTION, probes=DEFAULT_PROBES, tau=None, seed=0,
                       method="probes", random_polarity=True,
                       conflict_budget=DEFAULT_CONFLICT_BUDGET, workers=1, verbose=False):
    """ shattering measurement of a formula.

    Parameters
    ----------
    formula: [CnfFormula]

    fraction, probes, seed: -optional-
        see forced_probe_sample.

    tau: [int/None] -optional-
        linkage threshold. default_tau(n) if None.

    method: [string] -optional-
        'probes' (forced probes) or 'blocking' (plain blocking-clause
        enumeration of `probes` solutions, the baseline).

    Returns
    -------
    ClusterReport
    """
    if method not in METHODS:
        raise ValueError("unknown method %s. Known: %s" % (method, ", ".join(METHODS)))
    n = formula.num_vars
    tau = default_tau(n) if tau is None else int(tau)
    if tau < 0:
        raise ValueError("tau must be non negative")

    if method == "probes":
        records = forced_probe_sample(formula, fraction=fraction, probes=probes, seed=seed,
                                      random_polarity=random_polarity,
                                      conflict_budget=conflict_budget, workers=workers, verbose=verbose)
        witnesses = [r.witness for r in records if r.outcome == "SAT"]
    else:
        records = []
        witnesses = list(enumerate_solutions(formula, cap=probes, conflict_budget=conflict_budget).members)

    for w in witnesses:
        if not check_assignment(formula, w):
            raise SolverError("a sampled witness does not satisfy the formula")

    points = np.unique(np.asarray(witnesses, dtype=np.uint8).reshape(-1, n), axis=0) \
             if len(witnesses) else np.zeros((0, n), dtype=np.uint8)
    labels = cluster_assign(points, tau)
    nclusters = int(labels.max() + 1) if len(labels) else 0
    if len(points):
        intra_mean, intra_diameter, _, inter_mean = get_cluster_statistics(points, labels)
    else:
        intra_mean = intra_diameter = inter_mean = np.nan

    defined = not (np.isnan(inter_mean) or np.isnan(intra_mean) or intra_mean == 0)
    ratio = inter_mean / intra_mean if defined else np.nan
    inter_over_n = inter_mean / n if not np.isnan(inter_mean) and n > 0 else np.nan

    return ClusterReport(n=n, probes_run=int(probes) if method == "probes" else len(witnesses),
                         solutions_found=len(points), cluster_count_lower_bound=nclusters,
                         intra_mean=intra_mean, intra_diameter=intra_diameter,
                         inter_mean=inter_mean, ratio=ratio, inter_over_n=inter_over_n,
                         linkage_threshold=tau, fraction=float(fraction), seed=int(seed), method=method,
                         sat_probes=sum(r.outcome == "SAT" for r in records) if records else len(witnesses),
                         unsat_probes=sum(r.outcome == "UNSAT" for r in records),
                         budget_probes=sum(r.outcome == "BUDGET" for r in records),
                         probes=records, witnesses=points, labels=labels)

def get_shatter_table(reports):
    """ shattering table: one row per n, medians over the reports (seeds).

    The cluster column is a lower bound and is labelled "<k>+".
    """
    data = pandas.DataFrame([r.get_row() for r in reports])
    if len(data) == 0:
        return pandas.DataFrame(columns=["n", "clusters", "intra", "inter", "ratio", "inter_over_n", "seeds"])
    grouped = data.groupby("n")
    table = pandas.DataFrame({"clusters": grouped["cluster_count_lower_bound"].median(),
                              "intra": grouped["intra_mean"].median(),
                              "inter": grouped["inter_mean"].median(),
                              "ratio": grouped["ratio"].median(),
                              "inter_over_n": grouped["inter_over_n"].median(),
                              "seeds": grouped["seed"].count()}).reset_index()
    table["clusters"] = ["%d+" % int(c) for c in table["clusters"]]
    return table
