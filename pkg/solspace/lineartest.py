#! /usr/bin/env python
# -*- coding: utf-8 -*-

""" Closure of solution sets under XOR combinations, and the GF(2) shortcut """

import itertools
from math import comb
from dataclasses import dataclass, field

import numpy as np

from .formulas import CnfFormula, ParitySystem
from .solver import SolveResult, SolverError, brute_force, check_assignment, DEFAULT_CONFLICT_BUDGET
from .shattering import DEFAULT_FRACTION, DEFAULT_PROBES, forced_probe_sample
from .utils.tools import derive_rng, derive_seed

ENUMERATION_MAX_VARS = 16
DEFAULT_TRIPLES = 200
FORMS = {"affine": 3,  # x^y^z
         "linear": 2}  # x^y
POOL_SOURCES = ["auto", "enumerate", "probes"]

__all__ = ["XorReport", "InsufficientSample", "xor_closure_test", "get_solution_pool",
           "gaussian_decide"]


class InsufficientSample(ValueError):
    """ not enough distinct solutions to build combinations """


@dataclass
class XorReport:
    """ outcome of an XOR closure test """
    n: int
    triples_tested: int
    violations: int
    form: str = "affine"
    pool_size: int = 0
    pool_source: str = "enumerate"
    seed: int = 0
    violating: list = field(default_factory=list, repr=False)

    ROW_KEYS = ["n", "triples_tested", "violations", "violation_rate", "form", "pool_size",
                "pool_source", "seed"]

    @property
    def violation_rate(self):
        """ violations / triples_tested """
        return self.violations / self.triples_tested if self.triples_tested else np.nan

    @property
    def sampling(self):
        """ descriptor of how combinations were drawn """
        return "distinct-solution %s, uniform without replacement" % ("triples" if self.form == "affine" else "pairs")

    def get_row(self):
        """ """
        return {k: getattr(self, k) for k in self.ROW_KEYS}

    def to_dict(self):
        """ """
        record = self.get_row()
        record["sampling"] = self.sampling
        record["violating"] = [list(map(int, c)) for c in self.violating]
        return record


# ================= #
#                   #
#   Pool            #
#                   #
# ================= #
def get_solution_pool(formula, source="auto", probes=DEFAULT_PROBES, fraction=DEFAULT_FRACTION, seed=0,
                          conflict_budget=DEFAULT_CONFLICT_BUDGET, workers=1):
    """ distinct solutions of the formula, lexicographically sorted.

    Parameters
    ----------
    source: [string] -optional-
        'enumerate' (every solution, by brute force), 'probes' (forced-probe
        witnesses) or 'auto': enumerate when n <= ENUMERATION_MAX_VARS.

    Returns
    -------
    (k, n) uint8 array, source used
    """
    if source not in POOL_SOURCES:
        raise ValueError("unknown pool source %s. Known: %s" % (source, ", ".join(POOL_SOURCES)))
    n = formula.num_vars
    if source == "auto":
        source = "enumerate" if n <= ENUMERATION_MAX_VARS else "probes"

    if source == "enumerate":
        members = brute_force(formula).members
    else:
        records = forced_probe_sample(formula, fraction=fraction, probes=probes, seed=seed,
                                      conflict_budget=conflict_budget, workers=workers)
        members = [r.witness for r in records if r.outcome == "SAT"]
        members = np.asarray(members, dtype=np.uint8).reshape(-1, n)
    if len(members) == 0:
        return np.zeros((0, n), dtype=np.uint8), source
    return np.unique(np.asarray(members, dtype=np.uint8), axis=0), source

def _sample_combinations(pool_size, order, count, rng):
    """ `count` distinct index combinations (sorted tuples), all of them if fewer exist """
    total = comb(pool_size, order)
    if total <= 4 * count:
        combos = list(itertools.combinations(range(pool_size), order))
        if total <= count:
            return combos
        picked = rng.choice(total, size=count, replace=False)
        return [combos[i] for i in sorted(picked)]

    chosen, seen = [], set()
    while len(chosen) < count:
        combo = tuple(sorted(rng.choice(pool_size, size=order, replace=False).tolist()))
        if combo not in seen:
            seen.add(combo)
            chosen.append(combo)
    return chosen


# ================= #
#                   #
#   Test            #
#                   #
# ================= #
def xor_closure_test(formula, triples=DEFAULT_TRIPLES, seed=0, form="affine", pool=None,
                         source="auto", probes=DEFAULT_PROBES, fraction=DEFAULT_FRACTION,
                         conflict_budget=DEFAULT_CONFLICT_BUDGET, workers=1):
    """ tests whether XOR combinations of solutions are solutions.

    Parameters
    ----------
    formula: [CnfFormula]

    triples: [int] -optional-
        number of distinct combinations to test.

    seed: [int] -optional-
        probe i of the pool draws from the (derive_seed(seed, 0), i) stream and
        the combination draw from (seed, 1), so they never share a stream.

    form: [string] -optional-
        'affine' tests x^y^z over distinct triples (closure of an affine
        space). 'linear' tests x^y over distinct pairs (closure of a
        linear space, which needs the zero vector to be a solution).

    pool: [(k, n) array/None] -optional-
        solutions to use. Built with get_solution_pool() if None.

    Raises
    ------
    InsufficientSample if too few distinct solutions are available.

    Returns
    -------
    XorReport
    """
    if form not in FORMS:
        raise ValueError("unknown form %s. Known: %s" % (form, ", ".join(FORMS)))
    if int(triples) < 1:
        raise ValueError("triples must be >= 1 (%s given)" % triples)
    order = FORMS[form]

    if pool is None:
        pool, source = get_solution_pool(formula, source=source, probes=probes, fraction=fraction,
                                         seed=derive_seed(seed, 0), conflict_budget=conflict_budget,
                                         workers=workers)
    else:
        pool = np.unique(np.asarray(pool, dtype=np.uint8).reshape(-1, formula.num_vars), axis=0)
        source = "given"
    if len(pool) < order:
        raise InsufficientSample("%d distinct solutions found, %d needed" % (len(pool), order))

    combos = _sample_combinations(len(pool), order, int(triples), derive_rng(seed, 1))
    index = np.asarray(combos, dtype=int)
    combined = np.bitwise_xor.reduce(pool[index], axis=1)
    satisfied = formula.evaluate(combined)

    violating = [combos[i] for i in np.flatnonzero(~satisfied)]
    for i in np.flatnonzero(~satisfied):
        if check_assignment(formula, combined[i]):
            raise SolverError("clause evaluation disagrees with the independent checker")

    return XorReport(n=formula.num_vars, triples_tested=len(combos), violations=len(violating),
                     form=form, pool_size=len(pool), pool_source=source, seed=int(seed),
                     violating=violating)


# ================= #
#                   #
#   GF(2) decision  #
#                   #
# ================= #
def gaussian_decide(instance):
    """ decides a parity system by GF(2) Gaussian elimination.

    This is polynomial, whatever the resolution hardness of the CNF
    expansion (Tseitin formulas included).

    Parameters
    ----------
    instance: [ParitySystem or CnfFormula]
        a CnfFormula must carry its parity system (xorsat controls, Tseitin).
        Its witness is then checked against the clauses.

    Returns
    -------
    SolveResult (stats: rank, equations)
    """
    formula = None
    if isinstance(instance, CnfFormula):
        formula = instance
        instance = formula.parity_system
        if instance is None:
            raise ValueError("the formula carries no parity system (family %s)" % formula.family_tag)
    if not isinstance(instance, ParitySystem):
        raise TypeError("ParitySystem or CnfFormula expected, %s given" % type(instance))

    consistent, solution, rank = instance.solve()
    stats = {"rank": int(rank), "equations": len(instance.rows)}
    if not consistent:
        return SolveResult("UNSAT", None, stats)
    if formula is not None and not check_assignment(formula, solution):
        raise SolverError("GF(2) solution does not satisfy the CNF expansion")
    return SolveResult("SAT", np.asarray(solution, dtype=np.uint8), stats)
