#! /usr/bin/env python
# -*- coding: utf-8 -*-

""" CNF solving: internal CDCL, brute-force oracle, enumeration and external bridge.

The CDCL core follows the usual MiniSat recipe: two watched literals,
first-UIP learning with local minimisation, activity-based branching,
phase saving, Luby restarts and LBD-based clause database reduction.
Solving under assumptions is supported, which is what the probe-based
experiments rely on.

Literals are encoded internally as 2*v + sign (sign 1 for a negated
literal) so that the negation of `lit` is `lit ^ 1`.
"""

import os
import time
import subprocess
import tempfile
from heapq import heappush, heappop, heapify

import numpy as np

from .formulas import CnfFormula, as_dimacs_literal

DEFAULT_CONFLICT_BUDGET = 50_000_000
VAR_DECAY = 0.95
RESTART_BASE = 64
BRUTE_FORCE_MAX_VARS = 30

_UNASSIGNED = 0
_TRUE = 1
_FALSE = -1

__all__ = ["SolveResult", "SolutionSet", "CDCLSolver",
           "GuardRefused", "BudgetExhausted", "BridgeError", "SolverError",
           "solve", "enumerate_solutions", "brute_force", "external_solve",
           "check_assignment", "solver_fingerprint", "luby"]


class GuardRefused(ValueError):
    """ the input is above a feasibility guard """

class BudgetExhausted(RuntimeError):
    """ the conflict budget ran out where no partial result makes sense """

class BridgeError(RuntimeError):
    """ the external solver failed, answered garbage or a wrong witness """

class SolverError(RuntimeError):
    """ the internal solver returned a witness that does not satisfy the formula """


def luby(index, base=2):
    """ index-th term (0-based) of the Luby sequence 1,1,2,1,1,2,4,1,... """
    size, seq = 1, 0
    while size < index + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != index:
        size = (size - 1) >> 1
        seq -= 1
        index = index % size
    return base ** seq

def check_assignment(formula, assignment):
    """ independent clause-by-clause check of an assignment

    Parameters
    ----------
    formula: [CnfFormula or list of clauses]

    assignment: [array of 0/1]
        bit i is the value of variable i+1.

    Returns
    -------
    bool
    """
    clauses = formula.clauses if isinstance(formula, CnfFormula) else formula
    values = [bool(b) for b in np.asarray(assignment).ravel()]
    for clause in clauses:
        for lit in clause:
            if values[abs(lit) - 1] == (lit > 0):
                break
        else:
            return False
    return True

def solver_fingerprint():
    """ configuration of the internal CDCL solver, stored in run records """
    from . import __version__
    return {"name": "solspace-cdcl",
            "version": __version__,
            "watches": "two-watched-literals",
            "learning": "first-uip+local-minimisation",
            "branching": "vsids",
            "var_decay": VAR_DECAY,
            "restarts": "luby",
            "restart_base": RESTART_BASE,
            "phase_saving": True,
            "reduce": "lbd",
            "default_conflict_budget": DEFAULT_CONFLICT_BUDGET}


# ================= #
#                   #
#   RESULTS         #
#                   #
# ================= #
class SolveResult( object ):
    """ outcome of a solver call.

    status is 'SAT', 'UNSAT' or 'BUDGET' (conflict budget exhausted).
    witness is a (N,) uint8 array when SAT, None otherwise.
    """
    STATUSES = ["SAT", "UNSAT", "BUDGET"]

    def __init__(self, status, witness=None, stats=None):
        """ """
        if status not in self.STATUSES:
            raise ValueError("unknown status %s" % status)
        if (status == "SAT") != (witness is not None):
            raise ValueError("a witness is given iff status is SAT")
        self._status = status
        self._witness = None if witness is None else np.asarray(witness, dtype=np.uint8)
        self._stats = {} if stats is None else dict(stats)

    def __repr__(self):
        return "<SolveResult %s conflicts=%s>" % (self.status, self.stats.get("conflicts"))

    @property
    def status(self):
        """ """
        return self._status

    @property
    def witness(self):
        """ """
        return self._witness

    @property
    def stats(self):
        """ conflicts, decisions, propagations, restarts, wall_time """
        return self._stats

    @property
    def is_sat(self):
        """ """
        return self._status == "SAT"

    @property
    def is_unsat(self):
        """ """
        return self._status == "UNSAT"

    @property
    def is_budget_exhausted(self):
        """ """
        return self._status == "BUDGET"


class SolutionSet( object ):
    """ deduplicated, lexicographically sorted satisfying assignments """
    def __init__(self, n, members=None, complete=True):
        """
        Parameters
        ----------
        n: [int]
            dimension (number of variables).

        members: [(k, n) array] -optional-
            assignments, any order, duplicates allowed.

        complete: [bool] -optional-
            True iff the enumeration was exhausted.
        """
        self._n = int(n)
        members = np.zeros((0, self._n), dtype=np.uint8) if members is None else \
                  np.asarray(members, dtype=np.uint8).reshape(-1, self._n)
        if len(members) > 1:
            members = np.unique(members, axis=0)
        self._members = members
        self._complete = bool(complete)

    @classmethod
    def from_keys(cls, n, keys, complete=True):
        """ from integer keys (bit i = value of variable i+1) """
        keys = np.asarray(list(keys), dtype=np.int64).reshape(-1)
        bits = (keys[:, None] >> np.arange(int(n), dtype=np.int64)) & 1
        return cls(n, bits.astype(np.uint8), complete=complete)

    def __repr__(self):
        return "<SolutionSet n=%d, %d members%s>" % (self.n, len(self), "" if self.complete else " (incomplete)")

    def __len__(self):
        return len(self._members)

    def __iter__(self):
        return iter(self._members)

    def __contains__(self, assignment):
        assignment = np.asarray(assignment, dtype=np.uint8)
        return bool(np.any(np.all(self._members == assignment, axis=1))) if len(self) else False

    def __eq__(self, other):
        if not isinstance(other, SolutionSet):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.members, other.members)

    __hash__ = None

    def get_keys(self):
        """ int64 keys, bit i = value of variable i+1 (n <= 62) """
        if self.n > 62:
            raise ValueError("integer keys are limited to n <= 62 (n=%d)" % self.n)
        weights = np.left_shift(np.int64(1), np.arange(self.n, dtype=np.int64))
        return self._members.astype(np.int64) @ weights

    @property
    def n(self):
        """ """
        return self._n

    @property
    def members(self):
        """ (k, n) uint8 array """
        return self._members

    @property
    def complete(self):
        """ """
        return self._complete


# ================= #
#                   #
#   CDCL            #
#                   #
# ================= #
class CDCLSolver( object ):
    """ incremental CDCL solver. One instance is single threaded. """

    def __init__(self, formula=None, seed=0, random_polarity=False,
                     conflict_budget=DEFAULT_CONFLICT_BUDGET,
                     var_decay=VAR_DECAY, restart_base=RESTART_BASE):
        """
        Parameters
        ----------
        formula: [CnfFormula] -optional-
            clauses to load. Further clauses can be given with add_clause().

        seed: [int] -optional-
            polarity seed (used only with random_polarity).

        random_polarity: [bool] -optional-
            initial phases are drawn uniformly from the seed instead of all False.

        conflict_budget: [int] -optional-
            conflicts allowed per solve() call before answering 'BUDGET'.
        """
        from .utils.tools import derive_rng
        self._formula = formula
        nvars = 0 if formula is None else formula.num_vars
        self.nvars = nvars
        self.conflict_budget = int(conflict_budget)
        self.var_decay = var_decay
        self.restart_base = restart_base
        self.seed = seed
        self.random_polarity = random_polarity

        size = 2 * (nvars + 1)
        self._vals = [_UNASSIGNED] * size
        self._watches = [[] for _ in range(size)]
        self._level = [0] * (nvars + 1)
        self._reason = [-1] * (nvars + 1)
        self._seen = [False] * (nvars + 1)
        self._activity = [0.0] * (nvars + 1)
        self._var_inc = 1.0
        if random_polarity:
            self._phase = [int(b) for b in derive_rng(seed, 2).integers(0, 2, size=nvars + 1)]
        else:
            self._phase = [1] * (nvars + 1)   # 1: negative literal first
        self._heap = [(0.0, v) for v in range(1, nvars + 1)]
        heapify(self._heap)

        self._clauses = []
        self._learnts = []
        self._lbd = {}
        self._added = []
        self._trail = []
        self._trail_lim = []
        self._qhead = 0
        self._nrestarts = 0
        self._max_learnts = None
        self.ok = True
        self.stats = {"conflicts": 0, "decisions": 0, "propagations": 0,
                      "restarts": 0, "wall_time": 0.0}

        if formula is not None:
            for clause in formula.clauses:
                self._add_clause(clause, original=True)
        self._max_learnts = max(len(self._clauses) // 3, 1000)

    # =============== #
    #  Main Methods   #
    # =============== #
    def add_clause(self, clause):
        """ adds a clause (signed DIMACS ints) permanently, e.g. a blocking clause """
        lits = [as_dimacs_literal(l) for l in clause]
        if any(abs(l) < 1 or abs(l) > self.nvars for l in lits):
            raise ValueError("clause %s references variables outside 1..%d" % (lits, self.nvars))
        self._cancel_until(0)
        self._added.append(tuple(lits))
        self._add_clause(lits)

    def solve(self, assumptions=None, conflict_budget=None):
        """ decides satisfiability under the given assumptions.

        Parameters
        ----------
        assumptions: [list of int/Literal] -optional-
            literals forced for this call only.

        conflict_budget: [int] -optional-
            conflicts allowed in this call (default: the solver budget).

        Returns
        -------
        SolveResult
        """
        assumptions = [] if assumptions is None else [as_dimacs_literal(l) for l in assumptions]
        for lit in assumptions:
            if lit == 0 or abs(lit) > self.nvars:
                raise ValueError("assumption %d references a variable outside 1..%d" % (lit, self.nvars))
        budget = self.conflict_budget if conflict_budget is None else int(conflict_budget)

        t0 = time.perf_counter()
        self._cancel_until(0)
        if not self.ok:
            status = "UNSAT"
        else:
            status = self._search([self._to_internal(l) for l in assumptions], budget)

        witness = None
        if status == "SAT":
            witness = np.asarray([1 if self._vals[2*v] == _TRUE else 0 for v in range(1, self.nvars + 1)],
                                 dtype=np.uint8)
            self._verify(witness, assumptions)
        self._cancel_until(0)
        self.stats["wall_time"] += time.perf_counter() - t0
        return SolveResult(status, witness, stats=self.stats)

    # =============== #
    #  Internal       #
    # =============== #
    @staticmethod
    def _to_internal(lit):
        return 2 * abs(lit) + (1 if lit < 0 else 0)

    def _verify(self, witness, assumptions):
        """ witness must satisfy the formula, the added clauses and the assumptions """
        ok = check_assignment(self._added, witness) and \
             all(bool(witness[abs(l)-1]) == (l > 0) for l in assumptions)
        if ok and self._formula is not None:
            ok = check_assignment(self._formula, witness)
        if not ok:
            raise SolverError("internal CDCL produced a witness that fails verification")

    @property
    def _decision_level(self):
        return len(self._trail_lim)

    def _add_clause(self, lits, original=False):
        """ simplifies at level 0 and attaches """
        if not self.ok:
            return
        internal = []
        for lit in lits:
            ilit = self._to_internal(lit)
            if ilit in internal:
                continue
            if ilit ^ 1 in internal or self._vals[ilit] == _TRUE:
                return  # tautology or satisfied
            if self._vals[ilit] == _FALSE:
                continue
            internal.append(ilit)

        if len(internal) == 0:
            self.stats["conflicts"] += 1
            self.ok = False
            return
        if len(internal) == 1:
            self._enqueue(internal[0], -1)
            if self._propagate() >= 0:
                self.stats["conflicts"] += 1
                self.ok = False
            return
        index = len(self._clauses)
        self._clauses.append(internal)
        self._watches[internal[0]].append(index)
        self._watches[internal[1]].append(index)

    def _enqueue(self, lit, reason):
        v = lit >> 1
        self._vals[lit] = _TRUE
        self._vals[lit ^ 1] = _FALSE
        self._level[v] = len(self._trail_lim)
        self._reason[v] = reason
        self._trail.append(lit)

    def _propagate(self):
        """ unit propagation. Returns the index of a conflicting clause or -1 """
        vals, clauses, watches = self._vals, self._clauses, self._watches
        trail = self._trail
        conflict = -1
        while self._qhead < len(trail):
            p = trail[self._qhead]
            self._qhead += 1
            self.stats["propagations"] += 1
            false_lit = p ^ 1
            ws = watches[false_lit]
            i = j = 0
            nws = len(ws)
            while i < nws:
                ci = ws[i]
                i += 1
                c = clauses[ci]
                if c is None:
                    continue  # deleted clause
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                first = c[0]
                if vals[first] == _TRUE:
                    ws[j] = ci
                    j += 1
                    continue
                for k in range(2, len(c)):
                    if vals[c[k]] != _FALSE:
                        c[1], c[k] = c[k], c[1]
                        watches[c[1]].append(ci)
                        break
                else:
                    ws[j] = ci
                    j += 1
                    if vals[first] == _FALSE:
                        conflict = ci
                        while i < nws:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        self._qhead = len(trail)
                    else:
                        self._enqueue(first, ci)
            del ws[j:]
            if conflict >= 0:
                return conflict
        return -1

    def _cancel_until(self, level):
        if self._decision_level <= level:
            return
        vals, heap, activity = self._vals, self._heap, self._activity
        start = self._trail_lim[level]
        for lit in self._trail[start:]:
            v = lit >> 1
            vals[lit] = _UNASSIGNED
            vals[lit ^ 1] = _UNASSIGNED
            self._reason[v] = -1
            self._phase[v] = lit & 1
            heappush(heap, (-activity[v], v))
        del self._trail[start:]
        del self._trail_lim[level:]
        self._qhead = len(self._trail)

    def _bump(self, v):
        activity = self._activity
        activity[v] += self._var_inc
        if activity[v] > 1e100:
            for u in range(1, self.nvars + 1):
                activity[u] *= 1e-100
            self._var_inc *= 1e-100
            self._rebuild_heap()
        elif self._vals[2*v] == _UNASSIGNED:
            heappush(self._heap, (-activity[v], v))

    def _rebuild_heap(self):
        self._heap = [(-self._activity[v], v) for v in range(1, self.nvars + 1)
                      if self._vals[2*v] == _UNASSIGNED]
        heapify(self._heap)

    def _pick_branch(self):
        """ most active unassigned variable, or -1 when all are assigned """
        heap, vals = self._heap, self._vals
        if len(heap) > 8 * (self.nvars + 1):
            self._rebuild_heap()
            heap = self._heap
        while heap:
            _, v = heappop(heap)
            if vals[2*v] == _UNASSIGNED:
                return v
        return -1

    def _analyze(self, conflict):
        """ first-UIP learning. Returns (learnt clause, backjump level, lbd) """
        clauses, seen, level, reason, trail = self._clauses, self._seen, self._level, self._reason, self._trail
        current = self._decision_level
        learnt = [0]
        path = 0
        p = -1
        index = len(trail) - 1
        while True:
            c = clauses[conflict]
            for q in (c if p == -1 else c[1:]):
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    self._bump(v)
                    seen[v] = True
                    if level[v] >= current:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[trail[index] >> 1]:
                index -= 1
            p = trail[index]
            index -= 1
            conflict = reason[p >> 1]
            seen[p >> 1] = False
            path -= 1
            if path == 0:
                break
        learnt[0] = p ^ 1

        # local minimisation: drop literals implied by the rest of the clause
        kept = [learnt[0]]
        for q in learnt[1:]:
            r = reason[q >> 1]
            if r == -1:
                kept.append(q)
                continue
            for lit in clauses[r][1:]:
                u = lit >> 1
                if not seen[u] and level[u] > 0:
                    kept.append(q)
                    break
        for q in learnt[1:]:
            seen[q >> 1] = False

        if len(kept) == 1:
            backjump = 0
        else:
            imax = max(range(1, len(kept)), key=lambda i: level[kept[i] >> 1])
            kept[1], kept[imax] = kept[imax], kept[1]
            backjump = level[kept[1] >> 1]
        lbd = len({level[q >> 1] for q in kept})
        return kept, backjump, lbd

    def _is_locked(self, ci):
        c = self._clauses[ci]
        return self._reason[c[0] >> 1] == ci and self._vals[c[0]] == _TRUE

    def _reduce_db(self):
        """ deletes half of the learnt clauses, worst (lbd, size) first """
        ranked = sorted(self._learnts, key=lambda ci: (self._lbd[ci], len(self._clauses[ci])))
        keep_count = len(ranked) // 2
        kept = []
        for rank, ci in enumerate(ranked):
            if rank < keep_count or self._lbd[ci] <= 2 or self._is_locked(ci):
                kept.append(ci)
            else:
                self._clauses[ci] = None
                del self._lbd[ci]
        self._learnts = sorted(kept)
        self._max_learnts = int(self._max_learnts * 1.1)

    def _search(self, assumptions, budget):
        """ CDCL loop. Returns 'SAT', 'UNSAT' or 'BUDGET' """
        start_conflicts = self.stats["conflicts"]
        restart_conflicts = 0
        restart_limit = luby(self._nrestarts) * self.restart_base
        while True:
            conflict = self._propagate()
            if conflict >= 0:
                self.stats["conflicts"] += 1
                restart_conflicts += 1
                if self._decision_level == 0:
                    self.ok = False
                    return "UNSAT"
                learnt, backjump, lbd = self._analyze(conflict)
                self._cancel_until(backjump)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], -1)
                else:
                    ci = len(self._clauses)
                    self._clauses.append(learnt)
                    self._watches[learnt[0]].append(ci)
                    self._watches[learnt[1]].append(ci)
                    self._learnts.append(ci)
                    self._lbd[ci] = lbd
                    self._enqueue(learnt[0], ci)
                self._var_inc /= self.var_decay
                if self.stats["conflicts"] - start_conflicts >= budget:
                    return "BUDGET"
                continue

            if restart_conflicts >= restart_limit:
                self._nrestarts += 1
                self.stats["restarts"] += 1
                self._cancel_until(0)
                restart_conflicts = 0
                restart_limit = luby(self._nrestarts) * self.restart_base
                continue

            if len(self._learnts) - len(self._trail) >= self._max_learnts:
                self._reduce_db()

            next_lit = -1
            while self._decision_level < len(assumptions):
                p = assumptions[self._decision_level]
                if self._vals[p] == _TRUE:
                    self._trail_lim.append(len(self._trail))  # dummy level
                elif self._vals[p] == _FALSE:
                    return "UNSAT"  # under these assumptions only
                else:
                    next_lit = p
                    break

            if next_lit == -1:
                v = self._pick_branch()
                if v == -1:
                    return "SAT"
                self.stats["decisions"] += 1
                next_lit = 2 * v + self._phase[v]

            self._trail_lim.append(len(self._trail))
            self._enqueue(next_lit, -1)


# ================= #
#                   #
#   Functions       #
#                   #
# ================= #
def solve(formula, assumptions=None, seed=0, random_polarity=False,
              conflict_budget=DEFAULT_CONFLICT_BUDGET):
    """ one-shot internal CDCL call.

    Parameters
    ----------
    formula: [CnfFormula]

    assumptions: [list of int/Literal] -optional-
        literals forced for this call.

    seed, random_polarity: -optional-
        polarity initialisation, see CDCLSolver.

    conflict_budget: [int] -optional-
        beyond this many conflicts, the status is 'BUDGET'.

    Returns
    -------
    SolveResult
    """
    solver = CDCLSolver(formula, seed=seed, random_polarity=random_polarity,
                        conflict_budget=conflict_budget)
    return solver.solve(assumptions)

def enumerate_solutions(formula, cap, conflict_budget=DEFAULT_CONFLICT_BUDGET, verbose=False):
    """ blocking-clause enumeration.

    Solve, store the witness, block it, repeat. Stops at UNSAT (complete) or
    once `cap` solutions are stored; in that case one more call tells whether
    the enumeration happened to be exhausted anyway.

    Raises
    ------
    BudgetExhausted if a call runs out of conflicts.

    Returns
    -------
    SolutionSet
    """
    cap = int(cap)
    if cap < 1:
        raise ValueError("cap must be >= 1 (%d given)" % cap)

    solver = CDCLSolver(formula, conflict_budget=conflict_budget)
    members = []
    complete = False
    while True:
        result = solver.solve()
        if result.is_budget_exhausted:
            raise BudgetExhausted("conflict budget exhausted after %d solutions" % len(members))
        if result.is_unsat:
            complete = True
            break
        if len(members) == cap:
            break
        members.append(result.witness)
        if verbose and len(members) % 100 == 0:
            print("INFO: %d solutions enumerated" % len(members))
        solver.add_clause([-(v+1) if bit else v+1 for v, bit in enumerate(result.witness)])

    return SolutionSet(formula.num_vars, np.asarray(members, dtype=np.uint8).reshape(-1, formula.num_vars),
                       complete=complete)

def brute_force(formula, max_vars=BRUTE_FORCE_MAX_VARS, chunksize=2**16):
    """ all satisfying assignments by direct evaluation of every point of {0,1}^N

    Raises
    ------
    GuardRefused if N > max_vars.
    """
    n = formula.num_vars
    if n > max_vars:
        raise GuardRefused("brute_force is limited to %d variables (%d given)" % (max_vars, n))

    shifts = np.arange(n, dtype=np.int64)
    found = []
    for start in range(0, 2**n, chunksize):
        keys = np.arange(start, min(start + chunksize, 2**n), dtype=np.int64)
        points = ((keys[:, None] >> shifts) & 1).astype(np.uint8)
        found.append(points[formula.evaluate(points)])
    members = np.concatenate(found) if found else np.zeros((0, n), dtype=np.uint8)
    return SolutionSet(n, members, complete=True)

def external_solve(formula, solver_path=None, timeout=None):
    """ runs an external SAT-competition style solver on the formula.

    Parameters
    ----------
    formula: [CnfFormula]

    solver_path: [string or list of string] -optional-
        executable (or command prefix); the DIMACS file path is appended.
        Default: the SOLSPACE_SOLVER environment variable.

    timeout: [float] -optional-
        seconds, passed to subprocess.

    Returns
    -------
    SolveResult (stats only carry wall_time; conflicts are unavailable)
    """
    from .io import SOLVER_PATH
    solver_path = SOLVER_PATH if solver_path is None else solver_path
    if solver_path is None:
        raise BridgeError("no external solver given (set SOLSPACE_SOLVER or pass solver_path)")
    command = [solver_path] if isinstance(solver_path, str) else list(solver_path)

    fd, filename = tempfile.mkstemp(suffix=".cnf", prefix="solspace_")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(formula.to_dimacs())
        t0 = time.perf_counter()
        try:
            process = subprocess.run(command + [filename], capture_output=True, text=True, timeout=timeout)
        except (OSError, subprocess.TimeoutExpired) as e:
            raise BridgeError("external solver call failed: %s" % e)
        wall_time = time.perf_counter() - t0
    finally:
        os.remove(filename)

    if process.returncode not in (0, 10, 20):
        raise BridgeError("external solver exited with code %d: %s" % (process.returncode, process.stderr.strip()))

    status, values = None, []
    for line in process.stdout.splitlines():
        line = line.strip()
        if line.startswith("s "):
            answer = line[2:].strip()
            if answer == "SATISFIABLE":
                status = "SAT"
            elif answer == "UNSATISFIABLE":
                status = "UNSAT"
            else:
                raise BridgeError("external solver answered '%s'" % answer)
        elif line.startswith("v"):
            try:
                values += [int(t) for t in line[1:].split()]
            except ValueError:
                raise BridgeError("unparseable value line '%s'" % line)

    if status is None:
        raise BridgeError("no status line in the external solver output")
    if (process.returncode == 10 and status != "SAT") or (process.returncode == 20 and status != "UNSAT"):
        raise BridgeError("exit code %d contradicts status %s" % (process.returncode, status))

    stats = {"conflicts": None, "decisions": None, "propagations": None,
             "restarts": None, "wall_time": wall_time}
    if status == "UNSAT":
        return SolveResult("UNSAT", stats=stats)

    witness = np.zeros(formula.num_vars, dtype=np.uint8)
    for lit in values:
        if lit == 0:
            continue
        if abs(lit) > formula.num_vars:
            raise BridgeError("value line references variable %d > %d" % (abs(lit), formula.num_vars))
        witness[abs(lit)-1] = 1 if lit > 0 else 0
    if not check_assignment(formula, witness):
        raise BridgeError("external solver witness does not satisfy the formula")
    return SolveResult("SAT", witness, stats=stats)
