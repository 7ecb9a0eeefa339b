#! /usr/bin/env python
# -*- coding: utf-8 -*-

""" Formula families and their DIMACS serialisation.

Every experiment consumes a `CnfFormula`. This module generates the random
k-SAT instances, the polynomial control families (2-SAT, Horn-SAT, XOR-SAT),
the Tseitin parity contradictions built on Margulis expanders, and reads and
writes the DIMACS CNF format.
"""

from collections import Counter, namedtuple
from fractions import Fraction

import numpy as np

from .utils.tools import derive_rng

ALPHA_C = 4.267      # random 3-SAT satisfiability threshold
THRESHOLD_WINDOW = 0.5

FAMILY_TAGS = ["random-ksat", "twosat", "hornsat", "xorsat-cnf", "tseitin",
               "conjoined", "custom"]
CONTROL_FAMILIES = ["twosat", "hornsat", "xorsat"]

__all__ = ["CnfFormula", "Literal", "ParitySystem", "ExpanderGraph", "TseitinInstance",
           "DimacsParseError",
           "gen_random_ksat", "gen_control_family", "margulis_expander",
           "tseitin", "random_charges", "conjoin", "parity_clauses",
           "dimacs_emit", "dimacs_parse", "read_dimacs", "regime"]


class DimacsParseError(ValueError):
    """ malformed DIMACS input. `lineno` is the 1-based line of the fault. """
    def __init__(self, message, lineno):
        self.lineno = lineno
        super().__init__("line %d: %s" % (lineno, message))


class Literal(namedtuple("Literal", ["variable", "positive"])):
    """ a variable index (1-based) with its sign """
    __slots__ = ()

    @classmethod
    def from_int(cls, lit):
        """ from a signed DIMACS integer """
        lit = int(lit)
        if lit == 0:
            raise ValueError("0 is not a literal")
        return cls(abs(lit), lit > 0)

    def __int__(self):
        return self.variable if self.positive else -self.variable

    def __neg__(self):
        return Literal(self.variable, not self.positive)


def as_dimacs_literal(lit):
    """ signed integer form of a Literal or an int """
    return int(lit)

def _as_fraction(value):
    """ """
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)

def regime(alpha, alpha_c=ALPHA_C):
    """ where `alpha` sits relative to the random 3-SAT threshold """
    alpha = float(alpha)
    if abs(alpha - alpha_c) <= THRESHOLD_WINDOW:
        return "near-threshold"
    return "under-constrained" if alpha < alpha_c else "over-constrained"


# ================= #
#                   #
#   CNF FORMULA     #
#                   #
# ================= #
class CnfFormula( object ):
    """ Conjunction of clauses over variables 1..num_vars.

    Clauses are stored as tuples of signed DIMACS integers. The formula is
    treated as immutable once built.
    """
    def __init__(self, num_vars, clauses=None, family_tag="custom", params=None,
                     parity_system=None):
        """
        Parameters
        ----------
        num_vars: [int]
            number of variables N.

        clauses: [list of list of int/Literal] -optional-
            the clauses. Variable indices must be within 1..N and distinct
            within a clause. An empty clause makes the formula trivially false.

        family_tag: [string] -optional-
            one of FAMILY_TAGS.

        params: [dict] -optional-
            generation parameters (kept for records).

        parity_system: [ParitySystem] -optional-
            the parity constraints the clauses encode, if any.
        """
        num_vars = int(num_vars)
        if num_vars < 0:
            raise ValueError("num_vars must be non negative (%d given)" % num_vars)
        if family_tag not in FAMILY_TAGS:
            raise ValueError("unknown family_tag %s. Known: %s" % (family_tag, ", ".join(FAMILY_TAGS)))

        clauses_ = []
        for i, clause in enumerate([] if clauses is None else clauses):
            clause = tuple(as_dimacs_literal(l) for l in clause)
            variables = [abs(l) for l in clause]
            if 0 in variables:
                raise ValueError("clause %d contains 0" % i)
            if len(set(variables)) != len(variables):
                raise ValueError("clause %d repeats a variable: %s" % (i, clause))
            if len(variables) > 0 and max(variables) > num_vars:
                raise ValueError("clause %d uses variable %d > num_vars=%d" % (i, max(variables), num_vars))
            clauses_.append(clause)

        self._num_vars = num_vars
        self._clauses = tuple(clauses_)
        self._family_tag = family_tag
        self._params = {} if params is None else dict(params)
        self._parity_system = parity_system

    def __repr__(self):
        return "<CnfFormula %s: %d vars, %d clauses>" % (self.family_tag, self.num_vars, self.nclauses)

    def __len__(self):
        return self.nclauses

    def __eq__(self, other):
        """ same number of variables and same clause multiset """
        if not isinstance(other, CnfFormula):
            return NotImplemented
        return self.num_vars == other.num_vars and Counter(self.clauses) == Counter(other.clauses)

    __hash__ = None

    # ================ #
    #  I/O             #
    # ================ #
    @classmethod
    def from_dimacs(cls, text, family_tag="custom"):
        """ loads a formula from DIMACS CNF text. See dimacs_parse """
        return dimacs_parse(text, family_tag=family_tag)

    def to_dimacs(self):
        """ DIMACS CNF text of this formula """
        return dimacs_emit(self)

    def write_dimacs(self, filename):
        """ writes the DIMACS text into `filename` """
        with open(filename, "w") as f:
            f.write(self.to_dimacs())

    # ================ #
    #  Methods         #
    # ================ #
    def evaluate(self, assignments):
        """ checks assignments against every clause.

        Parameters
        ----------
        assignments: [1d or 2d array]
            one (N,) 0/1 vector or a (k, N) stack of them.

        Returns
        -------
        bool (1d input) or (k,) bool array
        """
        assignments = np.asarray(assignments)
        single = assignments.ndim == 1
        assignments = np.atleast_2d(assignments).astype(bool)
        if assignments.shape[1] != self.num_vars:
            raise ValueError("assignment length %d does not match num_vars=%d" % (assignments.shape[1], self.num_vars))

        if self.nclauses == 0:
            out = np.ones(len(assignments), dtype=bool)
        else:
            out = self._get_clause_status(assignments).all(axis=1)
        return bool(out[0]) if single else out

    def count_satisfied(self, assignments):
        """ number of satisfied clauses, for one (N,) assignment or per row of a (k, N) stack """
        assignments = np.asarray(assignments)
        single = assignments.ndim == 1
        assignments = np.atleast_2d(assignments).astype(bool)
        if self.nclauses == 0:
            counts = np.zeros(len(assignments), dtype=int)
        else:
            counts = self._get_clause_status(assignments).sum(axis=1)
        return int(counts[0]) if single else counts

    def get_unsatisfied(self, assignment):
        """ indexes of the clauses the assignment violates """
        if self.nclauses == 0:
            return np.array([], dtype=int)
        assignment = np.atleast_2d(np.asarray(assignment, dtype=bool))
        return np.flatnonzero(~self._get_clause_status(assignment)[0])

    def _get_clause_status(self, assignments, chunk_cells=2**24):
        """ (k, m) boolean array of clause satisfaction """
        variables, negated, valid = self._literal_arrays
        ncells = max(1, variables.size)
        chunk = max(1, chunk_cells // ncells)
        out = np.empty((len(assignments), self.nclauses), dtype=bool)
        for start in range(0, len(assignments), chunk):
            values = assignments[start:start+chunk][:, variables]
            out[start:start+chunk] = ((values != negated) & valid).any(axis=2)
        return out

    def get_variables(self):
        """ sorted array of the variables actually used by some clause """
        used = {abs(l) for c in self.clauses for l in c}
        return np.asarray(sorted(used), dtype=int)

    # ================ #
    #  Properties      #
    # ================ #
    @property
    def num_vars(self):
        """ number of variables N """
        return self._num_vars

    @property
    def clauses(self):
        """ tuple of clauses (tuples of signed ints) """
        return self._clauses

    @property
    def nclauses(self):
        """ number of clauses m """
        return len(self._clauses)

    @property
    def density(self):
        """ clause density alpha = m/N as a Fraction (None if N=0) """
        if self.num_vars == 0:
            return None
        return Fraction(self.nclauses, self.num_vars)

    @property
    def family_tag(self):
        """ """
        return self._family_tag

    @property
    def params(self):
        """ generation parameters """
        return self._params

    @property
    def parity_system(self):
        """ parity constraints encoded by the clauses (xorsat-cnf, tseitin) """
        return self._parity_system

    @property
    def is_trivially_false(self):
        """ does the formula contain the empty clause """
        return any(len(c) == 0 for c in self.clauses)

    @property
    def _literal_arrays(self):
        """ padded (m, w) arrays: 0-based variable, negation flag, validity """
        if not hasattr(self, "_literal_arrays_cache"):
            width = max([len(c) for c in self.clauses] + [1])
            variables = np.zeros((self.nclauses, width), dtype=np.int64)
            negated = np.zeros((self.nclauses, width), dtype=bool)
            valid = np.zeros((self.nclauses, width), dtype=bool)
            for i, clause in enumerate(self.clauses):
                k = len(clause)
                if k == 0:
                    continue
                lits = np.asarray(clause, dtype=np.int64)
                variables[i, :k] = np.abs(lits) - 1
                negated[i, :k] = lits < 0
                valid[i, :k] = True
            self._literal_arrays_cache = variables, negated, valid
        return self._literal_arrays_cache


# ================= #
#                   #
#   PARITY          #
#                   #
# ================= #
def parity_clauses(variables, parity):
    """ CNF expansion of x_{v1} xor ... xor x_{vd} = parity.

    One clause per assignment of the d variables with the wrong parity, so
    2^(d-1) clauses for d >= 1. With no variable, parity 1 gives the empty
    clause and parity 0 gives nothing.

    Returns
    -------
    list of tuple (signed ints)
    """
    variables = [int(v) for v in variables]
    parity = int(parity) % 2
    d = len(variables)
    if d == 0:
        return [()] if parity == 1 else []

    clauses = []
    for pattern in range(2**d):
        bits = [(pattern >> i) & 1 for i in range(d)]
        if sum(bits) % 2 == parity:
            continue
        # forbid exactly this pattern
        clauses.append(tuple(-v if b else v for v, b in zip(variables, bits)))
    return clauses


class ParitySystem( object ):
    """ system of parity constraints sum_{v in row} x_v = rhs (mod 2) """
    def __init__(self, num_vars, rows, rhs):
        """ """
        if len(rows) != len(rhs):
            raise ValueError("rows and rhs must have the same length")
        self._num_vars = int(num_vars)
        self._rows = [tuple(int(v) for v in row) for row in rows]
        self._rhs = [int(b) % 2 for b in rhs]

    def __repr__(self):
        return "<ParitySystem %d equations over %d vars>" % (len(self.rows), self.num_vars)

    def get_matrix(self):
        """ dense (nrows, num_vars) uint8 coefficient matrix """
        matrix = np.zeros((len(self.rows), self.num_vars), dtype=np.uint8)
        for i, row in enumerate(self.rows):
            for v in row:
                matrix[i, v-1] ^= 1
        return matrix

    def get_rank(self):
        """ GF(2) rank of the coefficient matrix """
        from .utils.gf2 import rank_dense
        return rank_dense(self.get_matrix())

    def solve(self):
        """ GF(2) elimination. Returns (consistent, one solution or None, rank) """
        from .utils.gf2 import solve_dense
        if len(self.rows) == 0:
            return True, np.zeros(self.num_vars, dtype=np.uint8), 0
        return solve_dense(self.get_matrix(), self.rhs)

    def shifted(self, offset, num_vars):
        """ copy with every variable index shifted by offset """
        return ParitySystem(num_vars, [tuple(v+offset for v in row) for row in self.rows], self.rhs)

    @property
    def num_vars(self):
        """ """
        return self._num_vars

    @property
    def rows(self):
        """ variable tuples, one per equation """
        return self._rows

    @property
    def rhs(self):
        """ right hand side bits """
        return self._rhs


# ================= #
#                   #
#   GENERATORS      #
#                   #
# ================= #
def gen_random_ksat(n, alpha, k=3, seed=0):
    """ uniform random k-SAT formula.

    Parameters
    ----------
    n: [int]
        number of variables.

    alpha: [float/Fraction]
        clause density. The number of clauses is round(alpha*n), half to even.

    k: [int] -optional-
        clause width. Each clause draws k distinct variables and fair signs.

    seed: [int] -optional-
        random seed.

    Returns
    -------
    CnfFormula (family_tag 'random-ksat')
    """
    n, k = int(n), int(k)
    if k < 1 or n < k:
        raise ValueError("gen_random_ksat requires n >= k >= 1 (n=%d, k=%d)" % (n, k))
    alpha = _as_fraction(alpha)
    if alpha < 0:
        raise ValueError("alpha must be non negative (%s given)" % alpha)

    m = int(round(alpha * n))
    rng = derive_rng(seed, 0)
    signs = rng.integers(0, 2, size=(m, k))
    clauses = []
    for i in range(m):
        variables = rng.choice(n, size=k, replace=False) + 1
        clauses.append(tuple(int(v) if s else -int(v) for v, s in zip(variables, signs[i])))

    return CnfFormula(n, clauses, family_tag="random-ksat",
                      params={"n": n, "alpha": float(alpha), "k": k, "seed": int(seed)})

def gen_control_family(family, n, m, seed=0):
    """ random member of a polynomial control family.

    Parameters
    ----------
    family: [string]
        - twosat: m clauses of width 2.
        - hornsat: m clauses of width 2 or 3 with at most one positive literal.
        - xorsat: m parity constraints on 3 distinct variables, 4 clauses
          each, hence n >= 3 whenever m > 0. The ParitySystem is attached
          to the returned formula.

    n, m: [int]
        number of variables and of clauses (constraints for xorsat).

    seed: [int] -optional-

    Returns
    -------
    CnfFormula
    """
    if family not in CONTROL_FAMILIES:
        raise ValueError("unknown control family %s. Known: %s" % (family, ", ".join(CONTROL_FAMILIES)))
    n, m = int(n), int(m)
    if n < 2:
        raise ValueError("control families require n >= 2 (%d given)" % n)
    if m < 0:
        raise ValueError("m must be non negative (%d given)" % m)

    rng = derive_rng(seed, 0)
    params = {"family": family, "n": n, "m": m, "seed": int(seed)}
    if family == "twosat":
        clauses = []
        for _ in range(m):
            variables = rng.choice(n, size=2, replace=False) + 1
            signs = rng.integers(0, 2, size=2)
            clauses.append(tuple(int(v) if s else -int(v) for v, s in zip(variables, signs)))
        return CnfFormula(n, clauses, family_tag="twosat", params=params)

    if family == "hornsat":
        clauses = []
        for _ in range(m):
            width = int(rng.integers(2, min(3, n) + 1))
            variables = rng.choice(n, size=width, replace=False) + 1
            positive = int(rng.integers(-1, width))  # -1: purely negative clause
            clauses.append(tuple(int(v) if i == positive else -int(v) for i, v in enumerate(variables)))
        return CnfFormula(n, clauses, family_tag="hornsat", params=params)

    # xorsat
    if m > 0 and n < 3:
        raise ValueError("xorsat constraints need n >= 3 (%d given)" % n)
    rows, rhs, clauses = [], [], []
    for _ in range(m):
        row = tuple(int(v) for v in np.sort(rng.choice(n, size=3, replace=False) + 1))
        bit = int(rng.integers(0, 2))
        rows.append(row)
        rhs.append(bit)
        clauses += parity_clauses(row, bit)
    return CnfFormula(n, clauses, family_tag="xorsat-cnf", params=params,
                      parity_system=ParitySystem(n, rows, rhs))


# ================= #
#                   #
#   EXPANDERS       #
#                   #
# ================= #
class ExpanderGraph( object ):
    """ Multigraph given by edge slots. Self-loops and parallel edges are kept.

    A self-loop adds 2 to the degree of its vertex.
    """
    def __init__(self, side, edges):
        """
        Parameters
        ----------
        side: [int]
            m, the vertices are Z_m x Z_m with index x*m + y.

        edges: [(E, 2) int array]
            one row per edge slot (vertex indices).
        """
        self._side = int(side)
        self._edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)

    def __repr__(self):
        return "<ExpanderGraph side=%d: %d vertices, %d edge slots>" % (self.side, self.num_vertices, self.num_edges)

    # ----------- #
    #  GETTER     #
    # ----------- #
    def get_vertex(self, index):
        """ (x, y) coordinates of a vertex index """
        return divmod(int(index), self.side)

    def get_degrees(self):
        """ degree per vertex, self-loops counted twice """
        return np.bincount(self.edges.ravel(), minlength=self.num_vertices)

    def get_incidence(self):
        """ list, per vertex, of the incident edge slots. A self-loop slot appears twice. """
        incidence = [[] for _ in range(self.num_vertices)]
        for slot, (u, v) in enumerate(self.edges):
            incidence[u].append(slot)
            incidence[v].append(slot)
        return incidence

    def adjacency_matrix(self):
        """ dense symmetric adjacency matrix (a self-loop adds 2 on the diagonal) """
        adj = np.zeros((self.num_vertices, self.num_vertices))
        np.add.at(adj, (self.edges[:, 0], self.edges[:, 1]), 1)
        np.add.at(adj, (self.edges[:, 1], self.edges[:, 0]), 1)
        return adj

    def get_spectrum(self):
        """ adjacency eigenvalues, decreasing """
        return np.sort(np.linalg.eigvalsh(self.adjacency_matrix()))[::-1]

    def second_eigenvalue(self):
        """ second largest adjacency eigenvalue """
        spectrum = self.get_spectrum()
        return float(spectrum[1]) if len(spectrum) > 1 else float("nan")

    def get_components(self):
        """ (ncomponents, labels) of the underlying simple graph """
        from scipy.sparse import coo_matrix
        from scipy.sparse.csgraph import connected_components
        data = np.ones(len(self.edges))
        graph = coo_matrix((data, (self.edges[:, 0], self.edges[:, 1])),
                           shape=(self.num_vertices, self.num_vertices))
        return connected_components(graph, directed=False)

    def is_connected(self):
        """ """
        return self.get_components()[0] == 1

    # ----------- #
    # Properties  #
    # ----------- #
    @property
    def side(self):
        """ """
        return self._side

    @property
    def edges(self):
        """ (E, 2) edge slots """
        return self._edges

    @property
    def num_vertices(self):
        """ """
        return self.side**2

    @property
    def num_edges(self):
        """ number of edge slots """
        return len(self._edges)

    @property
    def degree(self):
        """ common vertex degree (None if not regular) """
        degrees = np.unique(self.get_degrees())
        return int(degrees[0]) if len(degrees) == 1 else None


def margulis_expander(m):
    """ Gabber-Galil (Margulis) 8-regular expander on Z_m x Z_m.

    The edge slots are (v, f(v)) for the four maps
    (x+y, y), (x, y+x), (x+y+1, y), (x, y+x+1), taken mod m. Their inverses
    (x-y, y), (x, y-x), (x-y-1, y), (x, y-x-1) give each vertex its other 4
    neighbours, so every vertex has degree 8 and there are 8*m^2/2 slots.
    Slots are ordered by vertex (row major) then by map.

    Parameters
    ----------
    m: [int]
        side, m >= 2.

    Returns
    -------
    ExpanderGraph
    """
    m = int(m)
    if m < 2:
        raise ValueError("margulis_expander requires m >= 2 (%d given)" % m)

    x, y = np.divmod(np.arange(m*m), m)
    targets = [((x + y) % m, y),
               (x, (y + x) % m),
               ((x + y + 1) % m, y),
               (x, (y + x + 1) % m)]
    source = x * m + y
    # (vertex, map) ordering
    dest = np.stack([tx * m + ty for tx, ty in targets], axis=1)
    edges = np.stack([np.repeat(source, 4), dest.ravel()], axis=1)
    return ExpanderGraph(m, edges)


# ================= #
#                   #
#   TSEITIN         #
#                   #
# ================= #
class TseitinInstance( object ):
    """ Tseitin parity formula on a graph: variable i+1 is edge slot i """
    def __init__(self, graph, charges, cnf, clauses_per_vertex):
        """ """
        self._graph = graph
        self._charges = np.asarray(charges, dtype=np.uint8)
        self._cnf = cnf
        self._clauses_per_vertex = np.asarray(clauses_per_vertex, dtype=int)

    def __repr__(self):
        return "<TseitinInstance side=%d, total charge %d: %s>" % (self.graph.side, self.total_charge, self.cnf)

    @property
    def graph(self):
        """ """
        return self._graph

    @property
    def charges(self):
        """ parity bit per vertex """
        return self._charges

    @property
    def cnf(self):
        """ """
        return self._cnf

    @property
    def clauses_per_vertex(self):
        """ number of clauses each vertex contributed """
        return self._clauses_per_vertex

    @property
    def total_charge(self):
        """ """
        return int(self.charges.sum())

    @property
    def is_satisfiable(self):
        """ even total charge (the graph is connected) """
        return self.total_charge % 2 == 0


def random_charges(graph, parity=1, seed=0):
    """ uniform random vertex charges with total charge of the given parity """
    rng = derive_rng(seed, 1)
    charges = rng.integers(0, 2, size=graph.num_vertices).astype(np.uint8)
    if charges.sum() % 2 != int(parity) % 2:
        charges[-1] ^= 1
    return charges

def tseitin(graph, charges):
    """ Tseitin formula of `graph` with the given vertex charges.

    One variable per edge slot. Per vertex, the incident variables taken with
    odd multiplicity (self-loops cancel) must xor to the vertex charge; this
    is expanded directly into its 2^(d-1) forbidding clauses.

    Parameters
    ----------
    graph: [ExpanderGraph]
        must be connected.

    charges: [array of 0/1]
        one parity bit per vertex.

    Returns
    -------
    TseitinInstance
    """
    charges = np.asarray(charges, dtype=np.int64) % 2
    if len(charges) != graph.num_vertices:
        raise ValueError("%d charges given for %d vertices" % (len(charges), graph.num_vertices))
    if not graph.is_connected():
        raise ValueError("tseitin requires a connected graph (parity criterion is per component)")

    clauses, rows, per_vertex = [], [], []
    for vertex, slots in enumerate(graph.get_incidence()):
        counts = Counter(slots)
        variables = sorted(slot + 1 for slot, c in counts.items() if c % 2 == 1)
        vertex_clauses = parity_clauses(variables, charges[vertex])
        clauses += vertex_clauses
        rows.append(tuple(variables))
        per_vertex.append(len(vertex_clauses))

    nvars = graph.num_edges
    cnf = CnfFormula(nvars, clauses, family_tag="tseitin",
                     params={"side": graph.side, "total_charge": int(charges.sum())},
                     parity_system=ParitySystem(nvars, rows, charges))
    return TseitinInstance(graph, charges, cnf, per_vertex)


# ================= #
#                   #
#   OPERATORS       #
#                   #
# ================= #
def conjoin(a, b):
    """ conjunction of two formulas on disjoint variables.

    b's variables are renumbered to n_a+1..n_a+n_b.
    """
    offset = a.num_vars
    nvars = a.num_vars + b.num_vars
    shifted = [tuple(l + offset if l > 0 else l - offset for l in c) for c in b.clauses]

    parity_system = None
    if a.parity_system is not None and b.parity_system is not None:
        sb = b.parity_system.shifted(offset, nvars)
        parity_system = ParitySystem(nvars, a.parity_system.rows + sb.rows, a.parity_system.rhs + sb.rhs)

    return CnfFormula(nvars, list(a.clauses) + shifted, family_tag="conjoined",
                      params={"parts": [a.family_tag, b.family_tag], "core_vars": a.num_vars},
                      parity_system=parity_system)


# ================= #
#                   #
#   DIMACS          #
#                   #
# ================= #
def dimacs_emit(formula):
    """ DIMACS CNF text: header then one 0-terminated clause per line """
    lines = ["p cnf %d %d" % (formula.num_vars, formula.nclauses)]
    lines += [" ".join([str(l) for l in clause] + ["0"]) for clause in formula.clauses]
    return "\n".join(lines) + "\n"

def dimacs_parse(text, family_tag="custom"):
    """ parses DIMACS CNF text.

    Comment lines ('c'), blank lines are skipped; a '%' line ends the data
    (SATLIB convention). Clauses may span several lines.

    Raises
    ------
    DimacsParseError (with the line number) on a malformed header, an out of
    range literal, a missing terminator or a clause count mismatch.
    """
    num_vars = nclauses = None
    clauses, current = [], []
    lineno = 0
    last_clause_line = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("c"):
            continue
        if stripped.startswith("%"):
            break
        if stripped.startswith("p"):
            if num_vars is not None:
                raise DimacsParseError("duplicated header", lineno)
            parts = stripped.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsParseError("malformed header '%s' (expected 'p cnf N M')" % stripped, lineno)
            try:
                num_vars, nclauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsParseError("malformed header '%s' (N and M must be integers)" % stripped, lineno)
            if num_vars < 0 or nclauses < 0:
                raise DimacsParseError("negative counts in header", lineno)
            continue

        if num_vars is None:
            raise DimacsParseError("clause data before the 'p cnf' header", lineno)
        for token in stripped.split():
            try:
                lit = int(token)
            except ValueError:
                raise DimacsParseError("invalid literal '%s'" % token, lineno)
            if lit == 0:
                clauses.append(tuple(current))
                current = []
                continue
            if abs(lit) > num_vars:
                raise DimacsParseError("literal %d out of range (num_vars=%d)" % (lit, num_vars), lineno)
            if lit in current or -lit in current:
                raise DimacsParseError("variable %d repeated in a clause" % abs(lit), lineno)
            current.append(lit)
            last_clause_line = lineno

    if num_vars is None:
        raise DimacsParseError("missing 'p cnf' header", max(lineno, 1))
    if current:
        raise DimacsParseError("missing 0 terminator", last_clause_line)
    if len(clauses) != nclauses:
        raise DimacsParseError("header announces %d clauses, %d found" % (nclauses, len(clauses)), lineno)

    return CnfFormula(num_vars, clauses, family_tag=family_tag)

def read_dimacs(filename, family_tag="custom"):
    """ loads a DIMACS CNF file """
    with open(filename) as f:
        text = f.read()
    return dimacs_parse(text, family_tag=family_tag)
