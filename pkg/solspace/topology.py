#! /usr/bin/env python
# -*- coding: utf-8 -*-

""" Cubical complexes induced by solution sets and their GF(2) Betti numbers.

A vertex of {0,1}^n is an integer key whose bit i is the value of x_{i+1}.
A face is a pair (base, mask): mask holds the free coordinates and base the
fixed ones, with zeros at the free positions, so that base is the smallest
vertex of the face. The complex induced by a solution set contains a face
iff all of its 2^dim vertices are solutions.
"""

import json
import warnings
from collections import namedtuple
from itertools import combinations

import numpy as np

from .solver import SolutionSet, GuardRefused, brute_force
from .utils.gf2 import rank_bitsets, rank_dense

HOMOLOGY_MAX_VARS = 24
MAX_SOLUTIONS = 2**24
MAX_FACES_PER_DIM = 2**16
DEFAULT_MAX_DIM = 3
FIELD = "GF(2)"

__all__ = ["Face", "CubicalComplex", "BettiVector",
           "build_complex", "betti", "betti_of_formula", "connected_components",
           "search_void", "load_void_fixture"]


class Face(namedtuple("Face", ["base", "free_mask"])):
    """ (base, free_mask) face of the hypercube """
    __slots__ = ()

    @property
    def dim(self):
        """ number of free coordinates """
        return bin(int(self.free_mask)).count("1")

    def get_vertices(self):
        """ sorted keys of the 2^dim vertices """
        vertices = [int(self.base)]
        mask = int(self.free_mask)
        while mask:
            bit = mask & -mask
            vertices += [v | bit for v in vertices]
            mask ^= bit
        return sorted(vertices)

    def get_facets(self):
        """ the 2*dim facets: each free coordinate fixed to 0 then to 1 """
        facets = []
        mask = int(self.free_mask)
        for j in range(mask.bit_length()):
            bit = 1 << j
            if mask & bit:
                facets.append(Face(int(self.base), mask ^ bit))
                facets.append(Face(int(self.base) | bit, mask ^ bit))
        return facets


# ================= #
#                   #
#   COMPLEX         #
#                   #
# ================= #
class CubicalComplex( object ):
    """ graded faces of an induced cubical subcomplex of {0,1}^n """

    def __init__(self, n, faces_by_dim, max_dim=None):
        """
        Parameters
        ----------
        n: [int]
            ambient dimension.

        faces_by_dim: [list of (bases, masks) int64 array pairs]
            faces per dimension, sorted by (base, mask). It may hold one
            more dimension than max_dim; this top layer only serves the
            rank of the last boundary map.

        max_dim: [int] -optional-
            reported dimension D (default: len(faces_by_dim)-1).
        """
        self._n = int(n)
        self._faces = [(np.asarray(b, dtype=np.int64), np.asarray(m, dtype=np.int64))
                       for b, m in faces_by_dim]
        self._max_dim = len(self._faces) - 1 if max_dim is None else int(max_dim)
        if len(self._faces) < self._max_dim + 1:
            raise ValueError("faces_by_dim must cover dimensions 0..max_dim")

    def __repr__(self):
        return "<CubicalComplex n=%d, face counts %s>" % (self.n, self.get_face_counts())

    # ----------- #
    #  GETTER     #
    # ----------- #
    def get_faces(self, dim):
        """ (bases, masks) arrays of the faces of dimension `dim` (empty beyond the stored ones) """
        if dim < 0 or dim >= len(self._faces):
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty
        return self._faces[dim]

    def get_face_list(self, dim):
        """ faces of dimension `dim` as a list of Face """
        return [Face(int(b), int(m)) for b, m in zip(*self.get_faces(dim))]

    def get_face_counts(self):
        """ f_0..f_D """
        return [len(self.get_faces(d)[0]) for d in range(self.max_dim + 1)]

    def get_face_keys(self, dim):
        """ sorting keys base<<n | mask """
        bases, masks = self.get_faces(dim)
        return (bases << self.n) | masks

    def get_facet_indices(self, dim):
        """ index, among the (dim-1)-faces, of the facets of every dim-face.

        Returns
        -------
        (f_dim, 2*dim) int array. -1 flags a facet missing from the complex.
        """
        bases, masks = self.get_faces(dim)
        if dim == 0 or len(bases) == 0:
            return np.zeros((len(bases), 2*max(dim, 0)), dtype=np.int64)
        lower = self.get_face_keys(dim - 1)
        out = np.full((len(bases), 2*dim), -1, dtype=np.int64)
        filled = np.zeros(len(bases), dtype=np.int64)
        for j in range(self.n):
            bit = np.int64(1) << np.int64(j)
            has = (masks & bit) != 0
            if not np.any(has):
                continue
            rows = np.flatnonzero(has)
            fmask = masks[rows] ^ bit
            for fbase in (bases[rows], bases[rows] | bit):
                keys = (fbase << self.n) | fmask
                idx = np.searchsorted(lower, keys)
                found = (idx < len(lower)) & (lower[np.minimum(idx, len(lower)-1)] == keys) if len(lower) else np.zeros(len(keys), bool)
                out[rows, filled[rows]] = np.where(found, idx, -1)
                filled[rows] += 1
        return out

    def get_boundary_columns(self, dim):
        """ boundary map d_dim as python-int bitsets, one per dim-face """
        facets = self.get_facet_indices(dim)
        columns = []
        for row in facets:
            col = 0
            for i in row:
                col ^= 1 << int(i)
            columns.append(col)
        return columns

    def get_boundary_matrix(self, dim):
        """ dense (f_{dim-1}, f_dim) 0/1 boundary matrix """
        nlow = len(self.get_faces(dim - 1)[0])
        facets = self.get_facet_indices(dim)
        matrix = np.zeros((nlow, len(facets)), dtype=np.uint8)
        for col, row in enumerate(facets):
            matrix[row, col] ^= 1
        return matrix

    def is_closed(self):
        """ every facet of every face is in the complex """
        return all(np.all(self.get_facet_indices(d) >= 0) for d in range(1, len(self._faces)))

    def to_dict(self):
        """ """
        return {"n": self.n, "max_dim": self.max_dim, "face_counts": self.get_face_counts()}

    # ----------- #
    # Properties  #
    # ----------- #
    @property
    def n(self):
        """ ambient dimension """
        return self._n

    @property
    def max_dim(self):
        """ D """
        return self._max_dim

    @property
    def has_top_layer(self):
        """ faces of dimension D+1 are stored """
        return len(self._faces) > self._max_dim + 1


class BettiVector( object ):
    """ Betti numbers b_0..b_D over GF(2) and the face counts they come from """

    def __init__(self, betti, face_counts, top_rank=0, n=None, field=FIELD):
        """
        top_rank is the rank of the boundary map from dimension D+1, which is
        non zero when the complex was truncated at D.
        """
        self.betti = [int(b) for b in betti]
        self.face_counts = [int(f) for f in face_counts]
        self.top_rank = int(top_rank)
        self.n = n
        self.field = field

    def __repr__(self):
        return "<BettiVector %s betti=%s faces=%s>" % (self.field, self.betti, self.face_counts)

    def __eq__(self, other):
        if not isinstance(other, BettiVector):
            return NotImplemented
        return self.betti == other.betti and self.face_counts == other.face_counts and self.field == other.field

    __hash__ = None

    def __getitem__(self, dim):
        return self.betti[dim]

    def euler_characteristic(self):
        """ sum (-1)^d f_d """
        return sum((-1)**d * f for d, f in enumerate(self.face_counts))

    def check_euler(self):
        """ sum (-1)^d f_d = sum (-1)^d b_d + (-1)^D rank(d_{D+1}) """
        top = len(self.betti) - 1
        rhs = sum((-1)**d * b for d, b in enumerate(self.betti)) + (-1)**top * self.top_rank
        return self.euler_characteristic() == rhs

    def to_dict(self):
        """ JSON record """
        return {"n": self.n, "face_counts": self.face_counts, "betti": self.betti,
                "top_rank": self.top_rank, "field": self.field}

    @classmethod
    def from_dict(cls, record):
        """ """
        return cls(record["betti"], record["face_counts"], top_rank=record.get("top_rank", 0),
                   n=record.get("n"), field=record.get("field", FIELD))


# ================= #
#                   #
#   Functions       #
#                   #
# ================= #
def build_complex(solutions, max_dim=DEFAULT_MAX_DIM, max_faces=MAX_FACES_PER_DIM):
    """ induced cubical complex of a complete solution set.

    A d-face is found from a (d-1)-face (base, mask) by freeing a coordinate
    j above the highest free one, when base has 0 at j and the partner face
    (base | 2^j, mask) is present. Each face comes out exactly once.
    Faces of dimension max_dim+1 are kept as a hidden top layer so that
    b_D is exact.

    Parameters
    ----------
    solutions: [SolutionSet]
        must be complete.

    max_dim: [int] -optional-
        D, highest reported dimension.

    max_faces: [int] -optional-
        refuse when one dimension exceeds this many faces.

    Returns
    -------
    CubicalComplex
    """
    if not solutions.complete:
        raise ValueError("the induced complex is undefined on an incomplete solution set")
    if len(solutions) > MAX_SOLUTIONS:
        raise GuardRefused("more than %d solutions" % MAX_SOLUTIONS)
    n = solutions.n
    if 2 * n > 62:
        raise GuardRefused("build_complex is limited to n <= 31 (n=%d)" % n)
    max_dim = int(max_dim)
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")

    bases = np.sort(solutions.get_keys()) if len(solutions) else np.zeros(0, dtype=np.int64)
    masks = np.zeros(len(bases), dtype=np.int64)
    if len(bases) > max_faces:
        raise GuardRefused("%d vertices exceed the %d faces per dimension limit" % (len(bases), max_faces))
    faces = [(bases, masks)]

    for dim in range(1, max_dim + 2):
        bases, masks = faces[-1]
        if len(bases) == 0 or dim > n:
            faces.append((np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)))
            continue
        keys = (bases << n) | masks
        new_bases, new_masks = [], []
        for j in range(n):
            bit = np.int64(1) << np.int64(j)
            candidate = (masks < bit) & ((bases & bit) == 0)
            if not np.any(candidate):
                continue
            cbases, cmasks = bases[candidate], masks[candidate]
            partner = ((cbases | bit) << n) | cmasks
            idx = np.searchsorted(keys, partner)
            ok = (idx < len(keys)) & (keys[np.minimum(idx, len(keys)-1)] == partner)
            new_bases.append(cbases[ok])
            new_masks.append(cmasks[ok] | bit)
        nb = np.concatenate(new_bases) if new_bases else np.zeros(0, dtype=np.int64)
        nm = np.concatenate(new_masks) if new_masks else np.zeros(0, dtype=np.int64)
        order = np.argsort((nb << n) | nm, kind="stable")
        if len(order) > max_faces:
            raise GuardRefused("%d faces of dimension %d exceed the %d limit" % (len(order), dim, max_faces))
        faces.append((nb[order], nm[order]))

    return CubicalComplex(n, faces, max_dim=max_dim)

def betti(complex_, rank_method="bitset"):
    """ GF(2) Betti numbers b_d = f_d - rank(d_d) - rank(d_{d+1}).

    Parameters
    ----------
    complex_: [CubicalComplex]

    rank_method: [string] -optional-
        'bitset' (default) or 'dense' (numpy row reduction, the oracle).

    Returns
    -------
    BettiVector
    """
    if rank_method not in ["bitset", "dense"]:
        raise ValueError("rank_method must be 'bitset' or 'dense'")

    def _rank(dim):
        if len(complex_.get_faces(dim)[0]) == 0 or len(complex_.get_faces(dim-1)[0]) == 0:
            return 0
        if rank_method == "bitset":
            return rank_bitsets(complex_.get_boundary_columns(dim))
        return rank_dense(complex_.get_boundary_matrix(dim))

    top = complex_.max_dim
    counts = complex_.get_face_counts()
    ranks = [0] + [_rank(d) for d in range(1, top + 2)]
    values = [counts[d] - ranks[d] - ranks[d+1] for d in range(top + 1)]
    return BettiVector(values, counts, top_rank=ranks[top+1], n=complex_.n)

def betti_of_formula(formula, max_dim=DEFAULT_MAX_DIM, rank_method="bitset"):
    """ brute_force -> build_complex -> betti

    Raises
    ------
    GuardRefused above HOMOLOGY_MAX_VARS variables.
    """
    if formula.num_vars > HOMOLOGY_MAX_VARS:
        raise GuardRefused("homology is limited to %d variables (%d given)" % (HOMOLOGY_MAX_VARS, formula.num_vars))
    solutions = brute_force(formula, max_vars=HOMOLOGY_MAX_VARS)
    return betti(build_complex(solutions, max_dim=max_dim), rank_method=rank_method)

def connected_components(solutions):
    """ components of the Hamming-1 graph on the members.

    Returns
    -------
    int array of labels aligned with solutions.members; components are
    numbered by their first member.
    """
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components as _components
    k = len(solutions)
    if k == 0:
        return np.zeros(0, dtype=int)

    keys = solutions.get_keys()
    order = np.argsort(keys)
    sorted_keys = keys[order]
    rows, cols = [], []
    for j in range(solutions.n):
        neighbours = sorted_keys ^ (np.int64(1) << np.int64(j))
        idx = np.searchsorted(sorted_keys, neighbours)
        ok = (idx < k) & (sorted_keys[np.minimum(idx, k-1)] == neighbours)
        rows.append(order[ok])
        cols.append(order[idx[ok]])
    rows = np.concatenate(rows) if rows else np.zeros(0, dtype=int)
    cols = np.concatenate(cols) if cols else np.zeros(0, dtype=int)
    graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(k, k))
    _, labels = _components(graph, directed=False)
    return canonical_labels(labels)

def canonical_labels(labels):
    """ renumbers labels in order of first appearance """
    labels = np.asarray(labels)
    if len(labels) == 0:
        return np.zeros(0, dtype=int)
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    remap = np.argsort(np.argsort(first))
    return remap[inverse.reshape(-1)]


# ================= #
#                   #
#   Voids           #
#                   #
# ================= #
def search_void(n=5, max_removed=2, min_betti2=1, verbose=False):
    """ deterministic search for an induced subcomplex of {0,1}^n with b_2 >= min_betti2.

    Candidates are sub-cubes {0,1}^k (k = 2..n, other coordinates 0) minus r
    of their vertices (r = 1..max_removed), visited in increasing k, r and
    lexicographic order of the removed vertices. Betti numbers are computed
    with the dense rank oracle.

    Returns
    -------
    SolutionSet or None
    """
    for k in range(2, n + 1):
        cube = list(range(2**k))
        for r in range(1, max_removed + 1):
            for removed in combinations(cube, r):
                keys = sorted(set(cube) - set(removed))
                solutions = SolutionSet.from_keys(n, keys)
                result = betti(build_complex(solutions, max_dim=3), rank_method="dense")
                if result.betti[2] >= min_betti2:
                    if verbose:
                        print("INFO: void found in a %d-cube minus %s: %s" % (k, list(removed), result))
                    return solutions
    warnings.warn("no subcomplex with b_2 >= %d found in {0,1}^%d" % (min_betti2, n))
    return None

def load_void_fixture(filename=None):
    """ stored solution set with b_2 >= 1 (and its expected Betti record)

    Returns
    -------
    (SolutionSet, dict)
    """
    from .io import get_data_file
    filename = get_data_file("beta2_void.json") if filename is None else filename
    with open(filename) as f:
        record = json.load(f)
    return SolutionSet.from_keys(record["n"], record["keys"]), record
