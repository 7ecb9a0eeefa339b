#! /usr/bin/env python
# -*- coding: utf-8 -*-

""" GF(2) linear algebra.

Two independent rank routines live here: `rank_bitsets` works on python
integers used as bitsets (the one the homology code relies on), and
`rank_dense` does plain row reduction on a numpy 0/1 matrix. The latter is
kept as an oracle to cross-check the former.
"""

import numpy as np

__all__ = ["rank_bitsets", "rank_dense", "to_bitsets", "solve_dense"]


def to_bitsets(matrix):
    """ converts a 0/1 matrix into a list of row bitsets (bit j <-> column j) """
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.uint8) % 2)
    weights = [1 << j for j in range(matrix.shape[1])]
    return [sum(w for w, bit in zip(weights, row) if bit) for row in matrix]

def rank_bitsets(vectors):
    """ rank over GF(2) of a family of vectors encoded as python int bitsets.

    Each vector is reduced against the pivots found so far, keyed by their
    highest set bit; a vector that survives the reduction is a new pivot.

    Parameters
    ----------
    vectors: [iterable of int]
        bitsets, one per vector (rows or columns, the rank is the same)

    Returns
    -------
    int
    """
    pivots = {}
    rank = 0
    for vec in vectors:
        while vec:
            low = vec.bit_length() - 1
            pivot = pivots.get(low)
            if pivot is None:
                pivots[low] = vec
                rank += 1
                break
            vec ^= pivot
    return rank

def rank_dense(matrix):
    """ rank over GF(2) of a dense 0/1 matrix (row reduction, numpy) """
    mat = np.atleast_2d(np.array(matrix, dtype=np.uint8) % 2)
    if mat.size == 0:
        return 0
    nrows, ncols = mat.shape
    rank = 0
    for col in range(ncols):
        rows = np.nonzero(mat[rank:, col])[0]
        if rows.size == 0:
            continue
        pivot = rank + int(rows[0])
        if pivot != rank:
            mat[[rank, pivot]] = mat[[pivot, rank]]
        ones = np.nonzero(mat[:, col])[0]
        ones = ones[ones != rank]
        if ones.size:
            mat[ones, :] ^= mat[rank, :]
        rank += 1
        if rank == nrows:
            break
    return rank

def solve_dense(matrix, rhs):
    """ solves matrix @ x = rhs over GF(2)

    Parameters
    ----------
    matrix: [2d array]
        (nequations, nvars) 0/1 coefficients

    rhs: [1d array]
        right hand side bits

    Returns
    -------
    (consistent: bool, solution: 1d uint8 array or None, rank: int)
        free variables are set to 0 in the returned solution.
    """
    mat = np.atleast_2d(np.array(matrix, dtype=np.uint8) % 2)
    rhs = np.asarray(rhs, dtype=np.uint8).reshape(-1) % 2
    nrows, ncols = mat.shape
    aug = np.concatenate([mat, rhs[:, None]], axis=1)
    pivot_cols = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        rows = np.nonzero(aug[row:, col])[0]
        if rows.size == 0:
            continue
        pivot = row + int(rows[0])
        if pivot != row:
            aug[[row, pivot]] = aug[[pivot, row]]
        ones = np.nonzero(aug[:, col])[0]
        ones = ones[ones != row]
        if ones.size:
            aug[ones, :] ^= aug[row, :]
        pivot_cols.append(col)
        row += 1

    rank = len(pivot_cols)
    # 0 = 1 rows
    if np.any(aug[rank:, ncols] == 1):
        return False, None, rank

    solution = np.zeros(ncols, dtype=np.uint8)
    for r, col in enumerate(pivot_cols):
        solution[col] = aug[r, ncols]
    return True, solution, rank
