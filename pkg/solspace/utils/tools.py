#! /usr/bin/env python
# -*- coding: utf-8 -*-

""" Internal small toolbox"""

import numpy as np

__all__ = ["kwargs_update", "derive_rng", "derive_seed",
           "hamming", "pairwise_hamming"]


def kwargs_update(default, **kwargs):
    """
    """
    k = default.copy()
    for key, val in kwargs.items():
        k[key] = val

    return k


################################
#                              #
#    Random Streams            #
#                              #
################################
def derive_rng(seed, index=0):
    """ Counter-based random stream keyed by (seed, index).

    Two different indexes never share a stream, whatever the order in which
    they are requested, so work split across processes draws exactly the
    numbers it would have drawn sequentially.

    Parameters
    ----------
    seed: [int]
        master seed (64-bit, non negative)

    index: [int] -optional-
        item index (probe, trial, seed number...)

    Returns
    -------
    numpy.random.Generator (Philox bit generator)
    """
    sequence = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, int(index)])
    return np.random.Generator(np.random.Philox(sequence))

def derive_seed(seed, index=0):
    """ integer child seed (63 bits) of the (seed, index) stream """
    sequence = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, int(index)])
    return int(sequence.generate_state(1, np.uint64)[0] >> np.uint64(1))

################################
#                              #
#    Hamming geometry          #
#                              #
################################
def hamming(a, b):
    """ Hamming distance between two 0/1 vectors """
    return int(np.count_nonzero(np.asarray(a, dtype=bool) != np.asarray(b, dtype=bool)))

def pairwise_hamming(points):
    """ square matrix of Hamming distances between the rows of `points` (counts, not fractions)

    Parameters
    ----------
    points: [2d array]
        (npoints, n) 0/1 array

    Returns
    -------
    2d int array (npoints, npoints)
    """
    from scipy.spatial.distance import pdist, squareform
    points = np.atleast_2d(np.asarray(points, dtype=bool))
    if len(points) < 2:
        return np.zeros((len(points), len(points)), dtype=int)
    dist = squareform(pdist(points, metric="hamming")) * points.shape[1]
    return np.rint(dist).astype(int)
