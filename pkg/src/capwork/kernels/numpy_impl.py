"""Pure-numpy kernel backend: the shared loops run as plain Python.

Functionally identical to the numba backend, just slower; uint64 wraparound
warnings from numpy scalars are silenced since wrapping is intended.
"""

import functools

import numpy as np

from . import _ops


def _quiet(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        with np.errstate(over="ignore"):
            return fn(*args, **kwargs)

    return wrapper


popcount_words = _quiet(_ops.popcount_words)
induced_edge_count = _quiet(_ops.induced_edge_count)
degrees_in_mask = _quiet(_ops.degrees_in_mask)
mis_branch_bound = _quiet(_ops.mis_branch_bound)
min_edges_exact = _quiet(_ops.min_edges_exact)
count_indep_graph = _quiet(_ops.count_indep_graph)
cap_branch_bound = _quiet(_ops.cap_branch_bound)
count_caps_3u = _quiet(_ops.count_caps_3u)
collect_caps_3u = _quiet(_ops.collect_caps_3u)
sample_mask = _quiet(_ops.sample_mask)
pair_triple_stats = _quiet(_ops.pair_triple_stats)
local_third_masks = _quiet(_ops.local_third_masks)
cap_greedy_swap = _quiet(_ops.cap_greedy_swap)

NAME = "numpy"
