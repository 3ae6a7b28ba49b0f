"""numba-compiled kernel backend."""

from numba import njit

from . import _ops

_jit = lambda fn: njit(cache=True)(fn)  # noqa: E731

popcount_words = _jit(_ops.popcount_words)
induced_edge_count = _jit(_ops.induced_edge_count)
degrees_in_mask = _jit(_ops.degrees_in_mask)
mis_branch_bound = _jit(_ops.mis_branch_bound)
min_edges_exact = _jit(_ops.min_edges_exact)
count_indep_graph = _jit(_ops.count_indep_graph)
cap_branch_bound = _jit(_ops.cap_branch_bound)
count_caps_3u = _jit(_ops.count_caps_3u)
collect_caps_3u = _jit(_ops.collect_caps_3u)
sample_mask = _jit(_ops.sample_mask)
pair_triple_stats = _jit(_ops.pair_triple_stats)
local_third_masks = _jit(_ops.local_third_masks)
cap_greedy_swap = _jit(_ops.cap_greedy_swap)

NAME = "numba"
