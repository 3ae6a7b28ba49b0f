"""Kernel backend selection and shared bitset helpers.

The environment variable CAPWORK_KERNELS picks the backend:

  auto   (default) numba when importable, else the pure-numpy fallback
  numba  require the numba backend, fail if unavailable
  numpy  force the pure-numpy fallback

Both backends run the same source (see _ops.py) and return identical
results; benchmarks/bench_kernels.py measures the gap.
"""

import os

import numpy as np

from .. import errors
from . import _ops

_EXPORTS = (
    "popcount_words",
    "induced_edge_count",
    "degrees_in_mask",
    "mis_branch_bound",
    "min_edges_exact",
    "count_indep_graph",
    "cap_branch_bound",
    "count_caps_3u",
    "collect_caps_3u",
    "sample_mask",
    "pair_triple_stats",
    "local_third_masks",
    "cap_greedy_swap",
)


def _select():
    requested = os.environ.get("CAPWORK_KERNELS", "auto").lower()
    if requested not in ("auto", "numba", "numpy"):
        raise errors.UsageError(f"CAPWORK_KERNELS must be auto|numba|numpy, got {requested!r}")
    if requested == "numpy":
        from . import numpy_impl

        return numpy_impl
    try:
        from . import numba_impl

        return numba_impl
    except ImportError:
        if requested == "numba":
            raise
        from . import numpy_impl

        return numpy_impl


_impl = _select()
BACKEND = _impl.NAME

for _name in _EXPORTS:
    globals()[_name] = getattr(_impl, _name)


def get_backend(name: str):
    """Explicit backend module, for tests and benchmarks."""
    if name == "numba":
        from . import numba_impl

        return numba_impl
    if name == "numpy":
        from . import numpy_impl

        return numpy_impl
    raise errors.UsageError(f"unknown kernel backend {name!r}")


# -- plain-python bitset and RNG helpers (not performance critical)


def words_for(n: int) -> int:
    return max(1, (n + 63) >> 6)


def to_mask(indices, n: int) -> np.ndarray:
    mask = np.zeros(words_for(n), dtype=np.uint64)
    for i in indices:
        mask[i >> 6] |= np.uint64(1) << np.uint64(i & 63)
    return mask


def full_mask(n: int) -> np.ndarray:
    return to_mask(range(n), n)


def mask_indices(mask) -> list:
    out = []
    for k, word in enumerate(mask):
        word = int(word)
        base = k << 6
        while word:
            low = word & -word
            out.append(base + low.bit_length() - 1)
            word ^= low
    return out


def mask_contains(mask, i: int) -> bool:
    return bool((int(mask[i >> 6]) >> (i & 63)) & 1)


_M64 = (1 << 64) - 1


def mix64(x: int) -> int:
    """SplitMix64 finalizer on python ints; matches the kernel RNG."""
    z = (x + 0x9E3779B97F4A7C15) & _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


def sample_subset(n: int, s: int, seed: int, trial: int) -> list:
    """Deterministic s-subset of range(n) via a keyed partial Fisher-Yates."""
    if s > n:
        raise ValueError(f"cannot sample {s} of {n}")
    key = mix64(seed) ^ mix64((trial * 0x94D049BB133111EB + 0x9E3779B97F4A7C15) & _M64)
    idx = list(range(n))
    for k in range(s):
        r = mix64((key ^ (k * 0xBF58476D1CE4E5B9)) & _M64) % (n - k)
        idx[k], idx[k + r] = idx[k + r], idx[k]
    return sorted(idx[:s])
