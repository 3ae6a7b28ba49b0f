"""Hot-loop implementations shared by both kernel backends.

Every function here is written in the nopython-compilable subset of Python:
the numba backend compiles these exact functions, the numpy backend runs
them as plain Python. Both produce bit-identical results.

Bitsets are little-endian uint64 word arrays: vertex i lives in word i >> 6
at bit i & 63. Adjacency is a (n, w) uint64 matrix of neighbor bitsets.
"""

import numpy as np

POP16 = np.array([bin(i).count("1") for i in range(1 << 16)], dtype=np.int64)

U0 = np.uint64(0)
U1 = np.uint64(1)
U16 = np.uint64(16)
U32 = np.uint64(32)
U48 = np.uint64(48)
UMASK16 = np.uint64(0xFFFF)
U63 = np.uint64(63)

_SM_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_SM_MUL1 = np.uint64(0xBF58476D1CE4E5B9)
_SM_MUL2 = np.uint64(0x94D049BB133111EB)


def popcount_words(mask):
    total = 0
    for k in range(mask.shape[0]):
        x = mask[k]
        total += (
            POP16[x & UMASK16]
            + POP16[(x >> U16) & UMASK16]
            + POP16[(x >> U32) & UMASK16]
            + POP16[(x >> U48) & UMASK16]
        )
    return total


def induced_edge_count(rows, mask):
    """Number of edges of the induced subgraph on the mask."""
    n = rows.shape[0]
    w = rows.shape[1]
    deg2 = 0
    for i in range(n):
        if (mask[i >> 6] >> np.uint64(i & 63)) & U1:
            for k in range(w):
                x = rows[i, k] & mask[k]
                deg2 += (
                    POP16[x & UMASK16]
                    + POP16[(x >> U16) & UMASK16]
                    + POP16[(x >> U32) & UMASK16]
                    + POP16[(x >> U48) & UMASK16]
                )
    return deg2 // 2


def degrees_in_mask(rows, mask):
    """Degree within the mask for every member vertex (0 elsewhere)."""
    n = rows.shape[0]
    w = rows.shape[1]
    out = np.zeros(n, dtype=np.int64)
    for i in range(n):
        if (mask[i >> 6] >> np.uint64(i & 63)) & U1:
            c = 0
            for k in range(w):
                x = rows[i, k] & mask[k]
                c += (
                    POP16[x & UMASK16]
                    + POP16[(x >> U16) & UMASK16]
                    + POP16[(x >> U32) & UMASK16]
                    + POP16[(x >> U48) & UMASK16]
                )
            out[i] = c
    return out


def mis_branch_bound(rows, budget, init_size, init_mask):
    """Exact maximum independent set by include/exclude branch and bound.

    Branches on the highest-degree vertex of the shrinking candidate graph
    (ties to the lowest index) and prunes with a greedy clique-cover bound.
    Returns (best_size, witness_mask, nodes_expanded, timed_out).
    """
    n = rows.shape[0]
    w = rows.shape[1]
    best = init_size
    witness = init_mask.copy()
    maxcl = 128
    common = np.zeros((maxcl, w), dtype=np.uint64)
    cap = 2 * n + 8
    st_cand = np.zeros((cap, w), dtype=np.uint64)
    st_count = np.zeros(cap, dtype=np.int64)
    st_pathv = np.zeros(cap, dtype=np.int64)
    path = np.zeros(n + 1, dtype=np.int64)
    for i in range(n):
        st_cand[0, i >> 6] |= U1 << np.uint64(i & 63)
    st_count[0] = 0
    st_pathv[0] = -1
    top = 1
    nodes = 0
    timed_out = False
    while top > 0:
        top -= 1
        count = st_count[top]
        pv = st_pathv[top]
        if pv >= 0:
            path[count - 1] = pv
        nodes += 1
        if nodes > budget:
            timed_out = True
            break
        csize = 0
        for k in range(w):
            x = st_cand[top, k]
            csize += (
                POP16[x & UMASK16]
                + POP16[(x >> U16) & UMASK16]
                + POP16[(x >> U32) & UMASK16]
                + POP16[(x >> U48) & UMASK16]
            )
        if count + csize <= best:
            continue
        if csize == 0:
            if count > best:
                best = count
                for k in range(w):
                    witness[k] = U0
                for d in range(count):
                    v = path[d]
                    witness[v >> 6] |= U1 << np.uint64(v & 63)
            continue
        # greedy clique cover of the candidate graph; stop once it exceeds
        # what a prune would need
        needed = best - count
        ncl = 0
        prunable = True
        for i in range(n):
            if not (st_cand[top, i >> 6] >> np.uint64(i & 63)) & U1:
                continue
            placed = False
            for c in range(min(ncl, maxcl)):
                if (common[c, i >> 6] >> np.uint64(i & 63)) & U1:
                    for k in range(w):
                        common[c, k] &= rows[i, k]
                    placed = True
                    break
            if not placed:
                if ncl < maxcl:
                    for k in range(w):
                        common[ncl, k] = rows[i, k] & st_cand[top, k]
                ncl += 1
                if ncl > needed:
                    prunable = False
                    break
        if prunable and ncl <= needed:
            continue
        # branching vertex: max degree inside candidates, lowest index wins ties
        bv = -1
        bd = -1
        for i in range(n):
            if not (st_cand[top, i >> 6] >> np.uint64(i & 63)) & U1:
                continue
            d = 0
            for k in range(w):
                x = rows[i, k] & st_cand[top, k]
                d += (
                    POP16[x & UMASK16]
                    + POP16[(x >> U16) & UMASK16]
                    + POP16[(x >> U32) & UMASK16]
                    + POP16[(x >> U48) & UMASK16]
                )
            if d > bd:
                bd = d
                bv = i
        # exclude child first so the include child is explored first (LIFO)
        for k in range(w):
            st_cand[top + 1, k] = st_cand[top, k]
        st_cand[top + 1, bv >> 6] &= ~(U1 << np.uint64(bv & 63))
        st_count[top + 1] = count
        st_pathv[top + 1] = -1
        for k in range(w):
            st_cand[top, k] = st_cand[top + 1, k] & ~rows[bv, k]
        st_count[top] = count + 1
        st_pathv[top] = bv
        # swap so include sits on top
        for k in range(w):
            tmp = st_cand[top, k]
            st_cand[top, k] = st_cand[top + 1, k]
            st_cand[top + 1, k] = tmp
        tc = st_count[top]
        st_count[top] = st_count[top + 1]
        st_count[top + 1] = tc
        tv = st_pathv[top]
        st_pathv[top] = st_pathv[top + 1]
        st_pathv[top + 1] = tv
        top += 2
    return best, witness, nodes, timed_out


def min_edges_exact(rows, s):
    """Exact minimum induced edge count over all s-subsets.

    Ordered enumeration with monotone pruning: extending a subset never
    removes edges, so partial counts at or above the incumbent are cut.
    Returns (min_edges, witness_mask).
    """
    n = rows.shape[0]
    w = rows.shape[1]
    best_mask = np.zeros(w, dtype=np.uint64)
    if s <= 0:
        return 0, best_mask
    choose = np.zeros(s, dtype=np.int64)
    edges_at = np.zeros(s + 1, dtype=np.int64)
    mask = np.zeros(w, dtype=np.uint64)
    best = s * (s - 1) // 2 + 1
    pos = 0
    cur = 0
    while True:
        if pos == s:
            best = edges_at[s]
            for k in range(w):
                best_mask[k] = mask[k]
            if best == 0:
                break
            pos -= 1
            v = choose[pos]
            mask[v >> 6] &= ~(U1 << np.uint64(v & 63))
            cur = v + 1
            continue
        if cur > n - (s - pos):
            if pos == 0:
                break
            pos -= 1
            v = choose[pos]
            mask[v >> 6] &= ~(U1 << np.uint64(v & 63))
            cur = v + 1
            continue
        add = 0
        for k in range(w):
            x = rows[cur, k] & mask[k]
            add += (
                POP16[x & UMASK16]
                + POP16[(x >> U16) & UMASK16]
                + POP16[(x >> U32) & UMASK16]
                + POP16[(x >> U48) & UMASK16]
            )
        if edges_at[pos] + add < best:
            choose[pos] = cur
            mask[cur >> 6] |= U1 << np.uint64(cur & 63)
            edges_at[pos + 1] = edges_at[pos] + add
            pos += 1
            cur += 1
        else:
            cur += 1
    return best, best_mask


def count_indep_graph(rows, m):
    """Number of independent m-subsets; caller guards against int64 overflow."""
    n = rows.shape[0]
    w = rows.shape[1]
    if m == 0:
        return 1
    if m > n:
        return 0
    allowed = np.zeros((m + 1, w), dtype=np.uint64)
    for i in range(n):
        allowed[0, i >> 6] |= U1 << np.uint64(i & 63)
    choose = np.zeros(m, dtype=np.int64)
    total = 0
    pos = 0
    cur = 0
    while True:
        if cur > n - (m - pos):
            if pos == 0:
                break
            pos -= 1
            cur = choose[pos] + 1
            continue
        if (allowed[pos, cur >> 6] >> np.uint64(cur & 63)) & U1:
            if pos == m - 1:
                total += 1
                cur += 1
            else:
                choose[pos] = cur
                for k in range(w):
                    allowed[pos + 1, k] = allowed[pos, k] & ~rows[cur, k]
                pos += 1
                cur += 1
        else:
            cur += 1
    return total


def cap_branch_bound(third, budget):
    """Exact maximum independent set of a 3-uniform hypergraph.

    third[a, b] is the bitset of vertices completing a hyperedge with the
    pair (a, b). Branches on the lowest candidate; the bound is the
    remaining-candidate count. Returns (best, witness, nodes, timed_out).
    """
    n = third.shape[0]
    w = third.shape[2]
    best = 0
    witness = np.zeros(w, dtype=np.uint64)
    cap = 2 * n + 8
    st_cand = np.zeros((cap, w), dtype=np.uint64)
    st_count = np.zeros(cap, dtype=np.int64)
    st_pathv = np.zeros(cap, dtype=np.int64)
    path = np.zeros(n + 1, dtype=np.int64)
    for i in range(n):
        st_cand[0, i >> 6] |= U1 << np.uint64(i & 63)
    st_pathv[0] = -1
    top = 1
    nodes = 0
    timed_out = False
    while top > 0:
        top -= 1
        count = st_count[top]
        pv = st_pathv[top]
        if pv >= 0:
            path[count - 1] = pv
        nodes += 1
        if nodes > budget:
            timed_out = True
            break
        csize = 0
        for k in range(w):
            x = st_cand[top, k]
            csize += (
                POP16[x & UMASK16]
                + POP16[(x >> U16) & UMASK16]
                + POP16[(x >> U32) & UMASK16]
                + POP16[(x >> U48) & UMASK16]
            )
        if count + csize <= best:
            continue
        if csize == 0:
            if count > best:
                best = count
                for k in range(w):
                    witness[k] = U0
                for d in range(count):
                    v = path[d]
                    witness[v >> 6] |= U1 << np.uint64(v & 63)
            continue
        # lowest candidate
        bv = -1
        for k in range(w):
            if st_cand[top, k] != U0:
                x = st_cand[top, k]
                b = 0
                while not (x >> np.uint64(b)) & U1:
                    b += 1
                bv = (k << 6) + b
                break
        # exclude child
        for k in range(w):
            st_cand[top + 1, k] = st_cand[top, k]
        st_cand[top + 1, bv >> 6] &= ~(U1 << np.uint64(bv & 63))
        st_count[top + 1] = count
        st_pathv[top + 1] = -1
        # include child on top
        for k in range(w):
            st_cand[top, k] = st_cand[top + 1, k]
        for d in range(count):
            u = path[d]
            for k in range(w):
                st_cand[top, k] &= ~third[u, bv, k]
        st_count[top] = count + 1
        st_pathv[top] = bv
        for k in range(w):
            tmp = st_cand[top, k]
            st_cand[top, k] = st_cand[top + 1, k]
            st_cand[top + 1, k] = tmp
        tc = st_count[top]
        st_count[top] = st_count[top + 1]
        st_count[top + 1] = tc
        tv = st_pathv[top]
        st_pathv[top] = st_pathv[top + 1]
        st_pathv[top + 1] = tv
        top += 2
    return best, witness, nodes, timed_out


def count_caps_3u(third, m):
    """Number of independent m-subsets of the 3-uniform hypergraph."""
    n = third.shape[0]
    w = third.shape[2]
    if m == 0:
        return 1
    if m > n:
        return 0
    allowed = np.zeros((m + 1, w), dtype=np.uint64)
    for i in range(n):
        allowed[0, i >> 6] |= U1 << np.uint64(i & 63)
    choose = np.zeros(m, dtype=np.int64)
    total = 0
    pos = 0
    cur = 0
    while True:
        if cur > n - (m - pos):
            if pos == 0:
                break
            pos -= 1
            cur = choose[pos] + 1
            continue
        if (allowed[pos, cur >> 6] >> np.uint64(cur & 63)) & U1:
            if pos == m - 1:
                total += 1
                cur += 1
            else:
                choose[pos] = cur
                for k in range(w):
                    allowed[pos + 1, k] = allowed[pos, k]
                for d in range(pos):
                    u = choose[d]
                    for k in range(w):
                        allowed[pos + 1, k] &= ~third[u, cur, k]
                pos += 1
                cur += 1
        else:
            cur += 1
    return total


def collect_caps_3u(third, m, out_masks):
    """Collect all independent m-subsets into out_masks; returns the count.

    Aborts with max_out + 1 as soon as the output buffer would overflow.
    """
    n = third.shape[0]
    w = third.shape[2]
    max_out = out_masks.shape[0]
    if m == 0:
        return 0
    allowed = np.zeros((m + 1, w), dtype=np.uint64)
    for i in range(n):
        allowed[0, i >> 6] |= U1 << np.uint64(i & 63)
    choose = np.zeros(m, dtype=np.int64)
    found = 0
    pos = 0
    cur = 0
    while True:
        if cur > n - (m - pos):
            if pos == 0:
                break
            pos -= 1
            cur = choose[pos] + 1
            continue
        if (allowed[pos, cur >> 6] >> np.uint64(cur & 63)) & U1:
            if pos == m - 1:
                if found >= max_out:
                    return max_out + 1
                for k in range(w):
                    out_masks[found, k] = U0
                for d in range(pos):
                    v = choose[d]
                    out_masks[found, v >> 6] |= U1 << np.uint64(v & 63)
                out_masks[found, cur >> 6] |= U1 << np.uint64(cur & 63)
                found += 1
                cur += 1
            else:
                choose[pos] = cur
                for k in range(w):
                    allowed[pos + 1, k] = allowed[pos, k]
                for d in range(pos):
                    u = choose[d]
                    for k in range(w):
                        allowed[pos + 1, k] &= ~third[u, cur, k]
                pos += 1
                cur += 1
        else:
            cur += 1
    return found


def mix64(z):
    """SplitMix64 finalizer; the counter-based RNG primitive."""
    z = z + _SM_GAMMA
    z = (z ^ (z >> np.uint64(30))) * _SM_MUL1
    z = (z ^ (z >> np.uint64(27))) * _SM_MUL2
    return z ^ (z >> np.uint64(31))


def sample_mask(theta, thr, seed, trial):
    """Bernoulli sample keyed by (seed, trial, index); order-independent."""
    out = np.zeros(theta, dtype=np.uint8)
    z = np.uint64(seed) + _SM_GAMMA
    z = (z ^ (z >> np.uint64(30))) * _SM_MUL1
    z = (z ^ (z >> np.uint64(27))) * _SM_MUL2
    ka = z ^ (z >> np.uint64(31))
    z = np.uint64(trial) * _SM_MUL2 + _SM_GAMMA + _SM_GAMMA
    z = (z ^ (z >> np.uint64(30))) * _SM_MUL1
    z = (z ^ (z >> np.uint64(27))) * _SM_MUL2
    kb = z ^ (z >> np.uint64(31))
    key = ka ^ kb
    for i in range(theta):
        z = (key ^ (np.uint64(i) * _SM_MUL1)) + _SM_GAMMA
        z = (z ^ (z >> np.uint64(30))) * _SM_MUL1
        z = (z ^ (z >> np.uint64(27))) * _SM_MUL2
        u = z ^ (z >> np.uint64(31))
        if u < thr:
            out[i] = 1
    return out


def pair_triple_stats(spts, q, add_t, mul_t, inv_t, enc2idx, g2l, deg3):
    """Induced collinear-triple count and per-vertex triple degrees.

    spts holds normalized coordinates of the sampled points; membership is
    answered through enc2idx (global coordinate encoding -> point id) and
    g2l (point id -> sample-local id or -1). deg3 must be zeroed by the
    caller. Returns the induced hyperedge count.
    """
    s = spts.shape[0]
    dim = spts.shape[1]
    tmp = np.zeros(dim, dtype=np.int64)
    incidences = 0
    for i in range(s):
        for j in range(i + 1, s):
            for lam in range(1, q):
                fnz = -1
                for k in range(dim):
                    v = add_t[spts[i, k], mul_t[lam, spts[j, k]]]
                    tmp[k] = v
                    if fnz < 0 and v != 0:
                        fnz = k
                if tmp[fnz] != 1:
                    sc = inv_t[tmp[fnz]]
                    for k in range(fnz, dim):
                        tmp[k] = mul_t[sc, tmp[k]]
                enc = 0
                for k in range(dim):
                    enc = enc * q + tmp[k]
                l = g2l[enc2idx[enc]]
                if l >= 0:
                    incidences += 1
                    deg3[l] += 1
    return incidences // 3


def local_third_masks(spts, q, add_t, mul_t, inv_t, enc2idx, g2l):
    """(s, s, w) pair -> completing-vertex bitsets over sample-local ids."""
    s = spts.shape[0]
    dim = spts.shape[1]
    w = (s + 63) >> 6
    third = np.zeros((s, s, w), dtype=np.uint64)
    tmp = np.zeros(dim, dtype=np.int64)
    for i in range(s):
        for j in range(i + 1, s):
            for lam in range(1, q):
                fnz = -1
                for k in range(dim):
                    v = add_t[spts[i, k], mul_t[lam, spts[j, k]]]
                    tmp[k] = v
                    if fnz < 0 and v != 0:
                        fnz = k
                if tmp[fnz] != 1:
                    sc = inv_t[tmp[fnz]]
                    for k in range(fnz, dim):
                        tmp[k] = mul_t[sc, tmp[k]]
                enc = 0
                for k in range(dim):
                    enc = enc * q + tmp[k]
                l = g2l[enc2idx[enc]]
                if l >= 0:
                    third[i, j, l >> 6] |= U1 << np.uint64(l & 63)
                    third[j, i, l >> 6] |= U1 << np.uint64(l & 63)
    return third


def cap_greedy_swap(spts, q, add_t, mul_t, inv_t, enc2idx, g2l, order, max_rounds):
    """Greedy cap in the given order plus 1-out/2-in swap rounds.

    Tracks, for every chosen vertex u and every sample vertex v, how many
    chosen pairs through u block v; removing u frees exactly the vertices
    whose whole blocker count comes from u. Returns (size, chosen_flags).
    """
    s = spts.shape[0]
    dim = spts.shape[1]
    blockers = np.zeros(s, dtype=np.int32)
    contrib = np.zeros((s, s), dtype=np.int32)
    chosen_flag = np.zeros(s, dtype=np.uint8)
    chosen = np.zeros(s, dtype=np.int64)
    free_buf = np.zeros(s, dtype=np.int64)
    added_buf = np.zeros(s, dtype=np.int64)
    added_flag = np.zeros(s, dtype=np.uint8)
    tmp = np.zeros(dim, dtype=np.int64)
    nch = 0
    # greedy pass
    for oi in range(s):
        v = order[oi]
        if blockers[v] > 0 or chosen_flag[v] == 1:
            continue
        for ci in range(nch):
            u = chosen[ci]
            for lam in range(1, q):
                fnz = -1
                for k in range(dim):
                    val = add_t[spts[u, k], mul_t[lam, spts[v, k]]]
                    tmp[k] = val
                    if fnz < 0 and val != 0:
                        fnz = k
                if tmp[fnz] != 1:
                    sc = inv_t[tmp[fnz]]
                    for k in range(fnz, dim):
                        tmp[k] = mul_t[sc, tmp[k]]
                enc = 0
                for k in range(dim):
                    enc = enc * q + tmp[k]
                l = g2l[enc2idx[enc]]
                if l >= 0:
                    blockers[l] += 1
                    contrib[u, l] += 1
                    contrib[v, l] += 1
        chosen_flag[v] = 1
        chosen[nch] = v
        nch += 1
    # swap rounds: drop one chosen vertex when that frees two additions
    rounds = 0
    improved = True
    while improved and rounds < max_rounds:
        improved = False
        rounds += 1
        for ci in range(nch):
            u = chosen[ci]
            nfree = 0
            for v in range(s):
                if chosen_flag[v] == 0 and blockers[v] > 0 and blockers[v] == contrib[u, v]:
                    free_buf[nfree] = v
                    nfree += 1
            if nfree < 2:
                continue
            # simulate removal of u and greedy insertion of freed vertices
            nadded = 0
            for fi in range(nfree):
                f = free_buf[fi]
                ok = True
                for ai in range(nadded):
                    if not ok:
                        break
                    g = added_buf[ai]
                    for lam in range(1, q):
                        fnz = -1
                        for k in range(dim):
                            val = add_t[spts[g, k], mul_t[lam, spts[f, k]]]
                            tmp[k] = val
                            if fnz < 0 and val != 0:
                                fnz = k
                        if tmp[fnz] != 1:
                            sc = inv_t[tmp[fnz]]
                            for k in range(fnz, dim):
                                tmp[k] = mul_t[sc, tmp[k]]
                        enc = 0
                        for k in range(dim):
                            enc = enc * q + tmp[k]
                        l = g2l[enc2idx[enc]]
                        if l >= 0 and (
                            (chosen_flag[l] == 1 and l != u) or added_flag[l] == 1
                        ):
                            ok = False
                            break
                if ok:
                    added_buf[nadded] = f
                    added_flag[f] = 1
                    nadded += 1
            for ai in range(nadded):
                added_flag[added_buf[ai]] = 0
            if nadded < 2:
                continue
            # commit: remove u, add all of added_buf, rebuild bookkeeping
            chosen_flag[u] = 0
            for ai in range(nadded):
                chosen_flag[added_buf[ai]] = 1
            nch = 0
            for v in range(s):
                if chosen_flag[v] == 1:
                    chosen[nch] = v
                    nch += 1
            for v in range(s):
                blockers[v] = 0
            for a in range(s):
                for b in range(s):
                    contrib[a, b] = 0
            for ci2 in range(nch):
                for cj2 in range(ci2 + 1, nch):
                    a = chosen[ci2]
                    b = chosen[cj2]
                    for lam in range(1, q):
                        fnz = -1
                        for k in range(dim):
                            val = add_t[spts[a, k], mul_t[lam, spts[b, k]]]
                            tmp[k] = val
                            if fnz < 0 and val != 0:
                                fnz = k
                        if tmp[fnz] != 1:
                            sc = inv_t[tmp[fnz]]
                            for k in range(fnz, dim):
                                tmp[k] = mul_t[sc, tmp[k]]
                        enc = 0
                        for k in range(dim):
                            enc = enc * q + tmp[k]
                        l = g2l[enc2idx[enc]]
                        if l >= 0:
                            blockers[l] += 1
                            contrib[a, l] += 1
                            contrib[b, l] += 1
            improved = True
            break
    return nch, chosen_flag
