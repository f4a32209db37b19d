"""Numba kernels for the partition searches.

Both kernels take ``A = |R|`` as a C-contiguous float64 matrix and use
0-based antenna indices.  Group 0 is the unassigned pool.
"""
import numpy as np
from numba import njit


@njit(cache=True)
def _f(total, size, r, n_sel, n_rf):
    if size == 0 or (r == 0 and n_sel == n_rf):
        return 0.0
    return total / size


@njit(cache=True)
def _refresh(A, owner, contrib, blocksum, size, r):
    n = A.shape[0]
    for a in range(n):
        contrib[a, r] = 0.0
    cnt = 0
    for m in range(n):
        if owner[m] == r:
            cnt += 1
            for a in range(n):
                contrib[a, r] += A[a, m]
    s = 0.0
    for m in range(n):
        if owner[m] == r:
            s += contrib[m, r]
    blocksum[r] = s
    size[r] = cnt


@njit(cache=True)
def greedy_sweep(A, pair_i, pair_j, n_rf):
    n = A.shape[0]
    owner = np.zeros(n, dtype=np.int64)
    contrib = np.zeros((n, n_rf + 1))
    blocksum = np.zeros(n_rf + 1)
    size = np.zeros(n_rf + 1, dtype=np.int64)
    _refresh(A, owner, contrib, blocksum, size, 0)
    n_sel = 0

    for q in range(pair_i.shape[0]):
        i = pair_i[q]
        j = pair_j[q]
        m = owner[i]
        l = owner[j]
        if m == 0 and l == 0:
            if n_sel < n_rf:
                n_sel += 1
                owner[i] = n_sel
                owner[j] = n_sel
                _refresh(A, owner, contrib, blocksum, size, 0)
                _refresh(A, owner, contrib, blocksum, size, n_sel)
            else:
                best_r = 1
                best_gain = -np.inf
                for r in range(1, n_rf + 1):
                    grown = (blocksum[r] + 2.0 * contrib[i, r] + 2.0 * contrib[j, r]
                             + A[i, i] + A[j, j] + 2.0 * A[i, j])
                    gain = (_f(grown, size[r] + 2, r, n_sel, n_rf)
                            - _f(blocksum[r], size[r], r, n_sel, n_rf))
                    if gain > best_gain:
                        best_gain = gain
                        best_r = r
                owner[i] = best_r
                owner[j] = best_r
                _refresh(A, owner, contrib, blocksum, size, 0)
                _refresh(A, owner, contrib, blocksum, size, best_r)
        elif m != l:
            mu_cur = (_f(blocksum[m], size[m], m, n_sel, n_rf)
                      + _f(blocksum[l], size[l], l, n_sel, n_rf))
            m_plus_j = blocksum[m] + 2.0 * contrib[j, m] + A[j, j]
            l_minus_j = blocksum[l] - 2.0 * contrib[j, l] + A[j, j]
            mu_j = (_f(m_plus_j, size[m] + 1, m, n_sel, n_rf)
                    + _f(l_minus_j, size[l] - 1, l, n_sel, n_rf))
            m_minus_i = blocksum[m] - 2.0 * contrib[i, m] + A[i, i]
            l_plus_i = blocksum[l] + 2.0 * contrib[i, l] + A[i, i]
            mu_i = (_f(m_minus_i, size[m] - 1, m, n_sel, n_rf)
                    + _f(l_plus_i, size[l] + 1, l, n_sel, n_rf))
            mover = -1
            src = 0
            dst = 0
            if mu_j > mu_i and mu_j > mu_cur and m != 0:
                mover, src, dst = j, l, m
            elif mu_i > mu_j and mu_i > mu_cur and l != 0:
                mover, src, dst = i, m, l
            if mover >= 0:
                allowed = True
                if src != 0 and size[src] <= 1:
                    allowed = False
                if src == 0 and n_sel < n_rf and size[0] - 1 < 2 * (n_rf - n_sel):
                    allowed = False
                if allowed:
                    owner[mover] = dst
                    _refresh(A, owner, contrib, blocksum, size, src)
                    _refresh(A, owner, contrib, blocksum, size, dst)

    for a in range(n):
        if owner[a] != 0:
            continue
        best_r = 1
        best_gain = -np.inf
        for r in range(1, n_rf + 1):
            grown = blocksum[r] + 2.0 * contrib[a, r] + A[a, a]
            gain = (_f(grown, size[r] + 1, r, n_sel, n_rf)
                    - _f(blocksum[r], size[r], r, n_sel, n_rf))
            if gain > best_gain:
                best_gain = gain
                best_r = r
        owner[a] = best_r
        _refresh(A, owner, contrib, blocksum, size, 0)
        _refresh(A, owner, contrib, blocksum, size, best_r)
    return owner


@njit(cache=True)
def exhaustive_approx(A, k, cap):
    """Best restricted growth string under the summed l1 surrogate.

    ``cap`` bounds every block size (pass ``n`` for no bound).  Returns the
    labels (0-based blocks), the best score and the number of candidates.
    """
    n = A.shape[0]
    labels = np.zeros(n, dtype=np.int64)
    best_labels = np.zeros(n, dtype=np.int64)
    best = -np.inf
    count = 0
    if k < 1 or k > n:
        return best_labels, best, count
    bs = np.zeros((n + 1, k))
    sz = np.zeros((n + 1, k), dtype=np.int64)
    mx = np.zeros(n + 1, dtype=np.int64)
    choice = np.zeros(n + 1, dtype=np.int64)
    bs[1, 0] = A[0, 0]
    sz[1, 0] = 1
    if n == 1:
        return best_labels, A[0, 0], 1
    t = 1
    choice[1] = -1
    while t >= 1:
        choice[t] += 1
        c = choice[t]
        top = mx[t] + 1
        if top > k - 1:
            top = k - 1
        if c > top:
            t -= 1
            continue
        used = mx[t] + 1
        if c + 1 > used:
            used = c + 1
        if k - used > n - t - 1:
            continue
        if sz[t, c] + 1 > cap:
            continue
        for r in range(k):
            bs[t + 1, r] = bs[t, r]
            sz[t + 1, r] = sz[t, r]
        add = A[t, t]
        for u in range(t):
            if labels[u] == c:
                add += 2.0 * A[t, u]
        bs[t + 1, c] += add
        sz[t + 1, c] += 1
        labels[t] = c
        mx[t + 1] = mx[t] if mx[t] > c else c
        if t == n - 1:
            score = 0.0
            for r in range(k):
                score += bs[n, r] / sz[n, r]
            count += 1
            if score > best:
                best = score
                for u in range(n):
                    best_labels[u] = labels[u]
        else:
            t += 1
            choice[t] = -1
    return best_labels, best, count
