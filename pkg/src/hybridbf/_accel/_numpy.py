"""Pure-numpy counterparts of the numba kernels.

`greedy_sweep` performs the same floating-point operations in the same
order as the compiled kernel, so both return identical partitions.
`exhaustive_approx` scores candidates in vectorised chunks; its scores agree
with the compiled kernel to rounding.
"""
import numpy as np


def _f(total, size, r, n_sel, n_rf):
    if size == 0 or (r == 0 and n_sel == n_rf):
        return 0.0
    return total / size


def _refresh(A, owner, contrib, blocksum, size, r):
    members = np.flatnonzero(owner == r)
    col = np.zeros(A.shape[0])
    for m in members:
        col += A[:, m]
    contrib[:, r] = col
    s = 0.0
    for m in members:
        s += contrib[m, r]
    blocksum[r] = s
    size[r] = members.size


def greedy_sweep(A, pair_i, pair_j, n_rf):
    n = A.shape[0]
    owner = np.zeros(n, dtype=np.int64)
    contrib = np.zeros((n, n_rf + 1))
    blocksum = np.zeros(n_rf + 1)
    size = np.zeros(n_rf + 1, dtype=np.int64)
    _refresh(A, owner, contrib, blocksum, size, 0)
    n_sel = 0

    for i, j in zip(pair_i.tolist(), pair_j.tolist()):
        m, l = int(owner[i]), int(owner[j])
        if m == 0 and l == 0:
            if n_sel < n_rf:
                n_sel += 1
                owner[[i, j]] = n_sel
                _refresh(A, owner, contrib, blocksum, size, 0)
                _refresh(A, owner, contrib, blocksum, size, n_sel)
            else:
                grown = (blocksum[1:] + 2.0 * contrib[i, 1:] + 2.0 * contrib[j, 1:]
                         + A[i, i] + A[j, j] + 2.0 * A[i, j])
                best_r, best_gain = 1, -np.inf
                for r in range(1, n_rf + 1):
                    gain = (_f(grown[r - 1], size[r] + 2, r, n_sel, n_rf)
                            - _f(blocksum[r], size[r], r, n_sel, n_rf))
                    if gain > best_gain:
                        best_r, best_gain = r, gain
                owner[[i, j]] = best_r
                _refresh(A, owner, contrib, blocksum, size, 0)
                _refresh(A, owner, contrib, blocksum, size, best_r)
        elif m != l:
            mu_cur = (_f(blocksum[m], size[m], m, n_sel, n_rf)
                      + _f(blocksum[l], size[l], l, n_sel, n_rf))
            mu_j = (_f(blocksum[m] + 2.0 * contrib[j, m] + A[j, j], size[m] + 1, m, n_sel, n_rf)
                    + _f(blocksum[l] - 2.0 * contrib[j, l] + A[j, j], size[l] - 1, l, n_sel, n_rf))
            mu_i = (_f(blocksum[m] - 2.0 * contrib[i, m] + A[i, i], size[m] - 1, m, n_sel, n_rf)
                    + _f(blocksum[l] + 2.0 * contrib[i, l] + A[i, i], size[l] + 1, l, n_sel, n_rf))
            move = None
            if mu_j > mu_i and mu_j > mu_cur and m != 0:
                move = (j, l, m)
            elif mu_i > mu_j and mu_i > mu_cur and l != 0:
                move = (i, m, l)
            if move is not None:
                mover, src, dst = move
                if src != 0 and size[src] <= 1:
                    continue
                if src == 0 and n_sel < n_rf and size[0] - 1 < 2 * (n_rf - n_sel):
                    continue
                owner[mover] = dst
                _refresh(A, owner, contrib, blocksum, size, src)
                _refresh(A, owner, contrib, blocksum, size, dst)

    for a in np.flatnonzero(owner == 0).tolist():
        best_r, best_gain = 1, -np.inf
        for r in range(1, n_rf + 1):
            grown = blocksum[r] + 2.0 * contrib[a, r] + A[a, a]
            gain = (_f(grown, size[r] + 1, r, n_sel, n_rf)
                    - _f(blocksum[r], size[r], r, n_sel, n_rf))
            if gain > best_gain:
                best_r, best_gain = r, gain
        owner[a] = best_r
        _refresh(A, owner, contrib, blocksum, size, 0)
        _refresh(A, owner, contrib, blocksum, size, best_r)
    return owner


def restricted_growth_strings(n, k, cap=None):
    """Yield every labelling of ``n`` items into exactly ``k`` non-empty blocks.

    Labels are restricted growth strings (``a[0] = 0``, ``a[t] <= max(a[:t]) + 1``)
    in lexicographic order.  ``cap`` bounds the block sizes.
    """
    if k < 1 or k > n:
        return
    cap = n if cap is None else cap
    labels = [0] * n
    sizes = [0] * k
    sizes[0] = 1

    def rec(t, mx):
        if t == n:
            yield tuple(labels)
            return
        for c in range(min(mx + 1, k - 1) + 1):
            used = max(mx, c) + 1
            if k - used > n - t - 1 or sizes[c] + 1 > cap:
                continue
            labels[t] = c
            sizes[c] += 1
            yield from rec(t + 1, max(mx, c))
            sizes[c] -= 1

    if n == 1:
        yield (0,)
        return
    yield from rec(1, 0)


def exhaustive_approx(A, k, cap, chunk=4096):
    n = A.shape[0]
    best_labels = np.zeros(n, dtype=np.int64)
    best, count = -np.inf, 0
    gen = restricted_growth_strings(n, k, cap)
    while True:
        block = np.array([lab for _, lab in zip(range(chunk), gen)], dtype=np.int64)
        if block.size == 0:
            break
        onehot = (block[:, :, None] == np.arange(k)[None, None, :]).astype(float)
        sums = np.einsum("cik,ij,cjk->ck", onehot, A, onehot, optimize=True)
        scores = (sums / onehot.sum(axis=1)).sum(axis=1)
        c = int(np.argmax(scores))
        if scores[c] > best:
            best, best_labels = float(scores[c]), block[c].copy()
        count += block.shape[0]
    return best_labels, best, count
