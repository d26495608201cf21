"""Numba versions of the kernels in ``_kernels_np`` (same contracts)."""
import numpy as np
from numba import njit, prange


@njit(cache=True)
def _pack(T):
    """Bitsets over the last two axes: bit e*m+f of row (i, j) is T[i, j, e, f]."""
    p, q, m = T.shape[0], T.shape[1], T.shape[2]
    W = (m * m + 63) // 64
    out = np.zeros((p, q, W), np.uint64)
    for i in range(p):
        for j in range(q):
            for e in range(m):
                for f in range(m):
                    if T[i, j, e, f]:
                        k = e * m + f
                        out[i, j, k // 64] |= np.uint64(1) << np.uint64(k % 64)
    return out


@njit(cache=True)
def _lowest_bit(x):
    k = 0
    while not (x >> np.uint64(k)) & np.uint64(1):
        k += 1
    return k


@njit(cache=True, parallel=True)
def _chain(R1, R2):
    n = R1.shape[0]
    m = R1.shape[2]
    W = (m * m + 63) // 64
    nxt = _pack(R2)
    missing = _pack(~R1)
    found = np.full(n, -1, np.int64)
    for a in prange(n):
        best = -1
        for b in range(n):
            empty = True
            for w in range(W):
                if missing[a, b, w]:
                    empty = False
            if empty:
                continue
            for c in range(m):
                for d in range(m):
                    if not R1[a, b, c, d]:
                        continue
                    for w in range(W):
                        x = nxt[c, d, w] & missing[a, b, w]
                        if x:
                            best = ((b * m + c) * m + d) * m * m + w * 64 + _lowest_bit(x)
                            break
                    if best >= 0:
                        break
                if best >= 0:
                    break
            if best >= 0:
                break
        found[a] = best
    out = np.full(6, -1, np.int64)
    for a in range(n):
        k = found[a]
        if k >= 0:
            out[0] = a
            out[5] = k % m
            k //= m
            out[4] = k % m
            k //= m
            out[3] = k % m
            k //= m
            out[2] = k % m
            out[1] = k // m
            break
    return out


def first_chain_violation(R1, R2):
    return tuple(int(x) for x in _chain(R1, R2))


@njit(cache=True)
def _saturation(R, bs, bt):
    # a quadruple violates iff its block cell also holds a false entry
    n = R.shape[0]
    m = R.shape[2]
    ns = bs.max() + 1
    nt = bt.max() + 1
    has_false = np.zeros((ns, ns, nt, nt), np.bool_)
    for a in range(n):
        for b in range(n):
            for c in range(m):
                for d in range(m):
                    if not R[a, b, c, d]:
                        has_false[bs[a], bs[b], bt[c], bt[d]] = True
    out = np.full(8, -1, np.int64)
    for a in range(n):
        for b in range(n):
            for c in range(m):
                for d in range(m):
                    if not (R[a, b, c, d] and has_false[bs[a], bs[b], bt[c], bt[d]]):
                        continue
                    out[0] = a
                    out[1] = b
                    out[2] = c
                    out[3] = d
                    for a2 in range(n):
                        for b2 in range(n):
                            for c2 in range(m):
                                for d2 in range(m):
                                    if (bs[a2] == bs[a] and bs[b2] == bs[b] and bt[c2] == bt[c]
                                            and bt[d2] == bt[d] and not R[a2, b2, c2, d2]):
                                        out[4] = a2
                                        out[5] = b2
                                        out[6] = c2
                                        out[7] = d2
                                        return out
    return out


def first_saturation_violation(R, bs, bt):
    return tuple(int(x) for x in _saturation(R, bs, bt))


@njit(cache=True)
def witness_tensor(tabs_a, tabs_b):
    T, n = tabs_a.shape
    m = tabs_b.shape[1]
    R = np.zeros((n, n, m, m), np.bool_)
    for t in range(T):
        for a in range(n):
            for c in range(m):
                R[a, tabs_a[t, a], c, tabs_b[t, c]] = True
    return R


@njit(cache=True)
def pullback(RB, f):
    n = f.shape[0]
    R = np.empty((n, n, n, n), np.bool_)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    R[a, b, c, d] = RB[f[a], f[b], f[c], f[d]]
    return R
