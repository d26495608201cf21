"""Pure-numpy reference versions of the hot quantifier sweeps.

Every function here has a numba twin in ``_kernels_nb`` with identical
semantics: witnesses are the first violation in lexicographic order.
"""
import numpy as np

NONE6 = (-1,) * 6
NONE8 = (-1,) * 8


def first_chain_violation(R1, R2):
    """First (a,b,c,d,e,f) with R1[a,b,c,d] and R2[c,d,e,f] but not R1[a,b,e,f]."""
    n = R1.shape[0]
    for a in range(n):
        Ra = R1[a]
        viol = Ra[:, :, :, None, None] & R2[None] & ~Ra[:, None, None, :, :]
        if viol.any():
            rest = np.unravel_index(int(np.argmax(viol)), viol.shape)
            return (a,) + tuple(int(i) for i in rest)
    return NONE6


def first_saturation_violation(R, bs, bt):
    """First (a,b,c,d,a',b',c',d') with blockwise-equal primes, R true then false.

    ``bs`` and ``bt`` give the block index of every source/target element.
    Implemented cell-wise: a quadruple is violating iff its block cell holds
    both true and false entries.
    """
    n, m = R.shape[0], R.shape[2]
    ns, nt = int(bs.max()) + 1, int(bt.max()) + 1
    cell = np.ix_(bs, bs, bt, bt)
    shape = (ns, ns, nt, nt)
    has_false = np.zeros(shape, dtype=bool)
    idx = tuple(np.broadcast_to(c, R.shape) for c in cell)
    np.logical_or.at(has_false, idx, ~R)
    bad = R & has_false[cell]
    if not bad.any():
        return NONE8
    q = np.unravel_index(int(np.argmax(bad)), R.shape)
    same = ((bs == bs[q[0]])[:, None, None, None]
            & (bs == bs[q[1]])[None, :, None, None]
            & (bt == bt[q[2]])[None, None, :, None]
            & (bt == bt[q[3]])[None, None, None, :])
    q2 = np.unravel_index(int(np.argmax(same & ~R)), R.shape)
    return tuple(int(i) for i in q) + tuple(int(i) for i in q2)


def witness_tensor(tabs_a, tabs_b):
    """Dense relation with R[a, t(a), c, t(c)] for each row pair of term tables."""
    T, n = tabs_a.shape
    m = tabs_b.shape[1]
    R = np.zeros((n, n, m, m), dtype=bool)
    ar = np.arange(n)[:, None]
    cr = np.arange(m)[None, :]
    for t in range(T):
        R[ar, tabs_a[t][:, None], cr, tabs_b[t][None, :]] = True
    return R


def pullback(RB, f):
    """R[a,b,c,d] = RB[f(a),f(b),f(c),f(d)]."""
    return RB[np.ix_(f, f, f, f)]
