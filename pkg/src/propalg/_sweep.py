"""Chunked lexicographic sweeps over products of element-code arrays."""
import math

import numpy as np

CHUNK = 1 << 21


def first_violations(axes, fn, chunk=CHUNK):
    """Sweep the product of ``axes`` in lexicographic order.

    ``fn`` receives open-mesh arrays (``np.ix_`` style) over a slab of the
    first axis and returns a list of violation masks in priority order. The
    result is ``(k, index, swept)`` where ``k`` is the highest-priority mask
    with any violation and ``index`` its first violation, or ``(None, None,
    swept)``. A violation of mask 0 ends the sweep at once; lower-priority
    masks only count if mask 0 never fires anywhere.
    """
    axes = [np.asarray(x) for x in axes]
    sizes = [len(x) for x in axes]
    per = math.prod(sizes[1:])
    step = max(1, chunk // max(per, 1))
    swept = 0
    fallback = None
    for s in range(0, sizes[0], step):
        sub = [axes[0][s:s + step]] + axes[1:]
        shape = tuple(len(x) for x in sub)
        masks = fn(*np.ix_(*sub))
        swept += math.prod(shape)
        for k, mask in enumerate(masks):
            if k > 0 and fallback is not None and fallback[0] <= k:
                break
            mask = np.broadcast_to(mask, shape)
            if mask.any():
                idx = list(np.unravel_index(int(np.argmax(mask)), shape))
                idx[0] += s
                if k == 0:
                    return 0, tuple(int(i) for i in idx), swept
                if fallback is None or k < fallback[0]:
                    fallback = (k, tuple(int(i) for i in idx))
                break
    if fallback is not None:
        return fallback[0], fallback[1], swept
    return None, None, swept


def first_violation(axes, fn, chunk=CHUNK):
    """Single-mask form of :func:`first_violations`: ``(index or None, swept)``."""
    k, idx, swept = first_violations(axes, lambda *g: [fn(*g)], chunk)
    return idx, swept
