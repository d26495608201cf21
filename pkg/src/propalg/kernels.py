"""Kernel dispatch: numba when available, pure numpy otherwise.

Set ``PROPALG_NO_JIT=1`` to force the numpy path. ``PROPALG_THREADS`` sets
the default thread count of the parallel numba kernels.
"""
import os

from . import _kernels_np as numpy_impl

_disabled = os.environ.get("PROPALG_NO_JIT", "").strip().lower() in ("1", "true", "yes", "on")

jit_impl = None
if not _disabled:
    try:
        import warnings

        from numba.core.errors import NumbaWarning

        # the TBB layer is optional; numba falls back to another threading layer
        warnings.filterwarnings("ignore", message="The TBB threading layer", category=NumbaWarning)
        from . import _kernels_nb as jit_impl
    except ImportError:  # numba missing
        jit_impl = None

BACKEND = "numba" if jit_impl is not None else "numpy"
_active = jit_impl if jit_impl is not None else numpy_impl

first_chain_violation = _active.first_chain_violation
first_saturation_violation = _active.first_saturation_violation
witness_tensor = _active.witness_tensor
pullback = _active.pullback


def set_threads(n):
    """Set the worker count for parallel kernels (no-op on the numpy path)."""
    if jit_impl is None or n is None:
        return
    import numba
    numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))


if os.environ.get("PROPALG_THREADS"):
    set_threads(os.environ["PROPALG_THREADS"])
