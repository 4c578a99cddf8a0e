"""Hot numeric kernels, each with a numba-compiled and a pure-numpy variant.

Every kernel module exposes matching ``*_numpy`` and ``*_numba`` callables
plus a module-level default bound at import time. Backend selection:

    EXNET_NUMBA=0   force the numpy path
    EXNET_NUMBA=1   require numba (raises if it cannot be imported)
    unset / auto    use numba when importable, numpy otherwise

Chains and layouts are bit-reproducible for a fixed backend; the two
backends agree to floating-point reassociation error (see the parity
tests and benchmarks/bench_kernels.py).
"""

import os


def _resolve_backend() -> str:
    flag = os.environ.get("EXNET_NUMBA", "").strip().lower()
    if flag in ("0", "false", "off", "no", "numpy"):
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if flag in ("1", "true", "on", "yes", "numba"):
            raise ImportError(
                "EXNET_NUMBA requested the numba backend but numba is not importable"
            )
        return "numpy"
    return "numba"


BACKEND = _resolve_backend()
USE_NUMBA = BACKEND == "numba"
