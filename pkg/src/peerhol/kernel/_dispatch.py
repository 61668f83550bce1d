"""Select the term-operation backend once, at import time.

The compiled extension is preferred when present; PEERHOL_PURE_KERNEL=1 forces
the pure-Python reference implementation (which the tests and the benchmark
also reach directly as kernel._pure).
"""

import os

from . import _pure

if os.environ.get("PEERHOL_PURE_KERNEL"):
    ops = _pure
    BACKEND = "python"
else:
    try:
        from . import _speedup as ops  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        ops = _pure
        BACKEND = "python"

typecheck = ops.typecheck
shift_constants = ops.shift_constants
substitute = ops.substitute
normalize = ops.normalize
equal_terms = ops.equal_terms
