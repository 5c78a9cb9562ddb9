"""Hot-loop kernels with a compiled core and a pure-NumPy fallback.

The compiled extension (``clnode._kernels._csr``) is built from Cython at
install time. If it is missing, or ``CLNODE_PURE_PYTHON`` is set to a
non-empty value other than "0", the NumPy implementations are used instead.
Both backends produce identical results; ``BACKEND`` records which one is
active.
"""

import os

if os.environ.get("CLNODE_PURE_PYTHON", "0") not in ("", "0"):
    from . import _fallback as _impl

    BACKEND = "python"
else:
    try:
        from . import _csr as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _fallback as _impl

        BACKEND = "python"

csr_dense_matmul = _impl.csr_dense_matmul
neighbor_label_counts = _impl.neighbor_label_counts

__all__ = ["BACKEND", "csr_dense_matmul", "neighbor_label_counts"]
