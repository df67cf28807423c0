"""Hot numerical kernels with a compiled core and a NumPy fallback.

The compiled Cython extension is preferred when importable; otherwise the
pure-NumPy reference implementation is used.  Set ``PHOTONCAT_KERNELS`` to
``compiled`` or ``python`` to force a backend (``compiled`` raises if the
extension is missing).  ``benchmarks/bench_kernels.py`` compares the two.
"""

import os

from . import reference

_requested = os.environ.get("PHOTONCAT_KERNELS", "auto").strip().lower()

if _requested in ("auto", "", "compiled"):
    try:
        from . import _fastcore as _impl

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise ImportError(
                "PHOTONCAT_KERNELS=compiled but the photoncat.kernels._fastcore "
                "extension is not built; reinstall the package or use "
                "PHOTONCAT_KERNELS=python"
            )
        _impl = reference
        BACKEND = "python"
elif _requested == "python":
    _impl = reference
    BACKEND = "python"
else:
    raise ValueError(f"unknown PHOTONCAT_KERNELS value {_requested!r}")

wigner_points = _impl.wigner_points
hermite_functions = _impl.hermite_functions

__all__ = ["BACKEND", "wigner_points", "hermite_functions", "reference"]
