"""Selects the tag-scanning kernel backend.

The compiled extension (built from ``_speedups.pyx``) is preferred; the
pure-Python module is the fallback when the build was skipped or failed.
Set ``SLUAUG_PURE_PYTHON=1`` to force the fallback, e.g. when comparing
the two with ``benchmarks/bench_kernels.py``.
"""

import os

from . import _kernels_py

if os.environ.get("SLUAUG_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND = "c" if _impl is not _kernels_py else "python"

MALFORMED = _kernels_py.MALFORMED
ORPHAN_I = _kernels_py.ORPHAN_I

first_violation = _impl.first_violation
span_triples = _impl.span_triples
repair_prefixes = _impl.repair_prefixes
