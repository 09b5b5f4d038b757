"""Folding backend selection.

The compiled kernel is used when it was built; ``INVMON_PURE_PYTHON=1``
forces the pure-Python fallback.
"""

import os

from . import _fold_py

BACKEND = "python"
_py_fold_edges = _fold_py.fold_edges
fold_edges = _py_fold_edges
_c_fold_edges = None

if os.environ.get("INVMON_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._fold_c import fold_edges as _c_fold_edges
    except ImportError:  # extension not built
        _c_fold_edges = None
    else:
        fold_edges = _c_fold_edges
        BACKEND = "cython"


def available_backends():
    out = {"python": _py_fold_edges}
    if _c_fold_edges is not None:
        out["cython"] = _c_fold_edges
    return out
