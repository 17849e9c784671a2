"""Backend selection for the search kernel.

The compiled extension is used when it imports cleanly; setting
``FACTOR_FORGE_PURE=1`` forces the pure-Python kernel.
"""
from __future__ import annotations

import os

from . import _search_py

BACKEND = "python"
_search = _search_py.search

if os.environ.get("FACTOR_FORGE_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _search_ext
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        _search = _search_ext.search


def search(n, mult, classes, groups, node_limit):
    """Run the active kernel; see ``_search_py`` for the argument contract."""
    return _search(n, list(mult), classes, list(groups), int(node_limit))


def search_with(backend: str, n, mult, classes, groups, node_limit):
    if backend == "python":
        return _search_py.search(n, list(mult), classes, list(groups), int(node_limit))
    from . import _search_ext

    return _search_ext.search(n, list(mult), classes, list(groups), int(node_limit))
