"""Order-statistic tree backend selection.

The compiled kernel is preferred when it imported cleanly; set
``NECKSPLIT_PURE=1`` to force the pure-Python implementation.  Both expose
the same API and produce identical tree shapes, so results do not depend on
which backend is active.
"""

from __future__ import annotations

import os

from ._ordertree import OrderStatTree as PyOrderStatTree

CyOrderStatTree = None
if os.environ.get("NECKSPLIT_PURE") != "1":
    try:
        from ._ordertree_cy import OrderStatTree as CyOrderStatTree  # type: ignore
    except ImportError:
        CyOrderStatTree = None

if CyOrderStatTree is not None:
    OrderStatTree = CyOrderStatTree
    BACKEND = "cython"
else:
    OrderStatTree = PyOrderStatTree
    BACKEND = "python"


def available_backends() -> dict[str, type]:
    out: dict[str, type] = {"python": PyOrderStatTree}
    if CyOrderStatTree is not None:
        out["cython"] = CyOrderStatTree
    return out
