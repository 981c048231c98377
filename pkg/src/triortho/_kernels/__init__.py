"""Kernel backend selection.

The compiled extension is optional; when it is missing we fall back to the
numpy implementation with identical semantics.  ``BACKEND`` names the module
that won.
"""

from __future__ import annotations

try:
    from ._ckernels import (  # type: ignore[attr-defined]
        BACKEND_NAME,
        masked_min_support_weight,
        min_support_weight,
        select_weight_hits,
    )
    from ._pykernels import derivative_weights, popcount64
except ImportError:
    from ._pykernels import (
        BACKEND_NAME,
        derivative_weights,
        masked_min_support_weight,
        min_support_weight,
        popcount64,
        select_weight_hits,
    )

BACKEND = BACKEND_NAME

__all__ = [
    "BACKEND",
    "derivative_weights",
    "masked_min_support_weight",
    "min_support_weight",
    "popcount64",
    "select_weight_hits",
]
