"""Hot-loop kernels with a compiled core and a numpy fallback.

The compiled extension is optional; selection happens once at import. Set
MAPBAYES_PURE_PYTHON=1 to force the fallback (used by the benchmark and the
parity tests).
"""

from __future__ import annotations

import logging
import os

from . import _fallback

log = logging.getLogger(__name__)

BACKEND = "python"
_impl = _fallback

if os.environ.get("MAPBAYES_PURE_PYTHON", "") != "1":
    try:
        from . import _core as _compiled

        _impl = _compiled
        BACKEND = "compiled"
    except ImportError:
        log.info("compiled kernels unavailable; using numpy fallback")

confusion_counts = _impl.confusion_counts
epanechnikov_density = _impl.epanechnikov_density

__all__ = ["BACKEND", "confusion_counts", "epanechnikov_density"]
