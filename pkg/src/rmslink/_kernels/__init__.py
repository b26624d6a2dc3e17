"""Hot-loop kernels with import-time backend selection.

Prefers the compiled Cython extension; falls back to pure numpy when the
extension is missing or RMSLINK_PURE=1 is set.  `BACKEND` names the active
implementation ("compiled" or "pure").
"""

import os

if os.environ.get("RMSLINK_PURE", "") == "1":
    from .fallback import (BACKEND, cross_gains, dl_sum_rate,  # noqa: F401
                           dl_sum_rate_from_gains, ul_gains, ul_objective)
else:
    try:
        from ._core import (BACKEND, cross_gains, dl_sum_rate,  # noqa: F401
                            dl_sum_rate_from_gains, ul_gains, ul_objective)
    except ImportError:
        from .fallback import (BACKEND, cross_gains, dl_sum_rate,  # noqa: F401
                               dl_sum_rate_from_gains, ul_gains, ul_objective)

__all__ = ["BACKEND", "cross_gains", "dl_sum_rate", "dl_sum_rate_from_gains",
           "ul_gains", "ul_objective"]
