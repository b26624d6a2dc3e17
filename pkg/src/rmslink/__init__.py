"""Link-level simulator and resource-allocation optimizer for transmissive
reconfigurable-metasurface multi-antenna systems.

Subpackages cover system geometry, Rician/near-field channel models,
time-sequence (0/pi gating) modulation, pilot-based channel estimation,
downlink SDMA and uplink OFDMA optimizers, and a seeded Monte Carlo sweep
harness.  Hot kernels run through a compiled extension when available; set
RMSLINK_PURE=1 to force the pure-numpy fallback.
"""

from ._kernels import BACKEND
from .system import (FieldRegion, SystemConfig, TransmissiveCoefficient, UpaGeometry,
                     classify_field, rayleigh_distance, upa_positions)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "FieldRegion",
    "SystemConfig",
    "TransmissiveCoefficient",
    "UpaGeometry",
    "classify_field",
    "rayleigh_distance",
    "upa_positions",
    "__version__",
]
