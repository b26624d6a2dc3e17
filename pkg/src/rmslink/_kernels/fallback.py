"""Pure-numpy implementations of the hot-loop kernels.

Same contracts as the compiled versions in _core.pyx; selected at import
time when the extension is unavailable or RMSLINK_PURE=1 is set.
All channel products use plain transposes (f^T c), never conjugation.
"""

from __future__ import annotations

import numpy as np

BACKEND = "pure"

_LN2 = float(np.log(2.0))


def cross_gains(channels: np.ndarray, beamformers: np.ndarray) -> np.ndarray:
    """G[k, j] = |h_k^T w_j|^2 for rows h_k of `channels`, columns w_j."""
    z = channels @ beamformers
    return (z.real * z.real + z.imag * z.imag)


def dl_sum_rate_from_gains(gains: np.ndarray, powers: np.ndarray, noise_power: float) -> float:
    """Sum of log2(1 + SINR_k) from a precomputed K x K cross-gain table."""
    weighted = gains * powers[None, :]
    total = weighted.sum(axis=1)
    signal = np.diagonal(weighted)
    interference = total - signal
    return float(np.sum(np.log2(1.0 + signal / (interference + noise_power))))


def dl_sum_rate(channels: np.ndarray, beamformers: np.ndarray, powers: np.ndarray,
                noise_power: float) -> float:
    """Fused evaluation: cross gains then sum rate."""
    return dl_sum_rate_from_gains(cross_gains(channels, beamformers), powers, noise_power)


def ul_gains(cascades: np.ndarray, coefficient: np.ndarray) -> np.ndarray:
    """Per-user end-to-end power gains |f^T c_k|^2."""
    z = cascades @ coefficient
    return z.real * z.real + z.imag * z.imag


def ul_objective(cascades: np.ndarray, coefficient: np.ndarray, users: np.ndarray,
                 powers: np.ndarray, noise_power: float) -> float:
    """Sum rate over active (user, power) pairs at the current coefficient."""
    gains = ul_gains(cascades, coefficient)
    return float(np.sum(np.log2(1.0 + powers * gains[users] / noise_power)))
