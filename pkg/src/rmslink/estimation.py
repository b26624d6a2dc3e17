"""Pilot-based least-squares estimation of the cascaded channel, plus
elementwise separation using the known feed-side link.

The surface cycles through M transmissive patterns (rows of a DFT matrix:
unit modulus, hence realizable, and perfectly conditioned) while the user
sends pilots; slot t receives y_t = sqrt(P_p) f_t^T c + n_t.  Inverting the
pattern matrix recovers the cascade; dividing by the feed link g (known by
calculation or measurement) recovers the user-side channel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import NearFieldChannel
from .errors import EstimationError


@dataclass(frozen=True)
class PilotSchedule:
    """Pattern matrix (row t = coefficient vector in slot t) and pilot power."""

    patterns: np.ndarray  # (M, M) complex, entries with |.| <= 1
    pilot_power: float  # watts

    def __post_init__(self):
        f = np.asarray(self.patterns, dtype=complex)
        if f.ndim != 2 or f.shape[0] != f.shape[1]:
            raise EstimationError("pattern matrix must be square (one slot per element)")
        if np.any(np.abs(f) > 1.0 + 1e-9):
            raise EstimationError("pattern entries must have modulus <= 1")
        if self.pilot_power <= 0.0:
            raise EstimationError(f"pilot power must be positive, got {self.pilot_power}")

    @property
    def num_slots(self) -> int:
        return self.patterns.shape[0]

    @classmethod
    def dft(cls, num_elements: int, pilot_power: float = 1.0) -> "PilotSchedule":
        """Default unit-modulus schedule: F[t, m] = exp(-2j pi t m / M)."""
        t = np.arange(num_elements)
        f = np.exp(-2j * np.pi * np.outer(t, t) / num_elements)
        return cls(patterns=f, pilot_power=pilot_power)


@dataclass(frozen=True)
class CascadedEstimate:
    vector: np.ndarray  # (M,) complex estimate of one user's cascade
    nmse: float | None = None  # filled by harness code when truth is known


def simulate_pilot_rx(cascade: np.ndarray, schedule: PilotSchedule, noise_power: float,
                      rng: np.random.Generator) -> np.ndarray:
    """Received pilot vector y = sqrt(P_p) F c + n, n ~ CSCG(0, noise_power)."""
    cascade = np.asarray(cascade, dtype=complex)
    if cascade.shape[0] != schedule.num_slots:
        raise EstimationError("cascade length does not match the pilot schedule")
    clean = np.sqrt(schedule.pilot_power) * (schedule.patterns @ cascade)
    noise = np.sqrt(noise_power / 2.0) * (
        rng.standard_normal(schedule.num_slots) + 1j * rng.standard_normal(schedule.num_slots))
    return clean + noise


def ls_cascaded_estimate(received: np.ndarray, schedule: PilotSchedule) -> CascadedEstimate:
    """Least-squares inversion c_hat = F^{-1} y / sqrt(P_p)."""
    received = np.asarray(received, dtype=complex)
    f = schedule.patterns
    # critically determined system: solve instead of forming the inverse
    try:
        estimate = np.linalg.solve(f, received) / np.sqrt(schedule.pilot_power)
    except np.linalg.LinAlgError as exc:
        raise EstimationError("pilot pattern matrix is singular") from exc
    cond = np.linalg.cond(f)
    if not np.isfinite(cond) or cond > 1e12:
        raise EstimationError("pilot pattern matrix is singular or near-singular")
    return CascadedEstimate(vector=estimate)


def separate_channels(estimate: CascadedEstimate, near: NearFieldChannel) -> np.ndarray:
    """Elementwise division by the known feed link: h_hat_m = c_hat_m / g_m.

    The result estimates sqrt(path_loss) * h (path loss is not split out)."""
    g = near.vector
    if np.any(g == 0):
        raise EstimationError("feed link has a zero element; cascade is not separable")
    if estimate.vector.shape != g.shape:
        raise EstimationError("estimate and feed link dimensions disagree")
    return estimate.vector / g


def nmse(estimate: np.ndarray, truth: np.ndarray) -> float:
    """Normalized mean-squared error ||est - truth||^2 / ||truth||^2."""
    truth = np.asarray(truth)
    denom = float(np.vdot(truth, truth).real)
    if denom == 0.0:
        raise EstimationError("NMSE undefined for an all-zero reference")
    err = np.asarray(estimate) - truth
    return float(np.vdot(err, err).real) / denom
