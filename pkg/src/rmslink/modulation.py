"""Time-sequence modulation: gating waveforms, harmonic coefficients, and
the bit-to-symbol maps they carry.

An element toggles between its 0-state (+1 baseband) and pi-state (-1)
once per period T; the pi-state is held on [t_on, t_on + tau) wrapped
mod T.  The Fourier coefficient of that +/-1 waveform at harmonic l is

    l = 0:   1 - 2 tau / T
    l >= 1:  -(2 / (pi l)) sin(pi l tau / T) exp(-j pi l (2 t_on + tau) / T)

so amplitude (via tau) and phase (via t_on) of any single harmonic are
independently settable.  Payload rides the first harmonic, whose reachable
amplitude is 2/pi; higher orders are computed for verification only.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ModulationError
from .system import TransmissiveCoefficient

# largest first-harmonic amplitude a gating waveform can realize
MAX_FIRST_HARMONIC = 2.0 / math.pi


@dataclass(frozen=True)
class GatingWaveform:
    """One element's control timing: pi-state start, duration, and period."""

    start_time: float  # t_on, seconds
    duration: float  # tau, seconds
    period: float = 1.0  # T, seconds

    def __post_init__(self):
        if self.period <= 0.0:
            raise ModulationError(f"period must be positive, got {self.period}")
        if not 0.0 <= self.start_time < self.period:
            raise ModulationError(f"start time must lie in [0, T), got {self.start_time}")
        if not 0.0 <= self.duration <= self.period:
            raise ModulationError(f"duration must lie in [0, T], got {self.duration}")

    def sample(self, times: np.ndarray) -> np.ndarray:
        """Baseband +/-1 waveform at the given times (wrap-around handled)."""
        t = np.mod(np.asarray(times, dtype=float) - self.start_time, self.period)
        return np.where(t < self.duration, -1.0, 1.0)


def harmonic_coefficient(waveform: GatingWaveform, order: int) -> complex:
    """Closed-form Fourier coefficient of the +/-1 gating waveform."""
    if order < 0:
        raise ModulationError(f"harmonic order must be non-negative, got {order}")
    frac = waveform.duration / waveform.period
    if order == 0:
        return complex(1.0 - 2.0 * frac)
    amp = -(2.0 / (math.pi * order)) * math.sin(math.pi * order * frac)
    phase = -math.pi * order * (2.0 * waveform.start_time / waveform.period + frac)
    return amp * cmath.exp(1j * phase)


def design_gating(target: complex, period: float = 1.0) -> GatingWaveform:
    """Invert the first-harmonic map: find (t_on, tau) whose l=1 coefficient
    equals `target`.  Requires |target| <= 2/pi."""
    mag = abs(target)
    if mag > MAX_FIRST_HARMONIC * (1.0 + 1e-12):
        raise ModulationError(
            f"first-harmonic amplitude {mag:.6g} exceeds the reachable maximum 2/pi")
    if mag == 0.0:
        return GatingWaveform(start_time=0.0, duration=0.0, period=period)
    duration = (period / math.pi) * math.asin(min(1.0, mag * math.pi / 2.0))
    # target = -(2/pi) sin(pi tau/T) e^{-j pi (2 t_on + tau)/T};  -1 = e^{j pi}
    start = ((period / math.pi) * (math.pi - cmath.phase(target)) - duration) / 2.0
    start = start % period
    return GatingWaveform(start_time=start, duration=duration, period=period)


def fft_oracle(waveform: GatingWaveform, order: int, samples: int) -> complex:
    """Numerically integrated Fourier coefficient, independent of the closed
    form: midpoint-rule quadrature of the sampled waveform.  Error is
    O(1/samples) from the two switching edges."""
    if order < 0:
        raise ModulationError(f"harmonic order must be non-negative, got {order}")
    if samples < 4 * (order + 1):
        raise ModulationError(f"need at least {4 * (order + 1)} samples for order {order}")
    if samples & (samples - 1):
        raise ModulationError(f"sample count must be a power of two, got {samples}")
    t = (np.arange(samples) + 0.5) * (waveform.period / samples)
    s = waveform.sample(t)
    basis = np.exp(-2j * math.pi * order * t / waveform.period)
    return complex(np.mean(s * basis))


def static_phase_modulate(bits: str, depth: int) -> np.ndarray:
    """Constant-envelope phase sequence from a bit string.

    depth 1 maps each bit to {0, pi}; depth 2 maps Gray-coded bit pairs
    00, 01, 11, 10 to 0, pi/2, pi, 3*pi/2.
    """
    if depth not in (1, 2):
        raise ModulationError(f"static phase depth must be 1 or 2, got {depth}")
    bits = "".join(bits.split())
    if any(b not in "01" for b in bits):
        raise ModulationError("bit string may only contain 0 and 1")
    if len(bits) % depth:
        raise ModulationError(f"bit count {len(bits)} not divisible by depth {depth}")
    if depth == 1:
        return np.array([math.pi if b == "1" else 0.0 for b in bits])
    gray = {"00": 0.0, "01": math.pi / 2, "11": math.pi, "10": 3 * math.pi / 2}
    return np.array([gray[bits[i:i + 2]] for i in range(0, len(bits), 2)])


# -- constellations ---------------------------------------------------------
#
# Points are normalized so the outermost ring sits at the reachable
# first-harmonic maximum 2/pi; interior points scale proportionally.
# Per-axis Gray map for QAM16: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3,
# first bit pair on I, second on Q.

_AXIS_GRAY = {"00": -3.0, "01": -1.0, "11": 1.0, "10": 3.0}

SCHEMES = ("bpsk", "qpsk", "qam16")


def bits_per_symbol(scheme: str) -> int:
    return {"bpsk": 1, "qpsk": 2, "qam16": 4}[_check_scheme(scheme)]


def _check_scheme(scheme: str) -> str:
    s = scheme.lower()
    if s not in SCHEMES:
        raise ModulationError(f"unknown scheme '{scheme}' (expected one of {SCHEMES})")
    return s


def constellation_points(scheme: str) -> np.ndarray:
    """The scheme's full alphabet, normalized to the 2/pi disk."""
    s = _check_scheme(scheme)
    if s == "bpsk":
        raw = np.array([1.0, -1.0], dtype=complex)
    elif s == "qpsk":
        raw = np.exp(1j * np.array([math.pi / 4, 3 * math.pi / 4,
                                    5 * math.pi / 4, 7 * math.pi / 4]))
    else:
        levels = np.array([-3.0, -1.0, 1.0, 3.0])
        raw = (levels[:, None] + 1j * levels[None, :]).ravel()
    return raw * (MAX_FIRST_HARMONIC / np.max(np.abs(raw)))


def map_bits(bits: str, scheme: str) -> np.ndarray:
    """Bit string -> normalized symbol sequence (Gray mapping throughout)."""
    s = _check_scheme(scheme)
    bits = "".join(bits.split())
    if any(b not in "01" for b in bits):
        raise ModulationError("bit string may only contain 0 and 1")
    step = bits_per_symbol(s)
    if len(bits) % step:
        raise ModulationError(f"bit count {len(bits)} not divisible by {step} for {s}")
    groups = [bits[i:i + step] for i in range(0, len(bits), step)]
    if s == "bpsk":
        points = np.array([1.0 if g == "0" else -1.0 for g in groups], dtype=complex)
        return points * MAX_FIRST_HARMONIC
    if s == "qpsk":
        phases = static_phase_modulate(bits, 2) + math.pi / 4
        return MAX_FIRST_HARMONIC * np.exp(1j * phases)
    scale = MAX_FIRST_HARMONIC / (3.0 * math.sqrt(2.0))
    return np.array([_AXIS_GRAY[g[:2]] + 1j * _AXIS_GRAY[g[2:]] for g in groups]) * scale


def compose_coefficient(beamformer: TransmissiveCoefficient, symbol: complex) -> TransmissiveCoefficient:
    """Multiply the beamforming pattern by a modulation symbol (|symbol| <= 1)."""
    if abs(symbol) > 1.0 + 1e-12:
        raise ModulationError(f"symbol magnitude {abs(symbol):.6g} exceeds 1")
    return TransmissiveCoefficient.from_values(beamformer.values * symbol)


def gating_schedule(symbols: np.ndarray, beamformer: TransmissiveCoefficient | None = None,
                    num_elements: int = 1, period: float = 1.0):
    """Per-element, per-symbol gating assignments realizing beamformer*symbol
    on the first harmonic.

    Returns a list of rows (element, symbol_index, t_on/T, tau/T, target,
    realized).  With no beamformer every element carries the bare symbol.
    """
    if beamformer is None:
        beamformer = TransmissiveCoefficient.ones(num_elements)
    weights = beamformer.values
    rows = []
    for si, sym in enumerate(np.asarray(symbols, dtype=complex)):
        for el, w in enumerate(weights):
            target = w * sym
            wf = design_gating(target, period=period)
            realized = harmonic_coefficient(wf, 1)
            rows.append((el, si, wf.start_time / period, wf.duration / period,
                         target, realized))
    return rows


SCHEDULE_HEADER = "element,symbol_index,t_on_frac,tau_frac,target_re,target_im,realized_re,realized_im"


def write_schedule(path, rows, scheme: str) -> None:
    """Plain delimited text: one comment header, then one CSV row per entry."""
    with open(path, "w") as fh:
        fh.write(f"# rmslink gating schedule, scheme={scheme}\n")
        fh.write(SCHEDULE_HEADER + "\n")
        for el, si, ton, tau, target, realized in rows:
            fh.write(f"{el},{si},{ton:.17g},{tau:.17g},"
                     f"{target.real:.17g},{target.imag:.17g},"
                     f"{realized.real:.17g},{realized.imag:.17g}\n")
