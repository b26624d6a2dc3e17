"""System-level configuration and geometry.

Covers the square uniform planar array (UPA), the per-element transmissive
coefficient vector, and the far/near field split at the Rayleigh distance
2*D^2/lambda.  All types are immutable after construction so realizations
can be shared freely across Monte Carlo workers.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

TWO_PI = 2.0 * math.pi


class FieldRegion(enum.Enum):
    FAR = "far"
    NEAR = "near"


def rayleigh_distance(aperture: float, wavelength: float) -> float:
    """Boundary 2*D^2/lambda between near-field and far-field regions."""
    if wavelength <= 0.0:
        raise ConfigError(f"wavelength must be positive, got {wavelength}")
    if aperture < 0.0:
        raise ConfigError(f"aperture must be non-negative, got {aperture}")
    return 2.0 * aperture * aperture / wavelength


def classify_field(distance: float, aperture: float, wavelength: float) -> FieldRegion:
    """FAR iff distance is strictly beyond the Rayleigh distance.

    The boundary itself counts as NEAR (closed near-field region).
    """
    if distance <= 0.0:
        raise ConfigError(f"distance must be positive, got {distance}")
    boundary = rayleigh_distance(aperture, wavelength)
    return FieldRegion.FAR if distance > boundary else FieldRegion.NEAR


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class UpaGeometry:
    """Square s x s element grid on the z=0 plane, centered at the origin."""

    side: int
    pitch: float  # element spacing in meters
    positions: np.ndarray  # (M, 3) element coordinates, meters
    aperture: float  # grid diagonal D in meters

    @property
    def num_elements(self) -> int:
        return self.side * self.side


def upa_positions(num_elements: int, spacing_wavelengths: float, wavelength: float) -> UpaGeometry:
    """Build the centered square grid for M elements (M must be a perfect square)."""
    if num_elements < 1:
        raise ConfigError(f"need at least one element, got {num_elements}")
    side = math.isqrt(num_elements)
    if side * side != num_elements:
        raise ConfigError(f"element count must be a perfect square, got {num_elements}")
    if spacing_wavelengths <= 0.0 or wavelength <= 0.0:
        raise ConfigError("element spacing and wavelength must be positive")
    pitch = spacing_wavelengths * wavelength
    axis = (np.arange(side) - (side - 1) / 2.0) * pitch
    xx, yy = np.meshgrid(axis, axis, indexing="ij")
    positions = np.column_stack([xx.ravel(), yy.ravel(), np.zeros(num_elements)])
    aperture = math.sqrt(2.0) * (side - 1) * pitch
    return UpaGeometry(side=side, pitch=pitch, positions=_readonly(positions), aperture=aperture)


@dataclass(frozen=True)
class TransmissiveCoefficient:
    """Per-element complex factor applied by the surface, stored as
    amplitude in [0, 1] and phase in [0, 2*pi)."""

    amplitude: np.ndarray
    phase: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitude, dtype=float)
        ph = np.mod(np.asarray(self.phase, dtype=float), TWO_PI)
        if amp.ndim != 1 or ph.shape != amp.shape:
            raise ConfigError("amplitude and phase must be 1-D arrays of equal length")
        if np.any(amp < 0.0) or np.any(amp > 1.0 + 1e-9):
            raise ConfigError("transmissive amplitudes must lie in [0, 1]")
        object.__setattr__(self, "amplitude", _readonly(np.minimum(amp, 1.0)))
        object.__setattr__(self, "phase", _readonly(ph))

    @property
    def values(self) -> np.ndarray:
        return self.amplitude * np.exp(1j * self.phase)

    @classmethod
    def from_values(cls, values: np.ndarray) -> "TransmissiveCoefficient":
        v = np.asarray(values, dtype=complex)
        return cls(amplitude=np.abs(v), phase=np.angle(v))

    @classmethod
    def ones(cls, num_elements: int) -> "TransmissiveCoefficient":
        return cls(amplitude=np.ones(num_elements), phase=np.zeros(num_elements))

    def __len__(self) -> int:
        return self.amplitude.shape[0]


@dataclass(frozen=True)
class SystemConfig:
    """Physical and budget parameters for one array size.

    Powers are linear watts, the Rice factor is linear; dB/dBm conversions
    happen at the CLI boundary only.  Construction fails unless users are
    far-field and the feed is near-field for this aperture.
    """

    num_users: int
    num_elements: int
    element_spacing: float = 0.5  # in wavelengths
    wavelength: float = 0.04  # meters (7.5 GHz)
    feed_distance: float = 0.1  # meters
    user_distance_min: float = 20.0  # meters
    user_distance_max: float = 50.0  # meters
    rice_factor: float = 10 ** 0.3  # linear (3 dB)
    noise_power: float = 1e-12  # watts (-90 dBm)
    dl_total_power: float = 1.0  # watts (30 dBm)
    ul_user_power: float = 0.1  # watts per user (20 dBm)
    num_subcarriers: int = 16
    seed: int = 0
    geometry: UpaGeometry = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.num_users < 1:
            raise ConfigError(f"need at least one user, got {self.num_users}")
        for name in ("wavelength", "element_spacing", "noise_power", "dl_total_power",
                     "ul_user_power", "feed_distance"):
            if getattr(self, name) <= 0.0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if self.rice_factor < 0.0:
            raise ConfigError(f"rice_factor must be non-negative, got {self.rice_factor}")
        if self.num_subcarriers < 1:
            raise ConfigError(f"need at least one subcarrier, got {self.num_subcarriers}")
        if not 0.0 < self.user_distance_min <= self.user_distance_max:
            raise ConfigError("user distance range must satisfy 0 < min <= max")
        geom = upa_positions(self.num_elements, self.element_spacing, self.wavelength)
        boundary = rayleigh_distance(geom.aperture, self.wavelength)
        if self.user_distance_min <= boundary:
            raise ConfigError(
                f"users must be far-field: min distance {self.user_distance_min} m "
                f"is not beyond the Rayleigh distance {boundary:.6g} m"
            )
        if self.feed_distance >= boundary:
            raise ConfigError(
                f"feed must be near-field: feed distance {self.feed_distance} m "
                f"is not inside the Rayleigh distance {boundary:.6g} m"
            )
        object.__setattr__(self, "geometry", geom)

    @property
    def feed_position(self) -> np.ndarray:
        # feed sits on the array normal
        return np.array([0.0, 0.0, self.feed_distance])
