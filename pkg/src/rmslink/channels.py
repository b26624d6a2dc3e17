"""Channel generation: far-field Rician user links, the deterministic
near-field spherical-wave feed link, and their cascade.

Conventions
-----------
* No conjugation anywhere: the end-to-end response to a transmissive
  vector f is f^T c_k, with c_k = sqrt(path_loss_k) * (g ⊙ h_k).
* Path loss is the free-space law (lambda / 4 pi d)^2.
* The same realization serves UL and DL within a trial (TDD reciprocity),
  so the cascade matrix doubles as the effective DL channel.
* Random draws consume the generator in a fixed order (azimuths,
  elevations, distances, then the NLoS matrix) so trials replay exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, GeometryError
from .system import SystemConfig, UpaGeometry

FOUR_PI = 4.0 * math.pi


@dataclass(frozen=True)
class FarFieldChannel:
    """K x M small-scale Rician fading plus per-user free-space path loss."""

    matrix: np.ndarray  # (K, M) complex, unit-variance small-scale part
    path_loss: np.ndarray  # (K,) linear power gains
    azimuth: np.ndarray  # (K,) radians
    elevation: np.ndarray  # (K,) radians
    distances: np.ndarray  # (K,) meters


@dataclass(frozen=True)
class NearFieldChannel:
    """Spherical-wave LoS link from each element to the feed antenna."""

    vector: np.ndarray  # (M,) complex
    feed_position: np.ndarray  # (3,)


@dataclass(frozen=True)
class CascadedChannel:
    """Rows c_k = sqrt(path_loss_k) * (g ⊙ h_k): the only channel directly
    observable through the passive surface, and the effective DL channel."""

    matrix: np.ndarray  # (K, M) complex


@dataclass(frozen=True)
class ChannelRealization:
    far: FarFieldChannel
    near: NearFieldChannel
    cascade: CascadedChannel


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def steering_vector_upa(azimuth: float, elevation: float, geom: UpaGeometry,
                        wavelength: float) -> np.ndarray:
    """Unit-modulus plane-wave phase profile across the array.

    Direction (az, el) has unit vector (sin az cos el, sin el, cos az cos el);
    broadside az=el=0 is the array normal and gives the all-ones vector.
    """
    direction = np.array([
        math.sin(azimuth) * math.cos(elevation),
        math.sin(elevation),
        math.cos(azimuth) * math.cos(elevation),
    ])
    phase = (2.0 * math.pi / wavelength) * (geom.positions @ direction)
    return np.exp(1j * phase)


def sample_user_geometry(cfg: SystemConfig, rng: np.random.Generator):
    """Draw user angles and distances.  Azimuths are uniform in
    (-pi/2, pi/2), elevations in (-pi/4, pi/4) (forward hemisphere of the
    transmissive side), distances uniform in the configured far-field range.
    """
    k = cfg.num_users
    azimuth = rng.uniform(-math.pi / 2, math.pi / 2, size=k)
    elevation = rng.uniform(-math.pi / 4, math.pi / 4, size=k)
    distances = rng.uniform(cfg.user_distance_min, cfg.user_distance_max, size=k)
    return azimuth, elevation, distances


def sample_far_channel(cfg: SystemConfig, azimuth: np.ndarray, elevation: np.ndarray,
                       distances: np.ndarray, rng: np.random.Generator) -> FarFieldChannel:
    """Rician mix sqrt(k/(1+k)) * LoS + sqrt(1/(1+k)) * NLoS with unit-modulus
    UPA steering rows and iid unit-variance CSCG scattering."""
    azimuth = np.asarray(azimuth, dtype=float)
    elevation = np.asarray(elevation, dtype=float)
    distances = np.asarray(distances, dtype=float)
    k, m = azimuth.shape[0], cfg.num_elements
    if np.any(distances <= 0.0):
        raise ConfigError("user distances must be positive")

    los = np.empty((k, m), dtype=complex)
    for i in range(k):
        los[i] = steering_vector_upa(azimuth[i], elevation[i], cfg.geometry, cfg.wavelength)
    nlos = (rng.standard_normal((k, m)) + 1j * rng.standard_normal((k, m))) / math.sqrt(2.0)

    kappa = cfg.rice_factor
    matrix = math.sqrt(kappa / (1.0 + kappa)) * los + math.sqrt(1.0 / (1.0 + kappa)) * nlos
    path_loss = (cfg.wavelength / (FOUR_PI * distances)) ** 2
    return FarFieldChannel(
        matrix=_freeze(matrix),
        path_loss=_freeze(path_loss),
        azimuth=_freeze(azimuth.copy()),
        elevation=_freeze(elevation.copy()),
        distances=_freeze(distances.copy()),
    )


def near_field_channel(geom: UpaGeometry, feed_position: np.ndarray,
                       wavelength: float) -> NearFieldChannel:
    """Spherical-wave element-to-feed link g_m = (lambda / 4 pi r_m) e^{-j 2 pi r_m / lambda}
    with r_m the exact element-to-feed distance.  Deterministic."""
    feed_position = np.asarray(feed_position, dtype=float)
    r = np.linalg.norm(geom.positions - feed_position[None, :], axis=1)
    if np.any(r <= 0.0):
        raise GeometryError("feed position coincides with an array element")
    vector = (wavelength / (FOUR_PI * r)) * np.exp(-2j * math.pi * r / wavelength)
    return NearFieldChannel(vector=_freeze(vector), feed_position=_freeze(feed_position.copy()))


def cascaded_channel(near: NearFieldChannel, far: FarFieldChannel) -> CascadedChannel:
    """Elementwise cascade c_k = sqrt(path_loss_k) * (g ⊙ h_k)."""
    g = near.vector
    h = far.matrix
    if h.shape[1] != g.shape[0]:
        raise ConfigError(f"dimension mismatch: channel has {h.shape[1]} columns, "
                          f"feed link has {g.shape[0]} elements")
    matrix = np.sqrt(far.path_loss)[:, None] * (h * g[None, :])
    return CascadedChannel(matrix=_freeze(matrix))


def draw_realization(cfg: SystemConfig, rng: np.random.Generator) -> ChannelRealization:
    """One full channel draw in the documented order."""
    azimuth, elevation, distances = sample_user_geometry(cfg, rng)
    far = sample_far_channel(cfg, azimuth, elevation, distances, rng)
    near = near_field_channel(cfg.geometry, cfg.feed_position, cfg.wavelength)
    return ChannelRealization(far=far, near=near, cascade=cascaded_channel(near, far))


def effective_dl_channel(realization: ChannelRealization) -> np.ndarray:
    """K x M feed->surface->user matrix acting on the transmissive vector.

    Identical to the cascade by reciprocity."""
    return realization.cascade.matrix


# -- text export ------------------------------------------------------------
#
# Format: '#'-prefixed header lines carrying shapes and metadata, then one
# whitespace-separated "name row col real imag" line per complex entry and
# "name index value" per real entry, all at 17 significant digits.

def dump_channel_text(realization: ChannelRealization, path) -> None:
    far, near = realization.far, realization.near
    k, m = far.matrix.shape
    with open(path, "w") as fh:
        fh.write("# rmslink channel dump v1\n")
        fh.write(f"# users {k} elements {m}\n")
        for i in range(k):
            for j in range(m):
                v = far.matrix[i, j]
                fh.write(f"H {i} {j} {v.real:.17g} {v.imag:.17g}\n")
        for j in range(m):
            v = near.vector[j]
            fh.write(f"g {j} {v.real:.17g} {v.imag:.17g}\n")
        for i in range(k):
            fh.write(f"path_loss {i} {far.path_loss[i]:.17g}\n")
        for name, arr in (("azimuth", far.azimuth), ("elevation", far.elevation),
                          ("distance", far.distances)):
            for i in range(k):
                fh.write(f"{name} {i} {arr[i]:.17g}\n")
        for i in range(3):
            fh.write(f"feed_position {i} {near.feed_position[i]:.17g}\n")


def load_channel_text(path) -> ChannelRealization:
    header = None
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if "users" in line:
                    header = line
                continue
            rows.append(line.split())
    if header is None:
        raise ConfigError("channel dump missing header line")
    parts = header.split()
    k, m = int(parts[2]), int(parts[4])

    h = np.zeros((k, m), dtype=complex)
    g = np.zeros(m, dtype=complex)
    path_loss = np.zeros(k)
    azimuth, elevation, distances = np.zeros(k), np.zeros(k), np.zeros(k)
    feed = np.zeros(3)
    for row in rows:
        name = row[0]
        if name == "H":
            h[int(row[1]), int(row[2])] = float(row[3]) + 1j * float(row[4])
        elif name == "g":
            g[int(row[1])] = float(row[2]) + 1j * float(row[3])
        elif name == "path_loss":
            path_loss[int(row[1])] = float(row[2])
        elif name == "azimuth":
            azimuth[int(row[1])] = float(row[2])
        elif name == "elevation":
            elevation[int(row[1])] = float(row[2])
        elif name == "distance":
            distances[int(row[1])] = float(row[2])
        elif name == "feed_position":
            feed[int(row[1])] = float(row[2])
        else:
            raise ConfigError(f"unknown record '{name}' in channel dump")

    far = FarFieldChannel(matrix=_freeze(h), path_loss=_freeze(path_loss),
                          azimuth=_freeze(azimuth), elevation=_freeze(elevation),
                          distances=_freeze(distances))
    near = NearFieldChannel(vector=_freeze(g), feed_position=_freeze(feed))
    return ChannelRealization(far=far, near=near, cascade=cascaded_channel(near, far))
