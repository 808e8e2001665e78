"""Spherical-cap and line-of-sight geometry for concentric shells.

All lengths are kilometres. An observer sits either on the Earth sphere
(radius ``r_e``) or on one of the shells; distances are Euclidean chords.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GeometryError

DEFAULT_EARTH_RADIUS_KM = 6371.0

# relative slack for "segment touches the Earth tangentially"
_TANGENT_RTOL = 1e-12


@dataclass(frozen=True)
class EarthGeometry:
    r_e: float = DEFAULT_EARTH_RADIUS_KM

    def __post_init__(self):
        if not (self.r_e > 0 and math.isfinite(self.r_e)):
            raise GeometryError(f"earth radius must be positive, got {self.r_e}")


@dataclass(frozen=True)
class ShellGeometry:
    """A sphere of altitude ``a`` above an Earth of radius ``r_e``."""

    a: float
    r_e: float = DEFAULT_EARTH_RADIUS_KM

    def __post_init__(self):
        if not (self.a > 0 and math.isfinite(self.a)):
            raise GeometryError(f"altitude must be positive, got {self.a}")
        if not self.r_e > 0:
            raise GeometryError(f"earth radius must be positive, got {self.r_e}")

    @property
    def r(self) -> float:
        return self.r_e + self.a

    @property
    def earth(self) -> EarthGeometry:
        return EarthGeometry(self.r_e)


@dataclass(frozen=True)
class CapSpec:
    """Spherical cap of height ``h`` on a sphere of radius ``r``; ``z = r - h``."""

    h: float
    r: float

    def __post_init__(self):
        if self.r <= 0:
            raise GeometryError(f"sphere radius must be positive, got {self.r}")
        if not (0.0 <= self.h <= 2.0 * self.r):
            raise GeometryError(f"cap height {self.h} outside [0, {2 * self.r}]")

    @property
    def z(self) -> float:
        return self.r - self.h

    @property
    def cos_half_angle(self) -> float:
        return self.z / self.r


def _check_earth(shell: ShellGeometry, earth: EarthGeometry | None) -> None:
    if earth is not None and earth.r_e != shell.r_e:
        raise GeometryError(f"shell built for r_e={shell.r_e}, got earth r_e={earth.r_e}")


def cap_height_earth_obs(d: float, shell: ShellGeometry, earth: EarthGeometry | None = None) -> float:
    """Cap height on ``shell`` cut out by a ball of radius ``d`` around a ground observer."""
    _check_earth(shell, earth)
    a, r_e = shell.a, shell.r_e
    if d < a:
        raise GeometryError(f"d={d} below shell onset distance {a}")
    return (d * d - a * a) / (2.0 * r_e)


def cap_height_cross(d: float, obs_shell: ShellGeometry, target_shell: ShellGeometry) -> float:
    """Cap height on ``target_shell`` seen from a point on ``obs_shell``."""
    gap = target_shell.r - obs_shell.r
    if d < abs(gap):
        raise GeometryError(f"d={d} below shell separation {abs(gap)}")
    return (d * d - gap * gap) / (2.0 * obs_shell.r)


def cap_height_same(d: float, shell: ShellGeometry) -> float:
    if d < 0:
        raise GeometryError(f"distance must be non-negative, got {d}")
    return d * d / (2.0 * shell.r)


def max_los_distance(obs_radius: float, target_radius: float, r_e: float) -> float:
    """Longest chord between the two spheres whose segment still clears the Earth.

    Both endpoints sit on the tangent line to the Earth sphere, so the chord
    is the sum of the two tangent lengths. With ``obs_radius == r_e`` this is
    the horizon distance of a ground observer.
    """
    if obs_radius < r_e or target_radius < r_e:
        raise GeometryError("radii must not be below the earth radius")
    return math.sqrt(target_radius**2 - r_e**2) + math.sqrt(obs_radius**2 - r_e**2)


def d_max(target: ShellGeometry, observer: ShellGeometry | None = None,
          earth: EarthGeometry | None = None) -> float:
    """Maximum line-of-sight distance to ``target``.

    ``observer=None`` means a ground observer, for which this reduces to
    ``sqrt(2 r_e a + a^2)``. An observer on the same (or an equal-radius)
    shell gets ``2 sqrt(r^2 - r_e^2)``.
    """
    _check_earth(target, earth)
    r_e = target.r_e
    r_obs = r_e if observer is None else observer.r
    return max_los_distance(r_obs, target.r, r_e)


def chord_from_colatitude(phi, obs_radius: float, target_radius: float):
    """Distance between points at radii ``obs_radius``, ``target_radius`` separated by angle ``phi``."""
    # (r_o - r_t)^2 + 4 r_o r_t sin^2(phi/2); avoids cancellation near phi = 0
    s = np.sin(0.5 * np.asarray(phi, dtype=float))
    out = np.sqrt((obs_radius - target_radius) ** 2 + 4.0 * obs_radius * target_radius * s * s)
    return float(out) if np.ndim(out) == 0 else out


def colatitude_from_chord(d, obs_radius: float, target_radius: float):
    """Inverse of :func:`chord_from_colatitude` on ``[|r_o - r_t|, r_o + r_t]``."""
    c = (obs_radius**2 + target_radius**2 - np.square(d)) / (2.0 * obs_radius * target_radius)
    out = np.arccos(np.clip(c, -1.0, 1.0))
    return float(out) if np.ndim(out) == 0 else out


def min_norm_on_segment(p, q) -> float:
    """Smallest ``|p + t (q - p)|`` for ``t`` in ``[0, 1]``."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    v = q - p
    vv = float(v @ v)
    if vv == 0.0:
        return float(np.linalg.norm(p))
    t = min(1.0, max(0.0, -float(p @ v) / vv))
    return float(np.linalg.norm(p + t * v))


def segment_clears_earth(p, q, earth: EarthGeometry | float = DEFAULT_EARTH_RADIUS_KM) -> bool:
    """True when no point of segment ``pq`` lies strictly inside the Earth.

    Grazing the surface counts as clear.
    """
    r_e = earth.r_e if isinstance(earth, EarthGeometry) else float(earth)
    return min_norm_on_segment(p, q) >= r_e * (1.0 - _TANGENT_RTOL)
