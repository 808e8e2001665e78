"""Closed-form distance distributions for binomial point processes on shells.

Every per-shell CCDF ``P(D_k >= d)`` has the same three-branch shape:

* ``1`` below the onset distance (closest possible approach),
* ``[1 - arccos(c(d)) / pi] ** n`` between onset and the line-of-sight limit,
  where ``c(d) = 1 - (d**2 - onset**2) / (2 r_obs r_target)`` is the cosine of
  the cap half-angle around the observer axis,
* a constant plateau beyond the line-of-sight limit (no visible point).

The three observer/target combinations only differ in ``onset``,
``r_obs`` and the exponent: ground observer (onset ``a_k``, ``r_obs = r_e``),
observer on the same shell (onset 0, exponent ``N_i - 1``) and observer on
another shell (onset ``|a_k - a_i|``).

The plateau is the middle branch evaluated at ``d_max``, so every CCDF is
continuous. For the ground observer this coincides with
``[1 - arccos(r_e / r_k) / pi] ** N_k``. :func:`complementary_cap_plateau`
gives the other closed form one obtains for shell observers by taking the
cap height ``h_max`` of the complementary cap; it is kept for comparison only.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .constellation import ConstellationSpec, ObservationPoint
from .errors import BeyondVisibilityError, ConfigError, ConsistencyError
from .geometry import EarthGeometry, ShellGeometry, max_los_distance

CLAMP_TOL = 1e-12


class ShellKind(enum.Enum):
    CONTACT_FROM_EARTH = "contact"
    NN_SAME_SHELL = "nn-same"
    NN_CROSS_SHELL = "nn-cross"


def _clamped_arccos(c):
    c = np.asarray(c, dtype=float)
    if np.any(c > 1.0 + CLAMP_TOL) or np.any(c < -1.0 - CLAMP_TOL):
        worst = float(np.max(np.abs(c)))
        raise ConsistencyError(f"arccos argument {worst!r} outside [-1, 1] beyond tolerance")
    return np.arccos(np.clip(c, -1.0, 1.0))


def _power(log_base, exponent: int):
    """``exp(exponent * log_base)`` with ``0 ** 0 = 1`` and ``0 ** n = 0``."""
    log_base = np.asarray(log_base, dtype=float)
    if exponent == 0:
        return np.ones_like(log_base)
    return np.exp(exponent * log_base)  # log_base = -inf -> 0


def _log_cap_complement(c):
    """``log(1 - arccos(c) / pi)``: log-probability one point avoids the cap."""
    with np.errstate(divide="ignore"):
        return np.log1p(-_clamped_arccos(c) / math.pi)


@dataclass(frozen=True)
class ShellCcdf:
    """``P(D_k >= d)`` for a single target shell.

    Call the instance with a scalar or an array of distances (km).
    """

    kind: ShellKind
    onset: float
    d_max: float
    exponent: int
    r_obs: float
    r_target: float
    r_e: float

    def __post_init__(self):
        if self.exponent < 0:
            raise ConfigError(f"exponent must be non-negative, got {self.exponent}")
        if self.onset > self.d_max:
            raise ConfigError(f"onset {self.onset} exceeds d_max {self.d_max}")

    @classmethod
    def contact(cls, shell: ShellGeometry, n_sat: int) -> "ShellCcdf":
        return cls(
            ShellKind.CONTACT_FROM_EARTH,
            onset=shell.a,
            d_max=max_los_distance(shell.r_e, shell.r, shell.r_e),
            exponent=int(n_sat),
            r_obs=shell.r_e,
            r_target=shell.r,
            r_e=shell.r_e,
        )

    @classmethod
    def nn_same(cls, shell: ShellGeometry, n_sat: int) -> "ShellCcdf":
        if n_sat < 1:
            raise ConfigError("observer shell must hold at least one point (the observer)")
        return cls(
            ShellKind.NN_SAME_SHELL,
            onset=0.0,
            d_max=max_los_distance(shell.r, shell.r, shell.r_e),
            exponent=int(n_sat) - 1,
            r_obs=shell.r,
            r_target=shell.r,
            r_e=shell.r_e,
        )

    @classmethod
    def nn_cross(cls, obs_shell: ShellGeometry, target_shell: ShellGeometry, n_sat: int) -> "ShellCcdf":
        if obs_shell.r_e != target_shell.r_e:
            raise ConfigError("shells built for different earth radii")
        return cls(
            ShellKind.NN_CROSS_SHELL,
            onset=abs(target_shell.r - obs_shell.r),
            d_max=max_los_distance(obs_shell.r, target_shell.r, obs_shell.r_e),
            exponent=int(n_sat),
            r_obs=obs_shell.r,
            r_target=target_shell.r,
            r_e=obs_shell.r_e,
        )

    def cos_half_angle(self, d):
        """Cosine of the cap half-angle reached at distance ``d`` (middle branch)."""
        d = np.asarray(d, dtype=float)
        return 1.0 - (d * d - self.onset**2) / (2.0 * self.r_obs * self.r_target)

    def log_middle(self, d):
        return _log_cap_complement(self.cos_half_angle(d))

    def middle(self, d):
        """Middle-branch formula, without branch selection."""
        out = _power(self.log_middle(d), self.exponent)
        return float(out) if out.ndim == 0 else out

    @property
    def plateau(self) -> float:
        if self.exponent == 0:
            return 1.0
        if self.kind is ShellKind.CONTACT_FROM_EARTH:
            log_base = _log_cap_complement(self.r_e / self.r_target)
        else:
            log_base = self.log_middle(self.d_max)
        return float(_power(log_base, self.exponent))

    def __call__(self, d):
        d = np.asarray(d, dtype=float)
        out = np.ones_like(d)
        if self.exponent > 0:
            mid = (d >= self.onset) & (d <= self.d_max)
            if np.any(mid):
                out[mid] = _power(self.log_middle(d[mid]), self.exponent)
            out[d > self.d_max] = self.plateau
        return float(out) if out.ndim == 0 else out


def complementary_cap_plateau(ccdf: ShellCcdf) -> float:
    """Plateau built from the complementary-cap heights for shell observers.

    Same shell: ``h_max = 2 r_e**2 / r_i``; other shell:
    ``h_max = ((r_i + r_k)**2 - d_max**2) / (2 r_i)``, giving cap cosines
    that are the negatives of the continuity limit. Not used by
    :class:`ShellCcdf`; provided so the discrepancy can be inspected.
    """
    if ccdf.kind is ShellKind.CONTACT_FROM_EARTH:
        return ccdf.plateau
    r_i, r_k = ccdf.r_obs, ccdf.r_target
    if ccdf.kind is ShellKind.NN_SAME_SHELL:
        c = 1.0 - 2.0 * ccdf.r_e**2 / r_i**2
    else:
        c = 1.0 - ((r_i + r_k) ** 2 - ccdf.d_max**2) / (2.0 * r_i * r_k)
    return float(_power(_log_cap_complement(c), ccdf.exponent))


def ccdf_contact_shell(d, shell: ShellGeometry, n_sat: int, earth: EarthGeometry | None = None):
    """``P(D_k >= d)`` from a ground observer to the nearest of ``n_sat`` points on ``shell``."""
    _same_earth(shell, earth)
    if n_sat < 0:
        raise ConfigError(f"n_sat must be non-negative, got {n_sat}")
    return ShellCcdf.contact(shell, n_sat)(d)


def ccdf_nn_same_shell(d, shell: ShellGeometry, n_sat: int, earth: EarthGeometry | None = None):
    """``P(D_i >= d)`` from one of the ``n_sat`` points on ``shell`` to its nearest sibling."""
    _same_earth(shell, earth)
    return ShellCcdf.nn_same(shell, n_sat)(d)


def ccdf_nn_cross_shell(d, obs_shell: ShellGeometry, target_shell: ShellGeometry, n_sat: int,
                        earth: EarthGeometry | None = None):
    _same_earth(obs_shell, earth)
    if n_sat < 0:
        raise ConfigError(f"n_sat must be non-negative, got {n_sat}")
    return ShellCcdf.nn_cross(obs_shell, target_shell, n_sat)(d)


def _same_earth(shell: ShellGeometry, earth: EarthGeometry | None) -> None:
    if earth is not None and earth.r_e != shell.r_e:
        raise ConfigError(f"shell built for r_e={shell.r_e}, got earth r_e={earth.r_e}")


@dataclass(frozen=True)
class DistanceDistribution:
    """Distance from an observer to the nearest visible point of the whole constellation.

    The CDF is defective: ``cdf(inf) = visibility_probability < 1`` whenever
    there is a chance that no point is in line of sight.
    """

    shells: tuple[ShellCcdf, ...]
    observer: ObservationPoint

    @classmethod
    def build(cls, spec: ConstellationSpec, obs: ObservationPoint) -> "DistanceDistribution":
        obs.validate(spec)
        shells = []
        for k, s in enumerate(spec.shells, start=1):
            geom = spec.geometry(k)
            if obs.is_earth:
                shells.append(ShellCcdf.contact(geom, s.num_satellites))
            elif k == obs.shell:
                shells.append(ShellCcdf.nn_same(geom, s.num_satellites))
            else:
                shells.append(ShellCcdf.nn_cross(spec.geometry(obs.shell), geom, s.num_satellites))
        return cls(tuple(shells), obs)

    @property
    def onset(self) -> float:
        return min(s.onset for s in self.shells)

    @property
    def top(self) -> float:
        """Distance beyond which the CDF is constant."""
        return max(s.d_max for s in self.shells)

    @property
    def visibility_probability(self) -> float:
        return 1.0 - math.prod(s.plateau for s in self.shells)

    def ccdf_by_shell(self, d) -> np.ndarray:
        """Array of shape ``(n_shells,) + shape(d)``."""
        d = np.asarray(d, dtype=float)
        return np.stack([np.asarray(s(d)) for s in self.shells])

    def cdf(self, d):
        d = np.asarray(d, dtype=float)
        out = 1.0 - np.prod(self.ccdf_by_shell(d), axis=0)
        return float(out) if out.ndim == 0 else out

    def quantile(self, q: float, tol: float = 1e-6) -> float:
        """Smallest ``d`` with ``cdf(d) >= q`` (``q = 0`` gives the onset)."""
        if not (0.0 <= q < 1.0):
            raise ValueError(f"quantile level must lie in [0, 1), got {q}")
        vis = self.visibility_probability
        if q >= vis:
            raise BeyondVisibilityError(
                f"quantile {q} beyond visibility mass {vis:.6g}: "
                "no point is visible with the remaining probability"
            )
        lo, hi = self.onset, self.top
        if q == 0.0:
            return lo
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if self.cdf(mid) >= q:
                hi = mid
            else:
                lo = mid
        return hi

    def conditional_mean(self, rtol: float = 1e-8) -> float:
        """``E[D | D < inf]`` by adaptive quadrature of the conditional survival function."""
        vis = self.visibility_probability
        if vis <= 0.0:
            raise BeyondVisibilityError("no point is ever visible; conditional mean undefined")
        lo, top = self.onset, self.top
        breaks = {s.onset for s in self.shells} | {s.d_max for s in self.shells}
        # dense shells put almost all mass within metres of the onset; show quad where
        for j in range(1, 16):
            q = vis * (1.0 - 10.0**-j)
            if q <= 0.0 or q >= vis:
                break
            breaks.add(self.quantile(q, tol=1e-9 * max(top, 1.0)))
        breaks = sorted(b for b in breaks if lo < b < top)
        # F = 0 below the onset, so that stretch contributes exactly vis * lo
        value, _ = integrate.quad(
            lambda t: vis - self.cdf(t), lo, top,
            points=breaks or None, epsrel=rtol, epsabs=0.0, limit=50 * (len(breaks) + 1),
        )
        return lo + value / vis


def distribution(spec: ConstellationSpec, obs: ObservationPoint) -> DistanceDistribution:
    return DistanceDistribution.build(spec, obs)


def cdf_combined(d, spec: ConstellationSpec, obs: ObservationPoint):
    """``P(D < d)`` for the nearest visible point of ``spec`` seen from ``obs``."""
    return distribution(spec, obs).cdf(d)


def visibility_probability(spec: ConstellationSpec, obs: ObservationPoint) -> float:
    return distribution(spec, obs).visibility_probability


def quantile(q: float, spec: ConstellationSpec, obs: ObservationPoint, tol: float = 1e-6) -> float:
    return distribution(spec, obs).quantile(q, tol)


def conditional_mean_distance(spec: ConstellationSpec, obs: ObservationPoint) -> float:
    return distribution(spec, obs).conditional_mean()
