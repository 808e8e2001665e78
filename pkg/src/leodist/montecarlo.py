"""Monte-Carlo simulation of binomial point processes on concentric shells.

The observer sits on the +z axis, at ``(0, 0, r_e)`` for a ground observer
or ``(0, 0, r_i)`` for a point of shell ``i``. Satellites are drawn with
colatitude measured from that axis.

Two placement laws are available:

``SamplerKind.COLATITUDE``
    colatitude uniform on ``[0, pi]``, azimuth uniform. A point then avoids
    a polar cap of half-angle ``alpha`` with probability ``1 - alpha / pi``,
    which is exactly what the closed-form CCDFs in :mod:`leodist.analytic`
    assume. The law is not rotation invariant, so the pole placement of the
    observer matters. This is the default.
``SamplerKind.AREA``
    ``cos(colatitude)`` uniform on ``[-1, 1]``: points uniform over the
    sphere's area. The closed forms do not describe this law; it is shipped
    as a diagnostic and produces a clear KS mismatch.

Trials run through a compiled kernel when ``leodist._kernel`` is importable
and through a numpy implementation otherwise. Each trial draws from its own
stream (see :mod:`leodist._rng`), so results do not depend on the number of
workers.
"""
from __future__ import annotations

import enum
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _fallback
from ._rng import TrialStream
from .constellation import ConstellationSpec, ObservationPoint
from .errors import ConfigError
from .geometry import EarthGeometry, ShellGeometry, segment_clears_earth

try:
    from . import _kernel as _compiled
except ImportError:  # pragma: no cover - depends on build
    _compiled = None

log = logging.getLogger(__name__)

_KERNELS = {"python": _fallback.nearest_distances}
if _compiled is not None:
    _KERNELS["compiled"] = _compiled.nearest_distances

DEFAULT_BACKEND = "compiled" if _compiled is not None else "python"


def available_backends() -> list[str]:
    return sorted(_KERNELS)


class SamplerKind(enum.Enum):
    COLATITUDE = 0
    AREA = 1

    @classmethod
    def parse(cls, text: str) -> "SamplerKind":
        names = {"colatitude": cls.COLATITUDE, "area": cls.AREA}
        try:
            return names[text.strip().lower()]
        except KeyError:
            raise ConfigError(f"sampler must be 'colatitude' or 'area', got {text!r}") from None

    @property
    def label(self) -> str:
        return self.name.lower()


@dataclass(frozen=True)
class SimulationConfig:
    trials: int
    seed: int = 0
    sampler: SamplerKind = SamplerKind.COLATITUDE

    def __post_init__(self):
        if isinstance(self.trials, bool) or int(self.trials) != self.trials or self.trials < 1:
            raise ConfigError(f"trials must be a positive integer, got {self.trials!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError(f"seed must fit in 64 unsigned bits, got {self.seed}")


def sample_shell(shell: ShellGeometry, n: int, sampler: SamplerKind = SamplerKind.COLATITUDE,
                 axis=(0.0, 0.0, 1.0), rng=None) -> np.ndarray:
    """Draw ``n`` points on ``shell``, colatitude measured from ``axis``.

    ``rng`` is anything with a numpy-style ``random(size)`` method; each point
    consumes two consecutive uniforms (colatitude, then azimuth).
    Returns an ``(n, 3)`` array in km.
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if rng is None:
        rng = np.random.default_rng()
    if n == 0:
        return np.empty((0, 3))
    u = rng.random(2 * n).reshape(n, 2)
    if sampler is SamplerKind.COLATITUDE:
        cphi = np.cos(np.pi * u[:, 0])
        sphi = np.sin(np.pi * u[:, 0])
    else:
        cphi = 1.0 - 2.0 * u[:, 0]
        sphi = np.sqrt(np.maximum(0.0, 1.0 - cphi * cphi))
    theta = 2.0 * np.pi * u[:, 1]
    local = shell.r * np.column_stack([sphi * np.cos(theta), sphi * np.sin(theta), cphi])
    return local @ _frame(axis)


def _frame(axis) -> np.ndarray:
    """Rows: orthonormal basis whose third vector is ``axis``."""
    w = np.asarray(axis, dtype=float)
    norm = np.linalg.norm(w)
    if not math.isclose(norm, 1.0, rel_tol=1e-9):
        raise ValueError(f"axis must be a unit vector, got norm {norm}")
    if np.array_equal(w, [0.0, 0.0, 1.0]):
        return np.eye(3)
    helper = np.array([1.0, 0.0, 0.0]) if abs(w[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(helper, w)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(w, e1)
    return np.vstack([e1, e2, w])


@dataclass(frozen=True)
class Realization:
    """One draw of every shell plus the observer position.

    For a shell observer, its own shell holds the *other* ``N_i - 1`` points.
    """

    points: tuple[np.ndarray, ...]
    observer: np.ndarray
    scenario: ObservationPoint


def _shell_counts(spec: ConstellationSpec, obs: ObservationPoint) -> list[int]:
    counts = spec.counts
    if not obs.is_earth:
        counts[obs.shell - 1] -= 1
    return counts


def sample_realization(spec: ConstellationSpec, obs: ObservationPoint,
                       sampler: SamplerKind = SamplerKind.COLATITUDE,
                       seed: int = 0, trial: int = 0) -> Realization:
    """Realization for trial ``trial`` of ``seed``, using the same stream as :func:`run_experiment`."""
    obs.validate(spec)
    stream = TrialStream(seed, trial)
    pts = tuple(
        sample_shell(spec.geometry(k), n, sampler, rng=stream)
        for k, n in enumerate(_shell_counts(spec, obs), start=1)
    )
    return Realization(pts, np.array([0.0, 0.0, obs.radius(spec)]), obs)


def nearest_visible_distance(real: Realization, earth: EarthGeometry | float) -> float:
    """Distance to the closest point with line of sight to the observer, ``inf`` if none."""
    best = math.inf
    o = real.observer
    for pts in real.points:
        if len(pts) == 0:
            continue
        dist = np.linalg.norm(pts - o, axis=1)
        for i in np.argsort(dist, kind="stable"):
            if dist[i] >= best:
                break
            if segment_clears_earth(o, pts[i], earth):
                best = float(dist[i])
                break
    return best


@dataclass(frozen=True)
class EmpiricalCdf:
    """Empirical distribution of a possibly infinite distance.

    ``distances`` holds the sorted finite outcomes; trials with no visible
    point are only counted in ``n_infinite``.
    """

    distances: np.ndarray
    n_infinite: int
    n_total: int

    def __post_init__(self):
        if self.n_total != len(self.distances) + self.n_infinite:
            raise ValueError("n_total must equal finite + infinite outcomes")

    @classmethod
    def from_samples(cls, samples) -> "EmpiricalCdf":
        samples = np.asarray(samples, dtype=float)
        finite = np.isfinite(samples)
        return cls(np.sort(samples[finite]), int((~finite).sum()), int(samples.size))

    def merge(self, other: "EmpiricalCdf") -> "EmpiricalCdf":
        d = np.sort(np.concatenate([self.distances, other.distances]))
        return EmpiricalCdf(d, self.n_infinite + other.n_infinite, self.n_total + other.n_total)

    def __call__(self, d):
        """Fraction of trials with distance ``<= d``."""
        out = np.searchsorted(self.distances, d, side="right") / self.n_total
        return float(out) if np.ndim(out) == 0 else out

    def left(self, d):
        """Fraction of trials with distance ``< d``."""
        out = np.searchsorted(self.distances, d, side="left") / self.n_total
        return float(out) if np.ndim(out) == 0 else out

    @property
    def finite_mass(self) -> float:
        return 1.0 - self.n_infinite / self.n_total

    @property
    def infinite_fraction(self) -> float:
        return self.n_infinite / self.n_total

    def mean_finite(self) -> tuple[float, float]:
        """Sample mean of the finite outcomes and its standard error."""
        n = len(self.distances)
        if n == 0:
            raise ValueError("no finite outcomes")
        sd = float(np.std(self.distances, ddof=1)) if n > 1 else math.inf
        return float(np.mean(self.distances)), sd / math.sqrt(n)


def simulate_distances(spec: ConstellationSpec, obs: ObservationPoint, sim: SimulationConfig,
                       workers: int = 1, backend: str | None = None) -> np.ndarray:
    """Per-trial nearest visible distance (``inf`` if none), in trial order."""
    obs.validate(spec)
    name = backend or DEFAULT_BACKEND
    try:
        kernel = _KERNELS[name]
    except KeyError:
        raise ConfigError(f"backend {name!r} unavailable; have {available_backends()}") from None
    radii = np.array(spec.radii)
    counts = np.array(_shell_counts(spec, obs), dtype=np.int64)
    args = (radii, counts, obs.radius(spec), spec.earth_radius_km, sim.sampler.value, int(sim.seed))
    trials = int(sim.trials)
    workers = max(1, min(int(workers), trials))
    bounds = np.linspace(0, trials, workers + 1).astype(int)
    if workers == 1:
        return kernel(*args, 0, trials)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(lambda lo_hi: kernel(*args, int(lo_hi[0]), int(lo_hi[1])),
                         zip(bounds[:-1], bounds[1:]))
        return np.concatenate(list(parts))


def run_experiment(spec: ConstellationSpec, obs: ObservationPoint, sim: SimulationConfig,
                   workers: int = 1, backend: str | None = None) -> EmpiricalCdf:
    log.debug("simulating %s from %s: %d trials, seed %d, %s sampler, backend %s",
              spec.name or "constellation", obs, sim.trials, sim.seed, sim.sampler.label,
              backend or DEFAULT_BACKEND)
    return EmpiricalCdf.from_samples(simulate_distances(spec, obs, sim, workers, backend))
