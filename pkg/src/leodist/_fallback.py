"""Pure numpy version of the trial kernel, used when ``_kernel`` is not compiled."""
from __future__ import annotations

import numpy as np

from ._rng import trial_keys, uniforms

_TANGENT_RTOL = 1e-12
# elements per (trials x points) block
_BLOCK = 1 << 18


def _shell_min(keys, offset, n, r, r_obs, clear, sampler):
    j = np.arange(offset, offset + 2 * n, dtype=np.uint64)
    u = uniforms(keys[:, None], j[None, 0::2])
    v = uniforms(keys[:, None], j[None, 1::2])
    if sampler == 0:
        cphi = np.cos(np.pi * u)
        sphi = np.sin(np.pi * u)
    else:
        cphi = 1.0 - 2.0 * u
        sphi = np.sqrt(np.maximum(0.0, 1.0 - cphi * cphi))
    theta = 2.0 * np.pi * v
    x = r * sphi * np.cos(theta)
    y = r * sphi * np.sin(theta)
    dz = r * cphi - r_obs
    vv = x * x + y * y + dz * dz
    dist = np.sqrt(vv)
    with np.errstate(divide="ignore", invalid="ignore"):
        tt = np.where(vv > 0.0, -(r_obs * dz) / vv, 0.0)
    tt = np.clip(tt, 0.0, 1.0)
    wx, wy, wz = tt * x, tt * y, r_obs + tt * dz
    visible = np.sqrt(wx * wx + wy * wy + wz * wz) >= clear
    dist[~visible] = np.inf
    return dist.min(axis=1)


def nearest_distances(radii, counts, r_obs: float, r_e: float, sampler: int,
                      seed: int, trial_start: int, trial_stop: int) -> np.ndarray:
    """Nearest visible distance for trials ``[trial_start, trial_stop)``; ``inf`` if none."""
    radii = np.asarray(radii, dtype=np.float64)
    counts = np.asarray(counts, dtype=np.int64)
    if radii.shape != counts.shape:
        raise ValueError("radii and counts differ in length")
    if trial_stop < trial_start:
        raise ValueError("trial_stop < trial_start")
    clear = r_e * (1.0 - _TANGENT_RTOL)
    out = np.full(trial_stop - trial_start, np.inf)
    offsets = np.concatenate([[0], np.cumsum(2 * counts)[:-1]]).astype(np.int64)
    widest = max(int(counts.max(initial=0)), 1)
    step = max(1, _BLOCK // widest)
    for lo in range(trial_start, trial_stop, step):
        hi = min(lo + step, trial_stop)
        keys = trial_keys(seed, np.arange(lo, hi, dtype=np.uint64))
        best = out[lo - trial_start:hi - trial_start]
        for r, n, off in zip(radii, counts, offsets):
            if n == 0:
                continue
            np.minimum(best, _shell_min(keys, int(off), int(n), float(r), r_obs, clear, sampler),
                       out=best)
    return out
