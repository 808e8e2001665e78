# cython: language_level=3
"""Compiled per-trial nearest-visible-distance kernel.

Mirrors ``leodist._fallback.nearest_distances``; see ``leodist._rng`` for
the random stream layout.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin, sqrt, INFINITY, M_PI
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

cdef uint64_t GAMMA = 0x9E3779B97F4A7C15ULL
cdef uint64_t MIX1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t MIX2 = 0x94D049BB133111EBULL
cdef double INV_2_53 = 1.0 / 9007199254740992.0
cdef double TANGENT_RTOL = 1e-12


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * MIX1
    z = (z ^ (z >> 27)) * MIX2
    return z ^ (z >> 31)


cdef inline double uniform(uint64_t key, uint64_t j) noexcept nogil:
    return <double>(mix64(key + (j + 1) * GAMMA) >> 11) * INV_2_53


cdef void _run(const double[::1] radii, const int64_t[::1] counts, double r_obs,
               double r_e, int sampler, uint64_t seed, int64_t start,
               double[::1] out) noexcept nogil:
    cdef Py_ssize_t n_trials = out.shape[0]
    cdef Py_ssize_t n_shells = radii.shape[0]
    cdef Py_ssize_t t, k
    cdef int64_t p
    cdef uint64_t key, j
    cdef double best, best2, r, u, v, cphi, sphi, theta, x, y, z, dz, dist
    cdef double vx, vy, vz, vv, tt, wx, wy, wz
    cdef double clear = r_e * (1.0 - TANGENT_RTOL)
    for t in range(n_trials):
        key = mix64(seed ^ mix64(<uint64_t>(start + t + 1) * GAMMA))
        j = 0
        best = INFINITY
        best2 = INFINITY
        for k in range(n_shells):
            r = radii[k]
            for p in range(counts[k]):
                u = uniform(key, j)
                v = uniform(key, j + 1)
                j += 2
                if sampler == 0:
                    cphi = cos(M_PI * u)
                    sphi = sin(M_PI * u)
                else:
                    cphi = 1.0 - 2.0 * u
                    sphi = sqrt(max(0.0, 1.0 - cphi * cphi))
                # |p - o| does not depend on azimuth: screen before building p
                dz = r * cphi - r_obs
                if (r * sphi) * (r * sphi) + dz * dz >= best2:
                    continue
                theta = 2.0 * M_PI * v
                x = r * sphi * cos(theta)
                y = r * sphi * sin(theta)
                z = r * cphi
                dz = z - r_obs
                dist = sqrt(x * x + y * y + dz * dz)
                if dist < best:
                    # closest approach of segment observer -> point to the origin
                    vx = x
                    vy = y
                    vz = dz
                    vv = vx * vx + vy * vy + vz * vz
                    if vv > 0.0:
                        tt = -(r_obs * vz) / vv
                        tt = min(1.0, max(0.0, tt))
                    else:
                        tt = 0.0
                    wx = tt * vx
                    wy = tt * vy
                    wz = r_obs + tt * vz
                    if sqrt(wx * wx + wy * wy + wz * wz) >= clear:
                        best = dist
                        # slack keeps the screen from rejecting ties lost to rounding
                        best2 = best * best * (1.0 + 1e-12)
        out[t] = best


def nearest_distances(radii, counts, double r_obs, double r_e, int sampler,
                      seed, int64_t trial_start, int64_t trial_stop):
    """Nearest visible distance for trials ``[trial_start, trial_stop)``; ``inf`` if none."""
    cdef double[::1] r_view = np.ascontiguousarray(radii, dtype=np.float64)
    cdef int64_t[::1] c_view = np.ascontiguousarray(counts, dtype=np.int64)
    if r_view.shape[0] != c_view.shape[0]:
        raise ValueError("radii and counts differ in length")
    if trial_stop < trial_start:
        raise ValueError("trial_stop < trial_start")
    out = np.empty(trial_stop - trial_start, dtype=np.float64)
    cdef double[::1] o_view = out
    cdef uint64_t s = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    with nogil:
        _run(r_view, c_view, r_obs, r_e, sampler, s, trial_start, o_view)
    return out
