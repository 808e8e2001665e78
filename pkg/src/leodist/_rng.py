"""Counter-based random streams, one per Monte-Carlo trial.

A trial's stream depends only on ``(seed, trial)``, so any partition of the
trials over workers reproduces the same draws. Draw ``j`` of a trial is
``mix(key + (j + 1) * GAMMA)`` with ``key = mix(seed ^ mix((trial + 1) * GAMMA))``
and ``mix`` the splitmix64 finaliser; uniforms keep the top 53 bits.
The compiled kernel implements the same recurrence.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
INV_2_53 = 1.0 / (1 << 53)

_GAMMA = np.uint64(GAMMA)
_MIX1 = np.uint64(MIX1)
_MIX2 = np.uint64(MIX2)
_S30, _S27, _S31, _S11 = (np.uint64(s) for s in (30, 27, 31, 11))


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def trial_key(seed: int, trial: int) -> int:
    return mix64((seed & MASK64) ^ mix64((trial + 1) * GAMMA))


def mix64_array(z: np.ndarray) -> np.ndarray:
    """Vectorised :func:`mix64` on a uint64 array (wrapping arithmetic)."""
    z = z ^ (z >> _S30)
    z = z * _MIX1
    z = z ^ (z >> _S27)
    z = z * _MIX2
    return z ^ (z >> _S31)


def trial_keys(seed: int, trials: np.ndarray) -> np.ndarray:
    t = np.asarray(trials, dtype=np.uint64)
    seed_arr = np.full(t.shape, seed & MASK64, dtype=np.uint64)
    return mix64_array(seed_arr ^ mix64_array((t + np.uint64(1)) * _GAMMA))


def uniforms(keys: np.ndarray, counters: np.ndarray) -> np.ndarray:
    """Uniforms on [0, 1) for every (key, counter) pair, broadcast."""
    keys = np.asarray(keys, dtype=np.uint64)
    counters = np.asarray(counters, dtype=np.uint64)
    bits = mix64_array(keys + (counters + np.uint64(1)) * _GAMMA)
    return (bits >> _S11).astype(np.float64) * INV_2_53


class TrialStream:
    """Sequential view of one trial's stream, with a ``random(n)`` method like numpy's."""

    def __init__(self, seed: int, trial: int):
        self.key = trial_key(seed, trial)
        self.counter = 0

    def random(self, size: int) -> np.ndarray:
        j = np.arange(self.counter, self.counter + size, dtype=np.uint64)
        self.counter += size
        return uniforms(np.uint64(self.key), j)
