"""Deterministic random generation on top of a splitmix64 stream.

The generator is fully specified here so that a rerun in any language can
reproduce the same *sequence of draws* (sample counts and structure), even
though floating-point rounding may differ in the last bits:

* state update:  ``s <- (s + 0x9E3779B97F4A7C15) mod 2^64``
* output mix:    ``z = s; z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
  z ^= z >> 27; z *= 0x94D049BB133111EB; z ^= z >> 31``
* uniform double in [0, 1): top 53 bits of ``z`` times 2^-53
* standard normals: Box-Muller on consecutive uniforms (u clamped away
  from 0), two normals per pair, no caching across calls that draw an
  odd count
* complex standard normal: ``(x + iy) / sqrt(2)``

``split(seed, k)`` derives independent child seeds for per-sample
parallel determinism.
"""

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix(z):
    z &= _MASK
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK
    z ^= z >> 31
    return z


def split(seed, k):
    """Derive the k-th child seed of ``seed`` (order-independent fan-out)."""
    return _mix((seed + (k + 1) * _GOLDEN) & _MASK)


class SplitMix64:
    """Minimal splitmix64 stream with uniform / normal / complex draws."""

    def __init__(self, seed):
        self._state = int(seed) & _MASK

    def next_u64(self):
        self._state = (self._state + _GOLDEN) & _MASK
        return _mix(self._state)

    def uniform(self):
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * 2.0 ** -53

    def normals(self, count):
        """Array of ``count`` standard normals via Box-Muller."""
        out = np.empty(count)
        i = 0
        while i < count:
            u1 = max(self.uniform(), 2.0 ** -53)
            u2 = self.uniform()
            r = np.sqrt(-2.0 * np.log(u1))
            out[i] = r * np.cos(2.0 * np.pi * u2)
            i += 1
            if i < count:
                out[i] = r * np.sin(2.0 * np.pi * u2)
                i += 1
        return out

    def complex_normals(self, count):
        x = self.normals(count)
        y = self.normals(count)
        return (x + 1j * y) / np.sqrt(2.0)

    def complex_matrix(self, rows, cols):
        return self.complex_normals(rows * cols).reshape(rows, cols)
