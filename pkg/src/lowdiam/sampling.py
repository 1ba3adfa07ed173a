"""Seedable counter-based randomness.

Every independent consumer gets its own stream, addressed by a (seed, key
path) pair. The path is hashed into a Philox key, so derived streams are
independent of each other and of how many draws any sibling made. Identical
(seed, path) always reproduces identical draws, bit for bit, regardless of
thread schedule or platform.

Doubles come straight from raw 64-bit Philox words ((raw >> 11) * 2^-53), so
no numpy Generator method is in the loop. Exponentials are inverse-CDF:
-ln(1 - u) / beta.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

_KEY_BYTES = 16


class SamplingError(ValueError):
    pass


def _derive_key(seed: int, path: tuple) -> int:
    h = hashlib.sha256()
    h.update(b"lowdiam.stream")
    h.update(int(seed).to_bytes(8, "little", signed=False))
    for part in path:
        if isinstance(part, (bool,)):
            raise SamplingError("bool stream key parts are ambiguous")
        if isinstance(part, (int, np.integer)):
            h.update(b"i" + int(part).to_bytes(16, "little", signed=True))
        elif isinstance(part, str):
            data = part.encode("utf-8")
            h.update(b"s" + len(data).to_bytes(4, "little") + data)
        else:
            raise SamplingError(f"unsupported stream key part: {part!r}")
    return int.from_bytes(h.digest()[:_KEY_BYTES], "little")


class RandomStream:
    """One addressable stream of uniform doubles.

    Draws advance this stream's counter; `child(*parts)` derives a fresh
    independent stream whose draws never collide with the parent's.
    """

    __slots__ = ("seed", "path", "_bits")

    def __init__(self, seed: int, path: tuple = ()):
        if not isinstance(seed, (int, np.integer)) or int(seed) < 0:
            raise SamplingError("seed must be a non-negative integer")
        self.seed = int(seed)
        self.path = tuple(path)
        self._bits = np.random.Philox(key=_derive_key(self.seed, self.path))

    def child(self, *parts) -> "RandomStream":
        return RandomStream(self.seed, self.path + parts)

    def uniform01(self, size=None):
        """Uniform draws in [0, 1) with 53-bit resolution."""
        raw = self._bits.random_raw(size)
        if size is None:
            return (raw >> 11) * 2.0**-53
        return (raw >> np.uint64(11)) * 2.0**-53

    def __repr__(self):
        return f"RandomStream(seed={self.seed}, path={self.path})"


@dataclass(frozen=True)
class ExpParams:
    """Rate parameter for exponential draws."""

    beta: float

    def __post_init__(self):
        if not (np.isfinite(self.beta) and self.beta > 0):
            raise SamplingError("beta must be positive and finite")


def sample_exponential(stream: RandomStream, beta: float, size=None):
    """Exponential with rate beta via inverse CDF: -ln(1 - u) / beta.

    u = 0 maps to 0; the mean is 1/beta.
    """
    ExpParams(float(beta))
    u = stream.uniform01(size)
    return -np.log1p(-u) / beta


def sample_uniform(stream: RandomStream, hi: float, size=None):
    """Uniform on [0, hi]; hi = 0 yields exactly 0."""
    hi = float(hi)
    if not (np.isfinite(hi) and hi >= 0):
        raise SamplingError("hi must be finite and non-negative")
    u = stream.uniform01(size)
    return u * hi


def min_gap_probability(d, beta: float, c: float, trials: int,
                        stream: RandomStream) -> float:
    """Monte-Carlo frequency that the two smallest of d_i - Exp(beta) draws
    land within c of each other.

    `d` needs at least two entries. The exact probability is bounded by
    beta * c, which is what callers compare against.
    """
    d = np.asarray(d, dtype=np.float64)
    if d.ndim != 1 or len(d) < 2:
        raise SamplingError("need at least two offsets")
    if c < 0:
        raise SamplingError("gap width c must be non-negative")
    ExpParams(float(beta))
    if trials <= 0:
        raise SamplingError("trials must be positive")
    s = len(d)
    hits = 0
    chunk = max(1, min(trials, 4_000_000 // s))
    done = 0
    while done < trials:
        take = min(chunk, trials - done)
        delta = sample_exponential(stream, beta, size=(take, s))
        vals = d[None, :] - delta
        two = np.partition(vals, 1, axis=1)
        hits += int(np.count_nonzero(two[:, 1] - two[:, 0] <= c))
        done += take
    return hits / trials
