"""Counter-based random streams.

Every random quantity in this package is addressed by (seed, counter):
the k-th uniform of a stream is a 64-bit hash of the counter, never the
output of stateful generator advancement.  That buys three properties
the sampling contracts require:

  * determinism: a (seed, count, shape) triple always produces the same
    batch, bit for bit, on any chunking of the work;
  * random access: sample index i owns normal indices i*d .. i*d+d-1,
    so chunks and threads never share or race a generator state;
  * domain separation: independent sub-streams are derived by hashing a
    tag into the seed (derive_seed), so e.g. the q-hat draws and the
    tail draws of a two-stage sampler cannot collide.

The hash is the splitmix64 finalizer (Stafford mix 13) applied to
root + counter * GAMMA, i.e. the splitmix64 sequence with random
access, which passes BigCrush.  Uniforms take the top 53 bits mapped to
bin centers, so they lie strictly inside (0, 1) and are safe under log.
Normals are Box-Muller (cosine branch); each normal consumes the two
uniforms at counters 2k and 2k+1.

The numba kernels in _kernels.py reimplement exactly this arithmetic
scalar-wise; any edit here must be mirrored there.
"""

from __future__ import annotations

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF
GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_SEED_SALT = 0xD1B54A32D192ED03
_TWO_NEG53 = 2.0**-53
TWO_PI = 2.0 * np.pi

_U = np.uint64


def mix64(x: int) -> int:
    """Scalar splitmix64 finalizer on a Python int (mod 2**64)."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * _MIX1) & MASK64
    x = ((x ^ (x >> 27)) * _MIX2) & MASK64
    return x ^ (x >> 31)


def stream_root(seed: int) -> int:
    """Map a user seed (any Python int) to the stream's base state."""
    return mix64(mix64(seed & MASK64) ^ _SEED_SALT)


def derive_seed(seed: int, tag: int) -> int:
    """Independent sub-seed for domain `tag` of a user seed."""
    return mix64(stream_root(seed) + ((tag & MASK64) * GAMMA & MASK64))


def _mix64_arr(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _U(30))) * _U(_MIX1)
    z = (z ^ (z >> _U(27))) * _U(_MIX2)
    return z ^ (z >> _U(31))


def uniforms(root: int, counters: np.ndarray) -> np.ndarray:
    """Uniform (0,1) doubles at the given uint64 counters."""
    h = _mix64_arr(_U(root) + counters.astype(np.uint64) * _U(GAMMA))
    return ((h >> _U(11)).astype(np.float64) + 0.5) * _TWO_NEG53


def normals(root: int, kidx: np.ndarray) -> np.ndarray:
    """Standard normals at the given normal indices (Box-Muller)."""
    k = kidx.astype(np.uint64)
    u1 = uniforms(root, k * _U(2))
    u2 = uniforms(root, k * _U(2) + _U(1))
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(TWO_PI * u2)


def normals_range(root: int, start: int, count: int) -> np.ndarray:
    return normals(root, np.arange(start, start + count, dtype=np.uint64))
