"""Brute-force Monte Carlo estimators for the analytic results.

These stay deliberately simple: build an actual (u, v) pair at the
requested true correlation, draw detector vectors from the sphere, and
count sign flips.  Counting happens on the exact rotated-coordinate
identity rho(u_hat, v) = q_hat * r + tail . w, which spares an n-vector
per draw but is not an approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DimensionTooSmall, InvalidParams
from .falsecorr import FalseCorrParams
from .geometry import NormalizedVector, build_basis, pearson, standardize
from .rngstream import derive_seed, normals_range, stream_root
from .sampling_dist import soper_build, soper_sample

_DOM_PAIR_U = 0x70
_DOM_PAIR_W = 0x71
_DOM_FLIP = 0x72
_DOM_MARG = 0x73


@dataclass(frozen=True)
class McEstimate:
    estimate: float
    stderr: float
    count: int
    seed: int


def construct_pair(n: int, r: float, seed: int) -> tuple[NormalizedVector, NormalizedVector]:
    """Random standardized (u, v) with rho(u, v) = r to machine precision:
    v = r*u + sqrt(1-r^2)*w for a random unit w orthogonal to u."""
    if n < 3:
        raise DimensionTooSmall(f"need n >= 3, got {n}")
    if abs(r) > 1.0:
        raise InvalidParams(f"|r| must be <= 1, got {r!r}")
    u = standardize(normals_range(stream_root(derive_seed(seed, _DOM_PAIR_U)), 0, n))
    w_raw = normals_range(stream_root(derive_seed(seed, _DOM_PAIR_W)), 0, n)
    w_raw = w_raw - w_raw.mean()
    w_raw = w_raw - (u.values @ w_raw) * u.values
    w = w_raw / np.linalg.norm(w_raw)
    v = NormalizedVector(r * u.values + math.sqrt(max(0.0, 1.0 - r * r)) * w)
    return u, v


def _mismatch_fraction(rho: np.ndarray, r: float) -> float:
    # the sign-flip event per the defining inequality: rho >= 0 counts
    # against r < 0 (ties included), rho < 0 counts against r > 0
    if r < 0:
        return float(np.count_nonzero(rho >= 0.0)) / rho.shape[0]
    return float(np.count_nonzero(rho < 0.0)) / rho.shape[0]


def false_corr_prob_mc(
    n: int, q: float, r: float, count: int, seed: int
) -> McEstimate:
    """Fraction of uniform sphere draws whose correlation with v has the
    wrong sign; stderr is the binomial formula."""
    FalseCorrParams(n, q, r)
    if count < 10_000:
        raise InvalidParams(f"count must be >= 10000, got {count}")
    u, v = construct_pair(n, r, seed)
    basis = build_basis(u)
    w = basis.rotate(v.values)[2:]
    radius = math.sqrt(max(0.0, 1.0 - q * q))
    rho = _kernels.rho_fixed_q(
        derive_seed(seed, _DOM_FLIP), count, n - 2, q * pearson(u, v), radius, w
    )
    p = _mismatch_fraction(rho, r)
    return McEstimate(p, math.sqrt(p * (1.0 - p) / count), count, seed)


def marginal_false_corr_prob_mc(
    n: int, q: float, r: float, count: int, seed: int
) -> McEstimate:
    """Two-stage oracle: q_hat from its sampling distribution, then a
    uniform draw from the sphere at that q_hat."""
    FalseCorrParams(n, q, r)
    if count < 10_000:
        raise InvalidParams(f"count must be >= 10000, got {count}")
    dist = soper_build(q, n)
    q_hats = soper_sample(dist, count, derive_seed(seed, _DOM_MARG))
    u, v = construct_pair(n, r, seed)
    basis = build_basis(u)
    w = basis.rotate(v.values)[2:]
    rho = _kernels.rho_variable_q(
        derive_seed(seed, _DOM_FLIP), q_hats, n - 2, pearson(u, v), w
    )
    p = _mismatch_fraction(rho, r)
    return McEstimate(p, math.sqrt(p * (1.0 - p) / count), count, seed)
