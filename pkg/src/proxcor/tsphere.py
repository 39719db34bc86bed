"""Uniform sampling from the sphere of equally-accurate vectors.

For an anchor u and a target correlation q, the zero-mean unit vectors
whose correlation with u equals q form an (n-3)-sphere of radius
sqrt(1-q^2) in the rotated tail coordinates.  Uniform samples come from
normalized Gaussian tails (Muller's method): tail = sqrt(1-q^2) * z/||z||
with z standard normal in n-2 dimensions, mapped back through the
anchored basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, InvalidParams
from .geometry import NormalizedVector, OrthonormalBasis, as_correlation, build_basis, pearson
from .rngstream import derive_seed

_DOM_TAILS = 0x54
_DOM_RHO = 0x52


@dataclass(frozen=True, eq=False)
class TsphereSpec:
    """Anchor, target correlation, and the basis the sampler rotates through."""

    anchor: NormalizedVector
    q: float
    basis: OrthonormalBasis | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "q", as_correlation(self.q))
        if self.basis is None:
            object.__setattr__(self, "basis", build_basis(self.anchor))
        elif self.basis.anchor is not self.anchor and not np.array_equal(
            self.basis.anchor.values, self.anchor.values
        ):
            raise ValueError("basis was built from a different anchor")

    @property
    def n(self) -> int:
        return self.anchor.n

    @property
    def radius(self) -> float:
        return math.sqrt(max(0.0, 1.0 - self.q * self.q))


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """Samples as rows of `vectors`; indexable as NormalizedVector."""

    spec: TsphereSpec
    seed: int
    vectors: np.ndarray

    def __len__(self) -> int:
        return self.vectors.shape[0]

    def __getitem__(self, i: int) -> NormalizedVector:
        return NormalizedVector(self.vectors[i])

    def anchor_correlations(self) -> np.ndarray:
        return self.vectors @ self.spec.anchor.values


def sample_tsphere(spec: TsphereSpec, count: int, seed: int) -> SampleBatch:
    """Draw `count` uniform samples from the sphere, deterministically in
    (seed, count, spec)."""
    if count < 1:
        raise InvalidParams(f"count must be >= 1, got {count}")
    n = spec.n
    d = n - 2
    tails = _kernels.sphere_tails(derive_seed(seed, _DOM_TAILS), count, d, spec.radius)
    coords = np.empty((count, n))
    coords[:, 0] = 0.0
    coords[:, 1] = spec.q
    coords[:, 2:] = tails
    vectors = coords @ spec.basis.rows
    return SampleBatch(spec=spec, seed=seed, vectors=vectors)


def expected_cross_correlation(q: float, r: float) -> float:
    """Expected correlation with a third vector at true correlation r:
    the attenuated product q*r."""
    return as_correlation(as_correlation(q) * as_correlation(r))


def cross_correlation_mc(
    u: NormalizedVector,
    v: NormalizedVector,
    q: float,
    count: int,
    seed: int,
) -> tuple[float, float]:
    """Monte Carlo mean and standard error of rho(u_hat, v) over uniform
    u_hat with correlation q to u.

    Computed in rotated coordinates: rho = q*rho(u,v) + tail . w where w
    is the tail of v in u's basis -- an exact identity, so no n-vector
    is materialized per sample.
    """
    if u.n != v.n:
        raise DimensionMismatch(f"lengths differ: {u.n} vs {v.n}")
    if count < 100:
        raise InvalidParams(f"count must be >= 100, got {count}")
    q = as_correlation(q)
    basis = build_basis(u)
    r = pearson(u, v)
    w = basis.rotate(v.values)[2:]
    radius = math.sqrt(max(0.0, 1.0 - q * q))
    rho = _kernels.rho_fixed_q(
        derive_seed(seed, _DOM_RHO), count, u.n - 2, q * r, radius, w
    )
    mean = float(rho.mean())
    stderr = float(rho.std(ddof=1) / math.sqrt(count))
    return mean, stderr
