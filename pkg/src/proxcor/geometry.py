"""Vector standardization, Pearson correlation, and the anchored
orthonormal basis.

Everything downstream works with measurement vectors normalized to zero
mean and unit length, where the Pearson correlation of two vectors is
their plain dot product (the cosine of the angle between them).  The
basis built here rotates coordinates so that the all-ones direction is
axis 1 (hence zero-mean vectors have first coordinate 0) and the anchor
u is axis 2; with a coplanar v supplied, v lands in the span of axes 2
and 3 as (0, r, sqrt(1-r^2), 0, ..., 0).  In these coordinates the set
of zero-mean unit vectors with correlation q to u is the sphere
{(0, q, tail): ||tail|| = sqrt(1-q^2)} -- an (n-3)-sphere.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConstantVector,
    DegenerateCoplanar,
    DimensionMismatch,
    DimensionTooSmall,
    InvalidParams,
)

MEAN_NORM_TOL = 1e-12  # input validation
CONSTRUCTION_TOL = 1e-10  # basis construction invariants


def as_correlation(value: float) -> float:
    """Validate |value| <= 1 + 1e-12 and clamp roundoff into [-1, 1]."""
    v = float(value)
    if not abs(v) <= 1.0 + 1e-12:
        raise InvalidParams(f"correlation out of range: {v!r}")
    return min(1.0, max(-1.0, v))


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class NormalizedVector:
    """A length-n vector with zero mean and unit Euclidean norm, n >= 3."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _readonly(np.ravel(self.values)))
        n = self.values.shape[0]
        if n < 3:
            raise DimensionTooSmall(f"need at least 3 entries, got {n}")
        if abs(float(self.values.mean())) > MEAN_NORM_TOL:
            raise ValueError("vector mean exceeds 1e-12")
        if abs(float(np.linalg.norm(self.values)) - 1.0) > MEAN_NORM_TOL:
            raise ValueError("vector norm differs from 1 by more than 1e-12")

    @property
    def n(self) -> int:
        return self.values.shape[0]


def standardize(x) -> NormalizedVector:
    """Center x and scale it to unit norm.

    Pearson correlations are unchanged by this map, so standardized
    vectors are the canonical representation of raw measurements.
    """
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.shape[0] < 3:
        raise DimensionTooSmall(f"need at least 3 entries, got {x.shape[0]}")
    if not np.all(np.isfinite(x)):
        raise InvalidParams("non-finite entries in input vector")
    centered = x - x.mean()
    nrm = float(np.linalg.norm(centered))
    if nrm <= 1e-12 * max(1.0, float(np.abs(x).max())):
        raise ConstantVector("zero sample variance: correlation undefined")
    return NormalizedVector(centered / nrm)


def pearson(a: NormalizedVector, b: NormalizedVector) -> float:
    """Correlation of two standardized vectors: their dot product."""
    if a.n != b.n:
        raise DimensionMismatch(f"lengths differ: {a.n} vs {b.n}")
    return as_correlation(float(a.values @ b.values))


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    """Rotation with row 1 = ones/sqrt(n), row 2 = anchor u.

    Row 3 is the normalized residual of the optional coplanar v; the
    remaining rows are a deterministic orthonormal completion.
    """

    rows: np.ndarray
    anchor: NormalizedVector
    coplanar: NormalizedVector | None = field(default=None)

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    def rotate(self, x: np.ndarray) -> np.ndarray:
        return self.rows @ np.asarray(x, dtype=np.float64)

    def unrotate(self, y: np.ndarray) -> np.ndarray:
        return self.rows.T @ np.asarray(y, dtype=np.float64)


def _canonical_signs(rows: np.ndarray) -> np.ndarray:
    # make each completion row's largest-magnitude entry positive so the
    # completion does not depend on LAPACK sign conventions
    out = rows.copy()
    for i in range(out.shape[0]):
        j = int(np.argmax(np.abs(out[i])))
        if out[i, j] < 0:
            out[i] = -out[i]
    return out


def build_basis(
    u: NormalizedVector,
    v: NormalizedVector | None = None,
    *,
    completion_seed: int | None = None,
) -> OrthonormalBasis:
    """Orthonormal basis anchored at u (optionally coplanar with v).

    The completion of rows 4..n is any orthonormal complement; all
    quantities computed from tail coordinates are invariant to the
    choice.  The default completion (Householder QR of the known rows,
    canonical signs) is deterministic; completion_seed selects an
    alternative completion, used to test that invariance.
    """
    n = u.n
    known = [np.full(n, 1.0 / np.sqrt(n)), u.values.copy()]
    if v is not None:
        if v.n != n:
            raise DimensionMismatch(f"lengths differ: {n} vs {v.n}")
        r = pearson(u, v)
        if 1.0 - abs(r) < 1e-10:
            raise DegenerateCoplanar(
                f"|rho(u, v)| = {abs(r):.12f}: third axis undefined"
            )
        resid = v.values - r * u.values
        known.append(resid / np.linalg.norm(resid))
    m = np.array(known)
    qfull, _ = np.linalg.qr(m.T, mode="complete")
    comp = qfull[:, m.shape[0]:].T
    if completion_seed is not None and comp.shape[0] > 0:
        rng = np.random.default_rng(completion_seed)
        k = comp.shape[0]
        rot, _ = np.linalg.qr(rng.standard_normal((k, k)))
        comp = rot @ comp
    rows = np.vstack([m, _canonical_signs(comp)])
    return OrthonormalBasis(rows=_readonly(rows), anchor=u, coplanar=v)


def tail_coordinates(
    u_hat: NormalizedVector, basis: OrthonormalBasis
) -> tuple[float, np.ndarray]:
    """(q_hat, tail): correlation with the anchor and the last n-2
    rotated coordinates; u_hat reconstructs as basis.unrotate((0, q_hat, tail))."""
    if u_hat.n != basis.n:
        raise DimensionMismatch(f"lengths differ: {u_hat.n} vs {basis.n}")
    y = basis.rotate(u_hat.values)
    return as_correlation(float(y[1])), y[2:]
