"""Ensemble coverage analysis: how broadly a set of detector output
vectors spreads over the sphere of equally-accurate vectors.

The pipeline mirrors a five-step visualization procedure: standardize,
rotate through the anchored basis, keep the last n-2 (tail)
coordinates, center, and project onto the top two principal axes (SVD).
Points land on a disc whose radius is bounded by the largest tail norm
sqrt(1 - q_hat^2).  Spread is quantified by the trace of the sample
covariance of the tail coordinates -- rotation-invariant, hence
independent of both the basis completion and the PCA step -- and tested
against the null of uniform sphere draws matched to each record's own
q_hat (a radius mismatch would bias the trace).  The Monte Carlo
p-value uses the add-one estimator, one-tailed toward small traces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, EmptyBand, InvalidParams, TooFewRecords
from .geometry import NormalizedVector, as_correlation, build_basis, pearson
from .rngstream import derive_seed

_DOM_NULL = 0x60


@dataclass(frozen=True, eq=False)
class EnsembleRecord:
    record_id: str
    tag: str
    vector: NormalizedVector
    q_hat: float


def make_record(
    record_id: str, tag: str, vector: NormalizedVector, anchor: NormalizedVector
) -> EnsembleRecord:
    """Build a record, recomputing q_hat against the anchor."""
    return EnsembleRecord(record_id, tag, vector, pearson(vector, anchor))


@dataclass(frozen=True, eq=False)
class DiscProjection:
    points: np.ndarray  # (m, 2)
    explained_variance: tuple[float, float]
    radius_bound: float


@dataclass(frozen=True, eq=False)
class CoverageReport:
    trace_detectors: float
    null_traces: np.ndarray
    p_value: float
    min_pairwise_corr: float
    band: tuple[float, float] | None
    tag_counts: dict[str, int]
    tag_traces: dict[str, float]
    trials: int
    seed: int


def filter_band(
    records: list[EnsembleRecord], q_lo: float, q_hi: float
) -> list[EnsembleRecord]:
    """Records with q_lo <= q_hat <= q_hi (inclusive), order preserved."""
    q_lo = as_correlation(q_lo)
    q_hi = as_correlation(q_hi)
    if q_lo > q_hi:
        raise InvalidParams(f"band bounds reversed: q_lo={q_lo} > q_hi={q_hi}")
    kept = [rec for rec in records if q_lo <= rec.q_hat <= q_hi]
    if not kept:
        raise EmptyBand(f"no record has q_hat in [{q_lo}, {q_hi}]")
    return kept


def _tail_matrix(records: list[EnsembleRecord], anchor: NormalizedVector) -> np.ndarray:
    n = anchor.n
    for rec in records:
        if rec.vector.n != n:
            raise DimensionMismatch(
                f"record {rec.record_id}: length {rec.vector.n} != anchor {n}"
            )
    basis = build_basis(anchor)
    stacked = np.array([rec.vector.values for rec in records])
    return (stacked @ basis.rows.T)[:, 2:]


def disc_projection(
    records: list[EnsembleRecord], anchor: NormalizedVector
) -> DiscProjection:
    """2-D view of the records' tail coordinates (centered PCA via SVD)."""
    if len(records) < 3:
        raise TooFewRecords(f"need >= 3 records, got {len(records)}")
    tails = _tail_matrix(records, anchor)
    centered = tails - tails.mean(axis=0)
    _, svals, vt = np.linalg.svd(centered, full_matrices=False)
    points = centered @ vt[:2].T
    var = (svals**2) / (len(records) - 1)
    ev0 = float(var[0]) if var.shape[0] > 0 else 0.0
    ev1 = float(var[1]) if var.shape[0] > 1 else 0.0
    radius = float(np.sqrt(np.max(1.0 - np.array([r.q_hat for r in records]) ** 2)))
    return DiscProjection(points=points, explained_variance=(ev0, ev1), radius_bound=radius)


def covariance_trace(records: list[EnsembleRecord], anchor: NormalizedVector) -> float:
    """Trace of the tail-coordinate sample covariance (m-1 denominator)."""
    if len(records) < 2:
        raise TooFewRecords(f"need >= 2 records, got {len(records)}")
    tails = _tail_matrix(records, anchor)
    return float(np.var(tails, axis=0, ddof=1).sum())


def min_pairwise_correlation(records: list[EnsembleRecord]) -> float:
    """Smallest correlation over all record pairs."""
    if len(records) < 2:
        raise TooFewRecords(f"need >= 2 records, got {len(records)}")
    stacked = np.array([rec.vector.values for rec in records])
    gram = stacked @ stacked.T
    return float(gram[np.triu_indices(len(records), k=1)].min())


def coverage_significance(
    records: list[EnsembleRecord],
    anchor: NormalizedVector,
    trials: int,
    seed: int,
    band: tuple[float, float] | None = None,
) -> CoverageReport:
    """One-tailed Monte Carlo test of whether the ensemble covers the
    sphere less than uniform draws would.

    Each null trial redraws every record uniformly at its own q_hat and
    recomputes the trace; p = (1 + #{null <= observed}) / (1 + trials).
    """
    if len(records) < 3:
        raise TooFewRecords(f"need >= 3 records, got {len(records)}")
    if trials < 999:
        raise InvalidParams(f"trials must be >= 999, got {trials}")
    observed = covariance_trace(records, anchor)
    radii = np.sqrt(1.0 - np.array([r.q_hat for r in records]) ** 2)
    null = _kernels.null_covariance_traces(
        derive_seed(seed, _DOM_NULL), trials, len(records), anchor.n - 2, radii
    )
    p_value = (1 + int(np.count_nonzero(null <= observed))) / (1 + trials)
    min_pair = min_pairwise_correlation(records)

    tag_counts: dict[str, int] = {}
    for rec in records:
        tag_counts[rec.tag] = tag_counts.get(rec.tag, 0) + 1
    tag_traces = {
        tag: covariance_trace([r for r in records if r.tag == tag], anchor)
        for tag, cnt in tag_counts.items()
        if cnt >= 2
    }
    return CoverageReport(
        trace_detectors=observed,
        null_traces=null,
        p_value=p_value,
        min_pairwise_corr=min_pair,
        band=band,
        tag_counts=tag_counts,
        tag_traces=tag_traces,
        trials=trials,
        seed=seed,
    )
