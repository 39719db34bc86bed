"""Synthetic detector ensembles.

Stands in for the expensive real thing (many retrained networks):
clusters of detectors whose tail directions share a cluster center plus
within-cluster noise, with the achieved accuracy jittered around a
target.  A huge within-cluster spread washes out the centers and
reproduces uniform sphere coverage; a tiny one produces the tight,
significantly-under-dispersed ensembles the coverage test is meant to
flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coverage import EnsembleRecord
from .errors import InfeasibleConfig
from .geometry import NormalizedVector, build_basis
from .rngstream import derive_seed, normals_range, stream_root

_DOM_CENTERS = 0x80
_DOM_EPS = 0x81
_DOM_JITTER = 0x82
_QHAT_MARGIN = 1e-6


@dataclass(frozen=True, eq=False)
class SynthConfig:
    anchor: NormalizedVector
    target_q: float
    clusters: int
    within_spread: float
    between_spread: float
    count_per_cluster: int
    seed: int
    q_jitter_sd: float = 0.02

    def __post_init__(self):
        if not (0.0 < self.target_q < 1.0):
            raise InfeasibleConfig(f"target_q must be in (0, 1), got {self.target_q!r}")
        if self.clusters < 1 or self.count_per_cluster < 1:
            raise InfeasibleConfig("clusters and count_per_cluster must be >= 1")
        if self.within_spread < 0 or self.between_spread < 0 or self.q_jitter_sd < 0:
            raise InfeasibleConfig("spreads must be >= 0")
        if self.within_spread == 0 and self.between_spread == 0:
            raise InfeasibleConfig("zero within and between spread: no tail direction")


def generate_ensemble(config: SynthConfig) -> list[EnsembleRecord]:
    """Deterministic ensemble for a config: records tagged cluster-k with
    tail_j = sqrt(1-q_hat_j^2) * normalize(center_k + within_spread * eps_j)."""
    n = config.anchor.n
    d = n - 2
    basis = build_basis(config.anchor)
    total = config.clusters * config.count_per_cluster

    center_root = stream_root(derive_seed(config.seed, _DOM_CENTERS))
    centers = normals_range(center_root, 0, config.clusters * d).reshape(
        config.clusters, d
    )
    nrm = np.linalg.norm(centers, axis=1)
    if np.any(nrm == 0.0):
        raise InfeasibleConfig("degenerate cluster center draw")
    centers = config.between_spread * centers / nrm[:, None]

    eps = normals_range(stream_root(derive_seed(config.seed, _DOM_EPS)), 0, total * d)
    eps = eps.reshape(total, d)
    jit = normals_range(stream_root(derive_seed(config.seed, _DOM_JITTER)), 0, total)
    q_hats = np.clip(
        config.target_q + config.q_jitter_sd * jit, _QHAT_MARGIN, 1.0 - _QHAT_MARGIN
    )

    records = []
    for k in range(config.clusters):
        for j in range(config.count_per_cluster):
            idx = k * config.count_per_cluster + j
            direction = centers[k] + config.within_spread * eps[idx]
            dn = float(np.linalg.norm(direction))
            if dn == 0.0:
                raise InfeasibleConfig(
                    f"record {idx}: cluster center and noise cancelled exactly"
                )
            q_hat = float(q_hats[idx])
            tail = math.sqrt(1.0 - q_hat * q_hat) * direction / dn
            coords = np.concatenate([[0.0, q_hat], tail])
            vec = NormalizedVector(basis.unrotate(coords))
            records.append(
                EnsembleRecord(
                    record_id=f"det-{k}-{j}",
                    tag=f"cluster-{k}",
                    vector=vec,
                    q_hat=q_hat,
                )
            )
    return records
