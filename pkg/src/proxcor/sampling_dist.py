"""Approximate sampling distribution of an estimated accuracy, and the
false-correlation probability marginalized over it.

A detector validated at population correlation q does not hit q exactly
on a fresh n-subject sample; the achieved correlation follows a
sampling distribution.  The second-order approximation used here is the
two-sided power kernel

    Pr(q_hat | q, n)  proportional to  (1 - q_hat)^m1 (1 + q_hat)^m2

on (-1, 1), with

    sigma_q = (1 - q^2)/sqrt(n) * (1 + (1 + 5.5 q^2)/(2n))
    mu_q    = sign(q) * sqrt(q^2 - c/n - c(1 + 5 q^2)/(2 n^2)),
                c = q^2 (1 - q^2)
    lambda  = (1 - mu_q^2) / sigma_q^2
    m1      = (lambda - 1)(1 - mu_q)/2 - 1
    m2      = (lambda - 1)(1 + mu_q)/2 - 1

The kernel is only given up to proportionality; the normalization
constant is computed numerically (in the log domain -- for large n the
kernel peaks above 1e300).  Sampling inverts a 4097-point tabulated CDF
with monotone (piecewise-linear) interpolation.

marginal_false_corr_prob integrates h over this distribution,
extending h to the negative-q_hat region by the reflection identity
(see falsecorr.false_corr_prob_extended).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ApproximationBreakdown, InvalidParams
from .falsecorr import FalseCorrParams, ProbabilityResult, false_corr_prob_extended
from .quadrature import adaptive_quad
from .rngstream import derive_seed, stream_root, uniforms

_DOM_QHAT = 0x51
_CDF_POINTS = 4097
_EXP_CLIP = 700.0

# 4-point Gauss-Legendre rule on [0, 1], used per CDF-table cell
_GL_X = np.array(
    [0.069431844202974, 0.330009478207572, 0.669990521792428, 0.930568155797026]
)
_GL_W = np.array(
    [0.173927422568727, 0.326072577431273, 0.326072577431273, 0.173927422568727]
)


@dataclass(frozen=True)
class SoperDist:
    q: float
    n: int
    mu_q: float
    sigma_q: float
    lam: float
    m1: float
    m2: float
    log_norm_const: float


def _log_kernel(dist: SoperDist, x: np.ndarray) -> np.ndarray:
    return dist.m1 * np.log1p(-x) + dist.m2 * np.log1p(x)


def _pdf_array(dist: SoperDist, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    inside = (x > -1.0) & (x < 1.0)
    expo = _log_kernel(dist, x[inside]) - dist.log_norm_const
    out[inside] = np.exp(np.minimum(expo, _EXP_CLIP))
    return out


def soper_build(q: float, n: int) -> SoperDist:
    """Construct the distribution of the achieved correlation q_hat."""
    if not float(n).is_integer() or int(n) < 4:
        raise InvalidParams(f"n must be an integer >= 4, got {n!r}")
    n = int(n)
    if not (-1.0 < q < 1.0):
        raise InvalidParams(f"q must be in (-1, 1), got {q!r}")
    q2 = q * q
    c = q2 * (1.0 - q2)
    radicand = q2 - c / n - c * (1.0 + 5.0 * q2) / (2.0 * n * n)
    if radicand < 0.0:
        raise ApproximationBreakdown(
            f"mean radicand negative ({radicand:.3e}) at q={q}, n={n}"
        )
    mu = math.copysign(math.sqrt(radicand), q)
    sigma = (1.0 - q2) / math.sqrt(n) * (1.0 + (1.0 + 5.5 * q2) / (2.0 * n))
    lam = (1.0 - mu * mu) / (sigma * sigma)
    if lam <= 1.0:
        raise ApproximationBreakdown(f"lambda = {lam:.6f} <= 1 at q={q}, n={n}")
    m1 = 0.5 * (lam - 1.0) * (1.0 - mu) - 1.0
    m2 = 0.5 * (lam - 1.0) * (1.0 + mu) - 1.0

    # normalize in the log domain, offsetting by the kernel's maximum
    probe = np.linspace(-1.0 + 1e-9, 1.0 - 1e-9, 2049)
    logk = m1 * np.log1p(-probe) + m2 * np.log1p(probe)
    offset = float(logk.max())
    if m1 > 0.0 and m2 > 0.0:
        mode = (m2 - m1) / (m1 + m2)
        offset = max(offset, m1 * math.log1p(-mode) + m2 * math.log1p(mode))

    def scaled_kernel(x):
        # deep refinement against a (1 -+ x)^m endpoint singularity can
        # round a node onto the endpoint itself; the open-interval mask
        # keeps the exp(m * -inf) garbage out of the panel sums
        out = np.zeros_like(x)
        inside = (x > -1.0) & (x < 1.0)
        expo = m1 * np.log1p(-x[inside]) + m2 * np.log1p(x[inside]) - offset
        out[inside] = np.exp(np.minimum(expo, _EXP_CLIP))
        return out

    breaks = [
        b
        for b in (0.0, *(mu + k * sigma for k in (-8, -4, -2, -1, 1, 2, 4, 8)), mu)
        if -1.0 < b < 1.0
    ]
    integral, _ = adaptive_quad(
        scaled_kernel, -1.0, 1.0, rel_tol=1e-9, abs_tol=1e-14, breakpoints=breaks
    )
    return SoperDist(
        q=q,
        n=n,
        mu_q=mu,
        sigma_q=sigma,
        lam=lam,
        m1=m1,
        m2=m2,
        log_norm_const=offset + math.log(integral),
    )


def soper_pdf(dist: SoperDist, q_hat: float) -> float:
    """Normalized density at q_hat; zero outside (-1, 1)."""
    return float(_pdf_array(dist, np.asarray([q_hat]))[0])


def _cdf_table(dist: SoperDist) -> tuple[np.ndarray, np.ndarray]:
    grid = np.linspace(-1.0, 1.0, _CDF_POINTS)
    lo = grid[:-1]
    width = grid[1] - grid[0]
    nodes = lo[:, None] + width * _GL_X[None, :]
    cell = width * (_pdf_array(dist, nodes) @ _GL_W)
    cdf = np.concatenate([[0.0], np.cumsum(cell)])
    cdf /= cdf[-1]
    return grid, cdf


def soper_sample(dist: SoperDist, count: int, seed: int) -> np.ndarray:
    """Inverse-CDF draws from the tabulated distribution."""
    if count < 1:
        raise InvalidParams(f"count must be >= 1, got {count}")
    grid, cdf = _cdf_table(dist)
    root = stream_root(derive_seed(seed, _DOM_QHAT))
    u = uniforms(root, np.arange(count, dtype=np.uint64))
    return np.interp(u, cdf, grid)


def numeric_mean_var(dist: SoperDist) -> tuple[float, float]:
    """First two moments of the density by quadrature."""
    breaks = [
        b
        for b in (dist.mu_q + k * dist.sigma_q for k in (-8, -4, -2, -1, 0, 1, 2, 4, 8))
        if -1.0 < b < 1.0
    ]
    mean, _ = adaptive_quad(
        lambda x: x * _pdf_array(dist, x),
        -1.0,
        1.0,
        rel_tol=1e-9,
        abs_tol=1e-12,
        breakpoints=breaks,
    )
    second, _ = adaptive_quad(
        lambda x: x * x * _pdf_array(dist, x),
        -1.0,
        1.0,
        rel_tol=1e-9,
        abs_tol=1e-12,
        breakpoints=breaks,
    )
    return mean, second - mean * mean


def marginal_false_corr_prob(
    n: int, q: float, r: float, rel_tol: float = 1e-6
) -> ProbabilityResult:
    """False-correlation probability averaged over the sampling
    distribution of the achieved accuracy q_hat."""
    params = FalseCorrParams(n, q, r)
    if q >= 1.0:
        raise InvalidParams("marginalization needs q < 1 (q = 1 never varies)")
    dist = soper_build(q, params.n)

    def integrand(x):
        pdf = _pdf_array(dist, x)
        out = np.zeros_like(pdf)
        # nodes with sub-1e-18 density cannot move the integral past the
        # 1e-10 absolute floor; skip their (expensive) inner quadratures
        for i in np.nonzero(pdf > 1e-18)[0]:
            out[i] = false_corr_prob_extended(params.n, float(x[i]), r) * pdf[i]
        return out

    breaks = [
        b
        for b in (
            0.0,
            dist.mu_q - 6 * dist.sigma_q,
            dist.mu_q - 2 * dist.sigma_q,
            dist.mu_q,
            dist.mu_q + 2 * dist.sigma_q,
            dist.mu_q + 6 * dist.sigma_q,
        )
        if -1.0 < b < 1.0
    ]
    value, err = adaptive_quad(
        integrand, -1.0, 1.0, rel_tol=rel_tol, abs_tol=1e-10, breakpoints=breaks
    )
    value = min(max(value, 0.0), 1.0)
    return ProbabilityResult(value, "quadrature", err + 1e-9)
