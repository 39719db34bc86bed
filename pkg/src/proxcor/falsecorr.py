"""Analytic probability of a sign-flipped correlation.

For a detector of accuracy q in (0, 1] and a true correlation r != 0,
the probability that the estimated correlation carries the wrong sign
(false positive for r < 0, false negative for r > 0) is

    h(n, q, r) = 1/2 * I[c^2 <= 1 - q^2]                      (n = 3)
    h(n, q, r) = 1/2 * Int_0^inf f_1(t) F_{n-3}(alpha t) dt   (n > 3)

with c = |q r| / sqrt(1 - r^2) and alpha = (1 - q^2 - c^2) / c^2, where
f_1 / F_{n-3} are chi-square density and distribution functions.  The
substitution t = s^2 removes the t^{-1/2} endpoint singularity of f_1:

    h = 1/2 * sqrt(2/pi) * Int_0^12 exp(-s^2/2) F_{n-3}(alpha s^2) ds

(the tail beyond s = 12 is below e^-72 and is folded into the error
bound).  Since a chi2_1 / chi2_{n-3} ratio has a Beta(1/2, (n-3)/2)
law, the same probability has the closed form

    h = 1/2 * (1 - I_x(1/2, (n-3)/2)),   x = c^2 / (1 - q^2),

kept here as an independent cross-check of the quadrature, not as the
primary path.  h is decreasing in n and in q wherever it is positive,
and vanishes identically once q^2 >= 1 - r^2 (then even the farthest
sphere point cannot flip the sign).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betainc as _betainc

from .errors import InvalidParams
from .quadrature import adaptive_quad
from .special import chi2_cdf, chi2_cdf_array, chi2_pdf  # noqa: F401  (re-export)

_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
_S_CUT = 12.0
_TAIL_BOUND = 4e-33  # sqrt(2/pi) * int_12^inf exp(-s^2/2) ds, rounded up


@dataclass(frozen=True)
class FalseCorrParams:
    """(n, q, r) with n >= 3 subjects, accuracy q in (0, 1], true
    correlation r in (-1, 1) \\ {0}; the offset c is always derived."""

    n: int
    q: float
    r: float

    def __post_init__(self):
        if not float(self.n).is_integer() or int(self.n) < 3:
            raise InvalidParams(f"n must be an integer >= 3, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        if not (0.0 < self.q <= 1.0):
            raise InvalidParams(f"q must be in (0, 1], got {self.q!r}")
        if self.r == 0.0:
            raise InvalidParams("false correlation undefined at r=0")
        if abs(self.r) >= 1.0 or 1.0 - self.r * self.r < 1e-12:
            raise InvalidParams(f"|r| too close to 1: {self.r!r}")

    @property
    def c(self) -> float:
        return abs(self.q * self.r) / math.sqrt(1.0 - self.r * self.r)


@dataclass(frozen=True)
class ProbabilityResult:
    value: float
    method: str  # indicator_n3 | quadrature | closed_form
    abs_error_bound: float


def false_corr_prob(
    params: FalseCorrParams, rel_tol: float = 1e-9
) -> ProbabilityResult:
    """h(n, q, r) by the indicator (n = 3) or adaptive quadrature (n > 3)."""
    n, q = params.n, params.q
    c2 = params.c**2
    slack = 1.0 - q * q - c2
    if n == 3:
        value = 0.5 if c2 <= 1.0 - q * q else 0.0
        return ProbabilityResult(value, "indicator_n3", 0.0)
    if slack <= 0.0:
        return ProbabilityResult(0.0, "quadrature", 0.0)
    alpha = slack / c2
    dof = n - 3

    def integrand(s):
        return _SQRT_2_OVER_PI * np.exp(-0.5 * s * s) * chi2_cdf_array(dof, alpha * s * s)

    # the CDF transitions around alpha * s^2 ~ dof; pave the splitter across
    # the whole rise, else a huge alpha squeezes it between the first panel's
    # nodes and its residual mass goes unseen (the 16x break puts the tail of
    # the transition below e^-100)
    s_mid = math.sqrt(max(dof, 1.0) / alpha)
    breaks = [
        x
        for x in (k * s_mid for k in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0))
        if 0.0 < x < _S_CUT
    ]
    integral, err = adaptive_quad(
        integrand, 0.0, _S_CUT, rel_tol=rel_tol, abs_tol=1e-15, breakpoints=breaks
    )
    value = 0.5 * integral
    return ProbabilityResult(
        min(max(value, 0.0), 0.5), "quadrature", 0.5 * err + _TAIL_BOUND
    )


def false_corr_prob_closed_form(params: FalseCorrParams) -> ProbabilityResult:
    """Incomplete-beta form of h; defined for n > 3."""
    if params.n <= 3:
        raise InvalidParams("closed form requires n > 3")
    c2 = params.c**2
    one_minus_q2 = 1.0 - params.q * params.q
    if one_minus_q2 - c2 <= 0.0:
        return ProbabilityResult(0.0, "closed_form", 0.0)
    x = c2 / one_minus_q2
    value = 0.5 * (1.0 - float(_betainc(0.5, 0.5 * (params.n - 3), x)))
    return ProbabilityResult(value, "closed_form", 1e-13)


def false_corr_prob_extended(
    n: int, q_hat: float, r: float, rel_tol: float = 1e-9
) -> float:
    """h extended to any detector correlation q_hat in [-1, 1].

    Negation of u_hat maps the sphere at q_hat onto the sphere at
    -q_hat and flips the sign of every cross correlation, so for
    q_hat < 0 the sign-flip probability is 1 - h(n, -q_hat, r); at
    q_hat = 0 it is 1/2 by symmetry.
    """
    if q_hat > 0.0:
        return false_corr_prob(FalseCorrParams(n, q_hat, r), rel_tol).value
    if q_hat == 0.0:
        return 0.5
    return 1.0 - false_corr_prob(FalseCorrParams(n, -q_hat, r), rel_tol).value


def false_corr_curve(
    q: float,
    r: float,
    n_min: int,
    n_max: int,
    marginal: bool = False,
) -> list[tuple[int, float]]:
    """One probability per subject count n in [n_min, n_max]."""
    if not (3 <= n_min <= n_max):
        raise InvalidParams(f"need 3 <= n_min <= n_max, got {n_min}..{n_max}")
    if marginal:
        from .sampling_dist import marginal_false_corr_prob

        return [
            (n, marginal_false_corr_prob(n, q, r).value)
            for n in range(n_min, n_max + 1)
        ]
    return [
        (n, false_corr_prob(FalseCorrParams(n, q, r)).value)
        for n in range(n_min, n_max + 1)
    ]
