import math

import numpy as np
import pytest
from scipy import special as sp

from proxcor import InvalidDof, chi2_cdf, chi2_pdf
from proxcor.special import chi2_cdf_array


class TestChi2Pdf:
    def test_two_dof_at_zero(self):
        assert chi2_pdf(2, 0.0) == 0.5

    def test_four_dof_closed_form(self):
        # k=4 density is t * exp(-t/2) / 4
        for t in (0.5, 2.0, 7.0):
            assert abs(chi2_pdf(4, t) - t * math.exp(-t / 2) / 4) < 1e-15
        assert abs(chi2_pdf(4, 2.0) - 0.18393972058572117) < 1e-15

    def test_one_dof_small_t_asymptote(self):
        # near zero the k=1 density behaves as t^{-1/2} e^{-t/2} / sqrt(2 pi)
        for t in (1e-4, 1e-6, 1e-8):
            asymptote = math.exp(-t / 2) / math.sqrt(2 * math.pi * t)
            assert abs(chi2_pdf(1, t) / asymptote - 1.0) < 1e-9
        assert chi2_pdf(1, 0.0) == math.inf

    def test_negative_argument_is_zero(self):
        assert chi2_pdf(3, -1.0) == 0.0

    def test_invalid_dof(self):
        with pytest.raises(InvalidDof):
            chi2_pdf(0, 1.0)
        with pytest.raises(InvalidDof):
            chi2_cdf(-2, 1.0)


class TestChi2Cdf:
    def test_nonpositive_support(self):
        for k in (1, 2, 17):
            assert chi2_cdf(k, -5.0) == 0.0
            assert chi2_cdf(k, 0.0) == 0.0

    def test_exponential_median(self):
        # k=2 is Exponential(1/2): CDF hits 1/2 at 2 ln 2
        assert abs(chi2_cdf(2, 2 * math.log(2)) - 0.5) < 1e-14

    def test_one_dof_normal_relation(self):
        # P[chi2_1 <= t] = 2 Phi(sqrt(t)) - 1 = erf(sqrt(t/2))
        for t in (0.25, 1.0, 4.0, 9.0):
            assert abs(chi2_cdf(1, t) - math.erf(math.sqrt(t / 2))) < 1e-14
        assert abs(chi2_cdf(1, 1.0) - 0.6826894921370859) < 1e-13

    def test_against_scipy_grid(self):
        ks = [1, 2, 3, 4, 7, 17, 48, 97, 197]
        ts = np.concatenate(
            [np.linspace(1e-6, 5, 41), np.linspace(5, 400, 60), [1e-12, 1e3]]
        )
        for k in ks:
            ref = sp.gammainc(k / 2, ts / 2)
            got = np.array([chi2_cdf(k, t) for t in ts])
            np.testing.assert_allclose(got, ref, atol=1e-12, rtol=0)

    def test_array_evaluator_matches_scalar(self):
        ts = np.linspace(0.0, 60.0, 301)
        for k in (1, 5, 17, 97):
            arr = chi2_cdf_array(k, ts)
            scl = np.array([chi2_cdf(k, t) for t in ts])
            np.testing.assert_allclose(arr, scl, atol=1e-13, rtol=0)

    def test_monotone_in_t_decreasing_in_dof(self):
        ts = np.linspace(0.1, 30, 100)
        vals = chi2_cdf_array(5, ts)
        assert np.all(np.diff(vals) > 0)
        for t in (0.5, 3.0, 10.0):
            assert chi2_cdf(6, t) < chi2_cdf(5, t)
