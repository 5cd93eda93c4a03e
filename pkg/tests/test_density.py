"""Density tests: series forms against the frozen high-precision convolution
oracle, each other, CF inversion, and analytic limits.

Oracle values were computed by direct numerical convolution of two noncentral
chi-square densities with mpmath at 40 digits (scripts/generate_oracle_values.py).
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from ncx2diff.density import (cf_inversion_pdf, char_fn_diff, char_fn_ncx2,
                              char_fn_product, char_fn_sum, char_fn_sum_direct,
                              ncx2_pdf, ncx2diff_pdf, ncx2diff_pdf_equal,
                              ncx2diff_pdf_one_sided, singularity_constant,
                              vgdiff_pdf)
from ncx2diff.errors import SingularPointError
from ncx2diff.params import ChiSqDiffParams, ProductNormalParams

# (x, r, lam1, lam2) -> pdf, frozen from the 40-digit convolution oracle
PDF_REFERENCE = [
    (0.7, 3.0, 1.2, 1.2, 0.10667334876988825460011284398),
    (0.7, 3.0, 1.2, 0.0, 0.126415289974947263618197366754),
    (-2.0, 4.5, 3.0, 1.0, 0.058616976703175926519738553694),
    (0.25, 0.5, 0.3, 0.7, 0.280009314133528734277887928622),
    (1.5, 1.0, 0.5, 2.0, 0.0696468197730705093729591400856),
    (1.3, 2.5, 0.0, 0.0, 0.126762370212030256433050703335),
]


class TestAgainstConvolutionOracle:
    @pytest.mark.parametrize("x,r,l1,l2,ref", PDF_REFERENCE)
    def test_double_series(self, x, r, l1, l2, ref):
        assert ncx2diff_pdf(x, ChiSqDiffParams(r, l1, l2)) == pytest.approx(
            ref, rel=1e-10)

    def test_central_bessel_form(self):
        assert vgdiff_pdf(1.3, 2.5) == pytest.approx(
            0.126762370212030256433050703335, rel=1e-12)


class TestCrossFormAgreement:
    @pytest.mark.parametrize("r", [0.5, 1.0, 2.0, 3.0, 7.0])
    @pytest.mark.parametrize("lam", [0.0, 0.5, 4.0])
    def test_equal_lambda_series(self, r, lam):
        for x in [-5.0, -0.25, 0.25, 0.7, 3.0, 10.0]:
            d = ncx2diff_pdf(x, ChiSqDiffParams(r, lam, lam))
            e = ncx2diff_pdf_equal(x, r, lam)
            assert d == pytest.approx(e, rel=1e-9, abs=1e-300)

    @pytest.mark.parametrize("r", [0.5, 1.0, 2.0, 3.0, 7.0])
    @pytest.mark.parametrize("lam", [0.0, 0.5, 4.0])
    def test_one_sided_series(self, r, lam):
        for x in [-5.0, -0.25, 0.25, 0.7, 3.0, 10.0]:
            d = ncx2diff_pdf(x, ChiSqDiffParams(r, lam, 0.0))
            o = ncx2diff_pdf_one_sided(x, r, lam)
            assert d == pytest.approx(o, rel=1e-9, abs=1e-300)

    @pytest.mark.parametrize("r", [1.5, 2.0, 3.0, 7.0])
    def test_central_forms(self, r):
        for x in [-3.0, -0.5, 0.5, 3.0, 15.0]:
            assert vgdiff_pdf(x, r) == pytest.approx(
                ncx2diff_pdf_equal(x, r, 0.0), rel=1e-10)

    def test_swap_symmetry(self):
        q = ChiSqDiffParams(2.5, 1.7, 0.3)
        for x in [0.4, 2.0, 6.0]:
            assert ncx2diff_pdf(-x, q) == pytest.approx(
                ncx2diff_pdf(x, q.swapped()), rel=1e-12)


class TestZeroAndSingularities:
    def test_singular_at_zero_for_small_r(self):
        for r in [0.5, 1.0, 2.0]:
            with pytest.raises(SingularPointError):
                ncx2diff_pdf(0.0, ChiSqDiffParams(r, 1.0, 0.5))

    def test_zero_limit_continuous_for_large_r(self):
        for (r, l1, l2) in [(2.5, 0.0, 0.0), (3.0, 1.2, 0.4), (4.5, 2.0, 2.0)]:
            q = ChiSqDiffParams(r, l1, l2)
            at0 = ncx2diff_pdf(0.0, q)
            near0 = ncx2diff_pdf(1e-9, q)
            assert at0 == pytest.approx(near0, rel=1e-5)

    def test_log_singularity_rate_r1(self):
        # p(x) ~ -c ln|x| with c = e^{-(l1+l2)/2}/(2 pi); O(1/ln x) convergence
        q = ChiSqDiffParams(1.0, 0.0, 0.0)
        c = singularity_constant(0.0, 0.0)
        x = 1e-12
        assert ncx2diff_pdf(x, q) / (-math.log(x)) == pytest.approx(c, rel=0.05)

    def test_ncx2_pdf_edges(self):
        with pytest.raises(SingularPointError):
            ncx2_pdf(0.0, 1.0, 0.5)
        assert ncx2_pdf(0.0, 2.0, 1.0) == pytest.approx(math.exp(-0.5) / 2)
        assert ncx2_pdf(0.0, 3.0, 1.0) == 0.0


class TestCharacteristicFunctions:
    def test_cf_at_zero_and_modulus(self):
        q = ChiSqDiffParams(2.0, 1.0, 0.5)
        assert char_fn_diff(0.0, q) == pytest.approx(1.0)
        for t in [0.3, 2.0, 17.0]:
            assert abs(char_fn_diff(t, q)) <= 1.0 + 1e-12

    def test_sum_cf_routes_agree(self):
        p = ProductNormalParams(0.8, -0.3, 1.2, 0.7, 0.4, 3)
        for t in [0.1, 1.0, 5.0]:
            assert char_fn_sum(t, p) == pytest.approx(
                char_fn_sum_direct(t, p), rel=1e-12)

    def test_product_cf_power(self):
        p1 = ProductNormalParams(0.8, -0.3, 1.2, 0.7, 0.4, 1)
        p3 = ProductNormalParams(0.8, -0.3, 1.2, 0.7, 0.4, 3)
        for t in [0.2, 1.5]:
            assert char_fn_product(t, p1) ** 3 == pytest.approx(
                char_fn_sum(t, p3), rel=1e-12)

    def test_degenerate_rho_cf_vs_shifted_ncx2(self):
        p = ProductNormalParams(1.0, -1.0, 1.0, 1.0, 1.0, 2)
        # S = V1 + shift with V1 ~ chi'^2_2(0), shift = -2
        for t in [0.3, 1.1]:
            ref = char_fn_ncx2(t, 2.0, 0.0) * np.exp(-2j * t)
            assert char_fn_sum(t, p) == pytest.approx(ref, rel=1e-12)


class TestCfInversion:
    @pytest.mark.parametrize("x,r,l1,l2,ref", PDF_REFERENCE)
    def test_inversion_matches_oracle(self, x, r, l1, l2, ref):
        q = ChiSqDiffParams(r, l1, l2)
        val = cf_inversion_pdf(x, lambda t: char_fn_diff(t, q))
        assert val == pytest.approx(ref, rel=1e-7)

    def test_sum_density_at_rho(self):
        # unequal-scale sum density only exists via inversion; sanity: integrates
        # to ~1 over a wide window and is nonnegative at probe points
        p = ProductNormalParams(1.0, -1.0, 1.0, 1.0, 0.25, 2)
        pdf = lambda x: cf_inversion_pdf(x, lambda t: char_fn_sum(t, p))
        vals = [pdf(x) for x in (-6.0, -2.0, 0.0, 1.0, 4.0)]
        assert all(v >= 0 for v in vals)
        total = (quad(pdf, -40, 0, limit=200)[0] + quad(pdf, 0, 40, limit=200)[0])
        assert total == pytest.approx(1.0, abs=1e-6)


class TestNormalisation:
    @pytest.mark.parametrize("r,l1,l2", [(0.5, 0.0, 0.0), (1.0, 1.2, 0.4),
                                         (3.0, 1.2, 0.0), (7.0, 0.3, 5.0)])
    def test_integrates_to_one(self, r, l1, l2):
        q = ChiSqDiffParams(r, l1, l2)
        total = (quad(lambda x: ncx2diff_pdf(x, q), -np.inf, 0, limit=200)[0]
                 + quad(lambda x: ncx2diff_pdf(x, q), 0, np.inf, limit=200)[0])
        assert total == pytest.approx(1.0, abs=1e-6)


class TestProperties:
    @settings(max_examples=40, deadline=None)
    @given(r=st.floats(0.3, 8.0), l1=st.floats(0.0, 6.0), l2=st.floats(0.0, 6.0),
           x=st.floats(-8.0, 8.0))
    def test_nonnegative_and_symmetric(self, r, l1, l2, x):
        if abs(x) < 1e-3:
            x = 1e-3
        q = ChiSqDiffParams(r, l1, l2)
        v = ncx2diff_pdf(x, q)
        assert v >= 0.0
        assert ncx2diff_pdf(-x, q) == pytest.approx(
            ncx2diff_pdf(x, q.swapped()), rel=1e-10, abs=1e-280)
