"""Moment and cumulant tests: closed forms against dual exact routes, frozen
high-precision references, and CF log-derivatives."""

import math
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncx2diff.density import char_fn_diff, char_fn_sum
from ncx2diff.errors import CancellationWarning, DomainError
from ncx2diff.moments import (diff_cumulant, diff_moment, diff_moment_set,
                              ncx2_cumulant, ncx2_moment, sum_cumulant,
                              sum_moment, sum_moment_set)
from ncx2diff.params import ChiSqDiffParams, ProductNormalParams
from ncx2diff.selftest import finite_diff_cumulant


def raw_from_cumulants(kappas):
    """mu'_n = sum_{i<n} C(n-1,i) kappa_{n-i} mu'_i - the independent route."""
    mu = [1.0]
    for n in range(1, len(kappas) + 1):
        mu.append(math.fsum(math.comb(n - 1, i) * kappas[n - i - 1] * mu[i]
                            for i in range(n)))
    return mu[1:]


class TestNcx2Moments:
    def test_frozen_oracle_values(self):
        # mpmath Kummer-form references (scripts/generate_oracle_values.py)
        assert ncx2_moment(5, 3.0, 1.2) == pytest.approx(42991.45632, rel=1e-12)
        assert ncx2_moment(10, 0.5, 4.0) == pytest.approx(
            837726115087.0986328125, rel=1e-12)

    def test_low_orders_closed_form(self):
        r, lam = 2.7, 1.9
        assert ncx2_moment(1, r, lam) == pytest.approx(r + lam, rel=1e-13)
        assert ncx2_moment(2, r, lam) == pytest.approx(
            (r + lam) ** 2 + 2 * (r + 2 * lam), rel=1e-13)

    @settings(max_examples=40, deadline=None)
    @given(r=st.floats(0.2, 10.0), lam=st.floats(0.0, 15.0),
           kmax=st.integers(3, 10))
    def test_dual_route_vs_cumulant_recursion(self, r, lam, kmax):
        kappas = [ncx2_cumulant(j, r, lam) for j in range(1, kmax + 1)]
        mus = raw_from_cumulants(kappas)
        for k in range(1, kmax + 1):
            assert ncx2_moment(k, r, lam) == pytest.approx(mus[k - 1], rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            ncx2_moment(-1, 2.0, 1.0)
        with pytest.raises(DomainError):
            ncx2_moment(2, 0.0, 1.0)


class TestDiffMoments:
    def test_first_moments_closed_form(self):
        q = ChiSqDiffParams(3.0, 1.2, 0.4)
        assert diff_moment(1, q) == pytest.approx(0.8, abs=1e-12)
        # kappa2 = 4(r + l1 + l2); mu'_2 = kappa2 + mu'_1^2
        assert diff_moment(2, q) == pytest.approx(4 * 4.6 + 0.64, rel=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(r=st.floats(0.3, 8.0), l1=st.floats(0.0, 10.0),
           l2=st.floats(0.0, 10.0))
    def test_dual_route(self, r, l1, l2):
        q = ChiSqDiffParams(r, l1, l2)
        kappas = [diff_cumulant(j, q) for j in range(1, 7)]
        mus = raw_from_cumulants(kappas)
        for k in range(1, 7):
            assert diff_moment(k, q) == pytest.approx(
                mus[k - 1], rel=1e-9, abs=1e-8)

    def test_moment_set_shape_summaries(self):
        q = ChiSqDiffParams(3.0, 1.2, 0.4)
        ms = diff_moment_set(q)
        tot = 3.0 + 1.2 + 0.4
        assert ms.variance == pytest.approx(4 * tot)
        assert ms.skewness == pytest.approx(3 * 0.8 / tot ** 1.5)
        assert ms.excess_kurtosis == pytest.approx(
            6 * (3.0 + 2 * 1.2 + 2 * 0.4) / tot ** 2)
        assert ms.central[0] == pytest.approx(0.0, abs=1e-12)
        assert ms.central[1] == pytest.approx(ms.variance)

    def test_symmetric_case_odd_moments_vanish(self):
        q = ChiSqDiffParams(2.0, 1.5, 1.5)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", CancellationWarning)
            assert diff_moment(1, q) == pytest.approx(0.0, abs=1e-10)
            assert diff_moment(3, q) == pytest.approx(0.0, abs=1e-8)

    def test_cf_derivative_cross_check(self):
        for q in [ChiSqDiffParams(3.0, 1.2, 0.4), ChiSqDiffParams(0.5, 4.0, 0.0)]:
            for k in range(1, 5):
                fd = finite_diff_cumulant(lambda t: char_fn_diff(t, q), k)
                assert fd == pytest.approx(diff_cumulant(k, q), rel=1e-5)


class TestSumMoments:
    def test_mean_closed_form_all_rho(self):
        for rho in [-1.0, -0.75, 0.0, 0.5, 1.0]:
            p = ProductNormalParams(0.8, -0.4, 1.3, 0.6, rho, 4)
            expect = 4 * (0.8 * -0.4 + rho * 1.3 * 0.6)
            assert sum_cumulant(1, p) == pytest.approx(expect, abs=1e-12)
            assert sum_moment(1, p) == pytest.approx(expect, abs=1e-10)

    @pytest.mark.parametrize("p", [
        ProductNormalParams(0.5, -0.3, 1.2, 0.8, 0.4, 3),
        ProductNormalParams(1.0, 1.0, 1.0, 2.0, -0.75, 2),
        ProductNormalParams(0.7, 0.2, 1.0, 1.0, 1.0, 2),
        ProductNormalParams(0.7, 0.2, 1.5, 0.5, -1.0, 1),
    ])
    def test_dual_route_including_degenerate_rho(self, p):
        kappas = [sum_cumulant(j, p) for j in range(1, 5)]
        mus = raw_from_cumulants(kappas)
        for k in range(1, 5):
            assert sum_moment(k, p) == pytest.approx(
                mus[k - 1], rel=1e-10, abs=1e-10)

    def test_cf_derivative_cross_check(self):
        for p in [ProductNormalParams(0.5, -0.3, 1.2, 0.8, 0.4, 3),
                  ProductNormalParams(1.0, 1.0, 1.0, 1.0, -0.75, 2),
                  ProductNormalParams(0.7, 0.2, 1.0, 1.0, 1.0, 2)]:
            for k in range(1, 5):
                fd = finite_diff_cumulant(lambda t: char_fn_sum(t, p), k)
                assert fd == pytest.approx(sum_cumulant(k, p),
                                           rel=1e-5, abs=1e-7)

    def test_high_order_does_not_overflow(self):
        p = ProductNormalParams(2.0, 1.0, 1.0, 1.0, 0.9, 5)
        ms = sum_moment_set(p, kmax=20)
        assert all(math.isfinite(v) for v in ms.raw)
        assert all(math.isfinite(v) for v in ms.cumulants)

    def test_cancellation_warning(self):
        # symmetric central case: odd raw moments cancel to roundoff
        p = ProductNormalParams(0.0, 0.0, 1.0, 1.0, 0.0, 1)
        with pytest.warns(CancellationWarning):
            sum_moment(3, p)
