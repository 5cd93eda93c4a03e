"""Stein operator tests: exact symbolic reductions, null behaviour under the
matching law, operator nesting, linearity, and power against perturbed laws."""

import math

import numpy as np
import pytest
import sympy as sp

from ncx2diff.errors import DomainError, UnsupportedParameterError
from ncx2diff.moments import diff_moment
from ncx2diff.params import ChiSqDiffParams
from ncx2diff.sampling import sample_diff
from ncx2diff.stein import (TestFunction, apply_a1, apply_a2, apply_a3,
                            builtin_test_functions, stein_expectation,
                            stein_report)

X = sp.Symbol("x")
Q = ChiSqDiffParams(2.0, 1.0, 0.5)
FUNCS = builtin_test_functions()


class TestExactReductions:
    def test_a1_constant_function(self):
        # A1 1 = x - (l1 - l2), so E[A1 1] = mu'_1 - (l1-l2) = 0 exactly
        one = TestFunction.from_expr("1", sp.Integer(1))
        assert apply_a1(one, 3.7, Q) == pytest.approx(3.7 - 0.5)
        assert diff_moment(1, Q) - (Q.lambda1 - Q.lambda2) == pytest.approx(0, abs=1e-12)

    def test_a1_identity_function(self):
        # E[A1 x] = -4(l1+l2+r) + mu'_2 - (l1-l2) mu'_1 = 0
        val = (-4 * (Q.lambda1 + Q.lambda2 + Q.r) + diff_moment(2, Q)
               - (Q.lambda1 - Q.lambda2) * diff_moment(1, Q))
        assert val == pytest.approx(0.0, abs=1e-10)

    def test_a2_reductions(self):
        q = ChiSqDiffParams(1.5, 2.0, 0.0)
        assert diff_moment(1, q) - q.lambda1 == pytest.approx(0, abs=1e-12)
        # E[A2 x] = -(2 mu'_1 + 4r + 2 l1) + mu'_2 - l1 mu'_1
        val = (-(2 * diff_moment(1, q) + 4 * q.r + 2 * q.lambda1)
               + diff_moment(2, q) - q.lambda1 * diff_moment(1, q))
        assert val == pytest.approx(0.0, abs=1e-10)

    def test_a3_reductions(self):
        q = ChiSqDiffParams(2.0, 0.0, 0.0)
        # E[A3 x] = 4r - mu'_2 = 4r - 4r = 0
        assert 4 * q.r - diff_moment(2, q) == pytest.approx(0.0, abs=1e-10)


class TestQuadratureNull:
    def test_a1_vanishes_under_matching_law(self):
        est, unc = stein_expectation("a1", FUNCS[7], Q, method="quadrature")
        assert abs(est) <= max(unc, 1e-9)

    def test_a3_odd_integrand_exact_zero(self):
        one = TestFunction.from_expr("1", sp.Integer(1))
        est, _ = stein_expectation("a3", one, ChiSqDiffParams(3.0, 0.0, 0.0),
                                   method="quadrature")
        assert est == pytest.approx(0.0, abs=1e-10)

    def test_quadrature_matches_monte_carlo(self):
        em, um = stein_expectation("a1", FUNCS[7], Q, count=10 ** 6, seed=2)
        eq, uq = stein_expectation("a1", FUNCS[7], Q, method="quadrature")
        assert abs(em - eq) <= 4 * um + uq


class TestMonteCarloNull:
    @pytest.mark.parametrize("idx", range(len(FUNCS)))
    def test_a1_family(self, idx):
        est, unc = stein_expectation("a1", FUNCS[idx], Q,
                                     count=200000, seed=100 + idx)
        assert abs(est) <= 4 * unc

    def test_a2_null(self):
        q = ChiSqDiffParams(1.5, 2.0, 0.0)
        est, unc = stein_expectation("a2", FUNCS[7], q, count=200000, seed=3)
        assert abs(est) <= 4 * unc

    def test_a3_null(self):
        q = ChiSqDiffParams(2.0, 0.0, 0.0)
        est, unc = stein_expectation("a3", FUNCS[8], q, count=200000, seed=4)
        assert abs(est) <= 4 * unc


class TestNesting:
    def test_a1_and_a3_both_vanish_central(self):
        # the central operator is the special case of the general one
        q = ChiSqDiffParams(2.5, 0.0, 0.0)
        for op in ("a1", "a3"):
            est, unc = stein_expectation(op, FUNCS[2], q, method="quadrature")
            assert abs(est) <= max(unc, 1e-8)


class TestLinearity:
    def test_pointwise_linear_in_f(self):
        rng = np.random.default_rng(0)
        xs = rng.normal(size=30)
        comb = TestFunction.from_expr(
            "comb", 2.5 * X ** 2 * sp.exp(-X ** 2 / 2)
            - 1.25 * sp.sin(X) * sp.exp(-X ** 2 / 4))
        direct = apply_a1(comb, xs, Q)
        parts = 2.5 * apply_a1(FUNCS[2], xs, Q) - 1.25 * apply_a1(FUNCS[8], xs, Q)
        assert np.max(np.abs(direct - parts)) < 1e-12 * max(1, np.max(np.abs(direct)))


class TestPower:
    def test_separates_lambda_shifted_law(self):
        # A1 built for (2, 1, 0.5) against samples from (2, 2, 0.5)
        t = sample_diff(ChiSqDiffParams(2.0, 2.0, 0.5), 10 ** 7, 5).values
        best = 0.0
        for f in FUNCS:
            vals = apply_a1(f, t, Q)
            se = vals.std(ddof=1) / math.sqrt(len(t))
            best = max(best, abs(float(vals.mean())) / se)
        assert best >= 6.0


class TestValidation:
    def test_operator_compatibility(self):
        with pytest.raises(UnsupportedParameterError):
            stein_expectation("a2", FUNCS[0], Q)
        with pytest.raises(UnsupportedParameterError):
            stein_expectation("a3", FUNCS[0], Q)
        with pytest.raises(DomainError):
            stein_expectation("a9", FUNCS[0], Q)

    def test_derivative_order_enforced(self):
        low = TestFunction.from_expr("low", sp.exp(-X ** 2), order=2)
        with pytest.raises(DomainError):
            apply_a1(low, 1.0, Q)

    def test_report_rows(self):
        rows = stein_report(Q, "a1", FUNCS[:2], count=50000, seed=1)
        assert len(rows) == 2
        assert {"operator", "test_function", "params", "method",
                "estimate", "uncertainty", "pass"} <= set(rows[0])
