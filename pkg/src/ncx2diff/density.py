"""Series densities for the noncentral chi-square difference law, the
noncentral chi-square itself and the symmetric variance-gamma special case,
together with the characteristic functions and a CF-inversion PDF oracle."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate
from scipy import special as sc

from .errors import (
    DomainError,
    InversionAccuracyError,
    NonConvergenceError,
    SingularPointError,
)
from .params import ChiSqDiffParams, ChiSqDiffRepr, ProductNormalParams, to_chisq_diff
from .specfun import (
    DEFAULT_CONTROL,
    SeriesControl,
    log_bessel_i,
    log_bessel_k,
    log_comb,
    log_tricomi_u,
)

__all__ = [
    "CfPoint",
    "ncx2_pdf",
    "ncx2diff_pdf",
    "ncx2diff_pdf_equal",
    "ncx2diff_pdf_one_sided",
    "vgdiff_pdf",
    "char_fn_product",
    "char_fn_sum",
    "char_fn_ncx2",
    "cf_inversion_pdf",
    "singularity_constant",
]

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class CfPoint:
    """Characteristic-function sample: |value| <= 1 and value == 1 at t == 0."""

    t: float
    value: complex


# ---------------------------------------------------------------------------
# noncentral chi-square density


def ncx2_pdf(x: float, r: float, lam: float) -> float:
    """PDF of chi'^2_r(lambda) at x >= 0.

    Raises SingularPointError at x = 0 when r < 2 (the density diverges there).
    """
    if x < 0:
        raise DomainError(f"ncx2_pdf requires x >= 0, got {x}")
    if r <= 0 or lam < 0:
        raise DomainError("require r > 0 and lambda >= 0")
    if x == 0:
        if r < 2:
            raise SingularPointError(x, "chi'^2 density diverges at 0 for r < 2")
        if r == 2:
            return 0.5 * math.exp(-lam / 2.0)
        return 0.0
    if lam == 0:
        logp = (r / 2.0 - 1.0) * math.log(x) - x / 2.0 \
            - (r / 2.0) * math.log(2.0) - sc.gammaln(r / 2.0)
        return math.exp(logp)
    nu = r / 2.0 - 1.0
    logp = -math.log(2.0) - (x + lam) / 2.0 \
        + (r / 4.0 - 0.5) * (math.log(x) - math.log(lam)) \
        + log_bessel_i(nu, math.sqrt(lam * x))
    return math.exp(logp)


# ---------------------------------------------------------------------------
# difference-density series


def _log_u_term(r: float, k: int, a_jk: int, x: float) -> float:
    """ln U(1 - r/2 - a_jk, 2 - r - k, x); reflection is applied inside."""
    return log_tricomi_u(1.0 - r / 2.0 - a_jk, 2.0 - r - k, x)


def _diff_pdf_nonneg(x: float, r: float, lam1: float, lam2: float,
                     ctrl: SeriesControl) -> float:
    """Double-series density evaluated at x >= 0.

    All terms are positive; the outer index is stopped once three consecutive
    outer contributions fall below abs_tol times the running sum (guards
    against odd/even oscillation of the Poisson-type weights).
    """
    at_zero = x == 0.0
    if at_zero and r <= 2.0:
        raise SingularPointError(x, "difference density singular/non-series at 0 for r <= 2")
    log_pref = -r * math.log(2.0) - (abs(x) + lam1 + lam2) / 2.0
    # log(lam) - log(2) rather than log(lam / 2): lam / 2 can underflow to 0
    # for subnormal lam even though lam > 0
    llam1 = math.log(lam1) - _LN2 if lam1 > 0 else -math.inf
    llam2 = math.log(lam2) - _LN2 if lam2 > 0 else -math.inf
    total = 0.0
    small_streak = 0
    terms_used = 0
    k = 0
    while True:
        outer = 0.0
        for j in range(k + 1):
            if lam1 == 0.0 and j < k:
                continue
            if lam2 == 0.0 and j > 0:
                continue
            a_jk = k - j
            # note the 2^{-k}: the correct Poisson-mixture weights are
            # (lam1/4)^{k-j} (lam2/4)^j, cross-checked against the equal-lambda
            # Bessel series, CF inversion and Monte Carlo
            lcoef = log_comb(k, j) - sc.gammaln(k + 1.0) - sc.gammaln(r / 2.0 + a_jk) \
                - k * math.log(2.0)
            if k - j > 0:
                lcoef += (k - j) * llam1
            if j > 0:
                lcoef += j * llam2
            if at_zero:
                # x -> 0 limit of x^{r+k-1} U(r/2+j, r+k, x); valid since r > 2
                lu = sc.gammaln(r + k - 1.0) - sc.gammaln(r / 2.0 + j)
            else:
                lu = _log_u_term(r, k, a_jk, x)
            outer += math.exp(log_pref + lcoef + lu)
            terms_used += 1
        total += outer
        if terms_used > ctrl.max_terms:
            raise NonConvergenceError(
                f"difference-density series: {ctrl.max_terms} terms exhausted")
        if outer <= ctrl.abs_tol * max(total, ctrl.abs_tol):
            small_streak += 1
            if small_streak >= 3:
                return total
        else:
            small_streak = 0
        k += 1


def ncx2diff_pdf(x: float, q: ChiSqDiffParams,
                 ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """PDF of T = V1 - V2 (independent noncentral chi-squares) at x.

    Negative abscissae are handled through the symmetry
    p(x; r, lam1, lam2) = p(-x; r, lam2, lam1).
    """
    if x >= 0:
        return _diff_pdf_nonneg(x, q.r, q.lambda1, q.lambda2, ctrl)
    return _diff_pdf_nonneg(-x, q.r, q.lambda2, q.lambda1, ctrl)


def ncx2diff_pdf_equal(x: float, r: float, lam: float,
                       ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Single Bessel-K series for the equal-noncentrality case lam1 = lam2."""
    if r <= 0 or lam < 0:
        raise DomainError("require r > 0 and lambda >= 0")
    ax = abs(x)
    if ax == 0.0:
        if r <= 2.0:
            raise SingularPointError(x, "density singular/non-series at 0 for r <= 2")
        # limit of |x|^{nu} K_nu(|x|/2) with nu = (r-1)/2 + k
        log_pref = -r * math.log(2.0) - 0.5 * math.log(math.pi) - lam
        total = 0.0
        for k in range(ctrl.max_terms):
            nu = (r - 1.0) / 2.0 + k
            lt = log_pref + (k * (math.log(lam) - 2.0 * _LN2) if k else 0.0) \
                - sc.gammaln(k + 1.0) - sc.gammaln(r / 2.0 + k) \
                + sc.gammaln(nu) + 2.0 * nu * math.log(2.0) - math.log(2.0)
            term = math.exp(lt)
            total += term
            if lam == 0.0 or (k > lam and term <= ctrl.abs_tol * total):
                return total
        raise NonConvergenceError("equal-lambda series did not converge at x=0")
    log_pref = -r * math.log(2.0) - 0.5 * math.log(math.pi) - lam
    total = 0.0
    small_streak = 0
    for k in range(ctrl.max_terms):
        nu = (r - 1.0) / 2.0 + k
        lt = log_pref - sc.gammaln(k + 1.0) - sc.gammaln(r / 2.0 + k) \
            + nu * math.log(ax) + log_bessel_k(nu, ax / 2.0)
        if k > 0:
            if lam == 0.0:
                break
            lt += k * (math.log(lam) - 2.0 * _LN2)
        term = math.exp(lt)
        total += term
        if term <= ctrl.abs_tol * max(total, ctrl.abs_tol):
            small_streak += 1
            if small_streak >= 3 or lam == 0.0:
                return total
        else:
            small_streak = 0
    if lam == 0.0:
        return total
    raise NonConvergenceError("equal-lambda density series did not converge")


def ncx2diff_pdf_one_sided(x: float, r: float, lam1: float,
                           ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Single series for the one-sided case lam2 = 0."""
    if r <= 0 or lam1 < 0:
        raise DomainError("require r > 0 and lambda1 >= 0")
    at_zero = x == 0.0
    if at_zero and r <= 2.0:
        raise SingularPointError(x, "density singular/non-series at 0 for r <= 2")
    ax = abs(x)
    log_pref = -r * math.log(2.0) - (ax + lam1) / 2.0
    total = 0.0
    small_streak = 0
    for k in range(ctrl.max_terms):
        a_0k = k if x >= 0 else 0
        lt = log_pref - sc.gammaln(k + 1.0) - sc.gammaln(r / 2.0 + a_0k)
        if k > 0:
            if lam1 == 0.0:
                break
            lt += k * (math.log(lam1) - 2.0 * _LN2)
        if at_zero:
            # limit of x^{r+k-1} U(r/2 + k - a_0k, r+k, x)
            lt += sc.gammaln(r + k - 1.0) - sc.gammaln(r / 2.0 + k - a_0k)
        else:
            lt += _log_u_term(r, k, a_0k, ax)
        term = math.exp(lt)
        total += term
        if term <= ctrl.abs_tol * max(total, ctrl.abs_tol):
            small_streak += 1
            if small_streak >= 3 or lam1 == 0.0:
                return total
        else:
            small_streak = 0
    if lam1 == 0.0:
        return total
    raise NonConvergenceError("one-sided density series did not converge")


def vgdiff_pdf(x: float, r: float) -> float:
    """Central-case (lam1 = lam2 = 0) density: the symmetric variance-gamma law.

    Evaluated through the Bessel-K form; the Tricomi-U single-term form is
    evaluated alongside and the two are required to agree.
    """
    if r <= 0:
        raise DomainError(f"require r > 0, got {r}")
    ax = abs(x)
    if ax == 0.0:
        if r <= 1.0:
            raise SingularPointError(x, "VG density diverges at 0 for r <= 1")
        # limit |x|^{(r-1)/2} K_{(r-1)/2}(|x|/2) -> Gamma((r-1)/2) 2^{r-2}
        logp = -r * math.log(2.0) - 0.5 * math.log(math.pi) - sc.gammaln(r / 2.0) \
            + sc.gammaln((r - 1.0) / 2.0) + (r - 2.0) * math.log(2.0)
        return math.exp(logp)
    nu = (r - 1.0) / 2.0
    log_k_form = -r * math.log(2.0) - 0.5 * math.log(math.pi) - sc.gammaln(r / 2.0) \
        + nu * math.log(ax) + log_bessel_k(nu, ax / 2.0)
    log_u_form = -r * math.log(2.0) - sc.gammaln(r / 2.0) - ax / 2.0 \
        + log_tricomi_u(1.0 - r / 2.0, 2.0 - r, ax)
    if abs(log_k_form - log_u_form) > 1e-9 * max(1.0, abs(log_k_form)) + 1e-11:
        raise NonConvergenceError(
            f"U-form and K-form of the VG density disagree at (x={x}, r={r}): "
            f"{log_u_form} vs {log_k_form}")
    return math.exp(log_k_form)


def singularity_constant(lam1: float, lam2: float) -> float:
    """Coefficient c of the r = 1 logarithmic singularity p(x) ~ -c ln|x|."""
    return math.exp(-(lam1 + lam2) / 2.0) / (2.0 * math.pi)


# ---------------------------------------------------------------------------
# characteristic functions


def char_fn_ncx2(t: float, r: float, lam: float) -> complex:
    """CF of chi'^2_r(lambda): (1-2it)^{-r/2} exp(i lam t / (1-2it))."""
    d = 1.0 - 2.0j * t
    return d ** (-r / 2.0) * cmath.exp(1j * lam * t / d)


def char_fn_product(t: float, p: ProductNormalParams) -> complex:
    """CF of the product Z = XY (the n field of p is ignored)."""
    if abs(p.rho) == 1.0:
        return _char_fn_sum_repr(t, ProductNormalParams(
            p.mu_x, p.mu_y, p.sigma_x, p.sigma_y, p.rho, 1))
    return _char_fn_sum_direct(t, p, 1)


def _char_fn_sum_direct(t: float, p: ProductNormalParams, n: int) -> complex:
    a = p.mu_x / p.sigma_x
    b = p.mu_y / p.sigma_y
    tau = p.s * t
    d = (1.0 - (1.0 + p.rho) * 1j * tau) * (1.0 + (1.0 - p.rho) * 1j * tau)
    num = -n * (a * a + b * b - 2.0 * p.rho * a * b) * tau * tau \
        + 2.0 * n * a * b * 1j * tau
    return d ** (-n / 2.0) * cmath.exp(num / (2.0 * d))


def _char_fn_sum_repr(t: float, p: ProductNormalParams) -> complex:
    rep = to_chisq_diff(p)
    out = cmath.exp(1j * rep.shift * t)
    if rep.scale_plus > 0:
        out *= char_fn_ncx2(rep.scale_plus * t, rep.r, rep.lambda_plus)
    if rep.scale_minus > 0:
        out *= char_fn_ncx2(-rep.scale_minus * t, rep.r, rep.lambda_minus)
    return out


def char_fn_sum(t: float, p: ProductNormalParams) -> complex:
    """CF of S_n via the noncentral chi-square factorisation (valid for all rho,
    including the degenerate rho = +-1)."""
    return _char_fn_sum_repr(t, p)


def char_fn_sum_direct(t: float, p: ProductNormalParams) -> complex:
    """CF of S_n via the n-th power of the product CF; |rho| < 1 only."""
    if abs(p.rho) == 1.0:
        raise DomainError("direct product-CF formula requires |rho| < 1")
    return _char_fn_sum_direct(t, p, p.n)


def char_fn_diff(t: float, q: ChiSqDiffParams) -> complex:
    """CF of T = V1 - V2."""
    return char_fn_ncx2(t, q.r, q.lambda1) * char_fn_ncx2(-t, q.r, q.lambda2)


# ---------------------------------------------------------------------------
# CF-inversion oracle


def cf_inversion_pdf(x: float, cf: Callable[[float], complex],
                     ctrl: SeriesControl = DEFAULT_CONTROL,
                     tol: float = 1e-8) -> float:
    """Density at x by Fourier inversion of a characteristic function.

    Uses QUADPACK's oscillatory Fourier quadrature on [0, inf) for x != 0
    (handles the conditionally convergent slowly decaying tails that arise for
    r <= 1) and plain adaptive quadrature for x = 0. Raises
    InversionAccuracyError when the quadrature error estimate exceeds tol.
    """
    re = lambda t: cf(t).real
    im = lambda t: cf(t).imag
    if x == 0.0:
        val, err = integrate.quad(re, 0.0, np.inf, limit=400)
        total, toterr = val, err
    else:
        ax = abs(x)
        c_val, c_err = integrate.quad(re, 0.0, np.inf, weight="cos", wvar=ax,
                                      limlst=200, limit=400)
        s_val, s_err = integrate.quad(im, 0.0, np.inf, weight="sin", wvar=ax,
                                      limlst=200, limit=400)
        total = c_val + math.copysign(1.0, x) * s_val
        toterr = c_err + s_err
    if toterr > tol * math.pi:
        raise InversionAccuracyError(
            f"CF inversion error estimate {toterr / math.pi:.3e} exceeds tol {tol:.1e} at x={x}")
    return total / math.pi


def cf_envelope(t: float, p: ProductNormalParams) -> float:
    """Provable modulus envelope of the S_n CF, used for truncation diagnostics."""
    tau = p.s * t
    return ((1.0 + (1.0 + p.rho) ** 2 * tau * tau)
            * (1.0 + (1.0 - p.rho) ** 2 * tau * tau)) ** (-p.n / 4.0)
