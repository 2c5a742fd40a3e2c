"""
Capacity analytics
Closed-form capacities (nats) of dense coding, number-state, coherent-state
and squeezed-state signalling under a mean photon budget nbar, the optimal
squeezing/modulation split, and break-even squeezing.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Sequence

from scipy.integrate import dblquad
from scipy.optimize import bisect

from .errors import BracketError, ValidationError
from .validator import ParameterValidator

logger = logging.getLogger(__name__)

DB_PER_NEPER_POWER = 20.0 * math.log10(math.e)
BREAK_EVEN_BRACKET = (0.1, 2.0)
BREAK_EVEN_XTOL = 1e-9
BREAK_EVEN_FTOL = 1e-8
# Integration half-width in standard deviations
QUADRATURE_SPAN = 12.0


@dataclass(frozen=True)
class CapacityReport:
    """All four capacities at one photon budget"""
    nbar: float
    r_opt: float
    sigma2_opt: float
    c_dense: float
    c_number: float
    c_coh: float
    c_sq: float


@dataclass(frozen=True)
class BreakEvenResult:
    """Squeezing at which dense coding matches a single-mode scheme"""
    r: float
    nbar: float
    db: float


class Allocation(NamedTuple):
    r_opt: float
    sigma2_opt: float


def h_dense(sigma2: float, r: float) -> float:
    """Mutual information of the dense coding channel: ln(1 + sigma2 e^{2r})"""
    ParameterValidator.require('sigma2', sigma2)
    ParameterValidator.require('r', r)
    if sigma2 == 0:
        return 0.0
    snr = sigma2 * math.exp(2.0 * r)
    if math.isfinite(snr):
        return math.log1p(snr)
    return math.log(sigma2) + 2.0 * r


def optimal_nbar(r: float) -> float:
    """Photon budget for which r is the optimal squeezing: e^r sinh r"""
    ParameterValidator.require('r', r)
    return 0.5 * math.expm1(2.0 * r)


def optimal_allocation(nbar: float) -> Allocation:
    """
    Split nbar between squeezing and modulation to maximise h_dense

    r_opt inverts nbar = e^r sinh r = (e^{2r} - 1)/2; the remainder
    nbar - sinh^2(r_opt) = sinh(r_opt) cosh(r_opt) goes to modulation.
    """
    ParameterValidator.require('nbar', nbar)
    r_opt = 0.5 * math.log1p(2.0 * nbar)
    sigma2_opt = max(nbar - math.sinh(r_opt) ** 2, 0.0)
    return Allocation(r_opt, sigma2_opt)


def c_dense(nbar: float) -> float:
    """
    Dense coding capacity ln(1 + nbar + nbar^2)

    Above nbar = 1 it is taken as 2 ln(nbar) + ln(1 + 1/nbar + 1/nbar^2) so
    nbar^2 never leaves the double range.
    """
    ParameterValidator.require('nbar', nbar)
    if nbar <= 1:
        return math.log1p(nbar + nbar * nbar)
    inv = 1.0 / nbar
    return 2.0 * math.log(nbar) + math.log1p(inv + inv * inv)


def c_number(nbar: float) -> float:
    """
    Number-state (photon counting) capacity (1+n)ln(1+n) - n ln n; 0 at n = 0

    Evaluated as ln(1+n) + n ln(1 + 1/n); the textbook form subtracts two
    terms of size n ln n and loses all digits for n ~ 1e16.
    """
    ParameterValidator.require('nbar', nbar)
    if nbar == 0:
        return 0.0
    return math.log1p(nbar) + nbar * math.log1p(1.0 / nbar)


def c_coh(nbar: float) -> float:
    """Coherent states with heterodyne detection: ln(1 + nbar)"""
    ParameterValidator.require('nbar', nbar)
    return math.log1p(nbar)


def c_sq(nbar: float) -> float:
    """Single-mode squeezed states: ln(1 + 2 nbar)"""
    ParameterValidator.require('nbar', nbar)
    return math.log1p(2.0 * nbar)


def squeezing_db(r: float) -> float:
    """Two-mode squeezing in dB: 10 log10(e^{2r})"""
    ParameterValidator.require('r', r)
    return DB_PER_NEPER_POWER * r


def _break_even_result(r: float, nbar: float) -> BreakEvenResult:
    return BreakEvenResult(r=r, nbar=nbar, db=squeezing_db(r))


def _bisect_break_even(competitor, label: str) -> float:
    """Root of c_dense(n(r)) - competitor(n(r)) on the fixed bracket"""
    def gap(r):
        n = optimal_nbar(r)
        return c_dense(n) - competitor(n)

    lo, hi = BREAK_EVEN_BRACKET
    try:
        root, info = bisect(gap, lo, hi, xtol=BREAK_EVEN_XTOL, full_output=True)
    except ValueError as e:
        raise BracketError(f"{label}: no sign change on [{lo}, {hi}] ({e})") from e
    if not info.converged:
        raise BracketError(f"{label}: bisection did not converge ({info.flag})")

    residual = abs(gap(root))
    if residual >= BREAK_EVEN_FTOL:
        raise BracketError(f"{label}: capacities differ by {residual:.3g} nats at the root")
    logger.debug("%s break-even r=%.12g after %d iterations", label, root, info.iterations)
    return root


def break_even_vs_number() -> BreakEvenResult:
    """Squeezing at which dense coding equals the number-state capacity"""
    r = _bisect_break_even(c_number, "vs number states")
    return _break_even_result(r, optimal_nbar(r))


def break_even_vs_squeezed() -> BreakEvenResult:
    """
    Squeezing at which dense coding equals single-mode squeezed signalling

    nbar^2 = nbar forces nbar = 1, hence r = ln(3)/2; the bisection is run
    as a cross-check.
    """
    nbar = 1.0
    r = 0.5 * math.log(3.0)
    r_numeric = _bisect_break_even(c_sq, "vs squeezed states")
    if abs(r_numeric - r) > 10 * BREAK_EVEN_XTOL:
        raise BracketError(
            f"vs squeezed states: bisection root {r_numeric:.12g} disagrees with ln(3)/2"
        )
    return _break_even_result(r, nbar)


def capacity_report(nbar: float) -> CapacityReport:
    r_opt, sigma2_opt = optimal_allocation(nbar)
    return CapacityReport(
        nbar=float(nbar),
        r_opt=r_opt,
        sigma2_opt=sigma2_opt,
        c_dense=c_dense(nbar),
        c_number=c_number(nbar),
        c_coh=c_coh(nbar),
        c_sq=c_sq(nbar),
    )


def capacity_sweep(nbar_grid: Sequence[float]) -> List[CapacityReport]:
    """One CapacityReport per grid point"""
    nbar_grid = list(nbar_grid)
    is_valid, errors = ParameterValidator.validate_grid(nbar_grid)
    if not is_valid:
        raise ValidationError(errors)
    return [capacity_report(n) for n in nbar_grid]


def asymptotic_ratios(r: float) -> dict:
    """
    Large-squeezing behaviour at nbar = e^r sinh r

    Returns the ratios c_dense/(4r), c_number/(2r) and c_dense/c_number,
    which tend to 1, 1 and 2 as r grows.
    """
    ParameterValidator.require('r', r)
    if r == 0:
        raise ValidationError("asymptotic ratios need r > 0")
    n = optimal_nbar(r)
    dense, number = c_dense(n), c_number(n)
    return {
        'dense_over_4r': dense / (4.0 * r),
        'number_over_2r': number / (2.0 * r),
        'dense_over_number': dense / number,
    }


def h_dense_quadrature(sigma2: float, r: float, epsabs: float = 1e-11,
                       epsrel: float = 1e-11) -> float:
    """
    Mutual information by direct numerical integration

    The channel acts independently on the two quadratures, so the 4-D
    integral of P(beta|alpha) P(alpha) ln[P(beta|alpha)/P(beta)] is twice
    a 2-D integral over (alpha_R, beta_R).
    """
    ParameterValidator.require('sigma2', sigma2)
    ParameterValidator.require('r', r)
    if sigma2 == 0:
        return 0.0

    var_prior = sigma2 / 2.0
    var_cond = math.exp(-2.0 * r) / 4.0
    var_marg = (sigma2 + math.exp(-2.0 * r)) / 4.0
    sd_prior, sd_cond = math.sqrt(var_prior), math.sqrt(var_cond)
    gain = 1.0 / math.sqrt(2.0)
    log_norm_prior = -0.5 * math.log(2.0 * math.pi * var_prior)
    log_norm_cond = -0.5 * math.log(2.0 * math.pi * var_cond)
    log_norm_marg = -0.5 * math.log(2.0 * math.pi * var_marg)

    def integrand(beta, alpha):
        log_cond = log_norm_cond - 0.5 * (beta - gain * alpha) ** 2 / var_cond
        log_marg = log_norm_marg - 0.5 * beta ** 2 / var_marg
        log_prior = log_norm_prior - 0.5 * alpha ** 2 / var_prior
        return math.exp(log_prior + log_cond) * (log_cond - log_marg)

    span_a = QUADRATURE_SPAN * sd_prior
    span_b = QUADRATURE_SPAN * sd_cond
    per_quadrature, err = dblquad(
        integrand,
        -span_a, span_a,
        lambda a: gain * a - span_b,
        lambda a: gain * a + span_b,
        epsabs=epsabs, epsrel=epsrel,
    )
    logger.debug("MI quadrature sigma2=%g r=%g: %.12g (+/- %.2g)", sigma2, r, per_quadrature, err)
    return 2.0 * per_quadrature
