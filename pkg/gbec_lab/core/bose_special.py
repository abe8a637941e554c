"""
Bose functions F_n(alpha) = sum_{l>=1} exp(-l alpha) / l^n and the exact
lattice band sum used by the channel and box geometries.

alpha = -mu/kT with the ground-state energy absorbed into mu, so alpha >= 0.
"""

import math
from functools import lru_cache

import mpmath
import numpy as np

from .errors import DivergentSeries, DomainError, NoSolution
from .roots import solve_log_bracketed
from ..utils.logging import get_logger

logger = get_logger(__name__)

# Orders used by the geometries: F_{1/2} (prism band), F_{3/2} (box, channel), F_3 (traps)
SUPPORTED_ORDERS = (0.5, 1.5, 3.0)

# Direct terms before the Euler-Maclaurin tail takes over
DEFAULT_TAIL_START = 1000

# Terms below this fraction of the partial sum are dropped
TERM_RTOL = 1e-16

# Beyond this argument coth(x) == 1 in double precision
COTH_SATURATION = 30.0

# ζ(n) bracket tolerance used by the inverse
ZETA_RTOL = 1e-12

# Lower end of the alpha bracket searched by the inverse
SMALLEST_ALPHA = 1e-300

AlphaParam = float


def _check_order(n: float) -> float:
    n = float(n)
    if not n > 0:
        raise DomainError(f"Bose function order must be positive, got {n}")
    return n


def _euler_maclaurin_tail(n: float, alpha: float, start: int) -> float:
    """sum_{l >= start} exp(-l alpha) / l^n by Euler-Maclaurin with three corrections"""
    x = float(start)
    f = math.exp(-alpha * x) * x ** (-n)
    if alpha == 0.0:
        integral = x ** (1.0 - n) / (n - 1.0)
    else:
        # int_x^inf e^{-alpha y} y^{-n} dy = x^{1-n} E_n(alpha x)
        integral = x ** (1.0 - n) * float(mpmath.expint(n, alpha * x))

    g = alpha + n / x
    d1 = -f * g
    d3 = -f * (g ** 3 + 3.0 * g * n / x ** 2 + 2.0 * n / x ** 3)
    return integral + f / 2.0 - d1 / 12.0 + d3 / 720.0


def bose_fn(n: float, alpha: AlphaParam, tail_start: int = DEFAULT_TAIL_START) -> float:
    """
    Evaluate the Bose function F_n(alpha)

    Args:
        n: Order, any n > 0
        alpha: Fugacity parameter, alpha >= 0
        tail_start: Index where direct summation hands over to the tail formula

    Returns:
        F_n(alpha); F_n(0) = zeta(n)

    Raises:
        DomainError: alpha < 0 or n <= 0
        DivergentSeries: alpha == 0 and n <= 1
    """
    n = _check_order(n)
    alpha = float(alpha)
    if not alpha >= 0.0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    if alpha == 0.0 and n <= 1.0:
        raise DivergentSeries(f"F_{n}(0) diverges for n <= 1")

    if alpha > 0.0:
        n_terms = int(math.ceil(-math.log(TERM_RTOL) / alpha)) + 1
        if n_terms < tail_start:
            l = np.arange(1, n_terms + 1, dtype=float)
            return float(np.sum(np.exp(-alpha * l) / l ** n))

    l = np.arange(1, tail_start, dtype=float)
    head = float(np.sum(np.exp(-alpha * l) / l ** n))
    return head + _euler_maclaurin_tail(n, alpha, tail_start)


@lru_cache(maxsize=None)
def zeta(n: float) -> float:
    """Riemann zeta(n) for n > 1, from the same series as bose_fn"""
    n = _check_order(n)
    if n <= 1.0:
        raise DivergentSeries(f"zeta({n}) diverges")
    return bose_fn(n, 0.0)


def f_half_asymptotic(alpha: AlphaParam) -> float:
    """Leading small-alpha form F_{1/2}(alpha) ~ sqrt(pi/alpha)"""
    alpha = float(alpha)
    if not alpha > 0.0:
        raise DomainError(f"alpha must be > 0, got {alpha}")
    return math.sqrt(math.pi / alpha)


def bose_fn_inverse(n: float, target: float) -> AlphaParam:
    """
    Solve F_n(alpha) = target for alpha

    Args:
        n: Order
        target: Value of F_n; 0 < target <= zeta(n) when n > 1

    Returns:
        alpha >= 0 with |F_n(alpha) - target| / target <= 1e-10

    Raises:
        NoSolution: target <= 0, target > zeta(n), or for n <= 1 a target
            so large that alpha would underflow
    """
    n = _check_order(n)
    target = float(target)
    if not target > 0.0:
        raise NoSolution(f"F_{n}(alpha) = {target} has no solution: F is positive")

    if n > 1.0:
        z = zeta(n)
        if target > z * (1.0 + ZETA_RTOL):
            raise NoSolution(f"F_{n}(alpha) = {target} exceeds the maximum zeta({n}) = {z}")
        if target >= z * (1.0 - ZETA_RTOL):
            return 0.0

    lo, hi = 1e-14, 50.0
    while bose_fn(n, lo) < target:
        if lo <= SMALLEST_ALPHA:
            if n > 1.0:
                # target is within rounding of zeta(n)
                return 0.0
            raise NoSolution(f"F_{n}(alpha) = {target:g} needs alpha below {SMALLEST_ALPHA:g}")
        lo = max(lo * 1e-4, SMALLEST_ALPHA)
    while bose_fn(n, hi) > target:
        hi *= 2.0

    alpha = solve_log_bracketed(lambda a: bose_fn(n, a) / target - 1.0, lo, hi,
                                xtol=1e-13, what=f"alpha(F_{n}={target:.6g})")
    return alpha


def coth_band_sum(a: float, gamma: float) -> float:
    """
    Exact lattice sum sum_{s=-inf}^{inf} 1 / (a s^2 + gamma)

    Args:
        a: Curvature of the band, a > 0
        gamma: Scaled chemical-potential offset, gamma > 0

    Returns:
        (pi / sqrt(a gamma)) coth(pi sqrt(gamma / a))
    """
    a = float(a)
    gamma = float(gamma)
    if not a > 0.0 or not gamma > 0.0:
        raise DomainError(f"coth band sum needs a > 0 and gamma > 0, got a={a}, gamma={gamma}")

    arg = math.pi * math.sqrt(gamma / a)
    coth = 1.0 if arg > COTH_SATURATION else 1.0 / math.tanh(arg)
    return math.pi / math.sqrt(a * gamma) * coth
