"""
Bracketed root finding and log-log fits shared by the geometry modules

Every equation solved in gbec-lab is monotone in its unknown, so a sign-change
bracket plus Brent's method is enough; the helpers here only add the error
mapping and logging around scipy.
"""

import math
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import BracketFailure, InsufficientData, NonConvergence
from ..utils.logging import get_logger

logger = get_logger(__name__)

DEFAULT_XTOL = 1e-14
DEFAULT_MAXITER = 500


def solve_bracketed(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    xtol: float = DEFAULT_XTOL,
    maxiter: int = DEFAULT_MAXITER,
    what: str = "root",
) -> float:
    """
    Find the root of func inside [lo, hi]

    Args:
        func: Continuous function with a sign change on [lo, hi]
        lo: Lower end of the bracket
        hi: Upper end of the bracket
        xtol: Absolute tolerance on the root
        maxiter: Iteration budget handed to brentq
        what: Name of the unknown, used in log and error messages

    Returns:
        The root

    Raises:
        BracketFailure: func has the same sign at both ends
        NonConvergence: brentq exhausted its iterations
    """
    f_lo = func(lo)
    f_hi = func(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if not (math.isfinite(f_lo) and math.isfinite(f_hi)) or (f_lo > 0) == (f_hi > 0):
        raise BracketFailure(
            f"No sign change for {what} on [{lo:.6g}, {hi:.6g}]: f = ({f_lo:.6g}, {f_hi:.6g})"
        )

    try:
        root, info = brentq(func, lo, hi, xtol=xtol, maxiter=maxiter,
                            full_output=True, disp=False)
    except (RuntimeError, ValueError) as e:
        raise NonConvergence(f"brentq failed for {what}: {e}") from e

    if not info.converged:
        raise NonConvergence(
            f"{what} did not converge after {info.iterations} iterations",
            last_iterate=root,
        )

    logger.debug(f"{what} = {root:.15g} ({info.iterations} iterations, "
                 f"{info.function_calls} calls)")
    return root


def solve_log_bracketed(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    xtol: float = 1e-13,
    maxiter: int = DEFAULT_MAXITER,
    what: str = "root",
) -> float:
    """
    Find a positive root of func by bracketing in log space

    Args:
        func: Function of the (positive) unknown
        lo: Positive lower end of the bracket
        hi: Upper end of the bracket
        xtol: Absolute tolerance on the logarithm of the root
        maxiter: Iteration budget handed to brentq
        what: Name of the unknown

    Returns:
        The root
    """
    u = solve_bracketed(lambda v: func(math.exp(v)), math.log(lo), math.log(hi),
                        xtol=xtol, maxiter=maxiter, what=f"log {what}")
    return math.exp(u)


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of log(y) against log(x)"""
    if len(xs) < 3 or len(xs) != len(ys):
        raise InsufficientData(f"Need at least 3 matched points for a scaling fit, got {len(xs)}")
    slope, _ = np.polyfit(np.log(np.asarray(xs, dtype=float)),
                          np.log(np.asarray(ys, dtype=float)), 1)
    return float(slope)
