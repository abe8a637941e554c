"""
Channel potential: a 2D gas, periodic along x and harmonic along z

The condensate is the band of p_z = 0 states, with per-state occupation
n_s/N = 1 / (a s^2 + gamma) where a = T0/T and gamma = alpha L^2 / a^2.
Near Tc a very large number of band states is macroscopically occupied.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .bose_special import coth_band_sum, zeta
from .errors import DomainError, NoSolution
from .roots import loglog_slope, solve_log_bracketed
from ..utils.logging import get_logger

logger = get_logger(__name__)

GAMMA_BRACKET = (math.exp(-30.0), math.exp(30.0))

# Exact band sums stop once (a s^2 + gamma)/N exceeds this
EXACT_SUM_CUTOFF = 40.0

FIG1_COLUMNS = ["t", "f0", "f_s0", "f_s1", "f_s2"]


@dataclass(frozen=True)
class ChannelConfig:
    """Channel holding n_particles atoms with T_x = T_z = T0"""
    n_particles: float = 1e6

    def __post_init__(self):
        if not self.n_particles >= 1:
            raise DomainError(f"n_particles must be >= 1, got {self.n_particles}")


def critical_temperature_channel() -> float:
    """Tc/T0 = (sqrt(pi) zeta(3/2))^{-2/3}"""
    return (math.sqrt(math.pi) * zeta(1.5)) ** (-2.0 / 3.0)


def condensate_fraction_channel(t: float) -> float:
    """Condensate fraction 1 - t^{3/2}, exactly 0 for t >= 1"""
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    if t >= 1.0:
        return 0.0
    return 1.0 - t ** 1.5


def band_curvature(t: float) -> float:
    """a = T0/T for reduced temperature t = T/Tc"""
    if not t > 0:
        raise DomainError(f"t must be > 0, got {t}")
    return 1.0 / (t * critical_temperature_channel())


def _exact_band_fraction(a: float, gamma: float, n_particles: float) -> float:
    s_max = int(math.ceil(math.sqrt(EXACT_SUM_CUTOFF * n_particles / a))) + 1
    s = np.arange(0, s_max + 1, dtype=float)
    with np.errstate(over="ignore"):
        occupations = 1.0 / np.expm1((a * s * s + gamma) / n_particles)
    return float(2.0 * np.sum(occupations) - occupations[0]) / n_particles


def band_fraction_channel(gamma: float, t: float, n_particles: Optional[float] = None) -> float:
    """
    Fraction of particles in the p_z = 0 band

    Args:
        gamma: Scaled chemical-potential offset
        t: Reduced temperature T/Tc
        n_particles: When given, sum the exact Bose occupations of the band
            instead of the large-N closed form

    Returns:
        Band fraction N_b/N
    """
    if not gamma > 0:
        raise DomainError(f"gamma must be > 0, got {gamma}")
    a = band_curvature(t)
    if n_particles is None:
        return coth_band_sum(a, gamma)
    return _exact_band_fraction(a, gamma, n_particles)


def solve_gamma_channel(
    t: float,
    n_particles: Optional[float] = None,
    f0: Optional[float] = None,
) -> float:
    """
    Solve band fraction(gamma) = f0(t) for gamma

    Args:
        t: Reduced temperature in (0, 1)
        n_particles: Use the exact finite-N band sum for this particle number
        f0: Band population to match (default: 1 - t^{3/2})

    Returns:
        gamma > 0

    Raises:
        NoSolution: t >= 1, there is no condensed band
    """
    if t >= 1.0:
        raise NoSolution(f"No condensed band at t={t}")
    if not t > 0:
        raise DomainError(f"t must be > 0, got {t}")
    target = condensate_fraction_channel(t) if f0 is None else f0
    if not target > 0:
        raise NoSolution(f"Band population must be positive, got {target}")

    gamma = solve_log_bracketed(
        lambda g: band_fraction_channel(g, t, n_particles) / target - 1.0,
        *GAMMA_BRACKET, what="gamma(channel)",
    )
    logger.debug(f"channel t={t:.6g}: gamma={gamma:.10g}")
    return gamma


def per_state_fraction_channel(s: int, gamma: float, t: float) -> float:
    """Occupation fraction 1/(a s^2 + gamma) of band state s"""
    if not gamma > 0:
        raise DomainError(f"gamma must be > 0, got {gamma}")
    if not 0.0 < t < 1.0:
        raise DomainError(f"t must lie in (0, 1), got {t}")
    return 1.0 / (band_curvature(t) * s * s + gamma)


def central_density_channel(t: float, n_particles: float, exact: bool = False) -> float:
    """
    Central density a^2 rho_0(0) of the s = 0 ground state

    The channel has L/a = sqrt(N) and a harmonic length a0 with
    (a0/a)^2 = (L/a)/(2 pi^2); the ground state carries n00 = N/gamma
    particles spread over L along x and a Gaussian of width a0 along z.

    Args:
        t: Reduced temperature in (0, 1)
        n_particles: Particle number N
        exact: Solve gamma with the finite-N band sum

    Returns:
        a^2 rho_0(0)
    """
    gamma = solve_gamma_channel(t, n_particles if exact else None)
    n00 = n_particles / gamma
    l_over_a = math.sqrt(n_particles)
    a0_over_a = math.sqrt(l_over_a / (2.0 * math.pi ** 2))
    return n00 / (l_over_a * math.sqrt(math.pi) * a0_over_a)


def central_density_scaling(
    n_ladder: Sequence[float],
    t: float = 0.2,
    exact: bool = False,
) -> float:
    """
    Log-log slope of the central density against N

    Args:
        n_ladder: Particle numbers, at least 3
        t: Reduced temperature
        exact: Use the finite-N band sum

    Returns:
        Fitted exponent of rho_0(0) ~ N^x
    """
    densities = [central_density_channel(t, n, exact=exact) for n in n_ladder]
    slope = loglog_slope(n_ladder, densities)
    logger.info(f"central density exponent at t={t}: {slope:.4f}")
    return slope


def fig1_row(t: float) -> List[float]:
    """f0 and the s = 0, 1, 2 per-state fractions at t"""
    f0 = condensate_fraction_channel(t)
    if f0 <= 0.0:
        return [0.0, 0.0, 0.0, 0.0]
    gamma = solve_gamma_channel(t)
    return [f0] + [per_state_fraction_channel(s, gamma, t) for s in (0, 1, 2)]
