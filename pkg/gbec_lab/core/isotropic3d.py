"""
Isotropic 3D harmonic trap: the normal (single-state) condensate

Temperatures are reduced by T0, the trap temperature scale with
k_B T0 = hbar omega N^{1/3}; reduced temperatures t are T/Tc.
"""

import math
from dataclasses import dataclass

from .bose_special import AlphaParam, bose_fn_inverse, zeta
from .errors import DomainError, NoSolution
from ..utils.logging import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class IsotropicConfig:
    """Isotropic trap holding n_particles atoms"""
    n_particles: float

    def __post_init__(self):
        if not self.n_particles >= 1:
            raise DomainError(f"n_particles must be >= 1, got {self.n_particles}")


def critical_temperature_iso() -> float:
    """Tc/T0 = zeta(3)^{-1/3}"""
    return zeta(3.0) ** (-1.0 / 3.0)


def condensate_fraction_iso(t: float) -> float:
    """
    Condensate fraction N0/N = 1 - (T/Tc)^3

    Args:
        t: Reduced temperature T/Tc

    Returns:
        Fraction in [0, 1]; exactly 0 for t >= 1
    """
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    if t >= 1.0:
        return 0.0
    return 1.0 - t ** 3


def alpha_above_tc_iso(t: float) -> AlphaParam:
    """
    Fugacity parameter of the normal gas, from (T/T0)^3 F_3(alpha) = 1

    Args:
        t: Reduced temperature T/Tc, t >= 1

    Returns:
        alpha; 0 at the transition

    Raises:
        NoSolution: t < 1, where alpha is pinned near 0 by the condensate
    """
    if t < 1.0:
        raise NoSolution(f"No normal-phase alpha below Tc (t={t}); use the condensate branch")
    return bose_fn_inverse(3.0, zeta(3.0) / t ** 3)


def ground_alpha_iso(t: float, n_particles: float) -> AlphaParam:
    """alpha below Tc, fixed by the ground-state occupation n000 = 1/alpha = N0"""
    f0 = condensate_fraction_iso(t)
    if f0 <= 0.0:
        raise NoSolution(f"No condensate at t={t}")
    return 1.0 / (n_particles * f0)


def level_spacing_iso(t: float, n_particles: float) -> float:
    """hbar omega / k_B T in terms of t = T/Tc"""
    if not t > 0:
        raise DomainError(f"t must be > 0, got {t}")
    return 1.0 / (t * critical_temperature_iso() * n_particles ** (1.0 / 3.0))


def oscillator_degeneracy(p: int) -> int:
    """Number of (px, py, pz) with px + py + pz = p"""
    if p < 0:
        raise DomainError(f"Oscillator level must be >= 0, got {p}")
    return (p + 1) * (p + 2) // 2


def excited_occupation_iso(p_sum: int, n_particles: float, t: float) -> float:
    """
    Occupation fraction n_p/N of one low excited state below Tc

    The excited states see alpha ~ 1/N0, so n_p ~ k_B T / (p hbar omega).

    Args:
        p_sum: px + py + pz of the state, >= 1
        n_particles: Total particle number N
        t: Reduced temperature T/Tc in (0, 1]

    Returns:
        n_p/N, which scales as N^{-2/3} at fixed p_sum and t
    """
    if p_sum < 1:
        raise DomainError(f"p_sum must be >= 1 for an excited state, got {p_sum}")
    if not 0.0 < t <= 1.0:
        raise DomainError(f"t must lie in (0, 1], got {t}")
    return 1.0 / (p_sum * level_spacing_iso(t, n_particles) * n_particles)


def normal_occupation_iso(p_sum: int, n_particles: float, t: float) -> float:
    """Bose occupation fraction of a level-p_sum state above Tc"""
    alpha = alpha_above_tc_iso(t)
    return 1.0 / (n_particles * math.expm1(p_sum * level_spacing_iso(t, n_particles) + alpha))
