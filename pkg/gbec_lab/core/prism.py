"""
Casimir prism: a periodic box of length L and square cross-section D, L >> D

Temperatures are in units of T* = h^2 / (2 pi m k_B a^2) with a = rho^{-1/3}.
A state (sx, sy, sz) has beta*epsilon = pi (T*/T) [(sx^2 + sy^2)/(D/a)^2 + sz^2/(L/a)^2].
The condensate fills the sx = sy = 0 band, yet every state of that band,
the ground state included, holds a fraction of order 1/L.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .bose_special import coth_band_sum, zeta
from .errors import DomainError
from ..utils.logging import get_logger

logger = get_logger(__name__)

MIN_ASPECT = 10.0
WARN_ASPECT = 100.0

SCALING_COLUMNS = ["L_over_a", "max_state_fraction", "band_fraction", "alpha"]


@dataclass(frozen=True)
class PrismConfig:
    """Prism with cross-section D/a and length L/a in units of a = rho^{-1/3}"""
    d_over_a: float
    l_over_a: float

    def __post_init__(self):
        if not self.d_over_a > 0 or not self.l_over_a > 0:
            raise DomainError(f"Prism sides must be positive, got D/a={self.d_over_a}, L/a={self.l_over_a}")
        aspect = self.l_over_a / self.d_over_a
        if aspect < MIN_ASPECT:
            raise DomainError(f"Prism needs L/D >= {MIN_ASPECT:g}, got {aspect:.4g}")
        if aspect < WARN_ASPECT:
            logger.warning(f"Prism aspect L/D = {aspect:.4g} is below {WARN_ASPECT:g}; "
                           f"transverse states are not well separated")

    @classmethod
    def from_n_and_aspect(cls, n_particles: float, aspect: float) -> "PrismConfig":
        """Prism holding n_particles with L = aspect * D"""
        d_over_a = (n_particles / aspect) ** (1.0 / 3.0)
        return cls(d_over_a=d_over_a, l_over_a=aspect * d_over_a)

    @property
    def n_particles(self) -> float:
        return self.l_over_a * self.d_over_a ** 2


def critical_temperature_prism() -> float:
    """Tc/T* = zeta(3/2)^{-2/3}"""
    return zeta(1.5) ** (-2.0 / 3.0)


def condensate_fraction_prism(t: float) -> float:
    """1 - t^{3/2}, exactly 0 for t >= 1"""
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    return 0.0 if t >= 1.0 else 1.0 - t ** 1.5


def _check_t(t: float) -> None:
    if not 0.0 < t < 1.0:
        raise DomainError(f"t must lie in (0, 1), got {t}")


def longitudinal_coefficient(t: float, cfg: PrismConfig) -> float:
    """c_z = pi (T*/T) / (L/a)^2"""
    return math.pi / (t * critical_temperature_prism()) / cfg.l_over_a ** 2


def transverse_coefficient(t: float, cfg: PrismConfig) -> float:
    """c_perp = pi (T*/T) / (D/a)^2"""
    return math.pi / (t * critical_temperature_prism()) / cfg.d_over_a ** 2


def alpha_prism(t: float, cfg: PrismConfig, n0: Optional[float] = None) -> float:
    """
    alpha of the band from N0 = pi / sqrt(c_z alpha)

    In reduced units alpha = pi (T/T*) (L/a)^2 / N0^2, which is
    L-independent at fixed D since N0 grows like L.

    Args:
        t: Reduced temperature T/Tc in (0, 1)
        cfg: Prism geometry
        n0: Band population (default: N (1 - t^{3/2}))

    Returns:
        alpha
    """
    _check_t(t)
    if n0 is None:
        n0 = condensate_fraction_prism(t) * cfg.n_particles
    if not n0 > 0:
        raise DomainError(f"Band population must be positive, got {n0}")
    return math.pi * t * critical_temperature_prism() * cfg.l_over_a ** 2 / n0 ** 2


def band_state_fraction_prism(
    s_z: int,
    t: float,
    cfg: PrismConfig,
    n0: Optional[float] = None,
) -> float:
    """Occupation fraction 1/(c_z s_z^2 + alpha)/N of band state (0, 0, s_z)"""
    alpha = alpha_prism(t, cfg, n0)
    return 1.0 / (longitudinal_coefficient(t, cfg) * s_z * s_z + alpha) / cfg.n_particles


def band_fraction_prism(t: float, cfg: PrismConfig, n0: Optional[float] = None) -> float:
    """Exact band sum over all s_z at the alpha of alpha_prism"""
    alpha = alpha_prism(t, cfg, n0)
    return coth_band_sum(longitudinal_coefficient(t, cfg), alpha) / cfg.n_particles


def ground_state_onset_prism(cfg: PrismConfig) -> float:
    """T_onset/Tc ~ (D/a)^2 / (L/a), zero as L grows at fixed D"""
    return cfg.d_over_a ** 2 / cfg.l_over_a


def prism_scaling_row(l_over_a: float, t: float, d_over_a: float) -> List[float]:
    """max single-state fraction, band fraction and alpha at one length"""
    cfg = PrismConfig(d_over_a=d_over_a, l_over_a=l_over_a)
    return [
        band_state_fraction_prism(0, t, cfg),
        band_fraction_prism(t, cfg),
        alpha_prism(t, cfg),
    ]


def prism_scaling_rows(
    l_ladder: Sequence[float],
    t: float,
    d_over_a: float,
) -> List[List[float]]:
    """Rows of SCALING_COLUMNS over a ladder of lengths at fixed D"""
    return [[l] + prism_scaling_row(l, t, d_over_a) for l in l_ladder]
