"""
Configuration loader for gbec-lab
"""

import copy
import os
import yaml
from pathlib import Path
from typing import Dict, Any, List, Optional, Tuple
from dataclasses import dataclass, field
from dotenv import load_dotenv

from ..core.errors import ConfigError
from ..utils.logging import get_logger

logger = get_logger(__name__)

ENV_PREFIX = "GBEC_"

GEOMETRIES = ("bose-fn", "isotropic", "channel", "cigar", "prism", "box", "oracle")
SWEEP_GEOMETRIES = ("bose-fn", "isotropic", "channel", "cigar")
ORACLE_GEOMETRIES = ("isotropic", "channel", "cigar", "prism")
FORMATS = ("csv", "json")

DEFAULTS: Dict[str, Any] = {
    "logging": {"level": "INFO"},
    "oracle": {"eps_tail": 1e-6, "cutoff": 46.0, "max_cutoff": 60.0},
    "sweep": {"jobs": 4, "format": "csv", "outdir": "figures"},
    "cigar": {"c_const": 1.0},
    "run": {},
}


@dataclass
class OracleConfig:
    """Spectrum truncation policy of the exact oracle"""
    eps_tail: float
    cutoff: float
    max_cutoff: float


@dataclass
class SweepConfig:
    """Sweep execution and output defaults"""
    jobs: int
    format: str
    outdir: str


@dataclass
class RunConfig:
    """
    One CLI run: a geometry, its parameters, a grid and an output target

    The temperature grid is (t_min, t_max, steps); prism and box runs sweep
    a length ladder at the single temperature t_min instead.
    """
    geometry: str
    n_particles: Optional[float] = None
    delta: Optional[float] = None
    bz: bool = False
    bz_gamma: float = 1.6
    c_const: float = 1.0
    d_over_a: float = 10.0
    l_ladder: List[float] = field(default_factory=lambda: [1e3, 1e4, 1e5])
    nu: str = "0.6,0.2,0.2"
    h_ladder: List[float] = field(default_factory=lambda: [10.0 ** k for k in range(4, 11)])
    cutoff_c: float = 1e4
    oracle_geometry: str = "cigar"
    t_min: float = 0.01
    t_max: float = 1.1
    steps: int = 220
    output: Optional[str] = None
    fmt: str = "csv"
    jobs: int = 4
    oracle: bool = False

    def validate(self) -> "RunConfig":
        """Check the invariants of the run; raises ConfigError"""
        if self.geometry not in GEOMETRIES:
            raise ConfigError(f"Unknown geometry {self.geometry!r}; expected one of {', '.join(GEOMETRIES)}")
        if self.geometry in SWEEP_GEOMETRIES:
            if not self.t_min < self.t_max:
                raise ConfigError(f"Grid needs t_min < t_max, got {self.t_min} >= {self.t_max}")
            if self.steps < 2:
                raise ConfigError(f"Grid needs at least 2 steps, got {self.steps}")
        elif self.geometry == "oracle":
            if self.steps < 1 or self.t_min > self.t_max or (self.steps == 1 and self.t_min != self.t_max):
                raise ConfigError(f"Invalid oracle grid {self.t_min}:{self.t_max}:{self.steps}")
        if not self.t_min > 0:
            raise ConfigError(f"Grid values must be positive, got {self.t_min}")
        if self.n_particles is not None and not self.n_particles >= 1:
            raise ConfigError(f"N must be >= 1, got {self.n_particles}")
        if self.delta is not None and not self.delta > 0:
            raise ConfigError(f"Delta must be > 0, got {self.delta}")
        if not self.bz_gamma > 0:
            raise ConfigError(f"BZ gamma must be > 0, got {self.bz_gamma}")
        if not 0 < self.c_const <= 1:
            raise ConfigError(f"c must lie in (0, 1], got {self.c_const}")
        if self.fmt not in FORMATS:
            raise ConfigError(f"Unknown format {self.fmt!r}; expected csv or json")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")
        if self.geometry == "oracle" and self.oracle_geometry not in ORACLE_GEOMETRIES:
            raise ConfigError(f"Oracle has no spectrum for {self.oracle_geometry!r}")
        if self.geometry == "prism" and (len(self.l_ladder) < 1 or not self.d_over_a > 0):
            raise ConfigError("Prism run needs a non-empty L ladder and D/a > 0")
        return self

    @property
    def grid(self) -> Tuple[float, float, int]:
        return self.t_min, self.t_max, self.steps


def parse_number(text: str) -> float:
    """Parse 1e6, 5.6e4, 1000 or 10^6 into a float"""
    text = str(text).strip().replace("^", "**")
    if "**" in text:
        base, _, exponent = text.partition("**")
        try:
            return float(base) ** float(exponent)
        except ValueError as e:
            raise ConfigError(f"Invalid number: {text!r}") from e
    try:
        return float(text)
    except ValueError as e:
        raise ConfigError(f"Invalid number: {text!r}") from e


def parse_grid(text: str) -> Tuple[float, float, int]:
    """
    Parse a grid "min:max:steps"; a bare number is a one-point grid

    Returns:
        (t_min, t_max, steps)
    """
    parts = str(text).split(":")
    if len(parts) == 1:
        value = parse_number(parts[0])
        return value, value, 1
    if len(parts) != 3:
        raise ConfigError(f"Grid must look like min:max:steps, got {text!r}")
    try:
        steps = int(parts[2])
    except ValueError as e:
        raise ConfigError(f"Grid steps must be an integer, got {parts[2]!r}") from e
    return parse_number(parts[0]), parse_number(parts[1]), steps


def parse_ladder(text: str) -> List[float]:
    """Parse a comma-separated list of numbers"""
    return [parse_number(p) for p in str(text).split(",") if p.strip()]


class ConfigLoader:
    """Configuration loader for gbec-lab"""

    def __init__(self, config_file: str = None):
        """
        Initialize configuration loader

        Args:
            config_file: Configuration file path (YAML or JSON)
        """
        if config_file:
            self.config_path = config_file
        else:
            # Try to find config in default locations
            default_locations = [
                os.path.join(os.path.dirname(__file__), "../../configs/config.yaml"),
                "./configs/config.yaml",
                os.path.expanduser("~/.gbec-lab/config.yaml"),
                "/etc/gbec-lab/config.yaml"
            ]

            for loc in default_locations:
                if os.path.exists(loc):
                    self.config_path = loc
                    break
            else:
                self.config_path = default_locations[1]  # Default to ./configs/config.yaml

        self._explicit = bool(config_file)
        self._config = None

    def load_config(self) -> Dict[str, Any]:
        """Load configuration from file, then environment variables"""
        # Load environment variables from .env if present
        try:
            project_root = Path(__file__).resolve().parents[2]
            project_root_env = project_root / ".env"
            if project_root_env.exists():
                load_dotenv(dotenv_path=project_root_env, override=False)
            load_dotenv(override=False)
        except Exception:
            # Best-effort loading; never fail on dotenv
            pass

        self._config = copy.deepcopy(DEFAULTS)

        if os.path.exists(self.config_path):
            try:
                with open(self.config_path, 'r', encoding='utf-8') as f:
                    # JSON is a subset of YAML
                    loaded = yaml.safe_load(f) or {}
            except yaml.YAMLError as e:
                raise ConfigError(f"Failed to parse config file {self.config_path}: {e}") from e
            if not isinstance(loaded, dict):
                raise ConfigError(f"Config file {self.config_path} must hold a mapping")
            self._merge(self._config, loaded)
            logger.debug(f"Loaded config from: {self.config_path}")
        elif self._explicit:
            raise ConfigError(f"Config file not found: {self.config_path}")
        else:
            logger.debug(f"Config file not found: {self.config_path}, using defaults")

        # Override with environment variables
        self._override_with_env(self._config, ENV_PREFIX)
        return self._config

    def _merge(self, base: Dict[str, Any], update: Dict[str, Any]) -> None:
        for key, value in update.items():
            if isinstance(value, dict) and isinstance(base.get(key), dict):
                self._merge(base[key], value)
            else:
                base[key] = value

    def _override_with_env(self, config: Dict[str, Any], prefix: str) -> None:
        """
        Recursively override config values with environment variables

        Args:
            config: Configuration dictionary (modified in place)
            prefix: Current prefix for environment variable name (e.g., "GBEC_ORACLE_")
        """
        for key, value in list(config.items()):
            env_key = f"{prefix}{key.upper()}"

            if isinstance(value, dict):
                self._override_with_env(value, f"{env_key}_")
                continue

            env_value = os.environ.get(env_key)
            if env_value is None:
                continue
            # Convert to the type already held
            if isinstance(value, bool):
                env_value = env_value.lower() in ('true', '1', 'yes', 'on')
            elif isinstance(value, int):
                try:
                    env_value = int(env_value)
                except ValueError:
                    logger.warning(f"Invalid integer value for {env_key}: {env_value}")
                    continue
            elif isinstance(value, float):
                try:
                    env_value = parse_number(env_value)
                except ConfigError:
                    logger.warning(f"Invalid float value for {env_key}: {env_value}")
                    continue

            config[key] = env_value
            logger.debug(f"Config {key} overridden by environment variable {env_key}")

    def get_oracle_config(self) -> OracleConfig:
        """
        Get oracle configuration

        Returns:
            OracleConfig instance
        """
        if not self._config:
            self.load_config()

        oracle_config = self._config.get('oracle', {})

        return OracleConfig(
            eps_tail=float(oracle_config.get('eps_tail', 1e-6)),
            cutoff=float(oracle_config.get('cutoff', 46.0)),
            max_cutoff=float(oracle_config.get('max_cutoff', 60.0)),
        )

    def get_sweep_config(self) -> SweepConfig:
        """
        Get sweep configuration

        Returns:
            SweepConfig instance
        """
        if not self._config:
            self.load_config()

        sweep_config = self._config.get('sweep', {})

        return SweepConfig(
            jobs=int(sweep_config.get('jobs', 4)),
            format=str(sweep_config.get('format', 'csv')),
            outdir=str(sweep_config.get('outdir', 'figures')),
        )

    def get(self, key: str, default: Any = None) -> Any:
        """
        Get configuration value

        Args:
            key: Configuration key (supports dot notation, e.g., 'oracle.eps_tail')
            default: Default value if key not found

        Returns:
            Configuration value
        """
        if not self._config:
            self.load_config()

        keys = key.split('.')
        value = self._config

        for k in keys:
            if isinstance(value, dict):
                value = value.get(k)
                if value is None:
                    return default
            else:
                return default

        return value if value is not None else default
