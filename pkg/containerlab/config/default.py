"""
Default configuration and config file handling for containerlab.
"""

from __future__ import annotations

import logging
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

import yaml

from containerlab.models.certificate import ContainerParams

logger = logging.getLogger(__name__)

SEED_ENV = "CONTAINER_LAB_SEED"


@dataclass
class Settings:
    """General settings."""
    default_format: str = "json"
    color_output: bool = True
    max_workers: int = 4
    split_depth: int = 4
    seed: int = 0


@dataclass
class Caps:
    """Scale limits; a run that would exceed one is refused."""
    max_family_vertices: int = 24
    max_raw_vertices: int = 20
    max_layer_vertices: int = 24
    max_exhaustive_subsets: int = 20
    max_m_phi_degree: int = 20
    max_container_side: int = 20
    max_exhaustive_t0: int = 16
    max_linked_subsets: int = 10**6

    def lowered(self, **overrides: int | None) -> Caps:
        """
        Copy with some caps replaced by smaller values.

        Raises:
            ValueError: If an override would raise a cap
        """
        values = asdict(self)
        for name, value in overrides.items():
            if value is None:
                continue
            if name not in values:
                raise ValueError(f"unknown cap {name!r}")
            if value > values[name]:
                raise ValueError(f"{name} can only be lowered ({value} > {values[name]})")
            values[name] = value
        return Caps(**values)


@dataclass
class ContainerDefaults:
    """Defaults for the container pipeline."""
    phi: int = 1
    psi: int = 1
    big_c: float = 1.0
    retry_cap: int = 1000
    seeds: list[int] = field(default_factory=lambda: [0, 1, 2])

    def params(self, seed: int) -> ContainerParams:
        return ContainerParams(
            phi=self.phi, psi=self.psi, big_c=self.big_c, seed=seed, retry_cap=self.retry_cap
        )


@dataclass
class Config:
    """Complete configuration for containerlab."""
    settings: Settings = field(default_factory=Settings)
    caps: Caps = field(default_factory=Caps)
    containers: ContainerDefaults = field(default_factory=ContainerDefaults)

    def to_dict(self) -> dict:
        """Convert config to dictionary."""
        return {
            "settings": asdict(self.settings),
            "caps": asdict(self.caps),
            "containers": asdict(self.containers),
        }

    @classmethod
    def from_dict(cls, data: dict) -> Config:
        """Create config from dictionary."""
        return cls(
            settings=Settings(**data.get("settings", {})),
            caps=Caps(**data.get("caps", {})),
            containers=ContainerDefaults(**data.get("containers", {})),
        )

    def resolve_seed(self, cli_seed: int | None = None) -> int:
        """
        The seed a run uses: the CLI value, else CONTAINER_LAB_SEED, else the config.

        Raises:
            ValueError: If the environment variable is not an integer
        """
        if cli_seed is not None:
            return cli_seed
        env = os.environ.get(SEED_ENV)
        if env:
            try:
                return int(env)
            except ValueError as e:
                raise ValueError(f"{SEED_ENV} must be an integer, got {env!r}") from e
        return self.settings.seed


def get_config_path() -> Path:
    """Get the configuration file path."""
    xdg_config = os.environ.get("XDG_CONFIG_HOME")
    if xdg_config:
        config_dir = Path(xdg_config) / "containerlab"
    else:
        config_dir = Path.home() / ".config" / "containerlab"
    return config_dir / "config.yaml"


def load_config(config_path: Path | None = None) -> Config:
    """
    Load configuration from file.

    Args:
        config_path: Optional path to config file (default: user config dir)

    Returns:
        Config object (defaults if the file is missing or unreadable)
    """
    if config_path is None:
        config_path = get_config_path()

    if not config_path.exists():
        return Config()

    try:
        with open(config_path, encoding="utf-8") as f:
            data = yaml.safe_load(f)
            if data is None:
                return Config()
            return Config.from_dict(data)
    except (OSError, yaml.YAMLError, TypeError) as e:
        logger.warning("ignoring unreadable config %s: %s", config_path, e)
        return Config()


def save_config(config: Config, config_path: Path | None = None) -> Path:
    """
    Save configuration to file.

    Returns:
        Path to saved config file
    """
    if config_path is None:
        config_path = get_config_path()

    config_path.parent.mkdir(parents=True, exist_ok=True)

    with open(config_path, "w", encoding="utf-8") as f:
        yaml.dump(config.to_dict(), f, default_flow_style=False, sort_keys=False)

    return config_path


def create_default_config(config_path: Path | None = None) -> Path:
    """
    Create a default configuration file with comments.

    Returns:
        Path to created config file
    """
    if config_path is None:
        config_path = get_config_path()

    config_path.parent.mkdir(parents=True, exist_ok=True)

    default_config = """# containerlab configuration

settings:
  # Default output format (json, csv, text)
  default_format: json

  # Enable colored output in the text report
  color_output: true

  # Worker processes for counting and isoperimetry; container runs use threads
  max_workers: 4

  # Top branching levels of the family counter turned into parallel tasks
  split_depth: 4

  # Seed when neither --seed nor CONTAINER_LAB_SEED is given
  seed: 0

caps:
  # C(n,k) for branch-and-count
  max_family_vertices: 24

  # C(n,k) for the raw subset iterator
  max_raw_vertices: 20

  # |L_{k-1}| + |L_{k+r-1}| for independent-set enumeration in H
  max_layer_vertices: 24

  # Top layer size for exhaustive isoperimetry
  max_exhaustive_subsets: 20

  # Y-degree s for the exact m_phi scan
  max_m_phi_degree: 20

  # |X| for enumerating 2-linked sets in container runs
  max_container_side: 20

  # |N(A)| for the exhaustive T0 fallback
  max_exhaustive_t0: 16

  # Candidate subsets for linked-subset counts
  max_linked_subsets: 1000000

containers:
  phi: 1
  psi: 1
  big_c: 1.0

  # T0 draws before the exhaustive fallback
  retry_cap: 1000

  # Seed battery for verify-all
  seeds: [0, 1, 2]
"""

    with open(config_path, "w", encoding="utf-8") as f:
        f.write(default_config)

    return config_path
