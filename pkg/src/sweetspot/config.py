"""Configuration management for sweetspot."""

import os
from dataclasses import dataclass

from sweetspot.errors import SweetspotError


class ConfigError(SweetspotError):
    """Raised when configuration is invalid or missing."""
    pass


# Default values
DEFAULT_OUTPUT_DIR = "out"
DEFAULT_SEED = 20120101
DEFAULT_REPLICATIONS = 20
DEFAULT_WORKERS = 1
MAX_SEED = 2 ** 64


def _int_from_env(key: str, default: int) -> int:
    raw = os.getenv(key, str(default))
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got: {raw}")


@dataclass(frozen=True)
class Config:
    """Immutable process-wide defaults, overridable per scenario."""

    output_dir: str = DEFAULT_OUTPUT_DIR
    default_seed: int = DEFAULT_SEED
    default_replications: int = DEFAULT_REPLICATIONS
    workers: int = DEFAULT_WORKERS

    @classmethod
    def from_env(cls) -> "Config":
        """Load configuration from environment variables.

        Raises:
            ConfigError: If a numeric variable does not parse or is out of range.
        """
        seed = _int_from_env("SWEETSPOT_DEFAULT_SEED", DEFAULT_SEED)
        if not 0 <= seed < MAX_SEED:
            raise ConfigError(f"SWEETSPOT_DEFAULT_SEED must fit in 64 bits, got: {seed}")

        replications = _int_from_env("SWEETSPOT_DEFAULT_REPLICATIONS", DEFAULT_REPLICATIONS)
        if replications < 1:
            raise ConfigError(f"SWEETSPOT_DEFAULT_REPLICATIONS must be >= 1, got: {replications}")

        workers = _int_from_env("SWEETSPOT_WORKERS", DEFAULT_WORKERS)
        if workers < 1:
            raise ConfigError(f"SWEETSPOT_WORKERS must be >= 1, got: {workers}")

        return cls(
            output_dir=os.getenv("SWEETSPOT_OUTPUT_DIR", DEFAULT_OUTPUT_DIR),
            default_seed=seed,
            default_replications=replications,
            workers=workers,
        )
