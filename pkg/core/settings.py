from dotenv import load_dotenv
from core.errors import ConfigError
import os

load_dotenv()

DEFAULT_MAX_THREADS = 4


def scan_threads() -> int:
    """Worker count for sweeps, capped by DISPERSIA_THREADS when set."""
    default = min(DEFAULT_MAX_THREADS, os.cpu_count() or 1)
    raw = os.getenv("DISPERSIA_THREADS")
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"DISPERSIA_THREADS must be a positive integer, got {raw!r}")
    if value < 1:
        raise ConfigError(f"DISPERSIA_THREADS must be a positive integer, got {raw!r}")
    return value
