"""Runtime settings read from the environment."""
import os


def _int_env(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    return int(raw)


PRECISION = _int_env("GRASSCOUNT_PRECISION", 50)
CAP_N = _int_env("GRASSCOUNT_CAP_N", 8)
# Upper limit on the number of lattice points any single enumeration may visit.
MAX_POINTS = _int_env("GRASSCOUNT_MAX_POINTS", 20_000_000)
USE_NUMBA = os.environ.get("GRASSCOUNT_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


class CapacityError(RuntimeError):
    """Raised when an exact computation exceeds the configured size limits."""
