"""Resource caps guarding the exhaustive code paths.

Each cap can be overridden by an environment variable so oversized but
deliberate runs do not require code edits.
"""

from __future__ import annotations

import os

_ENV_PREFIX = "RECTBOUND_"

# Largest distribution support that enumerate_support will materialize.
DEFAULT_SUPPORT_CAP = 10**7
# Largest number of row subsets the max-weight oracle will sweep.
DEFAULT_ORACLE_SUBSET_CAP = 2**16
# Largest rectangle count enumerate_rectangles will yield.
DEFAULT_RECTANGLE_CAP = 2**26
# Largest input-space x coin-space product for exact protocol analysis.
DEFAULT_EXACT_PROTOCOL_CAP = 2**22


def cap_value(name: str, default: int) -> int:
    """Resolve a cap, honoring the RECTBOUND_<NAME> environment override."""
    raw = os.environ.get(_ENV_PREFIX + name)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{_ENV_PREFIX}{name} must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise ValueError(f"{_ENV_PREFIX}{name} must be positive, got {value}")
    return value


def support_cap() -> int:
    return cap_value("SUPPORT_CAP", DEFAULT_SUPPORT_CAP)


def oracle_subset_cap() -> int:
    return cap_value("ORACLE_SUBSET_CAP", DEFAULT_ORACLE_SUBSET_CAP)


def rectangle_cap() -> int:
    return cap_value("RECTANGLE_CAP", DEFAULT_RECTANGLE_CAP)


def exact_protocol_cap() -> int:
    return cap_value("EXACT_PROTOCOL_CAP", DEFAULT_EXACT_PROTOCOL_CAP)
