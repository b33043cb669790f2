"""Enumeration caps.

Defaults guard against accidental combinatorial blow-up.  The environment
variable ``FREEEMBED_MAX_K`` raises (or lowers) the caps at call time: it sets
the ground-size cap for NC(k) and for symbolic sums to its value, and the
ground-size cap for NC_2 to twice its value.
"""

from __future__ import annotations

import os

from .errors import ConfigError

ENV_VAR = "FREEEMBED_MAX_K"

DEFAULT_NC_CAP = 12  # |NC(12)| = 208012
DEFAULT_NC2_CAP = 20  # |NC_2(20)| = 16796
DEFAULT_SYMBOLIC_CAP = 8  # |NC(8)| = 1430 terms


def _env_k() -> int | None:
    raw = os.environ.get(ENV_VAR)
    if raw is None or raw.strip() == "":
        return None
    try:
        k = int(raw)
    except ValueError:
        raise ConfigError(f"{ENV_VAR} must be an integer, got {raw!r}") from None
    if k < 1:
        raise ConfigError(f"{ENV_VAR} must be positive, got {k}")
    return k


def nc_cap() -> int:
    k = _env_k()
    return DEFAULT_NC_CAP if k is None else k


def nc2_cap() -> int:
    k = _env_k()
    return DEFAULT_NC2_CAP if k is None else 2 * k


def symbolic_cap() -> int:
    k = _env_k()
    return DEFAULT_SYMBOLIC_CAP if k is None else k
