"""Size caps, overridable through environment variables."""

import os

_DEFAULTS = {"brute": 7, "transfer": 12, "det": 12, "brute6v": 5, "inhom": 4}


def cap(name):
    """Return the cap called ``name``; ``TWENTYV_CAP_<NAME>`` overrides it."""
    raw = os.environ.get("TWENTYV_CAP_" + name.upper())
    if raw is not None:
        return int(raw)
    return _DEFAULTS[name]
