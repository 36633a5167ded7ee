"""Size caps for dense probability tables.

The default cap of 2**24 entries keeps dense tables comfortably in memory;
the environment variable EPT_DENSE_CAP overrides it per process.
"""

from __future__ import annotations

import os

DEFAULT_DENSE_CAP = 2 ** 24


def dense_cap() -> int:
    value = os.environ.get("EPT_DENSE_CAP")
    if value is None:
        return DEFAULT_DENSE_CAP
    return int(value)
