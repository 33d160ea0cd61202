"""Resource caps and run configuration."""
from __future__ import annotations

import os
from dataclasses import dataclass, field

DEFAULT_MEMO_CAP = 10**7
DEFAULT_MAX_CELLS = 2_000_000
DEFAULT_MAX_SUBSETS = 1 << 20


def max_cells() -> int:
    """Cap on the number of simplices fed to a boundary-matrix computation.

    Overridable through the ``DH_MAX_CELLS`` environment variable.
    """
    raw = os.environ.get("DH_MAX_CELLS")
    if raw is None:
        return DEFAULT_MAX_CELLS
    value = int(raw)
    if value <= 0:
        raise ValueError("DH_MAX_CELLS must be positive")
    return value


@dataclass(frozen=True)
class RunConfig:
    radius: int = 2
    quotient: str | None = None
    memo_cap: int = DEFAULT_MEMO_CAP
    max_cells: int = field(default_factory=max_cells)
    output_dir: str | None = None
    verbosity: int = 0

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be >= 0")
        if self.memo_cap <= 0 or self.max_cells <= 0:
            raise ValueError("resource caps must be positive")
