"""Shared numeric tolerances and size caps.

Every module reads its tolerances from the single record below so there is
one knob for the whole package.
"""

import os
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    construction: float = 1e-12  # invariants checked when values are built
    check: float = 1e-10         # looser bound used by property checks
    nonzero: float = 1e-12       # amplitudes/diagonals below this count as zero


TOL = Tolerances()

# Tensor products refuse combined dimensions beyond this (2**20 matrix entries).
DEFAULT_MAX_DIM = 1024


def max_dim() -> int:
    """Largest allowed Hilbert-space dimension for tensor products.

    Overridable through the SUPERSIM_MAX_DIM environment variable.
    """
    value = os.environ.get("SUPERSIM_MAX_DIM")
    return int(value) if value else DEFAULT_MAX_DIM
