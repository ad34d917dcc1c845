"""Exact computer algebra for symmetric powers of Airy-type connections:
de Rham cohomology dimensions and bases over the affine and punctured
line, formal invariants at infinity, asymptotic expansion coefficients,
and irregular Hodge-number tables, all over the rationals.
"""

__version__ = "0.1.0"

from .errors import (
    DomainError,
    InconsistencyError,
    SizeLimitError,
    StabilityError,
)

__all__ = [
    "DomainError",
    "InconsistencyError",
    "SizeLimitError",
    "StabilityError",
    "__version__",
]
