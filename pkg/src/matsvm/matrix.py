"""Dense matrix primitives.

Every matrix in the package is a 2-D ``float64`` numpy array; this module
adds the shape checks and the few algebraic helpers the solver needs.
Accumulation is plain double precision, no compensated summation.
"""

import numpy as np

from .exceptions import DimensionError


def as_matrix(a, name="matrix"):
    """Return ``a`` as a finite 2-D float64 array with both sides >= 1."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"{name} must be non-empty, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def _same_shape(a, b, op):
    if a.shape != b.shape:
        raise DimensionError(f"{op}: shapes {a.shape} and {b.shape} differ")


def hadamard(a, b):
    """Entrywise product of two equally shaped matrices."""
    a = as_matrix(a, "A")
    b = as_matrix(b, "B")
    _same_shape(a, b, "hadamard")
    return a * b


def frobenius_norm(a):
    a = as_matrix(a, "A")
    return float(np.sqrt(np.sum(a * a)))


def trace_inner(a, b):
    """Tr(A^T B), i.e. the sum of the entrywise product."""
    a = as_matrix(a, "A")
    b = as_matrix(b, "B")
    _same_shape(a, b, "trace_inner")
    return float(np.sum(a * b))


def matmul(a, b):
    a = as_matrix(a, "A")
    b = as_matrix(b, "B")
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"matmul: shapes {a.shape} and {b.shape} are not aligned")
    return a @ b


def ones(rows, cols):
    """The all-ones matrix E."""
    return np.ones((rows, cols))
