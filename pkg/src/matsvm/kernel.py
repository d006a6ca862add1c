"""Gram matrices for the linear and RBF kernels.

The bias is never stored as a feature column. Instead the augmented Gram
``K + E`` plays the role of ``X X^T`` for data carrying a trailing column of
ones.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _backend
from .exceptions import DimensionError, ParameterError
from .matrix import as_matrix

LINEAR = "linear"
RBF = "rbf"


@dataclass(frozen=True)
class KernelSpec:
    """Kernel choice; ``p`` is the RBF width in ``exp(-p * ||a - b||^2)``."""

    kind: str = RBF
    p: Optional[float] = None

    def __post_init__(self):
        if self.kind not in (LINEAR, RBF):
            raise ParameterError(f"unknown kernel kind {self.kind!r}")
        if self.kind == RBF:
            if self.p is None or not np.isfinite(self.p) or self.p <= 0:
                raise ParameterError(f"RBF width p must be positive, got {self.p!r}")

    @classmethod
    def linear(cls):
        return cls(LINEAR)

    @classmethod
    def rbf(cls, p):
        return cls(RBF, float(p))

    def to_dict(self):
        return {"kind": self.kind, "p": self.p if self.kind == RBF else None}

    @classmethod
    def from_dict(cls, d):
        return cls(d["kind"], d.get("p"))


def _check_pair(x1, x2):
    x1 = np.ascontiguousarray(as_matrix(x1, "X1"))
    x2 = np.ascontiguousarray(as_matrix(x2, "X2"))
    if x1.shape[1] != x2.shape[1]:
        raise DimensionError(
            f"feature dimension mismatch: X1 has {x1.shape[1]} columns, X2 has {x2.shape[1]}"
        )
    return x1, x2


def gram(x1, x2, spec):
    """Kernel matrix between the rows of ``x1`` (n1 x d) and ``x2`` (n2 x d)."""
    x1, x2 = _check_pair(x1, x2)
    kernels = _backend.active()
    if spec.kind == LINEAR:
        return kernels.linear_gram(x1, x2)
    return kernels.rbf_gram(x1, x2, float(spec.p))


def augmented_gram(x1, x2, spec):
    """``gram(x1, x2, spec) + 1``, the kernel of ones-augmented data."""
    k = gram(x1, x2, spec)
    k += 1.0
    return k
