"""Box-constrained matrix dual and its accelerated gradient solver.

The dual over the multiplier matrix ``alpha`` (n x m) is::

    min  1/2 Tr((alpha o Y)^T Kbar (alpha o Y)) - Tr(E^T alpha)
    s.t. 0 <= alpha <= c

with gradient ``(Kbar (alpha o Y)) o Y - E``. Its Lipschitz constant is
bounded by ``||Kbar||_F``, whose reciprocal is the fixed step size.
"""

from dataclasses import dataclass

import numpy as np

from . import _backend
from .exceptions import DimensionError, NumericError, ParameterError
from .matrix import as_matrix, frobenius_norm


def check_labels(y, name="Y"):
    y = as_matrix(y, name)
    if not np.isin(y, (-1.0, 1.0)).all():
        raise ValueError(f"{name} entries must be -1 or +1")
    return y


@dataclass(frozen=True)
class DualProblem:
    kbar: np.ndarray
    y: np.ndarray
    c: float = 1.0

    def __post_init__(self):
        kbar = np.ascontiguousarray(as_matrix(self.kbar, "Kbar"))
        y = np.ascontiguousarray(check_labels(self.y))
        n = kbar.shape[0]
        if kbar.shape != (n, n):
            raise DimensionError(f"Kbar must be square, got {kbar.shape}")
        if y.shape[0] != n:
            raise DimensionError(f"Kbar is {kbar.shape} but Y has {y.shape[0]} rows")
        if np.abs(kbar - kbar.T).max() > 1e-10:
            raise ValueError("Kbar is not symmetric")
        if not (np.isfinite(self.c) and self.c > 0):
            raise ParameterError(f"c must be positive, got {self.c!r}")
        object.__setattr__(self, "kbar", kbar)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "c", float(self.c))

    @property
    def shape(self):
        return self.y.shape


@dataclass(frozen=True)
class SolverOptions:
    """Stop when ``||alpha_{t+1} - alpha_t||_F <= tol * max(1, ||alpha_t||_F)``."""

    tol: float = 1e-5
    max_iter: int = 1000

    def __post_init__(self):
        if not self.tol > 0:
            raise ParameterError(f"tol must be positive, got {self.tol!r}")
        if int(self.max_iter) < 1:
            raise ParameterError(f"max_iter must be >= 1, got {self.max_iter!r}")


@dataclass(frozen=True)
class DualSolution:
    alpha: np.ndarray
    iterations: int
    objective: float
    converged: bool


def _check_alpha(alpha, prob):
    alpha = as_matrix(alpha, "alpha")
    if alpha.shape != prob.shape:
        raise DimensionError(f"alpha has shape {alpha.shape}, problem expects {prob.shape}")
    return alpha


def dual_objective(alpha, prob):
    """Dual objective value; ``alpha`` need not be feasible."""
    alpha = _check_alpha(alpha, prob)
    ay = alpha * prob.y
    return float(0.5 * np.sum(ay * (prob.kbar @ ay)) - np.sum(alpha))


def dual_gradient(alpha, prob):
    alpha = _check_alpha(alpha, prob)
    return (prob.kbar @ (alpha * prob.y)) * prob.y - 1.0


def lipschitz_constant(kbar):
    return frobenius_norm(kbar)


def project_box(m, c):
    """Clamp every entry of ``m`` into ``[0, c]``."""
    if not c > 0:
        raise ParameterError(f"box bound c must be positive, got {c!r}")
    return np.clip(np.asarray(m, dtype=np.float64), 0.0, c)


def next_momentum(z):
    return (1.0 + np.sqrt(1.0 + 4.0 * z * z)) / 2.0


def agd_solve(prob, opts=None):
    """Solve the dual by accelerated projected gradient.

    Starts from ``alpha = delta = 0`` and ``z = 1`` with step ``1/||Kbar||_F``.
    Both the gradient step and the extrapolated point are clipped into the
    box each iteration; there are no restarts. Hitting ``max_iter`` returns
    with ``converged=False`` instead of raising.

    Raises
    ------
    NumericError
        If the gradient becomes non-finite; ``.iteration`` records where.
    """
    opts = opts or SolverOptions()
    lf = lipschitz_constant(prob.kbar)
    if lf == 0:
        raise NumericError("Kbar is the zero matrix")
    kernels = _backend.active()
    alpha, iterations, converged, bad = kernels.agd_loop(
        prob.kbar, prob.y, prob.c, 1.0 / lf, float(opts.tol), int(opts.max_iter)
    )
    if bad >= 0:
        raise NumericError("non-finite gradient", iteration=int(bad))
    return DualSolution(
        alpha=alpha,
        iterations=int(iterations),
        objective=dual_objective(alpha, prob),
        converged=bool(converged),
    )
