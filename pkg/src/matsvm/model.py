"""Matrix-SVM, Binary-Relevance SVM and the least-squares variant.

All hinge-loss models keep the training features and the coefficient matrix
``coeff = alpha o Y``. Scores for new points are
``augmented_gram(x_test, x_train) @ coeff``. The primal weights
``W = X^T (alpha o Y)`` only exist implicitly, except for the linear
least-squares model, which stores ``W`` for the ones-augmented inputs.
"""

import json
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from .exceptions import DegenerateLabelError, DimensionError, ParameterError
from .kernel import KernelSpec, augmented_gram
from .matrix import as_matrix
from .solver import DualProblem, SolverOptions, agd_solve, check_labels, dual_objective

FORMAT_VERSION = 1
MATRIX, BR, LS = "matrix", "br", "ls"


@dataclass(frozen=True)
class TrainedModel:
    kernel: KernelSpec
    x_train: np.ndarray
    coeff: Optional[np.ndarray]
    c: float
    fit_seconds: float = 0.0
    solver_iterations: int = 0
    method: str = MATRIX
    converged: bool = True
    w: Optional[np.ndarray] = None
    shared_gram: bool = False
    notes: tuple = ()

    @property
    def n_features(self):
        return self.x_train.shape[1]

    @property
    def n_labels(self):
        return (self.w if self.coeff is None else self.coeff).shape[1]

    @property
    def alpha(self):
        """Dual multipliers recovered from ``coeff``; ``None`` for LS models."""
        if self.coeff is None:
            return None
        return np.abs(self.coeff)


@dataclass(frozen=True)
class PrimalDiagnostics:
    primal_objective: float
    slack_q: np.ndarray
    duality_gap: float
    dual_objective: float


@dataclass(frozen=True)
class KKTReport:
    """Per-entry complementary-slackness check.

    ``beta = c - alpha`` is the multiplier of ``Q >= 0``. Entries with
    ``0 < alpha < c`` must sit on the margin, entries at 0 must clear it and
    entries at ``c`` must not exceed it.
    """

    n_entries: int
    free_violations: int
    lower_violations: int
    upper_violations: int
    max_violation: float
    beta: np.ndarray = field(repr=False)

    @property
    def violations(self):
        return self.free_violations + self.lower_violations + self.upper_violations

    @property
    def violation_fraction(self):
        return self.violations / self.n_entries


def _check_training(x, y):
    x = np.ascontiguousarray(as_matrix(x, "X"))
    y = np.ascontiguousarray(check_labels(y))
    if x.shape[0] != y.shape[0]:
        raise DimensionError(f"X has {x.shape[0]} rows but Y has {y.shape[0]}")
    if x.shape[0] < 2:
        raise DimensionError("at least two training samples are required")
    for j in range(y.shape[1]):
        col = y[:, j]
        if (col == col[0]).all():
            raise DegenerateLabelError(j, col[0])
    return x, y


def fit_matrix_svm(x, y, kernel, c=1.0, opts=None):
    """Train all label columns jointly with one n x m dual solve."""
    x, y = _check_training(x, y)
    opts = opts or SolverOptions()
    start = time.perf_counter()
    kbar = augmented_gram(x, x, kernel)
    sol = agd_solve(DualProblem(kbar, y, c), opts)
    elapsed = time.perf_counter() - start
    return TrainedModel(
        kernel=kernel,
        x_train=x,
        coeff=sol.alpha * y,
        c=float(c),
        fit_seconds=elapsed,
        solver_iterations=sol.iterations,
        method=MATRIX,
        converged=sol.converged,
    )


def fit_br_svm(x, y, kernel, c=1.0, opts=None, shared_gram=False, workers=1):
    """Train one independent binary SVM per label column.

    By default the Gram matrix is rebuilt for every column, the way
    separately trained binary classifiers would. ``shared_gram=True`` builds
    it once (ablation). Only in that mode may ``workers > 1`` solve the
    columns concurrently.
    """
    x, y = _check_training(x, y)
    opts = opts or SolverOptions()
    if workers > 1 and not shared_gram:
        raise ParameterError("concurrent BR solves require shared_gram=True")
    n, m = y.shape

    start = time.perf_counter()
    kbar = augmented_gram(x, x, kernel) if shared_gram else None

    def solve(j):
        k = kbar if shared_gram else augmented_gram(x, x, kernel)
        return agd_solve(DualProblem(k, y[:, j : j + 1], c), opts)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            sols = list(pool.map(solve, range(m)))
    else:
        sols = [solve(j) for j in range(m)]
    coeff = np.empty((n, m))
    for j, sol in enumerate(sols):
        coeff[:, j] = sol.alpha[:, 0] * y[:, j]
    elapsed = time.perf_counter() - start

    return TrainedModel(
        kernel=kernel,
        x_train=x,
        coeff=coeff,
        c=float(c),
        fit_seconds=elapsed,
        solver_iterations=sum(s.iterations for s in sols),
        method=BR,
        converged=all(s.converged for s in sols),
        shared_gram=shared_gram,
    )


def _augment(x):
    return np.hstack([x, np.ones((x.shape[0], 1))])


def fit_ls_matrix_svm(x, y, c=1.0):
    """Closed-form linear model for ``1/2 ||W||_F^2 + c ||Y - X'W||_F^2``.

    ``X'`` is ``x`` with a ones column appended, so ``W`` has d+1 rows.
    The normal equations ``(X'^T X' + I/(2c)) W = X'^T Y`` are always SPD.
    """
    x = np.ascontiguousarray(as_matrix(x, "X"))
    y = check_labels(y)
    if x.shape[0] != y.shape[0]:
        raise DimensionError(f"X has {x.shape[0]} rows but Y has {y.shape[0]}")
    if not (np.isfinite(c) and c > 0):
        raise ParameterError(f"c must be positive, got {c!r}")

    start = time.perf_counter()
    xa = _augment(x)
    a = xa.T @ xa
    a[np.diag_indices_from(a)] += 1.0 / (2.0 * c)
    rhs = xa.T @ y
    try:
        w = scipy.linalg.cho_solve(scipy.linalg.cho_factor(a), rhs)
    except np.linalg.LinAlgError:
        # Rounding can defeat Cholesky when the ridge is tiny next to X'^T X'.
        w = scipy.linalg.lstsq(a, rhs)[0]
    elapsed = time.perf_counter() - start

    notes = ()
    cond = np.linalg.cond(a)
    if cond > 1e12:
        msg = f"normal equations are ill-conditioned (cond ~ {cond:.3g})"
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
        notes = (msg,)
    return TrainedModel(
        kernel=KernelSpec.linear(),
        x_train=x,
        coeff=None,
        c=float(c),
        fit_seconds=elapsed,
        method=LS,
        w=w,
        notes=notes,
    )


def decision_scores(model, x_test):
    """Real-valued scores ``Z`` (n_t x m); predictions threshold these."""
    x_test = np.ascontiguousarray(as_matrix(x_test, "X_test"))
    if x_test.shape[1] != model.n_features:
        raise DimensionError(
            f"model expects {model.n_features} features, got {x_test.shape[1]}"
        )
    if model.w is not None:
        return _augment(x_test) @ model.w
    return augmented_gram(x_test, model.x_train, model.kernel) @ model.coeff


def predict_multilabel(z):
    """Sign of the scores, with a score of exactly 0 mapped to +1."""
    return np.where(np.asarray(z) >= 0, 1.0, -1.0)


def predict_multiclass(z):
    """Row-wise argmax (0-based); ties go to the lowest index."""
    z = as_matrix(z, "Z")
    if z.shape[1] < 2:
        raise DimensionError("multiclass prediction needs at least two score columns")
    return np.argmax(z, axis=1)


def multiclass_signs(z):
    """The argmax prediction as a +-1 one-hot label matrix."""
    idx = predict_multiclass(z)
    out = -np.ones(np.shape(z))
    out[np.arange(len(idx)), idx] = 1.0
    return out


def _hinge_parts(model, x, y):
    if model.coeff is None:
        raise ValueError("diagnostics need a hinge-loss model")
    x = as_matrix(x, "X")
    y = check_labels(y)
    if x.shape != model.x_train.shape or y.shape != model.coeff.shape:
        raise DimensionError("data does not match the model's training shapes")
    kbar = augmented_gram(x, model.x_train, model.kernel)
    z = kbar @ model.coeff
    return x, y, kbar, z


def primal_diagnostics(model, x, y):
    """Hinge slacks, primal objective and duality gap at the model's solution.

    ``Tr(W^T W)`` is evaluated in feature space as ``Tr(coeff^T Kbar coeff)``.
    The gap is ``primal - (-dual)`` with the dual in its minimisation form.
    """
    x, y, kbar, z = _hinge_parts(model, x, y)
    q = np.maximum(0.0, 1.0 - y * z)
    primal = 0.5 * float(np.sum(model.coeff * (kbar @ model.coeff))) + model.c * float(q.sum())
    dual = dual_objective(model.coeff * y, DualProblem(kbar, y, model.c))
    return PrimalDiagnostics(
        primal_objective=primal,
        slack_q=q,
        duality_gap=primal + dual,
        dual_objective=dual,
    )


def kkt_report(model, x, y, kkt_tol=1e-2):
    x, y, _, z = _hinge_parts(model, x, y)
    alpha = model.coeff * y
    margin = y * z
    at_lower = alpha <= 0.0
    at_upper = alpha >= model.c
    free = ~(at_lower | at_upper)

    free_err = np.where(free, np.abs(margin - 1.0), 0.0)
    lower_err = np.where(at_lower, np.maximum(0.0, 1.0 - margin), 0.0)
    upper_err = np.where(at_upper, np.maximum(0.0, margin - 1.0), 0.0)
    return KKTReport(
        n_entries=alpha.size,
        free_violations=int(np.sum(free_err > kkt_tol)),
        lower_violations=int(np.sum(lower_err > kkt_tol)),
        upper_violations=int(np.sum(upper_err > kkt_tol)),
        max_violation=float(max(free_err.max(), lower_err.max(), upper_err.max())),
        beta=model.c - alpha,
    )


def save_model(model, path, prune=False):
    """Write ``model`` to an ``.npz`` container.

    ``prune=True`` drops training rows whose coefficients are all zero;
    scores then change only by summation-order rounding.
    """
    x, coeff = model.x_train, model.coeff
    if prune and coeff is not None:
        keep = np.any(coeff != 0.0, axis=1)
        x, coeff = x[keep], coeff[keep]
    meta = {
        "format_version": FORMAT_VERSION,
        "kernel": model.kernel.to_dict(),
        "c": model.c,
        "method": model.method,
        "fit_seconds": model.fit_seconds,
        "solver_iterations": model.solver_iterations,
        "converged": model.converged,
        "shared_gram": model.shared_gram,
        "notes": list(model.notes),
    }
    arrays = {"meta": np.array(json.dumps(meta)), "x_train": x}
    if coeff is not None:
        arrays["coeff"] = coeff
    if model.w is not None:
        arrays["w"] = model.w
    with open(path, "wb") as fh:
        np.savez(fh, **arrays)


def load_model(path):
    with np.load(path, allow_pickle=False) as data:
        meta = json.loads(str(data["meta"]))
        if meta.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"unsupported model format {meta.get('format_version')!r}")
        return TrainedModel(
            kernel=KernelSpec.from_dict(meta["kernel"]),
            x_train=data["x_train"],
            coeff=data["coeff"] if "coeff" in data else None,
            c=meta["c"],
            fit_seconds=meta["fit_seconds"],
            solver_iterations=meta["solver_iterations"],
            method=meta["method"],
            converged=meta["converged"],
            w=data["w"] if "w" in data else None,
            shared_gram=meta["shared_gram"],
            notes=tuple(meta["notes"]),
        )
