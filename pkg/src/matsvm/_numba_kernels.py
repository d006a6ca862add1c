"""numba-compiled kernels.

Loops keep a fixed per-entry summation order so results are bitwise
reproducible whatever the thread count. ``fastmath`` stays off for the same
reason.
"""

import numba
import numpy as np
from numba import njit, prange

# the bundled TBB is often too old and warns on first parallel call
numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

NAME = "numba"


@njit(cache=True)
def _row_sq_norms(x):
    n, d = x.shape
    out = np.empty(n)
    for i in range(n):
        acc = 0.0
        for k in range(d):
            acc += x[i, k] * x[i, k]
        out[i] = acc
    return out


@njit(parallel=True, cache=True)
def sq_dists(x1, x2):
    n1, d = x1.shape
    n2 = x2.shape[0]
    s1 = _row_sq_norms(x1)
    s2 = _row_sq_norms(x2)
    out = np.empty((n1, n2))
    for i in prange(n1):
        for j in range(n2):
            acc = 0.0
            for k in range(d):
                acc += x1[i, k] * x2[j, k]
            v = s1[i] + s2[j] - 2.0 * acc
            out[i, j] = v if v > 0.0 else 0.0
    return out


@njit(parallel=True, cache=True)
def rbf_gram(x1, x2, p):
    d = sq_dists(x1, x2)
    n1, n2 = d.shape
    for i in prange(n1):
        for j in range(n2):
            d[i, j] = np.exp(-p * d[i, j])
    return d


@njit(parallel=True, cache=True)
def linear_gram(x1, x2):
    n1, d = x1.shape
    n2 = x2.shape[0]
    out = np.empty((n1, n2))
    for i in prange(n1):
        for j in range(n2):
            acc = 0.0
            for k in range(d):
                acc += x1[i, k] * x2[j, k]
            out[i, j] = acc
    return out


@njit(cache=True, nogil=True)
def agd_loop(kbar, y, c, mu, tol, max_iter):
    # iterates are held label-major (m x n) so the product is dy^T @ Kbar,
    # which BLAS handles far better than a skinny Kbar @ dy; Kbar is symmetric
    n, m = y.shape
    yt = np.ascontiguousarray(y.T)
    alpha = np.zeros((m, n))
    alpha_new = np.empty((m, n))
    delta = np.zeros((m, n))
    dy = np.empty((m, n))
    z = 1.0
    for t in range(1, max_iter + 1):
        for j in range(m):
            for i in range(n):
                dy[j, i] = delta[j, i] * yt[j, i]
        kdy = np.dot(dy, kbar)
        z_new = (1.0 + np.sqrt(1.0 + 4.0 * z * z)) / 2.0
        momentum = (z - 1.0) / z_new
        step_sq = 0.0
        prev_sq = 0.0
        for j in range(m):
            for i in range(n):
                g = kdy[j, i] * yt[j, i] - 1.0
                if not np.isfinite(g):
                    return np.ascontiguousarray(alpha.T), t, False, t
                a = delta[j, i] - mu * g
                if a < 0.0:
                    a = 0.0
                elif a > c:
                    a = c
                diff = a - alpha[j, i]
                step_sq += diff * diff
                prev_sq += alpha[j, i] * alpha[j, i]
                d = a + momentum * diff
                if d < 0.0:
                    d = 0.0
                elif d > c:
                    d = c
                delta[j, i] = d
                alpha_new[j, i] = a
        alpha, alpha_new = alpha_new, alpha
        z = z_new
        if np.sqrt(step_sq) <= tol * max(1.0, np.sqrt(prev_sq)):
            return np.ascontiguousarray(alpha.T), t, True, -1
    return np.ascontiguousarray(alpha.T), max_iter, False, -1
