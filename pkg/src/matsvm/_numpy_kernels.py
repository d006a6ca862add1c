"""Pure-numpy implementations of the hot kernels.

Signatures match ``_numba_kernels`` one for one; results agree to rounding.
"""

import numpy as np

NAME = "numpy"


def sq_dists(x1, x2):
    s1 = np.einsum("ij,ij->i", x1, x1)
    s2 = np.einsum("ij,ij->i", x2, x2)
    d = s1[:, None] + s2[None, :] - 2.0 * (x1 @ x2.T)
    np.maximum(d, 0.0, out=d)
    return d


def rbf_gram(x1, x2, p):
    d = sq_dists(x1, x2)
    d *= -p
    np.exp(d, out=d)
    return d


def linear_gram(x1, x2):
    return x1 @ x2.T


def agd_loop(kbar, y, c, mu, tol, max_iter):
    """Run the clipped accelerated iteration.

    Returns ``(alpha, iterations, converged, bad_iteration)`` where
    ``bad_iteration`` is -1 unless a non-finite gradient was met. Iterates
    are kept label-major; ``dy^T @ Kbar`` is the transposed product for the
    symmetric Kbar.
    """
    yt = np.ascontiguousarray(y.T)
    alpha = np.zeros_like(yt)
    delta = np.zeros_like(yt)
    z = 1.0
    for t in range(1, max_iter + 1):
        grad = ((delta * yt) @ kbar) * yt - 1.0
        if not np.isfinite(grad).all():
            return np.ascontiguousarray(alpha.T), t, False, t
        alpha_new = np.clip(delta - mu * grad, 0.0, c)
        z_new = (1.0 + np.sqrt(1.0 + 4.0 * z * z)) / 2.0
        diff = alpha_new - alpha
        delta = np.clip(alpha_new + ((z - 1.0) / z_new) * diff, 0.0, c)
        done = np.sqrt(np.sum(diff * diff)) <= tol * max(1.0, np.sqrt(np.sum(alpha * alpha)))
        alpha = alpha_new
        z = z_new
        if done:
            return np.ascontiguousarray(alpha.T), t, True, -1
    return np.ascontiguousarray(alpha.T), max_iter, False, -1
