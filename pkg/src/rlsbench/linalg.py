"""Minimum-norm least squares and pseudo-inverse kernels.

The public kernel is SVD-based so wide, square, tall and rank-deficient
systems are all handled uniformly: singular values below
max(n, d) * sigma_max * eps * sv_tol_factor are treated as zero.

``subset_min_norm`` solves many row-subset systems of one matrix at once.
It factors through the Gram matrix (each subset Gram is a submatrix of the
full one) with a batched LU solve, falling back to an eigenvalue-clipped
pseudo-solve whenever a system is singular or ill-conditioned.  Its results
agree with ``min_norm_least_squares`` applied subset by subset.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_EPS = np.finfo(float).eps


@dataclass
class LstSqSolution:
    theta_hat: np.ndarray
    rank: int
    residual_norm: float


def _validate(a, b=None, sv_tol_factor=1.0):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.size == 0:
        raise ValueError("matrix must be a nonempty 2-D array")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    if sv_tol_factor <= 0:
        raise ValueError("sv_tol_factor must be positive")
    if b is None:
        return a
    b = np.asarray(b, dtype=float)
    if b.shape != (a.shape[0],):
        raise ValueError(f"rhs must have length {a.shape[0]}, got shape {b.shape}")
    if not np.all(np.isfinite(b)):
        raise ValueError("rhs entries must be finite")
    return a, b


def min_norm_least_squares(a, b, sv_tol_factor: float = 1.0) -> LstSqSolution:
    """Minimum-l2-norm minimizer of ||A theta - b|| via SVD."""
    a, b = _validate(a, b, sv_tol_factor)
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    cutoff = max(a.shape) * s[0] * _EPS * sv_tol_factor if s.size else 0.0
    keep = s > cutoff
    coeff = (u.T @ b)[keep] / s[keep]
    theta = vt[keep].T @ coeff
    residual = float(np.linalg.norm(a @ theta - b))
    return LstSqSolution(theta, rank=int(keep.sum()), residual_norm=residual)


def pseudo_inverse(a, sv_tol_factor: float = 1.0) -> np.ndarray:
    """Moore-Penrose pseudo-inverse with the same singular-value cutoff."""
    a = _validate(a, sv_tol_factor=sv_tol_factor)
    return np.linalg.pinv(a, rcond=max(a.shape) * _EPS * sv_tol_factor)


def _gram_pseudo_solve(g, rhs, size_scale, sv_tol_factor):
    """Solve symmetric PSD systems g z = rhs with eigenvalue clipping.

    Eigenvalues below lam_max * size_scale * eps * factor count as zero,
    matching the SVD cutoff at the Gram noise floor.
    """
    w, q = np.linalg.eigh(g)
    cutoff = np.abs(w).max(axis=-1, keepdims=True) * (size_scale * _EPS * sv_tol_factor)
    keep = w > cutoff
    winv = np.zeros_like(w)
    winv[keep] = 1.0 / w[keep]
    qt_rhs = np.einsum("...ij,...i->...j", q, rhs)
    return np.einsum("...ij,...j->...i", q, winv * qt_rhs)


def subset_min_norm(x, y, rows, sv_tol_factor: float = 1.0) -> np.ndarray:
    """Min-norm least-squares solutions on many row subsets of one system.

    ``rows`` is an (m, n0) integer array of row indices into ``x``; the
    result is (m, d) with row i solving the subsystem (x[rows[i]], y[rows[i]]).
    """
    x, y = _validate(x, y, sv_tol_factor)
    rows = np.asarray(rows)
    if rows.ndim != 2:
        raise ValueError("rows must be a 2-D index array")
    m, n0 = rows.shape
    n, d = x.shape
    if n0 < 1 or rows.min() < 0 or rows.max() >= n:
        raise ValueError("row indices out of range")

    a = x[rows]
    b = y[rows]
    if n0 <= d:
        # wide/square: theta = A^T (A A^T)^-1 b, subset Grams gathered
        # from the full Gram so every dot product is computed once
        g_full = x @ x.T
        g = g_full[rows[:, :, None], rows[:, None, :]]
        rhs = b
        scale = max(n0, d)
    else:
        # tall: theta = (A^T A)^-1 A^T b
        g = np.einsum("mni,mnj->mij", a, a)
        rhs = np.einsum("mnd,mn->md", a, b)
        scale = max(n0, d)

    try:
        z = np.linalg.solve(g, rhs[..., None])[..., 0]
        resid = np.abs(np.einsum("mij,mj->mi", g, z) - rhs).max(axis=1)
        bound = 1e-8 * (
            np.abs(rhs).max(axis=1)
            + np.abs(g).max(axis=(1, 2)) * np.abs(z).max(axis=1)
        )
        bad = ~np.isfinite(resid) | (resid > bound)
        if np.any(bad):
            z[bad] = _gram_pseudo_solve(g[bad], rhs[bad], scale, sv_tol_factor)
    except np.linalg.LinAlgError:
        z = _gram_pseudo_solve(g, rhs, scale, sv_tol_factor)

    if n0 <= d:
        return np.einsum("mnd,mn->md", a, z)
    return z
