"""Dense matrix constructions and SVD-backed numerical utilities.

Everything downstream (trajectory operators, least-squares identification,
design formulas) is built from the handful of primitives in this module.
All functions are pure and operate on plain float ndarrays.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg


class SvdFactors(NamedTuple):
    """Full singular value decomposition A = U @ diag(s) @ Vt.

    Singular values are non-increasing and non-negative; U and Vt are
    orthogonal.
    """

    U: np.ndarray
    s: np.ndarray
    Vt: np.ndarray


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-D float array, rejecting NaN/Inf entries."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got ndim={a.ndim}")
    if a.size and not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def default_rank_tol(a: np.ndarray) -> float:
    """Default relative rank tolerance, 1e-10 * max(rows, cols)."""
    return 1e-10 * max(a.shape)


def hankel(z, depth: int) -> np.ndarray:
    """Hankel matrix of the given depth built from a scalar sequence.

    Column j holds the length-`depth` sliding window (z[j], ..., z[j+depth-1]);
    consecutive columns overlap by depth - 1 entries.

    Parameters
    ----------
    z : array_like, shape (T,)
        Scalar signal.
    depth : int
        Window length L, 1 <= L <= T.

    Returns
    -------
    ndarray, shape (depth, T - depth + 1)
    """
    z = np.asarray(z, dtype=float).ravel()
    T = z.size
    if not 1 <= depth <= T:
        raise ValueError(f"hankel depth must satisfy 1 <= depth <= {T}, got {depth}")
    return scipy.linalg.hankel(z[:depth], z[depth - 1 :])


def lower_toeplitz(first_col) -> np.ndarray:
    """Lower-triangular Toeplitz matrix with the given first column.

    Entry (i, j) equals first_col[i - j] for i >= j and 0 above the diagonal.
    """
    c = np.asarray(first_col, dtype=float).ravel()
    return scipy.linalg.toeplitz(c, np.zeros_like(c))


def svd_factors(a) -> SvdFactors:
    """Full SVD of a matrix as an SvdFactors triple."""
    a = as_matrix(a)
    U, s, Vt = np.linalg.svd(a, full_matrices=True)
    return SvdFactors(U, s, Vt)


def pinv(a, rank_tol: float | None = None) -> np.ndarray:
    """Moore-Penrose pseudoinverse via full SVD with a relative rank cutoff.

    Singular values <= rank_tol * sigma_max are treated as zero. A zero
    matrix maps to a zero pseudoinverse.

    Parameters
    ----------
    a : array_like, shape (m, n)
    rank_tol : float, optional
        Relative cutoff; defaults to 1e-10 * max(m, n).
    """
    a = as_matrix(a)
    if rank_tol is None:
        rank_tol = default_rank_tol(a)
    if rank_tol < 0:
        raise ValueError(f"rank_tol must be >= 0, got {rank_tol}")
    U, s, Vt = np.linalg.svd(a, full_matrices=False)
    if s.size == 0:
        return a.T.copy()
    keep = s > rank_tol * s[0]
    inv_s = np.zeros_like(s)
    inv_s[keep] = 1.0 / s[keep]
    return (Vt.T * inv_s) @ U.T


def min_singular_value(a) -> float:
    """Smallest singular value of a non-empty matrix."""
    a = as_matrix(a)
    if a.size == 0:
        raise ValueError("min_singular_value requires a non-empty matrix")
    return float(np.linalg.svd(a, compute_uv=False)[-1])


def least_squares_min_norm(a, b, rank_tol: float | None = None) -> np.ndarray:
    """Minimum-norm least-squares solution of a @ x = b, i.e. pinv(a) @ b."""
    a = as_matrix(a)
    b = np.asarray(b, dtype=float).ravel()
    if a.shape[0] != b.size:
        raise ValueError(f"shape mismatch: a has {a.shape[0]} rows, b has {b.size} entries")
    if a.shape[1] == 0:
        return np.zeros(0)
    return pinv(a, rank_tol) @ b
