"""Dense linear-algebra kernels: thin SVD, arrowhead pencil eigenvalues and
rank-truncated least squares.

These are thin wrappers over LAPACK (through numpy/scipy) that fix the
conventions the rest of the package relies on.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg

# Relative singular-value cutoff for the least-squares solve.
LSTSQ_RCOND = 1e-13
# Pencil eigenvalues larger than this multiple of max|z_j| count as infinite.
INF_EIG_FACTOR = 1e13


class LinAlgKernelError(RuntimeError):
    """Raised when a dense kernel fails or receives a degenerate input."""


class LstsqResult(NamedTuple):
    x: np.ndarray
    residual: float
    rank: int


def svd_thin(M):
    """Thin SVD of a dense matrix.

    Returns ``(s, V)`` with the singular values in descending order and the
    right singular vectors as the *columns* of ``V``. The last column of ``V``
    minimizes ``||M w||`` over unit vectors ``w``.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.size == 0:
        raise ValueError(f"svd_thin needs a nonempty 2-D matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("svd_thin: matrix has non-finite entries")
    wide = M.shape[0] < M.shape[1]
    try:
        _, s, Vh = np.linalg.svd(M, full_matrices=wide)
    except np.linalg.LinAlgError as exc:
        raise LinAlgKernelError(
            f"SVD did not converge for a {M.shape[0]}x{M.shape[1]} matrix") from exc
    V = Vh.conj().T
    if wide:
        # Pad with zeros for the null-space directions completed by the full SVD.
        s = np.concatenate([s, np.zeros(M.shape[1] - s.size)])
    return s, V


def arrowhead_pencil(z, w):
    """Build the (m+1)x(m+1) pencil ``(E, B)`` whose finite eigenvalues are
    the zeros of ``sum_j w_j / (x - z_j)``."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    m = z.size
    E = np.zeros((m + 1, m + 1), dtype=complex)
    E[0, 1:] = w
    E[1:, 0] = 1.0
    E[1:, 1:] = np.diag(z)
    B = np.eye(m + 1, dtype=complex)
    B[0, 0] = 0.0
    return E, B


def eig_arrowhead_pencil(z, w):
    """Finite generalized eigenvalues of the arrowhead pencil for support
    points ``z`` and weights ``w``.

    The two artificial infinite eigenvalues (and any extra ones when the
    denominator degree drops) are removed by discarding non-finite values and
    values whose magnitude exceeds ``INF_EIG_FACTOR * max|z|``.
    """
    z = np.asarray(z, dtype=complex).ravel()
    w = np.asarray(w, dtype=complex).ravel()
    if z.size != w.size:
        raise ValueError("support points and weights must have equal length")
    if z.size < 2:
        raise ValueError("need at least two support points")
    if not np.any(w != 0):
        raise LinAlgKernelError("degenerate pencil: all weights are zero")
    E, B = arrowhead_pencil(z, w)
    try:
        lam = scipy.linalg.eigvals(E, B, overwrite_a=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise LinAlgKernelError(
            f"QZ failed for a {E.shape[0]}x{E.shape[0]} arrowhead pencil") from exc
    cutoff = INF_EIG_FACTOR * max(np.max(np.abs(z)), 1.0)
    keep = np.isfinite(lam) & (np.abs(lam) <= cutoff)
    return lam[keep]


def lstsq_regularized(A, b, rcond=LSTSQ_RCOND):
    """Least squares with singular values below ``rcond * s_max`` discarded.

    Returns ``LstsqResult(x, residual, rank)`` where ``residual`` is the
    2-norm of ``A x - b``.
    """
    A = np.asarray(A)
    b = np.asarray(b)
    if A.ndim != 2:
        raise ValueError("A must be a 2-D matrix")
    if b.ndim != 1 or b.shape[0] != A.shape[0]:
        raise ValueError(
            f"dimension mismatch: A is {A.shape[0]}x{A.shape[1]}, b has shape {b.shape}")
    if A.shape[0] < 1:
        raise ValueError("A needs at least one row")
    if A.shape[1] == 0:
        return LstsqResult(np.zeros(0, dtype=A.dtype), float(np.linalg.norm(b)), 0)
    try:
        x, _, rank, _ = scipy.linalg.lstsq(A, b, cond=rcond, lapack_driver="gelsd")
    except np.linalg.LinAlgError as exc:
        raise LinAlgKernelError(
            f"least-squares solve failed for a {A.shape[0]}x{A.shape[1]} matrix") from exc
    residual = float(np.linalg.norm(A @ x - b))
    return LstsqResult(x, residual, int(rank))
