"""Vandermonde with Arnoldi: discretely orthonormal polynomial bases.

``va_orthog`` builds the basis on sample points and records the Hessenberg
recurrence; ``va_eval`` replays the recurrence at new points. A basis may be
built in the variable ``1/(z - center)`` instead of ``z``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_BREAKDOWN = 1e-300


class ArnoldiBreakdown(ArithmeticError):
    pass


@dataclass(frozen=True, eq=False)
class ArnoldiBasis:
    hessenberg: np.ndarray  # (n+1) x n
    center: complex | None = None  # None: basis in z; else in 1/(z - center)

    @property
    def degree(self):
        return self.hessenberg.shape[1]

    @property
    def ncols(self):
        return self.degree + 1

    def map_points(self, z):
        z = np.asarray(z, dtype=complex)
        if self.center is None:
            return z
        return 1.0 / (z - self.center)

    def to_dict(self):
        H = self.hessenberg
        return {
            "center": None if self.center is None else [self.center.real, self.center.imag],
            "hessenberg_re": H.real.tolist(),
            "hessenberg_im": H.imag.tolist(),
        }


def va_orthog(Z, n, center=None):
    """Orthonormalize 1, z, ..., z^n on ``Z`` under <u, v> = mean(conj(u) v).

    Returns ``(basis, Q)`` with ``Q`` of shape ``(M, n + 1)``.
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    Z = np.asarray(Z, dtype=complex).ravel()
    M = Z.size
    if M <= n:
        raise ValueError(f"need more than {n} points for degree {n}, got {M}")
    basis = ArnoldiBasis(np.zeros((n + 1, n), dtype=complex),
                         None if center is None else complex(center))
    W = basis.map_points(Z)
    H = basis.hessenberg
    Q = np.empty((M, n + 1), dtype=complex)
    Q[:, 0] = 1.0
    for k in range(n):
        q = W * Q[:, k]
        for j in range(k + 1):
            H[j, k] = np.vdot(Q[:, j], q) / M
            q -= H[j, k] * Q[:, j]
        h = np.linalg.norm(q) / np.sqrt(M)
        if h < _BREAKDOWN:
            raise ArnoldiBreakdown(f"Arnoldi breakdown at degree {k + 1}")
        H[k + 1, k] = h
        Q[:, k + 1] = q / h
    return basis, Q


def va_eval(W, basis):
    """Evaluate the basis stored in ``basis`` at the points ``W``.

    Returns a ``(K, n + 1)`` matrix; with ``W`` equal to the construction
    points this reproduces ``Q``.
    """
    W = np.asarray(W, dtype=complex).ravel()
    X = basis.map_points(W)
    H = basis.hessenberg
    n = basis.degree
    Q = np.empty((W.size, n + 1), dtype=complex)
    Q[:, 0] = 1.0
    for k in range(n):
        q = X * Q[:, k] - Q[:, : k + 1] @ H[: k + 1, k]
        Q[:, k + 1] = q / H[k + 1, k]
    return Q
