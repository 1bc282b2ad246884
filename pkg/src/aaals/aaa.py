"""AAA rational approximation (greedy support selection + SVD weights).

Cleanup of spurious poles is deliberately never applied: the caller filters
poles by location and refits by least squares instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .barycentric import BarycentricRational, PoleSet, poles_and_residues
from .linalg_kernels import svd_thin


@dataclass(frozen=True)
class AaaOptions:
    tol: float = 1e-8
    max_degree: int = 150
    lawson: bool = False

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_degree < 1:
            raise ValueError("max_degree must be at least 1")
        if self.lawson:
            raise ValueError("AAA-Lawson refinement is not supported")


@dataclass(frozen=True, eq=False)
class AaaResult:
    r: BarycentricRational
    poles: PoleSet
    max_error: float
    iterations: int
    converged: bool
    errors: np.ndarray = field(repr=False, default=None)

    @property
    def degree(self):
        return self.r.degree


def aaa_fit(Z, F, opts=None):
    """Fit ``r(Z) ~ F`` by the AAA algorithm.

    Starts from the constant mean(F); each step adds the sample with the
    largest current error as a support point and takes the weights as the
    last right singular vector of the Loewner matrix over the remaining
    samples. Stops once ``max|F - r(Z)| <= tol * max|F|`` or after
    ``max_degree + 1`` support points.
    """
    opts = opts or AaaOptions()
    Z = np.asarray(Z, dtype=complex).ravel()
    F = np.asarray(F, dtype=complex).ravel()
    M = Z.size
    if M < 2:
        raise ValueError(f"aaa_fit needs at least 2 samples, got {M}")
    if F.size != M:
        raise ValueError("Z and F must have the same length")
    if not np.all(np.isfinite(F)) or not np.all(np.isfinite(Z)):
        raise ValueError("aaa_fit: samples must be finite")

    abstol = opts.tol * np.max(np.abs(F))
    mmax = min(opts.max_degree + 1, M)
    R = np.full(M, np.mean(F))
    mask = np.ones(M, dtype=bool)  # samples not yet used as support points
    C = np.empty((M, mmax), dtype=complex)
    L = np.empty((M, mmax), dtype=complex)
    idx = []
    errs = []
    w = None
    converged = False
    for m in range(mmax):
        j = int(np.argmax(np.abs(F - R)))
        idx.append(j)
        mask[j] = False
        with np.errstate(divide="ignore", invalid="ignore"):
            C[:, m] = 1.0 / (Z - Z[j])
        C[j, m] = 0.0
        L[:, m] = (F - F[j]) * C[:, m]
        if mask.any():
            _, V = svd_thin(L[mask, : m + 1])
            w = V[:, m]
        else:
            w = np.zeros(m + 1, dtype=complex)
            w[-1] = 1.0
        fj = F[idx]
        N = C[mask, : m + 1] @ (w * fj)
        D = C[mask, : m + 1] @ w
        R = F.copy()
        if m == 0:
            R[mask] = fj[0]  # a single weight cancels exactly
        else:
            with np.errstate(divide="ignore", invalid="ignore"):
                R[mask] = N / D
        err = np.abs(F - R)
        err[~np.isfinite(err)] = np.inf
        maxerr = float(np.max(err))
        errs.append(maxerr)
        if maxerr <= abstol:
            converged = True
            break

    zj = Z[idx]
    fj = F[idx]
    r = BarycentricRational(zj, fj, w)
    return AaaResult(r=r, poles=poles_and_residues(r), max_error=errs[-1],
                     iterations=len(idx), converged=converged,
                     errors=np.array(errs))


def local_aaa(Z, F, groups, opts=None, names=None, skip_negative=False):
    """Run ``aaa_fit`` separately on each group of samples.

    ``groups`` gives a singularity index per sample; the results come back
    ordered by increasing index. A group with fewer than two samples is an
    error naming that singularity. With ``skip_negative`` samples labelled
    with a negative index belong to no group.
    """
    Z = np.asarray(Z, dtype=complex).ravel()
    F = np.asarray(F, dtype=complex).ravel()
    groups = np.asarray(groups).ravel()
    results = []
    for g in np.unique(groups):
        if skip_negative and g < 0:
            continue
        sel = groups == g
        if np.count_nonzero(sel) < 2:
            label = names[g] if names is not None else g
            raise ValueError(f"singularity {label} has fewer than 2 assigned samples")
        results.append(aaa_fit(Z[sel], F[sel], opts))
    return results
