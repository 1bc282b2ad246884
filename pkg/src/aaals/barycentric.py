"""Barycentric rational functions: evaluation, poles and residues."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .linalg_kernels import eig_arrowhead_pencil

# Pole pairs closer than this (relative to the support scale) are flagged.
NEAR_DOUBLE_POLE = 1e-10
# Support spread (max over median distance) above which poles are computed
# in the Moebius variable t = 1/(x - c).
MOEBIUS_SPREAD = 1e6


class NearDoublePoleWarning(RuntimeWarning):
    """Two poles closer than NEAR_DOUBLE_POLE * scale; residues are suspect."""


@dataclass(frozen=True)
class PoleSet:
    poles: np.ndarray
    residues: np.ndarray

    def __post_init__(self):
        if np.shape(self.poles) != np.shape(self.residues):
            raise ValueError("residue count must equal pole count")

    def __len__(self):
        return len(self.poles)

    def to_dict(self):
        return {"poles": _complex_list(self.poles),
                "residues": _complex_list(self.residues)}


@dataclass(frozen=True, eq=False)
class BarycentricRational:
    """r(x) = sum(w_j f_j / (x - z_j)) / sum(w_j / (x - z_j)).

    ``support``, ``values`` and ``weights`` are complex 1-D arrays of equal
    length; ``r(z_j) = f_j`` for every support point with nonzero weight.
    """

    support: np.ndarray
    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.support, dtype=complex).ravel()
        f = np.asarray(self.values, dtype=complex).ravel()
        w = np.asarray(self.weights, dtype=complex).ravel()
        if not (z.size == f.size == w.size):
            raise ValueError("support, values and weights must have the same length")
        if z.size == 0 or not np.any(w != 0):
            raise ValueError("a barycentric rational needs at least one nonzero weight")
        if np.unique(z).size != z.size:
            raise ValueError("support points must be pairwise distinct")
        object.__setattr__(self, "support", z)
        object.__setattr__(self, "values", f)
        object.__setattr__(self, "weights", w)

    @property
    def degree(self):
        return self.support.size - 1

    def __call__(self, x):
        return bary_eval(self, x)

    def poles(self):
        return poles_and_residues(self)

    def to_dict(self):
        return {"support": _complex_list(self.support),
                "values": _complex_list(self.values),
                "weights": _complex_list(self.weights)}


def bary_eval(r, x):
    """Evaluate ``r`` at ``x`` (scalar or array, shape preserved).

    Exact hits on a support point return the stored value. At a pole the
    denominator vanishes and the result is an infinity, not an error.
    """
    xv = np.asarray(x, dtype=complex)
    flat = xv.ravel()
    zj, fj, wj = r.support, r.values, r.weights
    if zj.size == 1:
        return np.full(xv.shape, fj[0])[()]
    with np.errstate(divide="ignore", invalid="ignore"):
        C = 1.0 / (flat[:, None] - zj[None, :])
        out = (C @ (wj * fj)) / (C @ wj)
    hit_x, hit_z = np.nonzero(flat[:, None] == zj[None, :])
    out[hit_x] = fj[hit_z]
    if np.ndim(x) == 0:
        return out[0]
    return out.reshape(xv.shape)


def _denominator_derivative(r, p):
    return -np.sum(r.weights / (p - r.support) ** 2)


def _pencil_poles(z, w):
    center = np.median(z.real) + 1j * np.median(z.imag)
    dist = np.abs(z - center)
    spread = np.median(dist)
    if spread == 0 or np.max(dist) <= MOEBIUS_SPREAD * spread:
        return eig_arrowhead_pencil(z, w)
    # Huge and tiny support points together make the pencil badly scaled.
    # With x = c + 1/t the weight sum becomes -t * sum (w_j tau_j) / (t - tau_j)
    # over tau_j = 1/(z_j - c), whose support is bounded.
    c = center + spread * np.exp(1.1j)
    c = c + 0.5 * spread * np.exp(2.3j) if np.min(np.abs(z - c)) < 0.1 * spread else c
    tau = 1.0 / (z - c)
    t = eig_arrowhead_pencil(tau, w * tau)
    t = t[np.abs(t) > 1e-13 * np.max(np.abs(tau))]
    return c + 1.0 / t


def poles_and_residues(r):
    """Poles from the arrowhead pencil; residues as N(p) / D'(p)."""
    if r.support.size < 2:
        return PoleSet(np.zeros(0, dtype=complex), np.zeros(0, dtype=complex))
    pol = _pencil_poles(r.support, r.weights)
    res = np.empty_like(pol)
    for k, p in enumerate(pol):
        d = p - r.support
        if np.any(d == 0):
            res[k] = 0.0
            continue
        num = np.sum(r.weights * r.values / d)
        res[k] = num / _denominator_derivative(r, p)
    if pol.size > 1:
        scale = max(np.max(np.abs(r.support)), 1.0)
        gaps = np.abs(pol[:, None] - pol[None, :])
        np.fill_diagonal(gaps, np.inf)
        if np.min(gaps) < NEAR_DOUBLE_POLE * scale:
            warnings.warn("nearly coincident poles; residues may be inaccurate",
                          NearDoublePoleWarning, stacklevel=2)
    return PoleSet(pol, res)


def _complex_list(a):
    return [[float(v.real), float(v.imag)] for v in np.asarray(a, dtype=complex).ravel()]
