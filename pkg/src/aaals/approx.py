"""AAA-LS approximation of real functions on an interval.

Local AAA fits near known singularities supply poles; those lying on the
approximation interval are dropped and the rest enter a real least-squares
fit together with an Arnoldi polynomial.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ._json import jsonable
from .aaa import AaaOptions, aaa_fit, local_aaa
from .arnoldi import va_eval, va_orthog
from .linalg_kernels import lstsq_regularized

# Poles of a real fit that are real up to rounding sit on the axis; genuine
# conjugate pairs near a singularity are many orders of magnitude further off.
AXIS_POLE_RTOL = 1e-13


@dataclass(frozen=True, eq=False)
class IntervalApproximation:
    """Real part of sum_k c_k d_k / (x - p_k) plus an Arnoldi polynomial."""

    poles: np.ndarray
    d: np.ndarray
    poly: object
    coef: np.ndarray
    discarded: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    def columns(self, x):
        x = np.asarray(x, dtype=complex).ravel()
        with np.errstate(divide="ignore", invalid="ignore"):
            Q = self.d[None, :] / (x[:, None] - self.poles[None, :])
        return np.hstack([va_eval(x, self.poly), Q])

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        flat = x.ravel()
        out = np.empty(flat.size)
        for s in range(0, flat.size, 2048):
            out[s : s + 2048] = np.real(self.columns(flat[s : s + 2048]) @ self.coef)
        return out.reshape(x.shape) if x.ndim else out[0]

    @property
    def dof(self):
        return 2 * self.coef.size

    def to_dict(self):
        return {
            "poles": [[p.real, p.imag] for p in self.poles],
            "pole_scalings": self.d.tolist(),
            "discarded_poles": [[p.real, p.imag] for p in self.discarded],
            "polynomial": self.poly.to_dict(),
            "coefficients_re": self.coef.real.tolist(),
            "coefficients_im": self.coef.imag.tolist(),
            "diagnostics": jsonable(self.diagnostics),
        }


def on_interval(p, a, b):
    p = np.asarray(p, dtype=complex)
    real = np.abs(p.imag) <= AXIS_POLE_RTOL * np.maximum(1.0, np.abs(p))
    return real & (p.real >= a) & (p.real <= b)


def approximate(X, F, singularities=None, interval=None, tol=1e-8, degree=16,
                max_degree=150):
    """Real rational approximation of samples ``F`` at real points ``X``.

    With ``singularities`` given, a local AAA fit is run on the samples
    within half the singularity spacing of each one; otherwise one global AAA fit is
    used. Poles on ``interval`` (default: the hull of ``X``) are discarded.
    """
    t0 = time.perf_counter()
    X = np.asarray(X, dtype=float).ravel()
    F = np.asarray(F, dtype=float).ravel()
    if X.size != F.size:
        raise ValueError("X and F differ in length")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(F))):
        raise ValueError("samples must be finite")
    a, b = interval if interval is not None else (X.min(), X.max())
    opts = AaaOptions(tol=tol, max_degree=max_degree)
    Xc = X.astype(complex)
    if singularities is None or len(singularities) == 0:
        fits = [aaa_fit(Xc, F, opts)]
    else:
        s = np.sort(np.asarray(singularities, dtype=float))
        dist = np.abs(X[:, None] - s[None, :])
        groups = np.argmin(dist, axis=1)
        # Only samples within half the singularity spacing take part; points
        # further out would drag in behaviour (such as an endpoint) that the
        # local fit should not see.
        radius = np.min(np.diff(s)) / 2 if s.size > 1 else np.inf
        groups[np.min(dist, axis=1) > radius * (1 + 1e-12)] = -1
        fits = local_aaa(Xc, F, groups, opts, skip_negative=True)
    pol = np.concatenate([f.poles.poles for f in fits]) if fits else np.zeros(0, complex)
    bad = on_interval(pol, a, b)
    kept, discarded = pol[~bad], pol[bad]

    d = np.min(np.abs(Xc[:, None] - kept[None, :]), axis=0) if kept.size else np.zeros(0)
    poly, _ = va_orthog(Xc, min(degree, X.size - 1))
    fit = IntervalApproximation(kept, d, poly, np.zeros(0, complex), discarded)
    C = fit.columns(X)
    A = np.hstack([C.real, -C.imag])
    K = C.shape[1]
    if np.ptp(F) == 0:  # Q[:, 0] is the constant 1
        sol = None
        coef = np.zeros(K, dtype=complex)
        coef[0] = F[0]
    else:
        sol = lstsq_regularized(A, F)
        coef = sol.x[:K] + 1j * sol.x[K:]
    diag = {
        "aaa_degrees": [f.degree for f in fits],
        "n_poles_kept": int(kept.size),
        "n_poles_discarded": int(discarded.size),
        "poly_degree": poly.degree,
        "dof": 2 * K,
        "rank": 1 if sol is None else sol.rank,
    }
    out = IntervalApproximation(kept, d, poly, coef, discarded, diag)
    diag["max_error"] = float(np.max(np.abs(out(X) - F)))
    diag["timings"] = {"total": time.perf_counter() - t0}
    return out


# --------------------------------------------------------------------------
# zigzag example: kinks at -1, -0.8, ..., 1


def zigzag(x):
    return np.abs(np.mod(np.asarray(x, dtype=float) + 1.0, 0.4) - 0.2)


ZIGZAG_KINKS = np.round(np.arange(-0.8, 0.81, 0.2), 12)


def zigzag_grid(n=300, halfwidth=0.1):
    """tanh ladders of ``n`` points on [c - h, c + h] for c = -0.9, ..., 0.9."""
    centers = np.round(np.arange(-0.9, 0.91, 0.2), 12)
    ladder = halfwidth * np.tanh(np.linspace(-16, 16, n))
    return np.unique(np.concatenate([c + ladder for c in centers]))


def zigzag_approximation(tol=1e-8, degree=16, n=300):
    X = zigzag_grid(n)
    return approximate(X, zigzag(X), ZIGZAG_KINKS, (-1.0, 1.0), tol=tol, degree=degree)
