"""Conformal maps and Hilbert transforms built on AAA pole selection
followed by least-squares refits."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from ._json import jsonable
from .aaa import AaaOptions, aaa_fit
from .arnoldi import va_eval, va_orthog
from .barycentric import BarycentricRational
from .geometry import Domain, contains
from .laplace import SolverOptions, solve
from .linalg_kernels import lstsq_regularized

ROUND_TRIP_WARN = 1e-5
REAL_POLE_RTOL = 1e-5


@dataclass(frozen=True, eq=False)
class PoleExpansion:
    """p(x) + sum_k c_k d_k / (x - pole_k) with an Arnoldi polynomial p.

    Used for least-squares refits after pole filtering. ``poly`` may be None
    (no polynomial term) and ``const_only`` restricts it to a constant.
    """

    poles: np.ndarray
    d: np.ndarray
    poly: object
    coef: np.ndarray

    def columns(self, x):
        x = np.asarray(x, dtype=complex).ravel()
        blocks = [] if self.poly is None else [va_eval(x, self.poly)]
        with np.errstate(divide="ignore", invalid="ignore"):
            blocks.append(self.d[None, :] / (x[:, None] - self.poles[None, :]))
        return np.hstack(blocks)

    def __call__(self, x):
        x = np.asarray(x, dtype=complex)
        out = np.empty(x.size, dtype=complex)
        flat = x.ravel()
        for s in range(0, flat.size, 2048):
            out[s : s + 2048] = self.columns(flat[s : s + 2048]) @ self.coef
        return out.reshape(x.shape) if x.ndim else out[0]

    @property
    def residues(self):
        npoly = 0 if self.poly is None else self.poly.ncols
        return self.coef[npoly:] * self.d

    def to_dict(self):
        return {
            "poles": [[p.real, p.imag] for p in self.poles],
            "residues": [[r.real, r.imag] for r in self.residues],
            "polynomial": None if self.poly is None else self.poly.to_dict(),
            "coefficients_re": self.coef.real.tolist(),
            "coefficients_im": self.coef.imag.tolist(),
        }


def _scalings(X, poles):
    if poles.size == 0:
        return np.zeros(0)
    return np.min(np.abs(X[:, None] - poles[None, :]), axis=0)


def complex_ls_fit(X, F, poles, degree):
    """Complex least-squares fit of ``F`` on ``X`` by scaled poles plus a
    degree-``degree`` Arnoldi polynomial."""
    X = np.asarray(X, dtype=complex).ravel()
    poles = np.asarray(poles, dtype=complex)
    d = _scalings(X, poles)
    basis, _ = va_orthog(X, degree)
    fit = PoleExpansion(poles, d, basis, np.zeros(0, dtype=complex))
    A = fit.columns(X)
    sol = lstsq_regularized(A, np.asarray(F, dtype=complex).ravel())
    return PoleExpansion(poles, d, basis, sol.x)


# --------------------------------------------------------------------------
# conformal maps


@dataclass(frozen=True, eq=False)
class ConformalMap:
    """Map of a simply connected domain onto the unit disk with g(0) = 0,
    g'(0) > 0. ``forward`` and ``inverse`` are callables."""

    forward: object
    inverse: object
    solution: object = None
    diagnostics: dict = field(default_factory=dict)

    def __call__(self, z):
        return self.forward(z)

    def to_dict(self):
        def rep(f):
            if isinstance(f, BarycentricRational):
                return {"form": "barycentric", **f.to_dict()}
            return {"form": "pole-residue", **f.to_dict()}
        return {"forward": rep(self.forward), "inverse": rep(self.inverse),
                "diagnostics": jsonable(self.diagnostics)}


def _interior_points(d, n, rng):
    a, _ = d._edges
    lo = complex(a.real.min(), a.imag.min())
    hi = complex(a.real.max(), a.imag.max())
    pts = []
    while sum(p.size for p in pts) < n:
        z = lo.real + (hi.real - lo.real) * rng.random(4 * n) + 1j * (
            lo.imag + (hi.imag - lo.imag) * rng.random(4 * n))
        pts.append(z[contains(d, z)])
    return np.concatenate(pts)[:n]


def conformal_map(d, opts=None, tol=1e-10, n_interior=1000, inverse_degree=10, seed=0,
                  n_check=1000):
    """Conformal map of ``d`` onto the unit disk.

    Solves the Dirichlet problem with data -log|z| for f, normalizes
    Im f(0) = 0, sets g(z) = z exp(f(z)), compresses g by AAA on boundary
    and interior samples and builds the inverse by AAA on the swapped pairs
    followed by a pole filter (|p| > 1) and least-squares refit.
    """
    if not d.simply_connected:
        raise ValueError("conformal_map needs a bounded simply connected domain")
    if not contains(d, 0j):
        raise ValueError("the domain must contain z = 0")
    if opts is None:
        opts = SolverOptions(variant="local" if d.corners else "global")
    rng = np.random.default_rng(seed)
    sol = solve(d, lambda z: -np.log(np.abs(z)), opts)
    v0 = float(np.imag(sol.eval_f(0j)))

    def g_exact(z):
        z = np.asarray(z, dtype=complex)
        return z * np.exp(sol.eval_f(z) - 1j * v0)

    Zb = sol.diagnostics["samples"].Z
    Zi = _interior_points(d, n_interior, rng)
    P = np.concatenate([Zb, Zi, [0j]])
    G = g_exact(P)
    aopts = AaaOptions(tol=tol, max_degree=300)

    fwd_fit = aaa_fit(P, G, aopts)
    bad = contains(d, fwd_fit.poles.poles, closure=True)
    if np.any(bad):
        forward = complex_ls_fit(P, G, fwd_fit.poles.poles[~bad], inverse_degree)
    else:
        forward = fwd_fit.r

    inv_fit = aaa_fit(G, P, aopts)
    ip = inv_fit.poles.poles
    keep = np.abs(ip) > 1.0 + 1e-12
    inverse = complex_ls_fit(G, P, ip[keep], inverse_degree)

    w = np.sqrt(rng.random(n_check)) * np.exp(2j * np.pi * rng.random(n_check))
    rt = float(np.max(np.abs(forward(inverse(w)) - w)))
    diag = {
        "boundary_error": sol.diagnostics["max_error"],
        "forward_degree": fwd_fit.degree,
        "forward_refit": bool(np.any(bad)),
        "inverse_degree": inv_fit.degree,
        "inverse_poles_discarded": int(np.count_nonzero(~keep)),
        "compression_error": float(np.max(np.abs(forward(P) - G))),
        "round_trip_error": rt,
        "g0": complex(forward(0j)),
    }
    if rt > ROUND_TRIP_WARN:
        warnings.warn(f"conformal map round-trip error {rt:.1e}", RuntimeWarning, stacklevel=2)
    return ConformalMap(forward, inverse, sol, diag)


# --------------------------------------------------------------------------
# Hilbert transform on the real line


def _exp_abs_hilbert(y):
    y = np.asarray(y, dtype=float)
    a = np.abs(y)
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        v = np.sign(y) * (np.exp(a) * special.exp1(a) + np.exp(-a) * special.expi(a)) / np.pi
    return np.where(a == 0, 0.0, v)


# name -> (u, reference v(2) with its tabulated error, exact v or None)
BUILTIN_FUNCTIONS = {
    "runge": (lambda x: 1 / (1 + x**2), 0.400000000000000, -1.3e-12,
              lambda y: y / (1 + y**2)),
    "quartic": (lambda x: 1 / (1 + x**4), 0.415945165403851, -4.3e-14,
                lambda y: y * (1 + y**2) / (np.sqrt(2) * (1 + y**4))),
    "sinc2": (lambda x: np.sin(x) / (1 + x**2), 0.156805255543717, 3.4e-06,
              lambda y: (np.exp(-1) - np.cos(y)) / (1 + y**2)),
    "sinc4": (lambda x: np.sin(x) / (1 + x**4), 0.121897775700258, -1.7e-07, None),
    "gauss": (lambda x: np.exp(-x**2), 0.340026217066066, 1.0e-13,
              lambda y: 2 / np.sqrt(np.pi) * special.dawsn(y)),
    "sech": (lambda x: 2 * np.exp(-np.abs(x)) / (1 + np.exp(-2 * np.abs(x))), 0.506584586167368, 1.3e-10, None),
    "abs-exp": (lambda x: np.exp(-np.abs(x)), 0.328435745958114, -1.4e-12, _exp_abs_hilbert),
}


def default_grid(L=10, n=300):
    """n points log-spaced on [10^-L, 10^L] and their negatives."""
    y = np.logspace(-L, L, n)
    return np.concatenate([-y[::-1], y])


@dataclass(frozen=True, eq=False)
class HilbertTransform:
    """f = u + i v analytic in the upper half-plane; ``v`` is the transform."""

    fit: PoleExpansion
    grid: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    @property
    def poles(self):
        return self.fit.poles

    def f(self, y):
        return self.fit(y)

    def v(self, y):
        return np.imag(self.fit(np.asarray(y, dtype=float)))

    __call__ = v

    def to_dict(self):
        return {"fit": self.fit.to_dict(), "grid_size": int(self.grid.size),
                "diagnostics": jsonable(self.diagnostics)}


def hilbert_transform(u, y=None, tol=1e-8, max_degree=300):
    """Hilbert transform of real data on the real line.

    ``u`` is a built-in name, a callable, or an array of samples at ``y``.
    """
    if isinstance(u, str):
        if u not in BUILTIN_FUNCTIONS:
            raise ValueError(f"unknown built-in function {u!r}")
        u = BUILTIN_FUNCTIONS[u][0]
    if y is None:
        y = default_grid()
    y = np.asarray(y, dtype=float).ravel()
    U = np.asarray(u(y) if callable(u) else u, dtype=float).ravel()
    if U.size != y.size:
        raise ValueError("sample values and grid differ in length")
    if not np.all(np.isfinite(U)):
        raise ValueError("sample values must be finite")

    # AAA in t = 1/(y - c): the real line becomes a bounded circle, which keeps
    # the Loewner matrix well scaled on grids spanning many decades. A pole
    # at c itself is lost, but c is in the upper half-plane.
    c = 1j * np.median(np.abs(y[y != 0]))
    fit = aaa_fit(1.0 / (y - c), U, AaaOptions(tol=tol, max_degree=max_degree))
    t = fit.poles.poles
    t = t[np.abs(t) > 1e-14 * np.max(np.abs(fit.r.support))]
    pol = c + 1.0 / t
    # Numerically real poles (|Im| at rounding level) are unsafe too.
    keep = pol.imag < -REAL_POLE_RTOL * np.abs(pol)
    pol = pol[keep]
    if pol.size == 0:
        raise ValueError("no poles in the lower half-plane; try denser sampling")
    d = _scalings(y.astype(complex), pol)
    Q = d[None, :] / (y[:, None] - pol[None, :])
    A = np.hstack([np.ones((y.size, 1)), Q.real, -Q.imag])
    sol = lstsq_regularized(A, U)
    P = pol.size
    coef = np.concatenate([[sol.x[0]], sol.x[1 : P + 1] + 1j * sol.x[P + 1 :]])
    const = va_orthog(np.zeros(1), 0)[0]
    expansion = PoleExpansion(pol, d, const, coef.astype(complex))
    diag = {
        "aaa_degree": fit.degree,
        "poles_kept": int(P),
        "poles_discarded": int(np.count_nonzero(~keep)),
        "max_error": float(np.max(np.abs(np.real(expansion(y)) - U))),
    }
    return HilbertTransform(expansion, y, diag)
