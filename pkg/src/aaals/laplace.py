"""AAA-least squares Laplace solver.

Pipeline: sample the boundary, locate poles by global or per-corner AAA fits,
keep only poles outside the closed domain, then fit the Dirichlet data by a
real least-squares problem in a basis of scaled simple poles, Arnoldi
polynomials (in z, or in 1/(z - z_j) around holes) and log|z - z_j| terms.
"""

from __future__ import annotations

import logging
import time
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from ._json import jsonable
from .aaa import AaaOptions, aaa_fit, local_aaa
from .arnoldi import ArnoldiBasis, va_eval, va_orthog
from .geometry import (Domain, SampleSet, artificial_corner_data, assign_to_corner,
                       contains, sample_boundary)
from .linalg_kernels import lstsq_regularized

log = logging.getLogger(__name__)

CONSTANT_DATA_RTOL = 1e-14
VALIDATION_REFINEMENT = 3
UNSTABLE_RATIO = 1e3
# An exterior pole whose nearest sample is this many times farther away than
# the boundary itself falls between samples; the LS fit cannot control it.
UNRESOLVED_RATIO = 10.0


class SolverWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SolverOptions:
    variant: str = "local"
    aaa_tol: float = 1e-8
    max_aaa_degree: int = 400  # global fits on corner domains need ~300
    poly_degree: int | None = None  # None: pick from the domain type
    artificial_data: str = "auto"  # "off", "sqrt-product" or "auto"
    samples_per_segment: int | dict | None = None  # None: 300 global, 600 local
    validate: bool = True

    def __post_init__(self):
        if self.variant not in ("global", "local"):
            raise ValueError(f"variant must be 'global' or 'local', not {self.variant!r}")
        if self.artificial_data not in ("off", "sqrt-product", "auto"):
            raise ValueError(f"unknown artificial_data mode {self.artificial_data!r}")
        if self.poly_degree is not None and self.poly_degree < 0:
            raise ValueError("poly_degree must be nonnegative")
        if not self.aaa_tol > 0:
            raise ValueError("aaa_tol must be positive")

    @property
    def per_segment(self):
        if self.samples_per_segment is not None:
            return self.samples_per_segment
        return 300 if self.variant == "global" else 600

    def degree_for(self, d):
        if self.poly_degree is not None:
            return self.poly_degree
        if not d.bounded:
            return 10
        return 20 if d.simply_connected else 40


@dataclass(frozen=True)
class PoleChoice:
    poles: np.ndarray
    discarded: np.ndarray
    aaa_degrees: list
    used_artificial_data: bool


@dataclass(frozen=True, eq=False)
class LaplaceBasis:
    """Column structure of the least-squares matrix.

    ``poly_bases`` are Arnoldi bases (one per center), ``poles`` the retained
    exterior poles with scalings ``d``; ``log_centers`` carries one point per
    hole, and ``log_paired`` selects cyclic differences
    log|z - z_j| - log|z - z_{j+1}| (used when infinity is in the domain).
    """

    poly_bases: tuple
    poles: np.ndarray
    d: np.ndarray
    log_centers: np.ndarray
    log_paired: bool = False

    @property
    def n_poly(self):
        return sum(b.ncols for b in self.poly_bases)

    @property
    def n_complex(self):
        return self.n_poly + self.poles.size

    @property
    def n_log(self):
        return self.log_centers.size

    def complex_columns(self, z):
        z = np.asarray(z, dtype=complex).ravel()
        blocks = [va_eval(z, b) for b in self.poly_bases]
        with np.errstate(divide="ignore", invalid="ignore"):
            blocks.append(self.d[None, :] / (z[:, None] - self.poles[None, :]))
        return np.hstack(blocks)

    def log_columns(self, z):
        z = np.asarray(z, dtype=complex).ravel()
        with np.errstate(divide="ignore"):
            L = np.log(np.abs(z[:, None] - self.log_centers[None, :]))
        if self.log_paired:
            L = L - np.roll(L, -1, axis=1)
        return L

    def layout(self):
        cols = []
        for b in self.poly_bases:
            c = None if b.center is None else [b.center.real, b.center.imag]
            cols.append({"block": "poly", "center": c, "ncols": b.ncols})
        cols.append({"block": "poles", "ncols": int(self.poles.size)})
        return {
            "order": ["re(poly)", "re(poles)", "-im(poly)", "-im(poles)", "log"],
            "complex_blocks": cols,
            "n_complex": self.n_complex,
            "n_log": self.n_log,
            "log_paired": self.log_paired,
            "ncols": 2 * self.n_complex + self.n_log,
        }


@dataclass(frozen=True, eq=False)
class HarmonicSolution:
    """u = Re f + sum_j a_j log|z - z_j| with f = basis columns @ c."""

    basis: LaplaceBasis
    c: np.ndarray
    log_coef: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    def eval_f(self, z):
        z = np.asarray(z, dtype=complex)
        vals = self.basis.complex_columns(z) @ self.c
        return vals.reshape(z.shape)

    def eval_u(self, z):
        z = np.asarray(z, dtype=complex)
        u = np.real(self.basis.complex_columns(z) @ self.c)
        if self.basis.n_log:
            u = u + self.basis.log_columns(z) @ self.log_coef
        return u.reshape(z.shape)

    def eval_v(self, z):
        return np.imag(self.eval_f(z))

    __call__ = eval_u

    def to_dict(self):
        b = self.basis
        return {
            "poles": [[p.real, p.imag] for p in b.poles],
            "pole_scalings": b.d.tolist(),
            "discarded_poles": [[p.real, p.imag] for p in self.diagnostics.get("discarded", [])],
            "poly_bases": [pb.to_dict() for pb in b.poly_bases],
            "log_centers": [[p.real, p.imag] for p in b.log_centers],
            "layout": b.layout(),
            "coefficients_re": self.c.real.tolist(),
            "coefficients_im": self.c.imag.tolist(),
            "log_coefficients": self.log_coef.tolist(),
            "diagnostics": jsonable({k: v for k, v in self.diagnostics.items()
                                     if k not in ("discarded", "samples")}),
        }


# --------------------------------------------------------------------------


def boundary_data(h, samples):
    """Evaluate Dirichlet data on the samples.

    ``h`` is a callable of z, or a sequence with one entry (number or
    callable) per boundary component.
    """
    if callable(h):
        return np.asarray(h(samples.Z), dtype=float).ravel() * np.ones(len(samples))
    H = np.empty(len(samples))
    if len(h) != samples.component_index.max() + 1:
        raise ValueError("need one data entry per boundary component")
    for k, hk in enumerate(h):
        sel = samples.component_index == k
        H[sel] = hk(samples.Z[sel]) if callable(hk) else float(hk)
    return H


def _constant_per_component(samples):
    H = samples.H
    scale = max(1.0, float(np.max(np.abs(H))))
    for k in np.unique(samples.component_index):
        hk = H[samples.component_index == k]
        if np.ptp(hk) > CONSTANT_DATA_RTOL * scale:
            return False
    return True


def choose_poles(d, samples, opts=None):
    """Run AAA (globally, or per corner) and split the poles by location.

    Returns a ``PoleChoice`` with the exterior poles kept and the others
    listed as discarded. Exterior poles lying between samples, much closer
    to the boundary than to any sample point, are discarded as well.
    """
    opts = opts or SolverOptions()
    aopts = AaaOptions(tol=opts.aaa_tol, max_degree=opts.max_aaa_degree)
    H = samples.H
    artificial = opts.artificial_data == "sqrt-product" or (
        opts.artificial_data == "auto" and bool(d.corners) and _constant_per_component(samples))
    if artificial:
        H = artificial_corner_data(d, samples.Z)
    if opts.variant == "global":
        results = [aaa_fit(samples.Z, H, aopts)]
    else:
        if samples.corner_index.min() < 0:
            samples = assign_to_corner(samples, d)
        results = local_aaa(samples.Z, H, samples.corner_index, aopts)
    if not all(r.converged for r in results):
        warnings.warn(f"AAA stopped at the degree cap {opts.max_aaa_degree} before reaching "
                      f"tol {opts.aaa_tol:g}", SolverWarning, stacklevel=2)
    pol = np.concatenate([r.poles.poles for r in results]) if results else np.zeros(0, complex)
    bad = contains(d, pol, closure=True) if pol.size else np.zeros(0, bool)
    out = np.nonzero(~bad)[0]
    if out.size:
        gap = np.min(np.abs(pol[out, None] - samples.Z[None, :]), axis=1)
        bad[out] = gap > UNRESOLVED_RATIO * d.boundary_distance(pol[out])
    kept, discarded = pol[~bad], pol[bad]
    if kept.size == 0 and d.corners:
        warnings.warn("no exterior poles retained; relying on the polynomial term",
                      SolverWarning, stacklevel=2)
    return PoleChoice(kept, discarded, [r.degree for r in results], artificial)


def build_basis(d, Z, poles, degree):
    Z = np.asarray(Z, dtype=complex)
    poles = np.asarray(poles, dtype=complex)
    dist = np.min(np.abs(Z[:, None] - poles[None, :]), axis=0) if poles.size else np.zeros(0)
    bases = [va_orthog(Z, degree)[0]] if d.bounded else []
    centers = d.hole_centers
    if not d.bounded and not centers:
        centers = (d.exterior_center,)
    bases += [va_orthog(Z, degree, center=zc)[0] for zc in centers]
    log_centers = np.array(d.hole_centers, dtype=complex)
    paired = not d.bounded
    if paired and log_centers.size < 2:
        log_centers = np.zeros(0, dtype=complex)
    return LaplaceBasis(tuple(bases), poles, dist, log_centers, paired)


def assemble_matrix(samples, basis):
    """Real LS matrix [Re P, Re Q, -Im P, -Im Q, logs] and its layout."""
    Zc = samples.Z if isinstance(samples, SampleSet) else np.asarray(samples, dtype=complex)
    C = basis.complex_columns(Zc)
    A = np.hstack([C.real, -C.imag, basis.log_columns(Zc)])
    return A, basis.layout()


def _pack(basis, x):
    K = basis.n_complex
    return x[:K] + 1j * x[K : 2 * K], x[2 * K :]


def solve(d, h, opts=None, samples=None):
    """Solve the Dirichlet problem on ``d`` with boundary data ``h``.

    ``h`` may be None when ``samples`` (a SampleSet carrying data, e.g. from
    tabulated input) is given; the finer-grid validation is then skipped.
    """
    opts = opts or SolverOptions()
    timings = {}
    t0 = time.perf_counter()
    if samples is None:
        samples = sample_boundary(d, opts.per_segment)
        samples = samples.with_data(boundary_data(h, samples))
    elif samples.H is None:
        raise ValueError("supplied samples carry no data")
    if opts.variant == "local":
        samples = assign_to_corner(samples, d)
    timings["sample"] = time.perf_counter() - t0

    t1 = time.perf_counter()
    choice = choose_poles(d, samples, opts)
    timings["aaa"] = time.perf_counter() - t1

    t2 = time.perf_counter()
    basis = build_basis(d, samples.Z, choice.poles, opts.degree_for(d))
    A, layout = assemble_matrix(samples, basis)
    timings["assemble"] = time.perf_counter() - t2

    t3 = time.perf_counter()
    sol = lstsq_regularized(A, samples.H)
    c, a = _pack(basis, sol.x)
    timings["lstsq"] = time.perf_counter() - t3

    diag = {
        "variant": opts.variant,
        "matrix_shape": list(A.shape),
        "rank": sol.rank,
        "residual": sol.residual,
        "n_poles_kept": int(choice.poles.size),
        "n_poles_discarded": int(choice.discarded.size),
        "aaa_degrees": choice.aaa_degrees,
        "artificial_data": choice.used_artificial_data,
        "poly_degree": opts.degree_for(d),
        "discarded": choice.discarded,
    }
    solution = HarmonicSolution(basis, c, a, diag)
    diag["max_error"] = float(np.max(np.abs(solution.eval_u(samples.Z) - samples.H)))
    if opts.validate and h is not None:
        n = opts.per_segment
        fine_n = ({k: VALIDATION_REFINEMENT * v for k, v in n.items()} if isinstance(n, dict)
                  else VALIDATION_REFINEMENT * n)
        fine = sample_boundary(d, fine_n)
        Hf = boundary_data(h, fine)
        err = np.abs(solution.eval_u(fine.Z) - Hf)
        diag["validation_error"] = float(np.max(err))
        if diag["validation_error"] > UNSTABLE_RATIO * max(diag["max_error"], 1e-15):
            diag["stability_warning"] = True
            warnings.warn("validation error far exceeds the solve-grid error",
                          SolverWarning, stacklevel=2)
    timings["total"] = time.perf_counter() - t0
    diag["timings"] = timings
    diag["samples"] = samples
    log.info("solve: %d poles kept, %d discarded, max error %.2e",
             choice.poles.size, choice.discarded.size, diag["max_error"])
    return solution
