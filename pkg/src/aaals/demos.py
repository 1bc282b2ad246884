"""Reproducible example problems and the data behind their plots.

Each ``demo_*`` function returns a dict of plain arrays and numbers; the CLI
writes these out as CSV/JSON. Geometries that are only described loosely in
the literature are fixed here once and for all.
"""

from __future__ import annotations

import numpy as np

from .aaa import AaaOptions, aaa_fit
from .approx import on_interval, zigzag, zigzag_approximation
from .geometry import (BoundaryComponent, Domain, Segment, contains, polygon, rectangle,
                       sample_boundary, smooth_blob)
from .laplace import SolverOptions, solve
from .transforms import _exp_abs_hilbert, default_grid, hilbert_transform

L_SHAPE_POINT = 0.99 + 0.99j
THREE_RECT_POINT = 1.0 + 0j


def l_shape():
    return Domain((polygon([2, 2 + 1j, 1 + 1j, 1 + 2j, 2j, 0]),))


def square_with_bites():
    """[0, 2]^2 with half-disk bites of radius 0.5 centred on the top and
    right edges."""
    segs = [
        Segment("line", 0, 2),
        Segment("line", 2, 2 + 0.5j),
        Segment("arc", 2 + 0.5j, 2 + 1.5j, center=2 + 1j, ccw=False),
        Segment("line", 2 + 1.5j, 2 + 2j),
        Segment("line", 2 + 2j, 1.5 + 2j),
        Segment("arc", 1.5 + 2j, 0.5 + 2j, center=1 + 2j, ccw=False),
        Segment("line", 0.5 + 2j, 2j),
        Segment("line", 2j, 0),
    ]
    corners = (0j, 2 + 0j, 2 + 0.5j, 2 + 1.5j, 2 + 2j, 1.5 + 2j, 0.5 + 2j, 2j)
    return Domain((BoundaryComponent(tuple(segs), corners),))


def square_annulus():
    """Square [-1, 1]^2 minus the square [-1/2, 0]^2 around -(1+i)/4."""
    outer = rectangle(-1, 1, -1, 1)
    inner = rectangle(-0.5, 0, -0.5, 0, clockwise=True)
    return Domain((outer, inner), hole_centers=(-(1 + 1j) / 4,))


def three_rectangles():
    """Exterior of three rectangular conductors; z = 1 lies midway."""
    rects = [(-2, 0, -1, 1), (2, 4, 0.25, 1.25), (2, 4, -1.25, -0.25)]
    comps = tuple(rectangle(*r, clockwise=True) for r in rects)
    centers = tuple(complex((r[0] + r[1]) / 2, (r[2] + r[3]) / 2) for r in rects)
    return Domain(comps, bounded=False, hole_centers=centers)


def lens():
    """Two circular arcs through -1 and 1 meeting there at right angles."""
    r = np.sqrt(2)
    lower = Segment("arc", -1, 1, center=1j)
    upper = Segment("arc", 1, -1, center=-1j)
    assert abs(abs(lower.point(0.5) - 1j) - r) < 1e-12
    return Domain((BoundaryComponent((lower, upper), (-1 + 0j, 1 + 0j)),))


def three_circles():
    """Unit disk with two circular holes."""
    outer = Segment("arc", 1, 1, center=0)
    small = Segment("arc", -0.35, -0.35, center=-0.5, ccw=False)
    large = Segment("arc", 0.6, 0.6, center=0.3, ccw=False)
    comps = (BoundaryComponent((outer,), ()), BoundaryComponent((small,), ()),
             BoundaryComponent((large,), ()))
    return Domain(comps, hole_centers=(-0.5, 0.3))


def lens_slit_map(z):
    """Exterior of the lens onto the exterior of [-1, 1], fixing -1, 1, inf."""
    z = np.asarray(z, dtype=complex)
    v = -(((z - 1) / (z + 1)) ** (2 / 3))
    return (1 + v**2) / (1 - v**2)


def _poles_table(kept, discarded):
    kept, discarded = np.asarray(kept), np.asarray(discarded)
    return {
        "re": np.concatenate([kept.real, discarded.real]),
        "im": np.concatenate([kept.imag, discarded.imag]),
        "kept": np.concatenate([np.ones(kept.size, int), np.zeros(discarded.size, int)]),
    }


def _solve_report(d, h, opts, point=None):
    sol = solve(d, h, opts)
    dg = sol.diagnostics
    S = dg["samples"]
    H = S.H
    out = {
        "summary": {k: dg[k] for k in ("variant", "matrix_shape", "n_poles_kept",
                                       "n_poles_discarded", "aaa_degrees", "poly_degree",
                                       "max_error", "validation_error", "timings")
                    if k in dg},
        "poles": _poles_table(sol.basis.poles, dg["discarded"]),
        "boundary_error": {"re": S.Z.real, "im": S.Z.imag,
                           "component": S.component_index,
                           "error": sol.eval_u(S.Z) - H},
    }
    if point is not None:
        out["summary"]["point"] = [point.real, point.imag]
        out["summary"]["u_at_point"] = float(sol.eval_u(point))
    return out, sol


def demo_fig1(variants=("global", "local")):
    """L shape with data (Re z)^2, global and local variants."""
    out = {}
    for v in variants:
        opts = SolverOptions(variant=v, max_aaa_degree=400)
        out[v], _ = _solve_report(l_shape(), lambda z: np.real(z) ** 2, opts, L_SHAPE_POINT)
    return out


def demo_fig2(samples=1000, seed=0):
    d = smooth_blob(seed=seed)
    opts = SolverOptions(variant="global", samples_per_segment=samples)
    rep, _ = _solve_report(d, lambda z: -np.log(np.abs(z)), opts)
    return {"smooth": rep}


def demo_fig3():
    opts = SolverOptions(samples_per_segment=400, poly_degree=10)
    rep, _ = _solve_report(three_rectangles(), [1, 0, 0], opts, THREE_RECT_POINT)
    return {"three_rectangles": rep}


def demo_fig4():
    bites, _ = _solve_report(square_with_bites(), lambda z: np.real(z) ** 2,
                             SolverOptions())
    annulus, _ = _solve_report(square_annulus(), [0, 1],
                               SolverOptions(poly_degree=40))
    return {"bites": bites, "annulus": annulus}


def demo_fig5(npts=10_000):
    r = zigzag_approximation()
    x = np.linspace(-1, 1, npts)
    err = r(x) - zigzag(x)
    summary = dict(r.diagnostics)
    summary.update(uniform_max_error=float(np.max(np.abs(err))),
                   poles_on_interval=int(np.count_nonzero(on_interval(r.poles, -1, 1))))
    return {"zigzag": {"summary": summary, "poles": _poles_table(r.poles, r.discarded),
                       "error": {"x": x, "error": err}}}


def _global_poles(d, h, samples=300, tol=1e-8):
    S = sample_boundary(d, samples)
    H = h(S.Z) if callable(h) else np.asarray(h, dtype=float)[S.component_index]
    fit = aaa_fit(S.Z, H, AaaOptions(tol=tol, max_degree=300))
    p = fit.poles.poles
    return fit, p, contains(d, p, closure=True)


def demo_fig6():
    d = lens()
    many, p, inside = _global_poles(d, np.real)
    few, q, qin = _global_poles(d, lens_slit_map)
    out = {}
    for name, fit, poles, ins in (("too_many", many, p, inside), ("too_few", few, q, qin)):
        out[name] = {
            "summary": {"degree": fit.degree, "max_error": fit.max_error,
                        "poles_inside": int(np.count_nonzero(ins)),
                        "poles_outside": int(np.count_nonzero(~ins)),
                        "max_abs_pole": float(np.max(np.abs(poles))) if poles.size else 0.0},
            "poles": _poles_table(poles[~ins], poles[ins]),
        }
    return out


def demo_fig7():
    d = three_circles()
    fit, p, inside = _global_poles(d, [2, 0, 1])
    return {"three_circles": {
        "summary": {"degree": fit.degree, "max_error": fit.max_error,
                    "poles_inside": int(np.count_nonzero(inside)),
                    "poles_outside": int(np.count_nonzero(~inside))},
        "poles": _poles_table(p[~inside], p[inside]),
    }}


def demo_fig8(grades=range(1, 7), npts=1000):
    y = np.linspace(-5, 5, npts)
    exact = _exp_abs_hilbert(y)
    L, err = [], []
    for g in grades:
        h = hilbert_transform("abs-exp", default_grid(g, 30 * g))
        L.append(g)
        err.append(float(np.max(np.abs(h.v(y) - exact))))
    return {"convergence": {"table": {"L": np.array(L), "max_error": np.array(err)}}}


DEMOS = {"fig1": demo_fig1, "fig2": demo_fig2, "fig3": demo_fig3, "fig4": demo_fig4,
         "fig5": demo_fig5, "fig6": demo_fig6, "fig7": demo_fig7, "fig8": demo_fig8}
