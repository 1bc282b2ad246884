"""Planar domains bounded by lines, circular arcs and periodic splines.

A ``Domain`` is a list of closed ``BoundaryComponent`` loops plus the points
needed by the solver (hole centers, exterior center). Corners are declared,
not detected. Sampling clusters points exponentially toward corners.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

ENDPOINT_TOL = 1e-12
BOUNDARY_BUFFER = 1e-12
CURVE_SUBDIVISIONS = 1024  # polyline pieces per curved segment for contains()


@dataclass(frozen=True, eq=False)
class Segment:
    """One smooth boundary piece, parametrized by t in [0, 1].

    ``kind`` is ``"line"``, ``"arc"`` or ``"spline"``. Arcs run from ``start``
    to ``end`` about ``center``, counterclockwise unless ``ccw`` is False; a
    full circle has ``start == end``. A spline is the closed periodic
    trigonometric interpolant through ``nodes`` (t = j / len(nodes)).
    """

    kind: str
    start: complex = 0j
    end: complex = 0j
    center: complex | None = None
    ccw: bool = True
    nodes: tuple = ()

    def __post_init__(self):
        if self.kind not in ("line", "arc", "spline"):
            raise ValueError(f"unknown segment kind {self.kind!r}")
        if self.kind == "line" and abs(self.end - self.start) == 0:
            raise ValueError("line segment has zero length")
        if self.kind == "arc":
            if self.center is None:
                raise ValueError("arc needs a center")
            r0, r1 = abs(self.start - self.center), abs(self.end - self.center)
            if r0 == 0 or abs(r0 - r1) > 1e-10 * r0:
                raise ValueError("arc endpoints are not equidistant from the center")
        if self.kind == "spline":
            if len(self.nodes) < 3:
                raise ValueError("spline needs at least 3 nodes")
            nodes = np.asarray(self.nodes, dtype=complex)
            object.__setattr__(self, "start", complex(nodes[0]))
            object.__setattr__(self, "end", complex(nodes[0]))

    @cached_property
    def _arc(self):
        r = abs(self.start - self.center)
        a0 = np.angle(self.start - self.center)
        a1 = np.angle(self.end - self.center)
        span = (a1 - a0) % (2 * np.pi) if self.ccw else (a0 - a1) % (2 * np.pi)
        if span == 0:
            span = 2 * np.pi
        return r, a0, span if self.ccw else -span

    @cached_property
    def _fourier(self):
        nodes = np.asarray(self.nodes, dtype=complex)
        k = nodes.size
        c = np.fft.fft(nodes) / k
        freqs = np.fft.fftfreq(k, d=1.0 / k)
        if k % 2 == 0:
            # Split the Nyquist mode symmetrically so the curve stays smooth.
            ny = k // 2
            c = np.append(c, c[ny] / 2)
            c[ny] /= 2
            freqs = np.append(freqs, ny)
            freqs[k // 2] = -ny
        return c, freqs

    @property
    def closed(self):
        return self.kind == "spline" or (self.kind == "arc" and self.start == self.end)

    def point(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "line":
            return self.start + t * (self.end - self.start)
        if self.kind == "arc":
            r, a0, span = self._arc
            return self.center + r * np.exp(1j * (a0 + t * span))
        c, freqs = self._fourier
        return np.exp(2j * np.pi * np.multiply.outer(t, freqs)) @ c

    def tangent(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "line":
            return np.full(t.shape, self.end - self.start, dtype=complex)
        if self.kind == "arc":
            r, a0, span = self._arc
            return 1j * span * r * np.exp(1j * (a0 + t * span))
        c, freqs = self._fourier
        return np.exp(2j * np.pi * np.multiply.outer(t, freqs)) @ (2j * np.pi * freqs * c)

    @property
    def length(self):
        if self.kind == "line":
            return abs(self.end - self.start)
        if self.kind == "arc":
            r, _, span = self._arc
            return r * abs(span)
        t = np.linspace(0, 1, 4097)
        return float(np.sum(np.abs(np.diff(self.point(t)))))

    def polyline(self, nsub=CURVE_SUBDIVISIONS):
        """Vertices from t=0 to t=1 inclusive."""
        if self.kind == "line":
            return np.array([self.start, self.end])
        n = nsub if self.kind == "arc" else max(4 * nsub, 64 * len(self.nodes))
        return self.point(np.linspace(0.0, 1.0, n + 1))

    def to_dict(self):
        d = {"kind": self.kind}
        if self.kind == "spline":
            d["nodes"] = [[z.real, z.imag] for z in np.asarray(self.nodes, dtype=complex)]
            return d
        d["from"] = [self.start.real, self.start.imag]
        d["to"] = [self.end.real, self.end.imag]
        if self.kind == "arc":
            d["center"] = [self.center.real, self.center.imag]
            d["radius"] = abs(self.start - self.center)
            d["ccw"] = self.ccw
        return d


@dataclass(frozen=True, eq=False)
class BoundaryComponent:
    segments: tuple
    corners: tuple = ()

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise ValueError("a boundary component needs at least one segment")
        object.__setattr__(self, "segments", segs)
        scale = max(max(abs(s.start), abs(s.end)) for s in segs) or 1.0
        for a, b in zip(segs, segs[1:] + segs[:1]):
            if abs(a.end - b.start) > ENDPOINT_TOL * max(scale, 1.0):
                raise ValueError(f"segments do not join: {a.end} vs {b.start}")
        junctions = [s.start for s in segs]
        corners = tuple(complex(c) for c in self.corners)
        for c in corners:
            if min(abs(c - j) for j in junctions) > ENDPOINT_TOL * max(scale, 1.0):
                raise ValueError(f"corner {c} is not a segment junction")
        object.__setattr__(self, "corners", corners)

    def is_corner(self, z):
        return any(abs(z - c) <= ENDPOINT_TOL * max(abs(c), 1.0) for c in self.corners)

    def polyline(self):
        pts = [s.polyline()[:-1] for s in self.segments]
        pts = np.concatenate(pts)
        return np.append(pts, pts[0])


@dataclass(frozen=True, eq=False)
class Domain:
    """Domain with boundary ``components``.

    Bounded domains have the outer loop first; unbounded domains are the
    exterior of all their loops. ``hole_centers`` holds one point per hole;
    ``exterior_center`` is a point in a hole used for 1/(z - z_c) bases.
    """

    components: tuple
    bounded: bool = True
    hole_centers: tuple = ()
    exterior_center: complex | None = None

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "hole_centers", tuple(complex(c) for c in self.hole_centers))
        if self.exterior_center is not None:
            object.__setattr__(self, "exterior_center", complex(self.exterior_center))
        nholes = len(self.components) - (1 if self.bounded else 0)
        if self.hole_centers and len(self.hole_centers) != nholes:
            raise ValueError(f"expected {nholes} hole centers, got {len(self.hole_centers)}")
        if not self.bounded and self.exterior_center is None and not self.hole_centers:
            raise ValueError("unbounded domain needs an exterior_center or hole_centers")
        for c in self.hole_centers:
            if self.contains(c, closure=True):
                raise ValueError(f"hole center {c} is not inside a hole")
        if self.exterior_center is not None and not self.bounded:
            if self.contains(self.exterior_center, closure=True):
                raise ValueError("exterior_center must lie in a hole")

    @property
    def corners(self):
        return [c for comp in self.components for c in comp.corners]

    @property
    def corner_component(self):
        return [k for k, comp in enumerate(self.components) for _ in comp.corners]

    @cached_property
    def _edges(self):
        a, b = [], []
        for comp in self.components:
            p = comp.polyline()
            a.append(p[:-1])
            b.append(p[1:])
        return np.concatenate(a), np.concatenate(b)

    @cached_property
    def scale(self):
        a, _ = self._edges
        return float(np.max(np.abs(a - np.mean(a))))

    @property
    def simply_connected(self):
        return self.bounded and len(self.components) == 1

    def contains(self, z, closure=False):
        return contains(self, z, closure=closure)

    def boundary_distance(self, z):
        """Distance from each z to the flattened boundary."""
        return _edge_distance(z, *self._edges)

    def to_dict(self):
        comps = [{"segments": [s.to_dict() for s in c.segments],
                  "corners": [[w.real, w.imag] for w in c.corners]}
                 for c in self.components]
        d = {"components": comps, "bounded": self.bounded,
             "hole_centers": [[c.real, c.imag] for c in self.hole_centers]}
        if self.exterior_center is not None:
            d["exterior_center"] = [self.exterior_center.real, self.exterior_center.imag]
        return d


@dataclass(frozen=True, eq=False)
class SampleSet:
    Z: np.ndarray
    component_index: np.ndarray
    corner_index: np.ndarray
    normal: np.ndarray
    H: np.ndarray | None = field(default=None)

    def __len__(self):
        return self.Z.size

    def with_data(self, H):
        H = np.asarray(H, dtype=float).ravel()
        if H.size != self.Z.size:
            raise ValueError("data length does not match sample count")
        return SampleSet(self.Z, self.component_index, self.corner_index, self.normal, H)

    def with_corners(self, corner_index):
        return SampleSet(self.Z, self.component_index, np.asarray(corner_index), self.normal, self.H)


def _edge_distance(z, a, b):
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    out = np.empty(flat.shape)
    ab = b - a
    L2 = np.abs(ab) ** 2
    for s in range(0, flat.size, 256):
        zz = flat[s : s + 256, None]
        t = np.clip(np.real((zz - a) * np.conj(ab)) / L2, 0.0, 1.0)
        out[s : s + 256] = np.min(np.abs(zz - (a + t * ab)), axis=1)
    return out.reshape(z.shape)


# --------------------------------------------------------------------------
# sampling


def cluster_parameters(n, start_singular, end_singular, log_range=(-14.0, 0.0), tanh_range=16.0):
    """Parameter values in [0, 1] for one segment.

    One singular end: geometric ladder 10**logspace over ``log_range``.
    Both ends: (1 + tanh(linspace(-tanh_range, tanh_range, n))) / 2.
    Neither: n uniform values in [0, 1).
    """
    if start_singular and end_singular:
        return (1.0 + np.tanh(np.linspace(-tanh_range, tanh_range, n))) / 2.0
    if start_singular:
        return np.logspace(log_range[0], log_range[1], n)
    if end_singular:
        return 1.0 - np.logspace(log_range[0], log_range[1], n)[::-1]
    return np.arange(n) / n


def sample_boundary(d, per_segment=300, log_range=(-14.0, 0.0), tanh_range=16.0):
    """Sample every segment of ``d`` with clustering toward declared corners.

    ``per_segment`` is an int or a dict mapping (component, segment) to a
    count. Exact duplicates (shared segment endpoints) are dropped.
    """
    Zs, comp, normals = [], [], []
    for ci, c in enumerate(d.components):
        for si, s in enumerate(c.segments):
            n = per_segment.get((ci, si), 300) if isinstance(per_segment, dict) else per_segment
            if n < 8:
                raise ValueError("need at least 8 samples per segment")
            sing0 = not s.closed and c.is_corner(s.start)
            sing1 = not s.closed and c.is_corner(s.end)
            t = cluster_parameters(n, sing0, sing1, log_range, tanh_range)
            z = s.point(t)
            tan = s.tangent(t)
            Zs.append(z)
            comp.append(np.full(z.size, ci))
            normals.append(-1j * tan / np.abs(tan))
    Z = np.concatenate(Zs)
    comp = np.concatenate(comp)
    normal = np.concatenate(normals)
    _, first = np.unique(Z, return_index=True)
    keep = np.sort(first)
    return SampleSet(Z[keep], comp[keep], np.full(keep.size, -1), normal[keep])


def samples_at(d, Z, rtol=1e-6):
    """SampleSet for user-supplied boundary points, each attached to the
    nearest boundary component. Points further than ``rtol * scale`` from
    the boundary are rejected."""
    Z = np.asarray(Z, dtype=complex).ravel()
    dist = np.stack([_edge_distance(Z, p[:-1], p[1:])
                     for p in (c.polyline() for c in d.components)])
    comp = np.argmin(dist, axis=0)
    far = np.min(dist, axis=0) > rtol * d.scale
    if np.any(far):
        k = int(np.argmax(far))
        raise ValueError(f"sample {k} at {Z[k]} is not on the boundary")
    return SampleSet(Z, comp, np.full(Z.size, -1), np.zeros(Z.size, dtype=complex))


# --------------------------------------------------------------------------
# queries


def contains(d, z, closure=False):
    """Membership in the open domain by an even-odd crossing test on the
    flattened boundary. Points within ``BOUNDARY_BUFFER * scale`` of the
    boundary count as inside when ``closure`` is set, outside otherwise.
    """
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    a, b = d._edges
    ax, ay, bx, by = a.real, a.imag, b.real, b.imag
    odd = np.zeros(flat.size, dtype=bool)
    for s in range(0, flat.size, 256):
        x = flat[s : s + 256].real[:, None]
        y = flat[s : s + 256].imag[:, None]
        straddle = (ay > y) != (by > y)
        with np.errstate(divide="ignore", invalid="ignore"):
            xc = ax + (y - ay) * (bx - ax) / (by - ay)
        odd[s : s + 256] = np.count_nonzero(straddle & (x < xc), axis=1) % 2 == 1
    inside = odd if d.bounded else ~odd
    near = d.boundary_distance(flat) <= BOUNDARY_BUFFER * d.scale
    inside = (inside | near) if closure else (inside & ~near)
    if z.ndim == 0:
        return bool(inside[0])
    return inside.reshape(z.shape)


def assign_to_corner(samples, d):
    """Nearest corner on the sample's own component (ties -> lower index)."""
    corners = np.array(d.corners, dtype=complex)
    ccomp = np.array(d.corner_component)
    idx = np.full(len(samples), -1)
    for ci in np.unique(samples.component_index):
        sel = np.nonzero(samples.component_index == ci)[0]
        mine = np.nonzero(ccomp == ci)[0]
        if mine.size == 0:
            raise ValueError(
                f"boundary component {ci} has samples but no corners; use artificial "
                "corner data on a domain with corners, or the global variant")
        dist = np.abs(samples.Z[sel, None] - corners[None, mine])
        idx[sel] = mine[np.argmin(dist, axis=1)]
    return samples.with_corners(idx)


def artificial_corner_data(d, Z):
    """sqrt(prod_k |Z - w_k|) over all declared corners w_k."""
    corners = np.array(d.corners, dtype=complex)
    if corners.size == 0:
        raise ValueError("artificial corner data needs at least one corner")
    Z = np.asarray(Z, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.log(np.abs(Z[..., None] - corners))
        return np.exp(0.5 * np.sum(logs, axis=-1))


# --------------------------------------------------------------------------
# construction helpers and JSON


def polygon(vertices, corners=None):
    """Closed polygonal component; every vertex is a corner by default."""
    v = [complex(z) for z in vertices]
    segs = [Segment("line", a, b) for a, b in zip(v, v[1:] + v[:1])]
    return BoundaryComponent(segs, tuple(v if corners is None else corners))


def rectangle(x0, x1, y0, y1, clockwise=False):
    v = [complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)]
    return polygon(v[::-1] if clockwise else v)


def smooth_blob(n=15, seed=0, amplitude=0.3):
    """Simply connected domain bounded by a periodic spline through ``n``
    nodes at equispaced angles with seeded random radii in 1 +- amplitude/2."""
    rng = np.random.default_rng(seed)
    theta = 2 * np.pi * np.arange(n) / n
    r = 1.0 + amplitude * (rng.random(n) - 0.5)
    comp = BoundaryComponent((Segment("spline", nodes=tuple(r * np.exp(1j * theta))),), ())
    return Domain((comp,))


def _parse_complex(v):
    if isinstance(v, (int, float)):
        return complex(v)
    if len(v) != 2:
        raise ValueError(f"complex numbers are [re, im] pairs, got {v!r}")
    return complex(float(v[0]), float(v[1]))


def domain_from_dict(spec):
    comps = []
    all_corners = [_parse_complex(c) for c in spec.get("corners", [])]
    for ci, cspec in enumerate(spec["components"]):
        segs = []
        for sspec in cspec["segments"]:
            kind = sspec["kind"]
            if kind in ("circular-arc", "circular_arc"):
                kind = "arc"
            if kind in ("periodic-spline", "periodic_spline"):
                kind = "spline"
            if kind == "spline":
                segs.append(Segment("spline", nodes=tuple(_parse_complex(z) for z in sspec["nodes"])))
                continue
            start = _parse_complex(sspec["from"])
            end = _parse_complex(sspec["to"])
            if kind == "arc":
                center = _parse_complex(sspec["center"])
                if "radius" in sspec and abs(abs(start - center) - float(sspec["radius"])) > 1e-9 * abs(start - center):
                    raise ValueError(f"component {ci}: arc radius disagrees with endpoints")
                segs.append(Segment("arc", start, end, center, bool(sspec.get("ccw", True))))
            else:
                segs.append(Segment(kind, start, end))
        junctions = [s.start for s in segs]
        corners = [_parse_complex(c) for c in cspec.get("corners", [])]
        corners += [w for w in all_corners
                    if any(abs(w - j) <= ENDPOINT_TOL * max(abs(w), 1.0) for j in junctions)]
        comps.append(BoundaryComponent(tuple(segs), tuple(dict.fromkeys(corners))))
    ext = spec.get("exterior_center")
    return Domain(tuple(comps), bool(spec.get("bounded", True)),
                  tuple(_parse_complex(c) for c in spec.get("hole_centers", [])),
                  None if ext is None else _parse_complex(ext))


def load_domain(path):
    with open(path) as fh:
        return domain_from_dict(json.load(fh))
