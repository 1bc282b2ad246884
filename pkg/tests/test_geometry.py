import json

import numpy as np
import pytest

from aaals.demos import l_shape, lens, three_rectangles
from aaals.geometry import (BoundaryComponent, Domain, Segment, artificial_corner_data,
                            assign_to_corner, cluster_parameters, contains, domain_from_dict,
                            load_domain, polygon, rectangle, sample_boundary, samples_at,
                            smooth_blob)


def _winding(poly, z):
    """Winding number of a closed polyline around z, by summed angle increments."""
    d = poly[:, None] - z[None, :]
    ang = np.angle(d[1:] / d[:-1])
    return np.rint(np.sum(ang, axis=0) / (2 * np.pi)).astype(int)


def test_cluster_parameters():
    t = cluster_parameters(300, True, False)
    assert t.size == 300 and t[0] == pytest.approx(1e-14) and t[-1] == 1.0
    t = cluster_parameters(300, False, True)
    assert 1 - t[-1] == pytest.approx(1e-14, rel=1e-2)
    t = cluster_parameters(50, False, False)
    np.testing.assert_allclose(np.diff(t), 1 / 50)
    t = cluster_parameters(100, True, True)
    assert t[0] < 1e-13 and 1 - t[-1] < 1e-13


def test_corner_clustering_reaches_relative_1e14():
    d = l_shape()
    S = sample_boundary(d, 300)
    for w in d.corners:
        dmin = np.min(np.abs(S.Z[S.Z != w] - w))
        assert dmin <= 1e-13  # edges have length 1 or 2
    # no exact duplicates at shared endpoints
    assert np.unique(S.Z).size == S.Z.size


def test_uniform_sampling_without_corners():
    d = smooth_blob()
    S = sample_boundary(d, 200)
    assert len(S) == 200
    assert np.all(S.component_index == 0)


def test_contains_matches_winding_number():
    rng = np.random.default_rng(5)
    d = l_shape()
    poly = d.components[0].polyline()
    z = rng.uniform(-0.5, 2.5, 3000) + 1j * rng.uniform(-0.5, 2.5, 3000)
    z = z[d.boundary_distance(z) > 1e-9]
    np.testing.assert_array_equal(contains(d, z), _winding(poly, z) != 0)


def test_contains_multiply_connected_and_unbounded():
    d = three_rectangles()
    assert contains(d, 1.0) and contains(d, 100j)
    assert not contains(d, -1.0) and not contains(d, 3 + 0.75j)
    z = 1 + 1e-14j
    edge = 0j
    assert not contains(d, edge) and contains(d, edge, closure=True)
    assert contains(d, z)


def test_contains_curved_boundary():
    d = lens()
    assert contains(d, 0j)
    assert not contains(d, 0.5j) and not contains(d, 2.0)
    # the arcs bulge by sqrt(2) - 1 on the imaginary axis
    assert contains(d, 0.41j) and not contains(d, 0.42j)


def test_assign_to_corner_ties_go_to_lower_index():
    d = Domain((rectangle(0, 2, 0, 2),))
    S = samples_at(d, [1.0 + 0j, 0.5 + 0j, 2 + 1j])
    S = assign_to_corner(S, d)
    # 1 is equidistant from corners 0 and 2 (indices 0 and 1)
    np.testing.assert_array_equal(S.corner_index, [0, 0, 1])


def test_assign_to_corner_needs_corners_on_component():
    d = smooth_blob()
    with pytest.raises(ValueError, match="no corners"):
        assign_to_corner(sample_boundary(d, 50), d)


def test_artificial_corner_data_values():
    d = Domain((polygon([0, 2, 2 + 2j, 2j]),))
    # at 1 + 1j every corner is sqrt(2) away: sqrt(sqrt(2)^4) = 2
    assert artificial_corner_data(d, 1 + 1j) == pytest.approx(2.0)
    assert artificial_corner_data(d, 0j) == 0.0
    d1 = Domain((polygon([0, 2, 2j], corners=[0]),))
    assert artificial_corner_data(d1, 1.0) == pytest.approx(1.0)


def test_json_round_trip(tmp_path):
    for d in (l_shape(), lens(), three_rectangles(), smooth_blob()):
        p = tmp_path / "d.json"
        p.write_text(json.dumps(d.to_dict()))
        e = load_domain(p)
        assert e.bounded == d.bounded
        assert e.corners == d.corners
        assert e.hole_centers == d.hole_centers
        rng = np.random.default_rng(0)
        z = rng.uniform(-3, 5, 400) + 1j * rng.uniform(-2, 2, 400)
        np.testing.assert_array_equal(contains(d, z), contains(e, z))


def test_schema_errors():
    with pytest.raises(ValueError, match="do not join"):
        BoundaryComponent((Segment("line", 0, 1), Segment("line", 1, 1j)))
    with pytest.raises(ValueError, match="radius"):
        domain_from_dict({"components": [{"segments": [
            {"kind": "arc", "from": [1, 0], "to": [1, 0], "center": [0, 0], "radius": 2}]}]})
    with pytest.raises(ValueError, match="hole center"):
        Domain((rectangle(0, 1, 0, 1), rectangle(0.2, 0.4, 0.2, 0.4, clockwise=True)),
               hole_centers=(0.9 + 0.9j,))


def test_samples_at():
    d = l_shape()
    S = samples_at(d, [0.5, 2 + 0.5j, 1.5 + 1j])
    assert len(S) == 3 and np.all(S.component_index == 0)
    with pytest.raises(ValueError, match="not on the boundary"):
        samples_at(d, [0.5 + 0.5j])


def test_segment_sampling_examples():
    d = Domain((polygon([0, 1, 1 + 1j, 1j], corners=[0]),))
    S = sample_boundary(d, 300)
    bottom = S.Z[np.abs(S.Z.imag) < 1e-15]
    bottom = bottom[bottom != 0]
    assert np.min(np.abs(bottom)) == pytest.approx(1e-14, rel=1e-12)
    assert np.max(np.abs(bottom)) == pytest.approx(1.0)
    d2 = Domain((polygon([0, 1, 1 + 1j, 1j], corners=[]),))
    S2 = sample_boundary(d2, 10)
    assert len(S2) == 40
    np.testing.assert_allclose(S2.Z[:10], np.arange(10) / 10)


def test_doubly_singular_segment_is_symmetric():
    d = Domain((polygon([0, 1, 1 + 1j, 1j]),))
    S = sample_boundary(d, 100)
    bottom = np.sort(S.Z[(S.Z.imag == 0)].real)
    np.testing.assert_allclose(bottom, np.sort(1 - bottom), atol=1e-15)


def test_samples_lie_on_segments():
    d = lens()
    S = sample_boundary(d, 200)
    r = np.where(S.Z.imag <= 0, np.abs(S.Z - 1j), np.abs(S.Z + 1j))
    np.testing.assert_allclose(r, np.sqrt(2), atol=1e-12)
    d = l_shape()
    assert np.max(d.boundary_distance(sample_boundary(d, 100).Z)) < 1e-15


def test_contains_examples():
    sq = Domain((polygon([0, 1, 1 + 1j, 1j]),))
    assert contains(sq, 0.5 + 0.5j) and not contains(sq, 2 + 2j)
    assert contains(l_shape(), 0.99 + 0.99j)
    from aaals.demos import square_annulus
    assert not contains(square_annulus(), -0.25 - 0.25j)


@pytest.mark.parametrize("make", [l_shape, lens, three_rectangles, smooth_blob])
def test_contains_winding_oracle_all_domains(make):
    d = make()
    rng = np.random.default_rng(9)
    a, _ = d._edges
    z = (rng.uniform(a.real.min() - 0.5, a.real.max() + 0.5, 1000)
         + 1j * rng.uniform(a.imag.min() - 0.5, a.imag.max() + 0.5, 1000))
    z = z[d.boundary_distance(z) > 1e-9]
    w = sum(_winding(c.polyline(), z) for c in d.components)
    want = (w != 0) if d.bounded else (w == 0)
    np.testing.assert_array_equal(contains(d, z), want)


def test_assign_to_corner_examples():
    d = l_shape()
    S = assign_to_corner(samples_at(d, [1.5 + 1j, 1 + 1.001j]), d)
    reentrant = d.corners.index(1 + 1j)
    assert S.corner_index[1] == reentrant
    # idempotent
    np.testing.assert_array_equal(assign_to_corner(S, d).corner_index, S.corner_index)
    from aaals.demos import square_annulus
    a = square_annulus()
    S = assign_to_corner(sample_boundary(a, 40), a)
    comp_of_corner = np.array(a.corner_component)[S.corner_index]
    np.testing.assert_array_equal(comp_of_corner, S.component_index)


def test_artificial_data_examples():
    one = Domain((polygon([0, 4, 4 + 4j], corners=[0]),))
    assert artificial_corner_data(one, 4.0) == pytest.approx(2.0)
    two = Domain((polygon([-1, 1, 1j], corners=[-1, 1]),))
    assert artificial_corner_data(two, 0.0) == pytest.approx(1.0)
    assert artificial_corner_data(two, 1.0) == 0.0
