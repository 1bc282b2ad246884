import numpy as np
import pytest

from aaals.approx import (ZIGZAG_KINKS, approximate, on_interval, zigzag, zigzag_approximation,
                          zigzag_grid)


def test_reciprocal_with_pole_outside():
    X = np.linspace(-1, 1, 500)
    r = approximate(X, 1 / (X - 2))
    x = np.linspace(-1, 1, 3001)
    assert np.max(np.abs(r(x) - 1 / (x - 2))) <= 1e-10
    assert np.min(np.abs(r.poles - 2)) < 1e-8


def test_constant_is_exact():
    X = np.linspace(-1, 1, 100)
    r = approximate(X, np.full(100, 2.5))
    assert r.diagnostics["aaa_degrees"] == [0]
    assert r.poles.size == 0
    assert np.max(np.abs(r(np.linspace(-1, 1, 77)) - 2.5)) == 0


def test_poles_on_interval_are_discarded():
    X = np.linspace(-1, 1, 400)
    r = approximate(X, np.abs(X), tol=1e-10)
    assert not np.any(on_interval(r.poles, -1, 1))
    assert r.diagnostics["n_poles_discarded"] == r.discarded.size


def test_on_interval():
    p = np.array([0.5, 0.5 + 1e-15j, 0.5 + 1e-3j, 1.5, -1.0])
    np.testing.assert_array_equal(on_interval(p, -1, 1), [True, True, False, False, True])


def test_zigzag_function():
    # kinks alternate between valleys (0) and peaks (0.2)
    np.testing.assert_allclose(zigzag(ZIGZAG_KINKS), [0, 0.2] * 4 + [0], atol=1e-15)
    np.testing.assert_allclose(zigzag(np.array([-0.9, 0.1, 0.7])), 0.1, atol=1e-14)
    assert zigzag(-1.0) == pytest.approx(0.2) and zigzag(1.0) == pytest.approx(0.2)


def test_zigzag_grid():
    X = zigzag_grid()
    assert X.min() == pytest.approx(-1.0) and X.max() == pytest.approx(1.0)
    assert np.all(np.diff(X) > 0)


def test_input_validation():
    with pytest.raises(ValueError):
        approximate([0, 1], [1, 2, 3])
    with pytest.raises(ValueError):
        approximate([0, 1, 2], [1, np.nan, 3])


@pytest.mark.slow
def test_zigzag_pole_count():
    r = zigzag_approximation()
    total = r.diagnostics["n_poles_kept"] + r.diagnostics["n_poles_discarded"]
    assert 400 <= total <= 540
    assert all(45 <= k <= 60 for k in r.diagnostics["aaa_degrees"])
