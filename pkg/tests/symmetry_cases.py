"""Random rationals real on the line or on the unit circle, with known poles."""

import numpy as np

from aaals.aaa import AaaOptions, aaa_fit
from aaals.linalg_kernels import lstsq_regularized


def line_case(rng):
    n = int(rng.integers(1, 5))
    p = rng.uniform(-2, 2, n) - 1j * rng.uniform(0.2, 2, n)  # lower half-plane
    a = rng.normal(size=n) + 1j * rng.normal(size=n)
    c = float(rng.normal())

    def r(z):
        z = np.asarray(z, dtype=complex)[..., None]
        return c + np.sum(a / (z - p) + np.conj(a) / (z - np.conj(p)), axis=-1)

    X = np.linspace(-10, 10, 500)
    return r, p, a, c, X


def circle_case(rng):
    n = int(rng.integers(1, 5))
    p = rng.uniform(1.2, 3, n) * np.exp(2j * np.pi * rng.random(n))  # exterior
    a = rng.normal(size=n) + 1j * rng.normal(size=n)
    c = float(rng.normal())

    def r(z):
        z = np.asarray(z, dtype=complex)[..., None]
        return c + np.sum(a / (z - p) + np.conj(a) * z / (1 - np.conj(p) * z), axis=-1)

    X = np.exp(2j * np.pi * np.arange(500) / 500)
    return r, p, a, c, X


def r_plus(p, a, c):
    """Reflection identity: r = (r_+ + r_-)/2 with the constant split evenly,
    so r_+ = c + 2 sum a_k / (z - p_k) over the poles of one side."""
    def f(z):
        z = np.asarray(z, dtype=complex)[..., None]
        return c + 2 * np.sum(a / (z - p), axis=-1)
    return f


def refit_from_samples(r, X, side):
    """AAA on samples of r, keep the poles on ``side``, fit Re r_+ by least squares."""
    F = np.real(r(X))
    fit = aaa_fit(X, F, AaaOptions(tol=1e-13))
    pol = fit.poles.poles
    keep = pol.imag < 0 if side == "line" else np.abs(pol) > 1
    pol = pol[keep]
    Xc = np.asarray(X, dtype=complex)
    d = np.min(np.abs(Xc[:, None] - pol[None, :]), axis=0)
    Q = d / (Xc[:, None] - pol[None, :])
    A = np.hstack([np.ones((X.size, 1)), Q.real, -Q.imag])
    x = lstsq_regularized(A, F).x
    k = pol.size
    coef = x[1 : k + 1] + 1j * x[k + 1 :]

    def f(z):
        z = np.asarray(z, dtype=complex)
        return x[0] + (d / (z[..., None] - pol)) @ coef

    return f, pol
