"""Independent numeric ground truth.

Nothing here touches the exact-algebra path: maps are evaluated from the raw
coefficient arrays with plain numpy, integrals are trapezoid sums on the
circle and derivatives are finite differences.  Agreement with the closed
forms is therefore evidence rather than a restatement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P


@dataclass(frozen=True)
class BoundarySamples:
    thetas: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        n = len(self.thetas)
        if n < 64 or n & (n - 1):
            raise ValueError("sample count must be a power of two >= 64")
        if len(self.values) != n:
            raise ValueError("thetas and values differ in length")

    @classmethod
    def from_function(cls, g, n: int = 256) -> BoundarySamples:
        """Samples of g(theta) on the uniform grid 2 pi k / n."""
        t = 2 * np.pi * np.arange(n) / n
        return cls(t, np.asarray(g(t), dtype=complex))


# ---------------------------------------------------------------- map evaluation


def map_value(dom, w):
    w = np.asarray(w, dtype=complex)
    return P.polyval(w, dom.raw_numer) / P.polyval(w, dom.raw_denom)


def map_deriv(dom, w):
    w = np.asarray(w, dtype=complex)
    n, d = dom.raw_numer, dom.raw_denom
    dv = P.polyval(w, d)
    return (P.polyval(w, P.polyder(n)) * dv - P.polyval(w, n) * P.polyval(w, P.polyder(d))) / dv**2


def preimage(dom, z: complex) -> complex:
    """Disc point mapping to z, by damped Newton from the nearest of a polar seed grid."""
    r = np.linspace(0.0, 1.0, 41)
    t = 2 * np.pi * np.arange(96) / 96
    seeds = (r[:, None] * np.exp(1j * t)[None, :]).ravel()
    order = np.argsort(np.abs(map_value(dom, seeds) - z))
    best, best_err = None, np.inf
    for idx in order[:6]:
        v = complex(seeds[idx])
        for _ in range(80):
            step = complex((map_value(dom, v) - z) / map_deriv(dom, v))
            v -= step
            if abs(v) > 1.05:
                break
            if abs(step) < 1e-16:
                break
        err = abs(complex(map_value(dom, v)) - z)
        if abs(v) <= 1 + 1e-9 and err < best_err:
            best, best_err = v, err
        if best_err < 1e-14 * (1 + abs(z)):
            break
    if best is None or best_err > 1e-9 * (1 + abs(z)):
        raise ValueError(f"preimage not found for {z}")
    return best


# ---------------------------------------------------------------- Poisson


def poisson_disc(samples: BoundarySamples, v: complex) -> complex:
    """Harmonic extension of the samples to the disc point v."""
    v = complex(v)
    if abs(v) >= 1:
        raise ValueError("|v| must be < 1")
    n = len(samples.values)
    if abs(v) ** n > 1e-17:
        # the trapezoid kernel is under-resolved this close to the circle:
        # sum the discrete Fourier modes instead
        c = np.fft.fft(samples.values) / n
        k = np.fft.fftfreq(n, 1.0 / n)
        zk = np.where(k >= 0, v ** np.abs(k), np.conj(v) ** np.abs(k))
        if n % 2 == 0:
            nyq = n // 2
            zk[nyq] = 0.5 * (v**nyq + np.conj(v) ** nyq)
        return complex(np.sum(c * zk))
    e = np.exp(1j * samples.thetas)
    kern = (1 - abs(v) ** 2) / np.abs(e - v) ** 2
    return complex(np.mean(kern * samples.values))


class PoissonSolution:
    """Harmonic extension of boundary data g(z) on the image domain, evaluated at z."""

    def __init__(self, dom, g, n: int = 1024):
        self.dom = dom
        self.g = g
        self.samples = BoundarySamples.from_function(lambda t: g(map_value(dom, np.exp(1j * t))), n)

    def at_w(self, v: complex) -> complex:
        if abs(v) >= 1 - 1e-13:
            return complex(self.g(map_value(self.dom, v / abs(v))))
        return poisson_disc(self.samples, v)

    def __call__(self, z: complex) -> complex:
        return self.at_w(preimage(self.dom, z))


# ---------------------------------------------------------------- Fourier


def hardy_project(samples: BoundarySamples) -> BoundarySamples:
    """Keep the non-negative Fourier modes."""
    n = len(samples.values)
    c = np.fft.fft(samples.values)
    k = np.fft.fftfreq(n, 1.0 / n)
    c[k < 0] = 0
    return BoundarySamples(samples.thetas, np.fft.ifft(c))


# ---------------------------------------------------------------- finite differences


def fd_normal(dom, u, theta: float, step: float = 1e-4) -> complex:
    """One-sided second-order derivative of u along the outward normal at f(e^{i theta})."""
    if not 1e-6 <= step <= 1e-2:
        raise ValueError("step must lie in [1e-6, 1e-2]")
    w = np.exp(1j * theta)
    z0 = complex(map_value(dom, w))
    d = complex(1j * w * map_deriv(dom, w))
    n = -1j * d / abs(d)
    return (3 * u(z0) - 4 * u(z0 - step * n) + u(z0 - 2 * step * n)) / (2 * step)


def fd_laplacian(u, z: complex, step: float = 2e-4, extrapolate: bool = False) -> complex:
    """Five-point Laplacian of u at z.

    With ``extrapolate`` the stencil is also taken at twice the step and the
    h**2 error term is cancelled (one Richardson step), which matters where
    the map is nearly critical and fourth derivatives are large.
    """
    def five(h):
        return (u(z + h) + u(z - h) + u(z + 1j * h) + u(z - 1j * h) - 4 * u(z)) / h**2

    if not extrapolate:
        return five(step)
    return (4 * five(step) - five(2 * step)) / 3


# ---------------------------------------------------------------- quadrature


def area_integral(dom, h, n: int = 1024) -> complex:
    """Integral of h over the domain via (1/2i) times the loop integral of h(z) conj(z) dz."""
    w = np.exp(2j * np.pi * np.arange(n) / n)
    z = map_value(dom, w)
    hz = h(z) if callable(h) else P.polyval(z, np.asarray(h, dtype=complex))
    return complex(0.5 * np.sum(hz * np.conj(z) * map_deriv(dom, w) * w) * 2 * np.pi / n)


def boundary_pairing(dom, F, G, n: int = 256) -> complex:
    """Loop integral of F conj(G) ds, with F, G given as functions of the disc variable."""
    w = np.exp(2j * np.pi * np.arange(n) / n)
    return complex(np.sum(F(w) * np.conj(G(w)) * np.abs(map_deriv(dom, w))) * 2 * np.pi / n)


def arc_length_integral(dom, g, n: int = 1024) -> complex:
    """Loop integral of g ds with g a function of the disc variable."""
    return boundary_pairing(dom, g, lambda w: np.ones_like(w), n)


# ---------------------------------------------------------------- rational fitting


def rational_fit(values, degree: int, n_fit: int = 128) -> float:
    """Relative out-of-sample error of a degree-(d, d) rational fit to samples on the circle.

    ``values`` maps disc points on |w| = 1 to complex values.  The fit is the
    linearised least-squares problem p(w) - y q(w) = 0 solved by SVD on
    ``n_fit`` points and tested on an interleaved set of the same size.
    """
    w_fit = np.exp(2j * np.pi * np.arange(n_fit) / n_fit)
    w_test = np.exp(2j * np.pi * (np.arange(n_fit) + 0.5) / n_fit)
    y = np.asarray(values(w_fit), dtype=complex)
    V = np.vander(w_fit, degree + 1, increasing=True)
    A = np.hstack([V, -y[:, None] * V])
    _, _, vh = np.linalg.svd(A)
    x = np.conj(vh[-1])
    p, q = x[: degree + 1], x[degree + 1:]
    yt = np.asarray(values(w_test), dtype=complex)
    pred = P.polyval(w_test, p) / P.polyval(w_test, q)
    return float(np.max(np.abs(pred - yt)) / (1 + np.max(np.abs(yt))))


def rational_certificate(values, max_degree: int = 24, tol: float = 1e-8) -> tuple[int | None, float]:
    """Smallest degree whose rational fit reaches ``tol``, with the best error seen."""
    best = np.inf
    for d in range(1, max_degree + 1):
        err = rational_fit(values, d)
        best = min(best, err)
        if err <= tol:
            return d, err
    return None, best
