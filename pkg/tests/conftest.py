import numpy as np
import pytest

from qdpotential.decompose import BiRational
from qdpotential.domain import domain_from_coeffs
from qdpotential.ratcalc import ComplexPoly, RationalFn


def make_disc():
    return domain_from_coeffs([0, 1], witness_numer=[1], name="disc")


def make_area():
    return domain_from_coeffs([0, 1, 0.4], name="w+0.4w^2")


def make_double():
    return domain_from_coeffs([0, 1, 0.3, 0.03], witness_numer=[1, 0.3], name="w+0.3w^2+0.03w^3")


DOMAINS = {"disc": make_disc(), "area": make_area(), "double": make_double()}


@pytest.fixture(scope="session")
def disc():
    return DOMAINS["disc"]


@pytest.fixture(scope="session")
def area():
    return DOMAINS["area"]


@pytest.fixture(scope="session")
def double():
    return DOMAINS["double"]


def circle(n=256):
    return np.exp(2j * np.pi * np.arange(n) / n)


def _cplx(rng, size, radius):
    r = radius * np.sqrt(rng.uniform(0, 1, size))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, size))


def random_birational(rng, max_degree=3, radius=2.0) -> BiRational:
    """Random R(z, s): |coefficients| <= radius, total degree <= max_degree.

    Denominators are either 2 + a z + b s with |a| + |b| <= 0.6 (bounded away
    from zero on every fixture boundary, where |z| <= 1.4) or a monomial of
    degree <= 1 (the fixture boundaries avoid z = 0).
    """
    num = np.zeros((max_degree + 1, max_degree + 1), dtype=complex)
    for i in range(max_degree + 1):
        for j in range(max_degree + 1 - i):
            num[i, j] = _cplx(rng, 1, radius)[0]
    kind = rng.integers(0, 3)
    if kind == 0:
        den = np.array([[1.0]])
    elif kind == 1:
        a, b = _cplx(rng, 2, 0.3)
        den = np.array([[2, b], [a, 0]], dtype=complex)
    else:
        den = np.zeros((2, 2), dtype=complex)
        den[tuple(rng.permutation([0, 1]))] = _cplx(rng, 1, 1.0)[0] + 0.5
    return BiRational(num, den)


def random_stable_rational(rng, n_poles=2, radius=1.0):
    """Random rational function of w with simple poles in 1.5 < |w| < 3 (analytic on the closed disc)."""
    mod = 1.5 + 1.5 * rng.uniform(0, 1, n_poles)
    poles = tuple((complex(p), 1) for p in mod * np.exp(2j * np.pi * rng.uniform(0, 1, n_poles)))
    return RationalFn(ComplexPoly(_cplx(rng, n_poles + 1, radius)), poles)


def pick_anchor(rng, dom, R, radius=0.5, gap=0.1):
    """Random anchor |a| <= radius kept away from interior poles of the pulled-back data.

    Splitting a cluster {a, p} with p of order m into per-point principal parts
    amplifies rounding by about |a - p|**-m, so the required gap grows with m
    (1e-5 ** (1/m)); the ill-conditioned regime is tested separately.
    """
    from qdpotential.decompose import pullback_boundary_data

    rho = pullback_boundary_data(dom, R)
    bad = [(p, m) for p, m in rho.poles + rho.reflect().poles if abs(p) < 1]
    while True:
        a = _cplx(rng, 1, radius)[0]
        if all(abs(a - p) >= max(gap, 1e-5 ** (1 / m)) for p, m in bad):
            return a


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
