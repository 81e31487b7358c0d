import numpy as np
import pytest

from qdpotential import oracle
from qdpotential.errors import AlgebraError
from qdpotential.kernels import (
    SpanElement,
    boundary_trace,
    eval_element,
    identity_residual,
    kernel_element,
    kernel_value,
    tangent,
    tangent_trace,
)

from conftest import DOMAINS, circle


def test_disc_szego_value(disc):
    assert abs(kernel_value(disc, "szego", 0, 0, 0) - 1 / (2 * np.pi)) < 1e-15
    w = circle(16)
    assert np.max(np.abs(kernel_value(disc, "szego", 0, 0, w) - 1 / (2 * np.pi))) < 1e-15


def test_disc_garabedian_residue(disc):
    z = 1e-6
    assert abs(z * kernel_value(disc, "garabedian", 0, 0, z) - 1 / (2 * np.pi)) < 1e-12


def test_disc_lambda_and_bergman(disc):
    assert abs(kernel_value(disc, "lambda", 0, 0, 0.5) - 4 / np.pi) < 1e-14
    assert abs(kernel_value(disc, "bergman", 0, 0, 0) - 1 / np.pi) < 1e-15


def test_double_fixture_szego_at_origin(double):
    assert abs(kernel_value(double, "szego", 0, 0, 0) - 1 / (2 * np.pi)) < 1e-15


def test_powers_and_pole_orders(area):
    for m in range(4):
        g = kernel_element(area, "garabedian", 0.2, m)
        lam = kernel_element(area, "lambda", 0.2, m)
        assert g.power == -0.5 and lam.power == -1.0
        assert dict(g.reduced.poles)[0.2] == m + 1
        pp = lam.reduced.principal_part(0.2)
        assert pp.order == m + 2 and abs(pp.coefficients[0]) < 1e-12


def test_order_cap(disc):
    with pytest.raises(AlgebraError, match="order cap exceeded"):
        kernel_element(disc, "szego", 0, 13)


def test_evaluation_at_pole(disc):
    e = kernel_element(disc, "garabedian", 0.3, 0)
    with pytest.raises(AlgebraError, match="evaluation at pole"):
        eval_element(e, disc, 0.3)


@pytest.mark.parametrize("name", list(DOMAINS))
@pytest.mark.parametrize("which", ["SL", "SL2", "BL", "BL2"])
def test_identities(name, which):
    dom = DOMAINS[name]
    rng = np.random.default_rng(5)
    ms = (0,) if which in ("SL", "BL") else (1, 2)
    for _ in range(3):
        v = 0.6 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        for m in ms:
            assert identity_residual(dom, which, v, m, 256) <= 1e-8


def test_identity_examples(disc, area):
    assert identity_residual(disc, "SL", 0, 0) <= 1e-10
    assert identity_residual(disc, "BL", 0, 0) <= 1e-10
    assert identity_residual(area, "SL2", 0.2, 1) <= 1e-8


@pytest.mark.parametrize("name", list(DOMAINS))
def test_reproducing_property(name):
    dom = DOMAINS[name]
    n = 512
    w = circle(n)
    ds = np.abs(oracle.map_deriv(dom, w)) * 2 * np.pi / n
    z = oracle.map_value(dom, w)
    for v in (0, 0.3 - 0.2j, -0.5j):
        s = kernel_value(dom, "szego", v, 0, w)
        a = complex(oracle.map_value(dom, v))
        for k in range(3):
            assert abs(np.sum(z**k * np.conj(s) * ds) - a**k) <= 1e-8


@pytest.mark.parametrize("name", list(DOMAINS))
@pytest.mark.parametrize("kind", ["szego", "bergman"])
def test_hermitian_symmetry(name, kind):
    dom = DOMAINS[name]
    rng = np.random.default_rng(9)
    for _ in range(20):
        a, b = 0.8 * np.sqrt(rng.uniform(size=2)) * np.exp(2j * np.pi * rng.uniform(size=2))
        k1 = kernel_value(dom, kind, b, 0, a)
        k2 = kernel_value(dom, kind, a, 0, b)
        assert abs(k1 - np.conj(k2)) <= 1e-9 * (1 + abs(k1))


def test_bergman_area_reproducing(area):
    # integral of h conj(B(., a)) dA via Green: compare to h(a) for h = 1, z
    n = 2048
    r = (np.arange(64) + 0.5) / 64
    t = 2 * np.pi * np.arange(n // 8) / (n // 8)
    v = (r[:, None] * np.exp(1j * t)[None, :]).ravel()
    jac = np.abs(oracle.map_deriv(area, v)) ** 2 * (r[:, None] * np.ones_like(t)[None, :]).ravel()
    da = jac * (1 / 64) * (2 * np.pi / len(t))
    a = 0.1 + 0.05j
    b = kernel_value(area, "bergman", a, 0, v)
    z = oracle.map_value(area, v)
    za = complex(oracle.map_value(area, a))
    for k in range(2):
        assert abs(np.sum(z**k * np.conj(b) * da) - za**k) < 1e-3


def test_span_rejects_duplicates(disc):
    e = kernel_element(disc, "szego", 0, 0)
    with pytest.raises(ValueError):
        SpanElement(((1, e), (2, e)))


def test_span_evaluation_is_linear(area):
    e1 = kernel_element(area, "szego", 0.1, 0)
    e2 = kernel_element(area, "garabedian", -0.2j, 1)
    s = SpanElement(((2 - 1j, e1), (0.5, e2)))
    w = circle(8)
    assert np.allclose(s.evaluate(area, w), (2 - 1j) * eval_element(e1, area, w) + 0.5 * eval_element(e2, area, w))


def test_double_qd_traces_are_rational(double):
    w = circle(256)
    for kind, v in (("szego", 0.3), ("garabedian", -0.2 + 0.1j)):
        e = kernel_element(double, kind, v, 1)
        tr = boundary_trace(e, double)
        assert np.max(np.abs(tr(w) - eval_element(e, double, w))) <= 1e-12
        d, err = oracle.rational_certificate(lambda x: eval_element(e, double, x))
        assert d is not None and err <= 1e-8
    T = tangent_trace(double)
    assert np.max(np.abs(T(w) - tangent(double, w))) <= 1e-13
    d, err = oracle.rational_certificate(lambda x: tangent(double, x) * (x**2 + 1) / (x - 3))
    assert d is not None and err <= 1e-8
