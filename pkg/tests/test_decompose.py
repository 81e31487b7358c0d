import json

import numpy as np
import pytest

from qdpotential import oracle
from qdpotential.decompose import (
    BiRational,
    basic_decomposition,
    dump_boundary_data,
    parse_boundary_data,
    pullback_boundary_data,
    szego_project,
)
from qdpotential.errors import AlgebraError, ParseError, ResidualError, SingularDataError

from conftest import DOMAINS, circle, pick_anchor, random_birational


def _terms(span):
    return [(c, e.kind, e.order, e.param) for c, e in span.terms]


# ---------------------------------------------------------------- pullback


def test_pullback_examples(disc, area):
    w = np.array([0.3, 0.5j, 1.7 - 0.2j])
    rho = pullback_boundary_data(disc, BiRational([[0, 0], [0, 1]], [[1]]))  # z s
    assert np.allclose(rho(w), 1)
    rho = pullback_boundary_data(disc, BiRational([[0, 1]], [[-2], [1]]))  # s / (z - 2)
    assert np.allclose(rho(w), 1 / (w * (w - 2)))
    rho = pullback_boundary_data(area, BiRational([[0, 1]], [[1]]))
    assert np.allclose(rho(w), area.sigma(w))


@pytest.mark.parametrize("name", list(DOMAINS))
def test_pullback_matches_boundary_values(name):
    dom = DOMAINS[name]
    rng = np.random.default_rng(3)
    w = circle(128)
    z = dom.f(w)
    for _ in range(5):
        R = random_birational(rng)
        assert np.max(np.abs(pullback_boundary_data(dom, R)(w) - R(z))) <= 1e-10 * (1 + np.max(np.abs(R(z))))


def test_singular_data_rejected(disc):
    with pytest.raises(SingularDataError, match="singular boundary data"):
        pullback_boundary_data(disc, BiRational([[1]], [[-1], [1]]))  # 1/(z - 1)
    with pytest.raises(SingularDataError):
        basic_decomposition(disc, 0, BiRational([[1]], [[-1j], [1]]))


# ---------------------------------------------------------------- decomposition


def test_disc_examples(disc):
    dec = basic_decomposition(disc, 0, BiRational([[0, 1]], [[1]]))  # conj z
    assert not dec.szego_terms.terms
    [(c, kind, order, p)] = _terms(dec.garabedian_terms)
    assert abs(c - 1) < 1e-14 and kind == "garabedian" and order == 0 and p == 0
    dec = basic_decomposition(disc, 0, BiRational([[0], [1]], [[1]]))  # z
    assert not dec.garabedian_terms.terms
    [(c, kind, order, p)] = _terms(dec.szego_terms)
    assert abs(c - 1) < 1e-14 and kind == "szego" and order == 1
    dec = basic_decomposition(disc, 0, BiRational([[2.5]], [[1]]))
    [(c, kind, order, p)] = _terms(dec.szego_terms)
    assert abs(c - 2.5) < 1e-14 and order == 0 and not dec.garabedian_terms.terms


@pytest.mark.parametrize("name", list(DOMAINS))
def test_random_decompositions(name):
    dom = DOMAINS[name]
    rng = np.random.default_rng(21)
    w = circle(512)
    z = dom.f(w)
    ds = np.abs(dom.fp(w)) * 2 * np.pi / len(w)
    for _ in range(10):
        R = random_birational(rng)
        a = pick_anchor(rng, dom, R)
        dec = basic_decomposition(dom, a, R)
        sup = np.max(np.abs(R(z)))
        assert dec.residual <= 1e-8 * (1 + sup)
        g = dec.garabedian_terms
        scale = 1 + np.sum(np.abs(g.evaluate(dom, w)) * ds)
        for k in range(3):
            # Garabedian span is orthogonal to analytic functions: int g conj(z^k) ds = 0
            pair = oracle.boundary_pairing(dom, lambda x: g.evaluate(dom, x),
                                           lambda x, k=k: oracle.map_value(dom, x) ** k, len(w))
            assert abs(pair) <= 1e-8 * scale


@pytest.mark.parametrize("name", list(DOMAINS))
def test_decomposition_independent_of_matching_order(name):
    dom = DOMAINS[name]
    rng = np.random.default_rng(8)
    for _ in range(5):
        R = random_birational(rng)
        a = 0.2 - 0.1j
        base = basic_decomposition(dom, a, R)
        perm = basic_decomposition(dom, a, R, order=lambda n: rng.permutation(n))
        d1 = {e.key: c for c, e in base.szego_terms.terms + base.garabedian_terms.terms}
        d2 = {e.key: c for c, e in perm.szego_terms.terms + perm.garabedian_terms.terms}
        assert d1.keys() == d2.keys()
        for k in d1:
            assert abs(d1[k] - d2[k]) <= 1e-9 * (1 + abs(d1[k]))


def test_near_coincident_anchor_never_silently_wrong(disc):
    # anchors close to a data pole make kernel coefficients explode; the gate must catch it
    rng = np.random.default_rng(21)
    R = random_birational(rng)
    w = circle(1024)
    for a in (0.008j, 0.003 - 0.001j, 0.02, 1e-4j):
        try:
            dec = basic_decomposition(disc, a, R)
        except ResidualError:
            continue
        s0 = dec.trace(w) * np.conj(1 / (2 * np.pi * (1 - np.conj(w) * a)))
        assert np.max(np.abs(dec.evaluate(disc, w) - s0)) <= 1e-8 * (1 + np.max(np.abs(s0)))


# ---------------------------------------------------------------- Szegő projection


def test_disc_projection_examples(disc):
    assert not szego_project(disc, 0, BiRational([[0, 1]], [[1]])).terms
    w = circle(64)
    proj = szego_project(disc, 0, BiRational([[0, 1], [0, 0], [1, 0]], [[1]]), direct=True)
    assert np.max(np.abs(proj.evaluate(disc, w) - w**2)) < 1e-13


def test_direct_projection_requires_double(area):
    with pytest.raises(AlgebraError, match="not a double quadrature domain"):
        szego_project(area, 0, BiRational([[1]], [[1]]), direct=True)


def test_direct_projection_anchor_independent(double):
    rng = np.random.default_rng(13)
    w = circle(128)
    for _ in range(4):
        R = random_birational(rng)
        p0 = szego_project(double, 0, R, direct=True).evaluate(double, w)
        p1 = szego_project(double, 0.3 + 0.2j, R, direct=True).evaluate(double, w)
        assert np.max(np.abs(p0 - p1)) <= 1e-8 * (1 + np.max(np.abs(p0)))


# ---------------------------------------------------------------- files


def test_file_roundtrip():
    R = random_birational(np.random.default_rng(2))
    back = parse_boundary_data(dump_boundary_data(R))
    z = np.array([0.3 + 0.1j, -1.2j])
    assert np.allclose(back(z), R(z), rtol=1e-15, atol=0)


def test_trace_file_form():
    f = parse_boundary_data(json.dumps({"trace_numer": [[1, 0], [0, 0], [1, 0]], "trace_denom": [[0, 0], [1, 0]]}))
    assert abs(f(1) - 2) < 1e-15


def test_parse_errors():
    with pytest.raises(ParseError, match="numer_coeffs"):
        parse_boundary_data("{}")
    with pytest.raises(ParseError, match=r"numer_coeffs\[0\]\[1\]"):
        parse_boundary_data(json.dumps({"numer_coeffs": [[[1, 0], [1]]]}))
    with pytest.raises(ParseError, match="identically zero"):
        parse_boundary_data(json.dumps({"numer_coeffs": [[[1, 0]]], "denom_coeffs": [[[0, 0]]]}))
    with pytest.raises(ParseError, match="line"):
        parse_boundary_data("[1,")
