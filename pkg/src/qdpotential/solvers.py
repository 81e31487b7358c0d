"""Closed-form Dirichlet, D-to-N and Neumann solvers plus the Bergman split.

All harmonic functions are stored as pullbacks u(f(w)) = ĥ(w) + conj(Ĥ(w)) with
ĥ, Ĥ analytic on the closed unit disc.  With T = i w f'/|f'| the boundary
normal derivative is

    du/dn = [w ĥ'(w) + conj(w Ĥ'(w))] / |f'(w)|,   |w| = 1,

and on a double quadrature domain |f'| = q reflect(q) on the circle, which
makes the right-hand side a rational function of w.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .decompose import basic_decomposition, match_principal_parts, pullback_boundary_data
from .domain import QuadDomain
from .errors import AlgebraError, IncompatibleDataError, ResidualError
from .kernels import SpanElement, kernel_element, tangent
from .ratcalc import ComplexPoly, RationalFn, circle_split, rational_primitive

TOL_SOLVE = 1e-8
TOL_MEAN = 1e-8
N_CHECK = 256


def _circle(n: int = N_CHECK) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n) / n)


@dataclass(frozen=True, eq=False)
class LogPrimitive:
    """rational(w) + sum r_k log(1 - w/p_k), |p_k| > 1: a primitive with exterior log terms."""

    rational: RationalFn
    logs: tuple[tuple[complex, complex], ...]
    derivative: RationalFn

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        out = self.rational(w)
        for p, r in self.logs:
            out = out + r * np.log(1 - w / p)
        return out

    @property
    def poles(self):
        return self.rational.poles


def primitive(g: RationalFn, base: complex = 0j):
    """Antiderivative of g vanishing at ``base``, rational when possible."""
    try:
        return rational_primitive(g, base)
    except AlgebraError:
        pass
    _, parts = g.partial_fractions()
    logs = []
    rest = g
    for part in parts:
        r = part.coefficients[0] if part.coefficients else 0j
        if r == 0:
            continue
        if abs(part.pole) <= 1:
            raise AlgebraError("multivalued antiderivative")
        logs.append((part.pole, r))
        rest = rest - RationalFn(ComplexPoly([r]), ((part.pole, 1),))
    rat = rational_primitive(rest, base)
    # each log(1 - w/p) is zero at w = 0; shift to vanish at base
    shift = sum(r * np.log(1 - base / p) for p, r in logs)
    return LogPrimitive(rat - complex(shift), tuple(logs), g)


def _derivative(x) -> RationalFn:
    return x.derivative if isinstance(x, LogPrimitive) else x.derive()


@dataclass(frozen=True, eq=False)
class HarmonicRep:
    h_hat: object
    H_hat: object
    a_param: complex | None = None
    provenance: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def h_prime(self) -> RationalFn:
        return _derivative(self.h_hat)

    @property
    def H_prime(self) -> RationalFn:
        return _derivative(self.H_hat)

    def trace(self) -> RationalFn:
        """Boundary values ĥ + reflect(Ĥ) as a rational function of w (rational components only)."""
        if isinstance(self.h_hat, LogPrimitive) or isinstance(self.H_hat, LogPrimitive):
            raise AlgebraError("trace has logarithmic terms")
        return self.h_hat + self.H_hat.reflect()

    def boundary_values(self, w):
        return self.h_hat(w) + np.conj(self.H_hat(w))


@dataclass(frozen=True, eq=False)
class SplitPair:
    kappa1_hat: RationalFn
    kappa2_hat: RationalFn
    residual: float = 0.0


@dataclass(frozen=True, eq=False)
class DtnResult:
    """Normal derivative of the harmonic extension; callable in theta."""

    dom: QuadDomain
    h_prime: RationalFn
    H_prime: RationalFn
    trace: RationalFn | None

    def at_w(self, w):
        w = np.asarray(w, dtype=complex)
        return (w * self.h_prime(w) + np.conj(w * self.H_prime(w))) / np.abs(self.dom.fp(w))

    def __call__(self, theta):
        return self.at_w(np.exp(1j * np.asarray(theta, dtype=float)))


# ---------------------------------------------------------------- Dirichlet


def dirichlet_solve(dom: QuadDomain, a_param: complex, R) -> HarmonicRep:
    """Harmonic extension h + conj(H) of rational boundary data R."""
    dec = basic_decomposition(dom, a_param, R)
    v = dec.a_param
    s0 = kernel_element(dom, "szego", v, 0)
    l0 = kernel_element(dom, "garabedian", v, 0)
    h_hat = dec.szego_terms.reduced_sum() * s0.reduced.inverse()
    sigma2 = SpanElement(tuple((complex(np.conj(c)), e.swapped()) for c, e in dec.garabedian_terms.terms))
    H_hat = sigma2.reduced_sum() * l0.reduced.inverse()
    rep = HarmonicRep(h_hat, H_hat, v, "dirichlet",
                      {"szego_terms": dec.szego_terms, "garabedian_terms": dec.garabedian_terms,
                       "decomposition_residual": dec.residual})
    w = _circle()
    target = dec.trace(w)
    err = float(np.max(np.abs(rep.boundary_values(w) - target)))
    if err > TOL_SOLVE * (1 + float(np.max(np.abs(target)))):
        raise ResidualError("solver residual", err)
    return rep


def harmonic_eval(rep: HarmonicRep, dom: QuadDomain, v) -> complex:
    """u(f(v)) = ĥ(v) + conj(Ĥ(v)) for |v| < 1."""
    v = np.asarray(v, dtype=complex)
    if np.any(np.abs(v) >= 1):
        raise ValueError("evaluation point must lie in the open unit disc")
    for part in (rep.h_hat, rep.H_hat):
        if any(abs(p) < 1 for p, _ in part.poles):
            raise AlgebraError("invalid representation")
    out = rep.h_hat(v) + np.conj(rep.H_hat(v))
    if not np.all(np.isfinite(out)):
        raise AlgebraError("invalid representation")
    return complex(out) if out.ndim == 0 else out


# ---------------------------------------------------------------- D-to-N


def _abs_fp_inverse(dom: QuadDomain) -> RationalFn:
    """1/(q reflect(q)) = 1/|f'| on the circle."""
    val = dom.__dict__.get("_abs_fp_inv")
    if val is None:
        qi = dom.q.inverse()
        val = qi * qi.reflect()
        object.__setattr__(dom, "_abs_fp_inv", val)
    return val


def dtn_of_rep(dom: QuadDomain, rep: HarmonicRep) -> DtnResult:
    hp, Hp = rep.h_prime, rep.H_prime
    trace = None
    if dom.q is not None:
        wpoly = RationalFn.poly([0, 1])
        trace = (wpoly * hp + (wpoly * Hp).reflect()) * _abs_fp_inverse(dom)
    return DtnResult(dom, hp, Hp, trace)


def dtn_map(dom: QuadDomain, a_param: complex, R) -> DtnResult:
    """Normal derivative of the harmonic extension of R; exact trace on double quadrature domains."""
    return dtn_of_rep(dom, dirichlet_solve(dom, a_param, R))


def _drop_w(F: RationalFn) -> RationalFn:
    """F(w)/w for F with F(0) = 0 (the negligible constant coefficient is discarded)."""
    c = F.numer.coeffs
    if len(c) <= 1:
        return RationalFn.const(0)
    return RationalFn(ComplexPoly(c[1:]), F.poles)


def _split_parts(dom: QuadDomain, psi: RationalFn):
    if dom.q is None:
        raise AlgebraError("not a double quadrature domain")
    psi = pullback_boundary_data(dom, psi)
    theta = psi * dom.q * dom.q.reflect() * (-1j)
    inner, outer = circle_split(theta)
    mean = complex(inner(0))
    scale = 1 + theta.max_abs_on_circle()
    if abs(2 * np.pi * mean) > TOL_MEAN * scale:
        raise IncompatibleDataError(f"incompatible data (nonzero mean {2j * np.pi * mean:.3g})")
    inner = inner - mean
    return psi, _drop_w(inner), _drop_w(outer.reflect())


def tangential_split(dom: QuadDomain, psi: RationalFn) -> SplitPair:
    """psi = kappa1 T + conj(kappa2 T) with kappa's analytic on the closed domain."""
    psi, inner_w, outer_w = _split_parts(dom, psi)
    k1 = inner_w * dom.inv_fp
    k2 = -outer_w * dom.inv_fp
    w = _circle()
    T = tangent(dom, w)
    target = psi(w)
    err = float(np.max(np.abs(k1(w) * T + np.conj(k2(w) * T) - target)))
    if err > TOL_SOLVE * (1 + float(np.max(np.abs(target)))):
        raise ResidualError("split failed", err)
    return SplitPair(k1, k2, err)


def _neumann_rep(dom: QuadDomain, psi: RationalFn, allow_log: bool) -> HarmonicRep:
    psi, inner_w, outer_w = _split_parts(dom, psi)
    hp = inner_w * 1j
    Hp = outer_w * (-1j)
    try:
        if allow_log:
            h_hat, H_hat = primitive(hp), primitive(Hp)
        else:
            h_hat, H_hat = rational_primitive(hp, 0j), rational_primitive(Hp, 0j)
    except AlgebraError as exc:
        raise IncompatibleDataError("not in D-to-N range as represented") from exc
    return HarmonicRep(h_hat, H_hat, None, "neumann", {"psi": psi})


def dtn_inverse(dom: QuadDomain, psi: RationalFn) -> RationalFn:
    """Boundary trace rho(w) (data pulled back to the circle) whose D-to-N image is psi."""
    return _neumann_rep(dom, psi, allow_log=False).trace()


def neumann_solve(dom: QuadDomain, psi: RationalFn, samples: int = 1024) -> HarmonicRep:
    """Neumann solution pinned by u(f(0)) = 0."""
    if dom.q is None:
        raise AlgebraError("not a double quadrature domain")
    rho = pullback_boundary_data(dom, psi)
    w = _circle(samples)
    dens = rho(w) * np.abs(dom.fp(w))
    total = complex(np.sum(dens)) * 2 * np.pi / samples
    if abs(total) > TOL_MEAN * (1 + float(np.sum(np.abs(dens))) * 2 * np.pi / samples):
        raise IncompatibleDataError(f"incompatible data (nonzero mean {total:.3g})")
    return _neumann_rep(dom, rho, allow_log=True)


# ---------------------------------------------------------------- Bergman


def match_span(dom: QuadDomain, F: RationalFn, kind: str) -> SpanElement:
    return SpanElement(tuple(match_principal_parts(dom, F, kind))).sorted()


def bergman_decompose(dom: QuadDomain, r_hat: RationalFn, *, grid: int = 16) -> tuple[SpanElement, SpanElement]:
    """Split (r o f) f' into Bergman (kappa) and Λ (lambda) span elements."""
    lam = match_span(dom, r_hat, "lambda")
    w2 = RationalFn(ComplexPoly([1]), ((0j, 2),))
    mirrored = match_span(dom, r_hat.reflect() * w2, "lambda")
    kappa = SpanElement(tuple((complex(np.conj(c)), e.swapped()) for c, e in mirrored.terms)).sorted()
    radii = np.linspace(0.1, 0.9, grid // 2)
    pts = (radii[:, None] * np.exp(2j * np.pi * (np.arange(grid) + 0.5) / grid)[None, :]).ravel()
    for p, _ in r_hat.poles:
        pts = pts[np.abs(pts - p) > 0.05]
    target = r_hat(pts)
    got = kappa.reduced_sum()(pts) + lam.reduced_sum()(pts)
    err = float(np.max(np.abs(got - target)))
    if err > TOL_SOLVE * (1 + float(np.max(np.abs(target)))):
        raise ResidualError("Bergman decomposition failed", err)
    return kappa, lam


def complementary_function(s: SpanElement) -> SpanElement:
    """Conjugate coefficients and swap Bergman and Λ generators."""
    return SpanElement(tuple((complex(np.conj(c)), e.swapped()) for c, e in s.terms))
