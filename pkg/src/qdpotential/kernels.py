"""Szegő, Garabedian, Bergman and Λ kernels of a disc-map domain in closed form.

Each kernel is the unit-disc kernel carried over by the classical change of
variables: Szegő/Garabedian pick up ``f'**(-1/2)`` factors, Bergman/Λ pick up
``f'**(-1)`` factors.  Parameter derivatives ``(d/d conj a)**m`` and
``(d/da)**m`` become ``(1/f'(v) d/dv)**m`` in the disc parameter and are
expanded symbolically with truncated Taylor series, so that an element is

    value(z = f(w)) = f'(w)**power * sum_j d_j * basis_j(w)

with numeric ``d_j``.  The bases are

    Szegő      w**j / (1 - w conj(v))**(j+1)       Garabedian  1 / (w - v)**(j+1)
    Bergman    w**j / (1 - w conj(v))**(j+2)       Λ           1 / (w - v)**(j+2)

and the Szegő (Bergman) coefficients are the conjugates of the Garabedian (Λ)
ones at the same point and order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.polynomial import polynomial as npoly

from .domain import QuadDomain
from .errors import AlgebraError
from .ratcalc import ComplexPoly, RationalFn, series_deriv, series_mul, series_pow

Kind = Literal["szego", "garabedian", "bergman", "lambda"]
ORDER_CAP = 12

_POWER = {"szego": -0.5, "garabedian": -0.5, "bergman": -1.0, "lambda": -1.0}
_SWAP = {"szego": "garabedian", "garabedian": "szego", "bergman": "lambda", "lambda": "bergman"}
_HOLOMORPHIC = {"garabedian", "lambda"}


def _shift(kind: str) -> int:
    return 1 if kind in ("szego", "garabedian") else 2


def _norm(kind: str, j: int) -> float:
    if kind in ("szego", "garabedian"):
        return math.factorial(j) / (2 * math.pi)
    return math.factorial(j + 1) / math.pi


@dataclass(frozen=True, eq=False)
class KernelElement:
    kind: str
    order: int
    param: complex
    coeffs: tuple[complex, ...]
    reduced: RationalFn
    power: float

    def basis_sum(self, w):
        """sum_j d_j basis_j(w): the value with the f' factor stripped."""
        w = np.asarray(w, dtype=complex)
        v = self.param
        s = _shift(self.kind)
        out = np.zeros(w.shape, dtype=complex)
        if self.kind in _HOLOMORPHIC:
            if np.any(np.abs(w - v) < 1e-14 * (1 + abs(v))):
                raise AlgebraError("evaluation at pole")
            for j, d in enumerate(self.coeffs):
                out = out + d / (w - v) ** (j + s)
        else:
            den = 1 - w * np.conj(v)
            if np.any(np.abs(den) < 1e-14):
                raise AlgebraError("evaluation at pole")
            for j, d in enumerate(self.coeffs):
                out = out + d * w**j / den ** (j + s)
        return out

    def swapped(self) -> KernelElement:
        kind = _SWAP[self.kind]
        coeffs = tuple(np.conj(self.coeffs))
        return KernelElement(kind, self.order, self.param, coeffs,
                             _reduced(kind, self.param, coeffs), self.power)

    @property
    def key(self):
        return (self.kind, round(self.param.real, 12), round(self.param.imag, 12), self.order)


def _reduced(kind: str, v: complex, d) -> RationalFn:
    m = len(d) - 1
    s = _shift(kind)
    top = m + s
    if kind in _HOLOMORPHIC:
        num = ComplexPoly([0])
        for j, dj in enumerate(d):
            num = num + dj * ComplexPoly(npoly.polypow([-v, 1], top - (j + s)))
        return RationalFn(num, ((v, top),))
    vb = np.conj(v)
    if v == 0:
        return RationalFn.poly(list(d))
    num = ComplexPoly([0])
    for j, dj in enumerate(d):
        num = num + dj * ComplexPoly(npoly.polymul(np.eye(1, j + 1, j)[0],
                                                   npoly.polypow([1, -vb], top - (j + s))))
    return RationalFn(num * (1.0 / (-vb) ** top), ((1 / vb, top),))


def holomorphic_coeffs(dom: QuadDomain, v: complex, m: int, alpha: float) -> np.ndarray:
    """Coefficients c_j of (1/f'(v) d/dv)**m [f'(v)**alpha K(v)] = sum_j c_j d^jK/dv^j."""
    n = m + 1
    g = dom.fp.taylor(v, n)
    inv_g = series_pow(g, -1.0, 1.0 / g[0], n)
    phi = series_pow(g, alpha, complex(dom.fp_pow(v, alpha)), n)
    cs = [phi]
    for _ in range(m):
        length = len(cs[0]) - 1
        new = []
        for j in range(len(cs) + 1):
            term = np.zeros(length, dtype=complex)
            if j < len(cs):
                term = term + series_deriv(cs[j])
            if j >= 1:
                term = term + cs[j - 1][:length]
            new.append(series_mul(term, inv_g[:length], length))
        cs = new
    return np.array([c[0] for c in cs])


def kernel_element(dom: QuadDomain, kind: Kind, a_param: complex, m: int) -> KernelElement:
    """S_a^m, L_a^m, B_a^m or Λ_a^m at a = f(a_param)."""
    if kind not in _POWER:
        raise ValueError(f"unknown kernel kind {kind!r}")
    if m > ORDER_CAP:
        raise AlgebraError("order cap exceeded")
    if m < 0:
        raise ValueError("order must be non-negative")
    v = complex(a_param)
    if abs(v) >= 1:
        raise ValueError("parameter must lie in the open unit disc")
    alpha = _POWER[kind]
    c = holomorphic_coeffs(dom, v, m, alpha)
    d = np.array([c[j] * _norm(kind, j) for j in range(m + 1)])
    if kind not in _HOLOMORPHIC:
        d = np.conj(d)
    d = tuple(complex(x) for x in d)
    return KernelElement(kind, m, v, d, _reduced(kind, v, d), alpha)


def eval_element(e: KernelElement, dom: QuadDomain, w):
    return e.basis_sum(w) * dom.fp_pow(w, e.power)


def kernel_value(dom: QuadDomain, kind: Kind, a_param: complex, m: int, w):
    return eval_element(kernel_element(dom, kind, a_param, m), dom, w)


@dataclass(frozen=True, eq=False)
class SpanElement:
    terms: tuple[tuple[complex, KernelElement], ...] = ()

    def __post_init__(self):
        keys = [e.key for _, e in self.terms]
        if len(set(keys)) != len(keys):
            raise ValueError("span generators must be distinct (kind, param, order) triples")

    def __len__(self):
        return len(self.terms)

    def evaluate(self, dom: QuadDomain, w):
        w = np.asarray(w, dtype=complex)
        out = np.zeros(w.shape, dtype=complex)
        for c, e in self.terms:
            out = out + c * eval_element(e, dom, w)
        return out

    def reduced_sum(self) -> RationalFn:
        out = RationalFn.const(0)
        for c, e in self.terms:
            out = out + e.reduced * c
        return out

    def table(self) -> list[tuple[str, complex, int, complex]]:
        return [(e.kind, e.param, e.order, c) for c, e in
                sorted(self.terms, key=lambda t: (t[1].param.real, t[1].param.imag, t[1].order))]

    def sorted(self) -> SpanElement:
        return SpanElement(tuple(sorted(self.terms, key=lambda t: (t[1].kind, t[1].param.real,
                                                                  t[1].param.imag, t[1].order))))


def boundary_trace(e: KernelElement, dom: QuadDomain) -> RationalFn:
    """Exact rational boundary trace in w (needs the double-quadrature witness for power -1/2)."""
    if e.power == -1.0:
        return e.reduced * dom.inv_fp
    if dom.q is None:
        raise AlgebraError("not a double quadrature domain")
    return e.reduced * dom.q.inverse() * float(dom.q_sign)


def tangent_trace(dom: QuadDomain) -> RationalFn:
    """T(f(w)) on |w| = 1 as the rational function i w q / reflect(q)."""
    if dom.q is None:
        raise AlgebraError("not a double quadrature domain")
    return RationalFn.poly([0, 1j]) * dom.q * dom.q.reflect().inverse()


def tangent(dom: QuadDomain, w):
    fpw = dom.fp(w)
    return 1j * w * fpw / np.abs(fpw)


def identity_residual(dom: QuadDomain, which: str, a_param: complex, m: int = 0,
                      samples: int = 256) -> float:
    """Max boundary defect of conj(S^m) = L^m T / i (SL, SL2) or B^m T = -conj(Λ^m T) (BL, BL2)."""
    w = np.exp(2j * np.pi * np.arange(samples) / samples)
    T = tangent(dom, w)
    if which in ("SL", "SL2"):
        s = kernel_value(dom, "szego", a_param, m, w)
        lv = kernel_value(dom, "garabedian", a_param, m, w)
        return float(np.max(np.abs(np.conj(s) - lv * T / 1j)))
    if which in ("BL", "BL2"):
        b = kernel_value(dom, "bergman", a_param, m, w)
        lam = kernel_value(dom, "lambda", a_param, m, w)
        return float(np.max(np.abs(b * T + np.conj(lam * T))))
    raise ValueError(f"unknown identity {which!r}")
