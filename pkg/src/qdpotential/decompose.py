"""Szegő-plus-Garabedian decomposition of S_a * R on the boundary.

For boundary data R(z, conj z) with pullback rho(w) = R(f(w), sigma(w)):

* the Garabedian part matches the interior principal parts of
  S_a(z) R(z, S(z)), whose reduced form is  Ŝ_a(w) rho(w);
* the Szegő part is read off from the interior principal parts of
  L_a(z) conj(R) on the boundary, reduced form  L̂_a(w) reflect(rho)(w), whose
  matching Garabedian coefficients are the conjugated Szegő coefficients.

Both matchings are triangular: L_p^k is its own principal part at p, with
pole order k + 1 and known Laurent coefficients.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .domain import QuadDomain
from .errors import AlgebraError, ParseError, ResidualError, SingularDataError
from .kernels import ORDER_CAP, KernelElement, SpanElement, eval_element, kernel_element
from .ratcalc import TOL_CIRCLE, RationalFn

TOL_DECOMP = 1e-8
N_RESIDUAL = 256


@dataclass(frozen=True, eq=False)
class BiRational:
    """R(z, s) = sum numer[i][j] z^i s^j / sum denom[i][j] z^i s^j, with s standing for conj z."""

    numer: np.ndarray
    denom: np.ndarray

    def __post_init__(self):
        n = np.atleast_2d(np.array(self.numer, dtype=complex))
        d = np.atleast_2d(np.array(self.denom, dtype=complex))
        if not np.any(d):
            raise AlgebraError("zero divisor")
        n.setflags(write=False)
        d.setflags(write=False)
        object.__setattr__(self, "numer", n)
        object.__setattr__(self, "denom", d)

    @classmethod
    def poly(cls, coeffs) -> BiRational:
        return cls(coeffs, [[1]])

    def __call__(self, z, s=None):
        z = np.asarray(z, dtype=complex)
        s = np.conj(z) if s is None else np.asarray(s, dtype=complex)
        return _bipoly(self.numer, z, s) / _bipoly(self.denom, z, s)


def _bipoly(c, z, s):
    out = np.zeros(np.broadcast(z, s).shape, dtype=complex)
    for i in range(c.shape[0]):
        for j in range(c.shape[1]):
            if c[i, j] != 0:
                out = out + c[i, j] * z**i * s**j
    return out


@dataclass(frozen=True, eq=False)
class Decomposition:
    a_param: complex
    szego_terms: SpanElement
    garabedian_terms: SpanElement
    residual: float
    trace: RationalFn

    def evaluate(self, dom: QuadDomain, w):
        return self.szego_terms.evaluate(dom, w) + self.garabedian_terms.evaluate(dom, w)


# ---------------------------------------------------------------- pullback


def _cached(dom: QuadDomain, key: str, build):
    val = dom.__dict__.get(key)
    if val is None:
        val = build()
        object.__setattr__(dom, key, val)
    return val


def _powers(base: RationalFn, n: int) -> list[RationalFn]:
    out = [RationalFn.const(1)]
    for _ in range(n):
        out.append(out[-1] * base)
    return out


def _bi_pullback(c: np.ndarray, fpow, spow) -> RationalFn:
    out = RationalFn.const(0)
    for i in range(c.shape[0]):
        for j in range(c.shape[1]):
            if c[i, j] != 0:
                out = out + fpow[i] * spow[j] * complex(c[i, j])
    return out


def pullback_boundary_data(dom: QuadDomain, R) -> RationalFn:
    """rho(w) = R(f(w), sigma(w)); on |w| = 1 this is R(z, conj z)."""
    if isinstance(R, RationalFn):
        rho = R
    else:
        ni, nj = R.numer.shape
        di, dj = R.denom.shape
        fpow = _powers(dom.f, max(ni, di))
        spow = _powers(dom.sigma, max(nj, dj))
        num = _bi_pullback(R.numer, fpow, spow)
        nz = np.argwhere(R.denom != 0)
        if len(nz) == 1:
            i, j = nz[0]
            finv = _cached(dom, "_finv", lambda: dom.f.inverse())
            sinv = _cached(dom, "_sinv", lambda: finv.reflect())
            rho = num * (finv ** int(i)) * (sinv ** int(j)) / complex(R.denom[i, j])
        else:
            den = _bi_pullback(R.denom, fpow, spow)
            if den.is_zero():
                raise SingularDataError("singular boundary data (denominator vanishes identically)")
            rho = num * den.inverse()
    for p, _ in rho.poles:
        if abs(abs(p) - 1) <= TOL_CIRCLE:
            raise SingularDataError(f"singular boundary data (pole at w = {p:.6g})")
    return rho


# ---------------------------------------------------------------- matching


def match_principal_parts(dom: QuadDomain, F: RationalFn, kind: str = "garabedian",
                          order=None) -> list[tuple[complex, KernelElement]]:
    """Coefficients x_k with sum x_k K̂_p^k matching F's principal parts at every interior pole.

    ``kind`` is "garabedian" (pole order k+1) or "lambda" (pole order k+2,
    residue-free).  ``order`` optionally permutes the pole processing order.
    """
    shift = 1 if kind == "garabedian" else 2
    poles = [p for p, _ in F.poles if abs(p) < 1]
    for p in poles:
        if abs(abs(p) - 1) <= TOL_CIRCLE:
            raise SingularDataError(f"pole at w = {p:.6g} too close to the boundary")
    if order is not None:
        poles = [poles[i] for i in order(len(poles))]
    parts = {p: F.principal_part(p).coefficients for p in poles}
    # residues are judged against the largest principal-part coefficient anywhere
    scale = max((abs(x) for c in parts.values() for x in c), default=0.0)
    terms: list[tuple[complex, KernelElement]] = []
    for p in poles:
        c = parts[p]
        K = len(c)
        if shift == 2:
            if abs(c[0]) > 1e-9 * scale:
                raise AlgebraError("not a derivative of a meromorphic extension element "
                                   f"(residue {c[0]:.3g} at w = {p:.6g})")
            if K < 2:
                continue
        top = K - shift
        if top > ORDER_CAP:
            raise AlgebraError("order cap exceeded")
        elems = [kernel_element(dom, kind, p, k) for k in range(top + 1)]
        x = np.zeros(top + 1, dtype=complex)
        for j in range(top, -1, -1):
            acc = c[j + shift - 1]
            for k in range(j + 1, top + 1):
                acc -= x[k] * elems[k].coeffs[j]
            x[j] = acc / elems[j].coeffs[j]
        terms.extend((complex(x[k]), elems[k]) for k in range(top + 1))
    if terms:
        big = max(abs(t[0]) for t in terms)
        terms = [t for t in terms if abs(t[0]) > 1e-14 * big]
    return terms


def basic_decomposition(dom: QuadDomain, a_param: complex, R, *, order=None,
                        check: bool = True) -> Decomposition:
    """S_a R = sum A_nm S_{a_n}^m + sum B_nm L_{b_n}^m on the boundary."""
    v = complex(a_param)
    if abs(v) >= 1:
        raise ValueError("anchor must lie in the open unit disc")
    rho = pullback_boundary_data(dom, R)
    s0 = kernel_element(dom, "szego", v, 0)
    l0 = kernel_element(dom, "garabedian", v, 0)
    g_hat = s0.reduced * rho
    gar = match_principal_parts(dom, g_hat, "garabedian", order)
    refl = l0.reduced * rho.reflect()
    sz = [(complex(np.conj(x)), e.swapped()) for x, e in
          match_principal_parts(dom, refl, "garabedian", order)]
    szego_terms = SpanElement(tuple(sz)).sorted()
    gar_terms = SpanElement(tuple(gar)).sorted()

    w = np.exp(2j * np.pi * np.arange(N_RESIDUAL) / N_RESIDUAL)
    lhs = g_hat(w) * dom.fp_pow(w, -0.5)
    rhs = szego_terms.evaluate(dom, w) + gar_terms.evaluate(dom, w)
    residual = float(np.max(np.abs(lhs - rhs)))
    if check and residual > TOL_DECOMP * (1 + float(np.max(np.abs(lhs)))):
        raise ResidualError("decomposition failed", residual)
    return Decomposition(v, szego_terms, gar_terms, residual, rho)


def szego_project(dom: QuadDomain, a_param: complex, R, *, direct: bool = False) -> SpanElement:
    """Szegő projection of S_a R, or of R itself when ``direct`` (double quadrature domains)."""
    if not direct:
        return basic_decomposition(dom, a_param, R).szego_terms
    if dom.q is None:
        raise AlgebraError("not a double quadrature domain")
    rho = pullback_boundary_data(dom, R)
    s0 = kernel_element(dom, "szego", complex(a_param), 0)
    # boundary trace of S_a is q_sign * Ŝ_a / q
    quotient = rho * dom.q * float(dom.q_sign) * s0.reduced.inverse()
    return basic_decomposition(dom, a_param, quotient).szego_terms


# ---------------------------------------------------------------- file format


def _matrix(obj, field_name: str) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise ParseError(f"{field_name}: expected a nested array c[i][j] of [re, im] pairs")
    rows = []
    width = 0
    for i, row in enumerate(obj):
        if not isinstance(row, list):
            raise ParseError(f"{field_name}[{i}]: expected an array of [re, im] pairs")
        vals = []
        for j, item in enumerate(row):
            if (not isinstance(item, (list, tuple)) or len(item) != 2 or
                    not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in item)):
                raise ParseError(f"{field_name}[{i}][{j}]: expected [re, im] pair, got {item!r}")
            vals.append(complex(item[0], item[1]))
        rows.append(vals)
        width = max(width, len(vals))
    out = np.zeros((len(rows), max(width, 1)), dtype=complex)
    for i, vals in enumerate(rows):
        out[i, : len(vals)] = vals
    return out


def _vector(obj, field_name: str) -> list[complex]:
    if not isinstance(obj, list) or not obj:
        raise ParseError(f"{field_name}: expected an array of [re, im] pairs")
    out = []
    for i, item in enumerate(obj):
        if (not isinstance(item, (list, tuple)) or len(item) != 2 or
                not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in item)):
            raise ParseError(f"{field_name}[{i}]: expected [re, im] pair, got {item!r}")
        out.append(complex(item[0], item[1]))
    return out


def parse_boundary_data(text: str):
    """BiRational from ``numer_coeffs``/``denom_coeffs``, or a w-trace from ``trace_numer``/``trace_denom``."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"data file: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ParseError("data file: top level must be an object")
    if "numer_coeffs" in obj:
        num = _matrix(obj["numer_coeffs"], "numer_coeffs")
        den = _matrix(obj.get("denom_coeffs", [[[1, 0]]]), "denom_coeffs")
        if not np.any(den):
            raise ParseError("denom_coeffs: identically zero")
        return BiRational(num, den)
    if "trace_numer" in obj:
        num = _vector(obj["trace_numer"], "trace_numer")
        den = _vector(obj.get("trace_denom", [[1, 0]]), "trace_denom")
        if not any(den):
            raise ParseError("trace_denom: identically zero")
        return RationalFn.from_coeffs(num, den)
    raise ParseError("numer_coeffs: missing field (or trace_numer for data given in w)")


def load_boundary_data(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read data file {path}: {exc}") from exc
    return parse_boundary_data(text)


def dump_boundary_data(R: BiRational) -> str:
    def enc(m):
        return [[[float(c.real), float(c.imag)] for c in row] for row in m]

    return json.dumps({"numer_coeffs": enc(R.numer), "denom_coeffs": enc(R.denom)})
