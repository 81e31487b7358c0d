"""Simply connected quadrature domains given by a rational univalent disc map.

Everything downstream works in the disc parameter ``w``; the point of the
physical domain is ``z = f(w)``.  On the unit circle the Schwarz function pulls
back to the circle reflection of ``f``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError, ParseError
from .ratcalc import TOL_CIRCLE, ComplexPoly, RationalFn, poly_roots

N_PROBE_ANGLES = 8
PROBE_RADII = (0.2, 0.45, 0.7, 0.92)
N_WINDING = 4096
N_SELF_INTERSECT = 512


@dataclass(frozen=True)
class BoundaryFrame:
    theta: float
    w: complex
    z: complex
    tangent: complex
    speed: float


@dataclass(frozen=True)
class QuadratureNode:
    point: complex
    order: int
    coefficient: complex


@dataclass(frozen=True)
class QuadratureData:
    nodes: tuple[QuadratureNode, ...]

    def apply(self, derivs) -> complex:
        """Sum c_km h^(m)(a_k); ``derivs(a, m)`` returns the m-th derivative of h at a."""
        return complex(sum(n.coefficient * derivs(n.point, n.order) for n in self.nodes))


@dataclass(frozen=True, eq=False)
class QuadDomain:
    f: RationalFn
    q: RationalFn | None = None
    tol: float = 1e-10
    name: str = ""
    # derived in make_domain
    fp: RationalFn = field(default=None, repr=False)
    inv_fp: RationalFn = field(default=None, repr=False)
    sigma: RationalFn = field(default=None, repr=False)
    fp_at_zero: complex = field(default=0j, repr=False)
    fp_factors: tuple = field(default=(), repr=False)
    q_sign: int = field(default=1, repr=False)
    even_hint: bool = field(default=False, repr=False)
    raw_numer: np.ndarray = field(default=None, repr=False)
    raw_denom: np.ndarray = field(default=None, repr=False)

    @property
    def is_double(self) -> bool:
        return self.q is not None

    def fp_pow(self, w, alpha: float):
        """Continuous branch of f'(w)**alpha on the closed disc, principal at w = 0.

        Uses f'(w) = f'(0) * prod (1 - w/r)**e over zeros and poles r of f',
        all of which lie outside the closed disc, so each factor stays in the
        right half plane and principal powers are continuous.
        """
        w = np.asarray(w, dtype=complex)
        out = np.full(w.shape, self.fp_at_zero**alpha, dtype=complex)
        for r, e in self.fp_factors:
            out = out * (1 - w / r) ** (e * alpha)
        return out

    def __call__(self, w):
        return self.f(w)


def _winding_number(curve: np.ndarray, z0: complex) -> int:
    d = curve - z0
    ang = np.angle(np.roll(d, -1) / d)
    return int(round(np.sum(ang) / (2 * np.pi)))


def _self_intersects(pts: np.ndarray) -> bool:
    a = pts
    b = np.roll(pts, -1)
    n = len(pts)
    ax, ay, bx, by = a.real, a.imag, b.real, b.imag
    # orientation tests for every pair of segments
    def orient(px, py, qx, qy, rx, ry):
        return (qx - px) * (ry - py) - (qy - py) * (rx - px)

    o1 = orient(ax[:, None], ay[:, None], bx[:, None], by[:, None], ax[None, :], ay[None, :])
    o2 = orient(ax[:, None], ay[:, None], bx[:, None], by[:, None], bx[None, :], by[None, :])
    o3 = orient(ax[None, :], ay[None, :], bx[None, :], by[None, :], ax[:, None], ay[:, None])
    o4 = orient(ax[None, :], ay[None, :], bx[None, :], by[None, :], bx[:, None], by[:, None])
    cross = (o1 * o2 < 0) & (o3 * o4 < 0)
    idx = np.arange(n)
    gap = np.abs(idx[:, None] - idx[None, :])
    cross &= (gap > 1) & (gap < n - 1)
    return bool(cross.any())


def make_domain(f: RationalFn, q: RationalFn | None = None, *, name: str = "", tol: float = 1e-10,
                raw_numer=None, raw_denom=None) -> QuadDomain:
    """Validate a disc map (and optional double-quadrature witness q, q**2 = f')."""
    if f.pole_degree == 0 and f.numer.degree < 1:
        raise DomainError("map is constant")
    for p, _ in f.poles:
        if abs(p) <= 1 + TOL_CIRCLE:
            raise DomainError(f"map not analytic on closure (pole at {p:.6g})")
    fp = f.derive()
    if fp.is_zero():
        raise DomainError("map is constant")
    zeros = poly_roots(fp.numer)
    for r, _ in zeros:
        if abs(r) <= 1 + TOL_CIRCLE:
            raise DomainError(f"critical point (cusp risk) at w = {r:.6g}")
    inv_fp = RationalFn(ComplexPoly(fp.denom.coeffs / fp.numer.coeffs[-1]), tuple(zeros))
    factors = tuple((r, m) for r, m in zeros) + tuple((p, -m) for p, m in fp.poles)
    fp0 = complex(fp(0.0))

    theta = 2 * np.pi * np.arange(N_WINDING) / N_WINDING
    curve = f(np.exp(1j * theta))
    probes = [0j] + [r * np.exp(2j * np.pi * (k + 0.5 * (i % 2)) / N_PROBE_ANGLES)
                     for i, r in enumerate(PROBE_RADII) for k in range(N_PROBE_ANGLES)]
    for v in probes[:32]:
        if _winding_number(curve, complex(f(v))) != 1:
            raise DomainError(f"not univalent (winding about f({v:.3g}) != 1)")
    coarse = curve[:: N_WINDING // N_SELF_INTERSECT]
    if _self_intersects(coarse):
        raise DomainError("not univalent (boundary self-intersection)")

    q_sign = 1
    if q is not None:
        w = np.exp(2j * np.pi * np.arange(256) / 256)
        err = np.max(np.abs(q(w) ** 2 - fp(w))) / (1 + np.max(np.abs(fp(w))))
        diff = q * q - fp
        coeff_err = np.max(np.abs(diff.numer.coeffs)) / (1 + np.max(np.abs((q * q).numer.coeffs)))
        if err > 1e-10 or coeff_err > 1e-10:
            raise DomainError("invalid double witness (q**2 != f')")
        q_sign = 1 if abs(complex(q(0.0)) - np.sqrt(fp0)) < abs(complex(q(0.0)) + np.sqrt(fp0)) else -1

    even = all(m % 2 == 0 for _, m in zeros) and all(m % 2 == 0 for _, m in fp.poles)
    return QuadDomain(
        f=f, q=q, tol=tol, name=name, fp=fp, inv_fp=inv_fp, sigma=f.reflect(),
        fp_at_zero=fp0, fp_factors=factors, q_sign=q_sign, even_hint=even,
        raw_numer=np.asarray(raw_numer if raw_numer is not None else f.numer.coeffs, dtype=complex),
        raw_denom=np.asarray(raw_denom if raw_denom is not None else f.denom.coeffs, dtype=complex),
    )


def domain_from_coeffs(numer, denom=(1,), witness_numer=None, witness_denom=(1,), name: str = "") -> QuadDomain:
    f = RationalFn.from_coeffs(numer, denom)
    q = RationalFn.from_coeffs(witness_numer, witness_denom) if witness_numer is not None else None
    return make_domain(f, q, name=name, raw_numer=numer, raw_denom=denom)


def boundary_frame(dom: QuadDomain, theta: float) -> BoundaryFrame:
    w = complex(np.exp(1j * theta))
    fpw = complex(dom.fp(w))
    speed = abs(fpw)
    return BoundaryFrame(theta=float(theta), w=w, z=complex(dom.f(w)),
                         tangent=1j * w * fpw / speed, speed=speed)


def schwarz_pullback(dom: QuadDomain) -> RationalFn:
    return dom.sigma


def quadrature_data(dom: QuadDomain) -> QuadratureData:
    """Area quadrature nodes from residues of h(f(w)) sigma(w) f'(w) inside the disc.

    With the Laurent coefficients c_j of sigma*f' at an interior pole p and
    df(t) = f(p+t) - f(p), the coefficient of h^(m)(f(p)) is
    pi/m! * sum_j c_j [t^(j-1)] df(t)^m.
    """
    phi = dom.sigma * dom.fp
    nodes = []
    for p, k in phi.poles:
        if abs(p) >= 1:
            continue
        c = phi.principal_part(p).coefficients
        df = dom.f.taylor(p, k)
        a = complex(df[0])
        df[0] = 0
        power = np.zeros(k, dtype=complex)
        power[0] = 1
        for m in range(k):
            val = sum(c[j - 1] * power[j - 1] for j in range(1, k + 1))
            coef = math.pi * val / math.factorial(m)
            if abs(coef) > 0:
                nodes.append(QuadratureNode(point=a, order=m, coefficient=complex(coef)))
            power = np.convolve(power, df)[:k]
    return QuadratureData(nodes=tuple(nodes))


def invert_map(dom: QuadDomain, z: complex, *, allow_boundary: bool = False) -> complex:
    """Disc preimage of z by Newton iteration seeded from a 64x32 polar grid."""
    grid = _seed_grid(dom)
    vals = grid[1]
    order = np.argsort(np.abs(vals - z))[:4]
    scale = 1.0 + abs(z)
    best, best_err = None, np.inf
    for idx in order:
        v = complex(grid[0][idx])
        for _ in range(60):
            step = complex((dom.f(v) - z) / dom.fp(v))
            v -= step
            if abs(step) <= 1e-16 * (1 + abs(v)):
                break
        err = abs(complex(dom.f(v)) - z)
        if err < best_err and abs(v) < 1 + 1e-6:
            best, best_err = v, err
        if best is not None and best_err <= 1e-14 * scale:
            break
    limit = 1 + 1e-9 if allow_boundary else 1 - 1e-9
    if best is None or best_err > 1e-10 * scale or abs(best) >= limit:
        raise DomainError(f"point not in domain: {z}")
    return best


def _seed_grid(dom: QuadDomain):
    cache = dom.__dict__.get("_grid")
    if cache is None:
        r = (np.arange(32) + 1) / 32
        t = 2 * np.pi * np.arange(64) / 64
        v = (r[None, :] * np.exp(1j * t[:, None])).ravel()
        v = np.concatenate([[0j], v])
        cache = (v, dom.f(v))
        object.__setattr__(dom, "_grid", cache)
    return cache


# ---------------------------------------------------------------- file format


def _complex_list(obj, field_name: str) -> list[complex]:
    if not isinstance(obj, list) or not obj:
        raise ParseError(f"{field_name}: expected a non-empty array of [re, im] pairs")
    out = []
    for i, item in enumerate(obj):
        if (not isinstance(item, (list, tuple)) or len(item) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in item)):
            raise ParseError(f"{field_name}[{i}]: expected [re, im] pair of numbers, got {item!r}")
        out.append(complex(item[0], item[1]))
    return out


def parse_domain(text: str) -> QuadDomain:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"domain file: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ParseError("domain file: top level must be an object")
    name = obj.get("name", "")
    if not isinstance(name, str):
        raise ParseError("name: expected a string")
    if "map_numer" not in obj:
        raise ParseError("map_numer: missing field")
    numer = _complex_list(obj["map_numer"], "map_numer")
    denom = _complex_list(obj.get("map_denom", [[1, 0]]), "map_denom")
    wn = obj.get("double_witness_numer")
    wd = obj.get("double_witness_denom", [[1, 0]])
    wnum = _complex_list(wn, "double_witness_numer") if wn is not None else None
    wden = _complex_list(wd, "double_witness_denom") if wn is not None else (1,)
    if all(c == 0 for c in denom):
        raise ParseError("map_denom: identically zero")
    return domain_from_coeffs(numer, denom, wnum, wden, name=name)


def load_domain(path) -> QuadDomain:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read domain file {path}: {exc}") from exc
    return parse_domain(text)


def dump_domain(dom: QuadDomain) -> str:
    def enc(c):
        return [[float(x.real), float(x.imag)] for x in c]

    obj = {"name": dom.name, "map_numer": enc(dom.raw_numer), "map_denom": enc(dom.raw_denom)}
    if dom.q is not None:
        obj["double_witness_numer"] = enc(dom.q.numer.coeffs)
        obj["double_witness_denom"] = enc(dom.q.denom.coeffs)
    return json.dumps(obj)
