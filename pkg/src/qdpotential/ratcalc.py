"""Complex polynomials, univariate rational functions and circle geometry.

A :class:`RationalFn` keeps its numerator as a coefficient vector but its
denominator in factored form, as a tuple of ``(pole, multiplicity)`` pairs.
Poles of objects built from known pieces (disc kernels, reflections, products)
are therefore never re-discovered by root finding, which matters because
high-multiplicity roots of expanded polynomials are ill-conditioned.  Root
finding (Aberth-Ehrlich) is only used when a genuinely new denominator
appears, i.e. when inverting a function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial import legendre
from numpy.polynomial import polynomial as npoly

from .errors import AlgebraError, RootFindingError, SingularDataError

TOL_ROOT = 1e-12
TOL_CLUSTER = 1e-8
TOL_CIRCLE = 1e-6
TOL_ZERO = 1e-10
ITER_CAP = 200

_EPS = np.finfo(float).eps


def _same_point(p: complex, q: complex) -> bool:
    return abs(p - q) <= TOL_CLUSTER * (1.0 + abs(p))


# ---------------------------------------------------------------- polynomials


def poly_taylor(coeffs, c: complex, n: int) -> np.ndarray:
    """First ``n`` Taylor coefficients of the polynomial at ``c``."""
    a = list(np.asarray(coeffs, dtype=complex))
    out = np.zeros(n, dtype=complex)
    for k in range(n):
        if not a:
            break
        acc = 0j
        q = [0j] * (len(a) - 1)
        for i in range(len(a) - 1, -1, -1):
            acc = acc * c + a[i]
            if i > 0:
                q[i - 1] = acc
        out[k] = acc
        a = q
    return out


def _deflate(coeffs: np.ndarray, p: complex, k: int) -> np.ndarray:
    a = np.asarray(coeffs, dtype=complex)
    for _ in range(k):
        if len(a) <= 1:
            return np.zeros(1, dtype=complex)
        q = np.empty(len(a) - 1, dtype=complex)
        if abs(p) <= 1:
            acc = 0j
            for i in range(len(a) - 1, 0, -1):
                acc = acc * p + a[i]
                q[i - 1] = acc
        else:
            # forward division amplifies errors for |p| > 1; divide from the constant term
            acc = 0j
            for i in range(len(a) - 1):
                acc = (acc - a[i]) / p
                q[i] = acc
        a = q
    return a


def _trim(c: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(c)
    if nz.size == 0:
        return np.zeros(1, dtype=complex)
    return c[: nz[-1] + 1]


@dataclass(frozen=True, eq=False)
class ComplexPoly:
    """Polynomial with complex coefficients in ascending degree."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = _trim(np.atleast_1d(np.array(self.coeffs, dtype=complex)))
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return -1 if self.is_zero() else len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    def __call__(self, w):
        return npoly.polyval(w, self.coeffs)

    def __add__(self, other):
        other = _as_poly(other)
        return ComplexPoly(npoly.polyadd(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __neg__(self):
        return ComplexPoly(-self.coeffs)

    def __mul__(self, other):
        other = _as_poly(other)
        return ComplexPoly(npoly.polymul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def deriv(self) -> ComplexPoly:
        if len(self.coeffs) == 1:
            return ComplexPoly([0])
        return ComplexPoly(npoly.polyder(self.coeffs))

    def taylor(self, c: complex, n: int) -> np.ndarray:
        return poly_taylor(self.coeffs, c, n)

    def magnitude(self, r) -> np.ndarray:
        """Bound sum |c_i| r^i for the rounding error of evaluation at |w| = r."""
        return npoly.polyval(r, np.abs(self.coeffs))

    def __repr__(self):
        return f"ComplexPoly({np.array2string(self.coeffs, precision=6)})"


def _as_poly(x) -> ComplexPoly:
    return x if isinstance(x, ComplexPoly) else ComplexPoly([x])


def _from_roots(poles) -> np.ndarray:
    roots = [p for p, m in poles for _ in range(m)]
    if not roots:
        return np.ones(1, dtype=complex)
    return np.asarray(npoly.polyfromroots(roots), dtype=complex)


# ---------------------------------------------------------------- root finding


def _aberth(c: np.ndarray) -> np.ndarray:
    n = len(c) - 1
    if n == 1:
        return np.array([-c[0] / c[1]])
    dc = npoly.polyder(c)
    absc = np.abs(c)
    # start outside every root (Fujiwara-type bound); the geometric-mean radius
    # collapses to ~0 when the constant term is tiny and the iteration stalls
    k = np.arange(n)
    radius = float(np.max((absc[:n] / absc[n]) ** (1.0 / (n - k))))
    radius = radius if radius > 0 else 1.0
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    done = np.zeros(n, dtype=bool)
    for _ in range(ITER_CAP):
        pz = npoly.polyval(z, c)
        done |= np.abs(pz) <= 2 * n * _EPS * npoly.polyval(np.abs(z), absc)
        if done.all():
            return z
        dpz = npoly.polyval(z, dc)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dpz != 0, pz / dpz, 1e-3 * (1 + np.abs(z)))
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            s = np.sum(1.0 / diff, axis=1)
            corr = ratio / (1.0 - ratio * s)
        corr = np.where(np.isfinite(corr), corr, 0)
        z = np.where(done, z, z - corr)
    # clusters converge only linearly; at the cap, accept iterates that are backward
    # stable on the same scale as the root check
    resid = np.abs(npoly.polyval(z, c)) / npoly.polyval(np.maximum(np.abs(z), 1.0), absc)
    if np.max(resid) > TOL_ROOT:
        raise RootFindingError(
            f"Aberth iteration did not converge in {ITER_CAP} steps", best=z
        )
    return z


def _multiplicity_ok(c: np.ndarray, center: complex, k: int) -> tuple[bool, complex]:
    # refine on the (k-1)th derivative, which has a simple root at a k-fold root
    dk = np.asarray(c, dtype=complex)
    for _ in range(k - 1):
        dk = npoly.polyder(dk) if len(dk) > 1 else np.zeros(1, complex)
    ddk = npoly.polyder(dk) if len(dk) > 1 else np.zeros(1, complex)
    x = center
    for _ in range(8):
        den = npoly.polyval(x, ddk)
        if den == 0:
            break
        step = npoly.polyval(x, dk) / den
        x = x - step
        if abs(step) <= 4 * _EPS * (1 + abs(x)):
            break
    if abs(x - center) > 1e-2 * (1 + abs(center)):
        x = center
    t = poly_taylor(c, x, k)
    bound = poly_taylor(np.abs(c), abs(x), k)
    return bool(np.all(np.abs(t) <= 1e-12 * np.maximum(bound, 1e-300))), x


def _cluster(c: np.ndarray, z: np.ndarray) -> list[tuple[complex, int]]:
    out: list[tuple[complex, int]] = []
    _split_groups(c, list(z), 1e-2, out)
    # unconditional merge of anything left within the clustering tolerance
    merged: list[list] = []
    for r, m in out:
        for item in merged:
            if _same_point(item[0], r):
                tot = item[1] + m
                item[0] = (item[0] * item[1] + r * m) / tot
                item[1] = tot
                break
        else:
            merged.append([r, m])
    return [(complex(r), int(m)) for r, m in merged]


def _split_groups(c, roots, radius, out):
    groups = _single_linkage(roots, radius)
    for g in groups:
        if len(g) == 1:
            out.append((_newton_polish(c, g[0]), 1))
            continue
        center = complex(np.mean(g))
        ok, refined = _multiplicity_ok(c, center, len(g))
        if ok:
            out.append((refined, len(g)))
        elif radius * 1e-2 >= TOL_CLUSTER:
            _split_groups(c, g, radius * 1e-2, out)
        else:
            out.append((refined, len(g)))


def _single_linkage(roots, radius):
    n = len(roots)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(roots[i] - roots[j]) <= radius * (1 + abs(roots[i])):
                parent[find(i)] = find(j)
    groups: dict[int, list] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(roots[i])
    return list(groups.values())


def _newton_polish(c, x):
    dc = npoly.polyder(c) if len(c) > 1 else np.zeros(1, complex)
    best = x
    best_res = abs(npoly.polyval(x, c))
    for _ in range(3):
        d = npoly.polyval(x, dc)
        if d == 0:
            break
        x = x - npoly.polyval(x, c) / d
        res = abs(npoly.polyval(x, c))
        if res < best_res:
            best, best_res = x, res
        else:
            break
    return complex(best)


def poly_roots(p) -> list[tuple[complex, int]]:
    """Roots of ``p`` with multiplicities, sorted by real then imaginary part.

    Exact zero roots are split off before the Aberth-Ehrlich iteration.
    Clusters of computed roots are accepted as one multiple root only when
    the Taylor coefficients of ``p`` at the refined cluster centre vanish.
    """
    p = _as_poly(p) if not isinstance(p, ComplexPoly) else p
    if p.is_zero():
        raise AlgebraError("roots of the zero polynomial are undefined")
    c = p.coeffs
    if len(c) == 1:
        return []
    k0 = int(np.flatnonzero(c)[0])
    c = c[k0:]
    found: list[tuple[complex, int]] = []
    if len(c) > 1:
        found = _cluster(c, _aberth(c))
        absc = np.abs(c)
        for r, _ in found:
            # merged clusters near 0 leave residuals of order |c_0|: measure against the
            # coefficient scale of p, not the (possibly tiny) evaluation bound at r
            if abs(npoly.polyval(r, c)) > TOL_ROOT * npoly.polyval(max(abs(r), 1.0), absc):
                raise RootFindingError("root failed the backward-error check", best=r)
    if k0:
        found.append((0j, k0))
    return sorted(found, key=lambda t: (round(t[0].real, 12), round(t[0].imag, 12)))


# ---------------------------------------------------------------- power series


def series_mul(a, b, n: int | None = None) -> np.ndarray:
    n = min(len(a), len(b)) if n is None else n
    return np.convolve(a[:n], b[:n])[:n]


def series_pow(a, alpha: float, b0: complex, n: int | None = None) -> np.ndarray:
    """Series of ``a(t)**alpha`` with constant term ``b0`` (selects the branch)."""
    a = np.asarray(a, dtype=complex)
    n = len(a) if n is None else n
    b = np.zeros(n, dtype=complex)
    b[0] = b0
    for k in range(1, n):
        s = 0j
        for j in range(1, min(k, len(a) - 1) + 1):
            s += ((alpha + 1) * j - k) * a[j] * b[k - j]
        b[k] = s / (k * a[0])
    return b


def series_deriv(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if len(a) <= 1:
        return np.zeros(0, dtype=complex)
    return a[1:] * np.arange(1, len(a))


def _inv_linear_power_series(d: complex, m: int, n: int) -> np.ndarray:
    # (d + t)^(-m) = d^(-m) * sum_k binom(-m, k) (t/d)^k
    k = np.arange(n)
    coef = np.array([math.comb(m + kk - 1, kk) for kk in k], dtype=float) * (-1.0) ** k
    return coef * d ** (-m - k.astype(float))


# ---------------------------------------------------------------- rational functions


@dataclass(frozen=True)
class PrincipalPart:
    """sum_j coefficients[j-1] * (w - pole)**(-j)."""

    pole: complex
    coefficients: tuple[complex, ...]

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        out = np.zeros_like(w)
        for j, cj in enumerate(self.coefficients, start=1):
            out = out + cj * (w - self.pole) ** (-j)
        return out

    def as_rational(self) -> RationalFn:
        k = self.order
        if k == 0:
            return RationalFn(ComplexPoly([0]))
        num = ComplexPoly([0])
        for j, cj in enumerate(self.coefficients, start=1):
            num = num + cj * ComplexPoly(npoly.polypow([-self.pole, 1], k - j))
        return RationalFn(num, ((self.pole, k),))


@dataclass(frozen=True, eq=False)
class RationalFn:
    """numer(w) / prod (w - p)**m over ``poles``; canonical reduced on construction."""

    numer: ComplexPoly
    poles: tuple[tuple[complex, int], ...] = ()

    def __post_init__(self):
        num = self.numer if isinstance(self.numer, ComplexPoly) else ComplexPoly(self.numer)
        merged: list[list] = []
        for p, m in self.poles:
            p = complex(p)
            for item in merged:
                if _same_point(item[0], p):
                    item[1] += int(m)
                    break
            else:
                merged.append([p, int(m)])
        poles = [(p, m) for p, m in merged if m > 0]
        if num.is_zero():
            poles = []
        coeffs = num.coeffs
        reduced = []
        for p, m in poles:
            t = poly_taylor(coeffs, p, m)
            bound = poly_taylor(np.abs(coeffs), abs(p), m)
            k = 0
            while k < m and abs(t[k]) <= TOL_ZERO * bound[k]:
                k += 1
            if k:
                coeffs = _deflate(coeffs, p, k)
            if m - k > 0:
                reduced.append((p, m - k))
        reduced.sort(key=lambda t: (t[0].real, t[0].imag))
        object.__setattr__(self, "numer", ComplexPoly(coeffs))
        object.__setattr__(self, "poles", tuple(reduced))

    # -- constructors
    @classmethod
    def const(cls, c: complex) -> RationalFn:
        return cls(ComplexPoly([c]))

    @classmethod
    def poly(cls, coeffs) -> RationalFn:
        return cls(ComplexPoly(coeffs))

    @classmethod
    def from_coeffs(cls, numer, denom) -> RationalFn:
        """From ascending coefficient sequences; the denominator is root-found."""
        d = ComplexPoly(denom)
        if d.is_zero():
            raise AlgebraError("zero divisor")
        lead = d.coeffs[-1]
        return cls(ComplexPoly(np.asarray(numer, dtype=complex) / lead), tuple(poly_roots(d)))

    # -- structure
    @property
    def denom(self) -> ComplexPoly:
        return ComplexPoly(_from_roots(self.poles))

    @property
    def pole_degree(self) -> int:
        return sum(m for _, m in self.poles)

    def is_zero(self) -> bool:
        return self.numer.is_zero()

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        out = self.numer(w)
        for p, m in self.poles:
            out = out / (w - p) ** m
        return out

    def value_at_infinity(self) -> complex:
        d = self.numer.degree
        n = self.pole_degree
        if d < n:
            return 0j
        if d == n:
            return complex(self.numer.coeffs[-1])
        return complex(np.inf)

    def max_abs_on_circle(self, n: int = 256) -> float:
        w = np.exp(2j * np.pi * np.arange(n) / n)
        return float(np.max(np.abs(self(w))))

    # -- arithmetic
    def __add__(self, other):
        other = _as_rat(other)
        poles = _lcm(self.poles, other.poles)
        na = self.numer * ComplexPoly(_from_roots(_quotient(poles, self.poles)))
        nb = other.numer * ComplexPoly(_from_roots(_quotient(poles, other.poles)))
        c = npoly.polyadd(na.coeffs, nb.coeffs)
        scale = max(np.max(np.abs(na.coeffs)), np.max(np.abs(nb.coeffs)))
        c[np.abs(c) <= 1e-14 * scale] = 0
        return RationalFn(ComplexPoly(c), tuple(poles))

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.numer, self.poles)

    def __sub__(self, other):
        return self + (-_as_rat(other))

    def __rsub__(self, other):
        return _as_rat(other) + (-self)

    def __mul__(self, other):
        if np.isscalar(other):
            return RationalFn(self.numer * complex(other), self.poles)
        other = _as_rat(other)
        return RationalFn(self.numer * other.numer, self.poles + other.poles)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if np.isscalar(other):
            if other == 0:
                raise AlgebraError("zero divisor")
            return RationalFn(self.numer * (1.0 / complex(other)), self.poles)
        return self * _as_rat(other).inverse()

    def __rtruediv__(self, other):
        return _as_rat(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = RationalFn.const(1)
        for _ in range(k):
            out = out * self
        return out

    def inverse(self) -> RationalFn:
        if self.is_zero():
            raise AlgebraError("zero divisor")
        lead = self.numer.coeffs[-1]
        num = ComplexPoly(_from_roots(self.poles) / lead)
        return RationalFn(num, tuple(poly_roots(self.numer)))

    def derive(self) -> RationalFn:
        if not self.poles:
            return RationalFn(self.numer.deriv())
        simple = ComplexPoly(_from_roots([(p, 1) for p, _ in self.poles]))
        acc = self.numer.deriv() * simple
        for i, (p, m) in enumerate(self.poles):
            others = ComplexPoly(_from_roots([(q, 1) for j, (q, _) in enumerate(self.poles) if j != i]))
            acc = acc - self.numer * others * float(m)
        return RationalFn(acc, tuple((p, m + 1) for p, m in self.poles))

    def compose(self, inner: RationalFn) -> RationalFn:
        """self(inner(w))."""
        inner = _as_rat(inner)
        num = RationalFn.const(0)
        for c in self.numer.coeffs[::-1]:
            num = num * inner + complex(c)
        out = num
        for p, m in self.poles:
            out = out * (inner - p).inverse() ** m
        return out

    def reflect(self) -> RationalFn:
        """conj(f(1/conj(w))); agrees with conj(f) on the unit circle."""
        d = self.numer.degree
        if d < 0:
            return self
        rev = np.conj(self.numer.coeffs[::-1])
        total = self.pole_degree
        const = 1.0 + 0j
        poles = []
        for p, m in self.poles:
            if p == 0:
                continue
            const *= (-np.conj(p)) ** m
            poles.append((1.0 / np.conj(p), m))
        shift = total - d
        num = rev / const
        if shift > 0:
            num = np.concatenate([np.zeros(shift, dtype=complex), num])
        elif shift < 0:
            poles.append((0j, -shift))
        return RationalFn(ComplexPoly(num), tuple(poles))

    # -- local structure
    def find_pole(self, p: complex):
        hits = [(q, m) for q, m in self.poles if _same_point(q, p)]
        if len(hits) > 1:
            raise AlgebraError("ambiguous pole cluster")
        return hits[0] if hits else None

    def principal_part(self, p: complex) -> PrincipalPart:
        hit = self.find_pole(p)
        if hit is None:
            return PrincipalPart(complex(p), ())
        q, m = hit
        series = self.numer.taylor(q, m)
        for r, k in self.poles:
            if _same_point(r, q):
                continue
            series = series_mul(series, _inv_linear_power_series(q - r, k, m), m)
        coeffs = tuple(complex(series[m - j]) for j in range(1, m + 1))
        return PrincipalPart(q, coeffs)

    def polynomial_part(self) -> ComplexPoly:
        if self.numer.degree < self.pole_degree:
            return ComplexPoly([0])
        quo, _ = npoly.polydiv(self.numer.coeffs, _from_roots(self.poles))
        return ComplexPoly(quo)

    def partial_fractions(self) -> tuple[ComplexPoly, list[PrincipalPart]]:
        return self.polynomial_part(), [self.principal_part(p) for p, _ in self.poles]

    def taylor(self, c: complex, n: int) -> np.ndarray:
        """Taylor coefficients at a regular point ``c``."""
        series = self.numer.taylor(c, n)
        for p, m in self.poles:
            if _same_point(p, c):
                raise AlgebraError("evaluation at pole")
            series = series_mul(series, _inv_linear_power_series(c - p, m, n), n)
        return series

    def __repr__(self):
        poles = ", ".join(f"({p:.6g})^{m}" for p, m in self.poles)
        return f"RationalFn(numer={np.array2string(self.numer.coeffs, precision=6)}, poles=[{poles}])"


def _as_rat(x) -> RationalFn:
    if isinstance(x, RationalFn):
        return x
    if isinstance(x, ComplexPoly):
        return RationalFn(x)
    return RationalFn.const(complex(x))


def _lcm(a, b):
    out = [list(t) for t in a]
    for p, m in b:
        for item in out:
            if _same_point(item[0], p):
                item[1] = max(item[1], m)
                break
        else:
            out.append([p, m])
    return [tuple(t) for t in out]


def _quotient(big, small):
    out = []
    for p, m in big:
        k = m
        for q, n in small:
            if _same_point(p, q):
                k = m - n
                break
        if k:
            out.append((p, k))
    return out


# ---------------------------------------------------------------- public operations


def rat_arith(op: str, f: RationalFn, g: RationalFn | None = None) -> RationalFn:
    """Dispatch add/sub/mul/div/compose/derive."""
    if op == "derive":
        return f.derive()
    if g is None:
        raise AlgebraError(f"operation {op!r} needs a second operand")
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "div":
        if _as_rat(g).is_zero():
            raise AlgebraError("zero divisor")
        return f / g
    if op == "compose":
        return f.compose(g)
    raise AlgebraError(f"unknown operation {op!r}")


def principal_part_at(f: RationalFn, p: complex) -> PrincipalPart:
    return f.principal_part(p)


def reflect(f: RationalFn) -> RationalFn:
    return f.reflect()


def check_off_circle(f: RationalFn, what: str = "boundary pole") -> None:
    for p, _ in f.poles:
        if abs(abs(p) - 1.0) <= TOL_CIRCLE:
            raise SingularDataError(f"{what} at w = {p:.6g}")


def circle_split(f: RationalFn) -> tuple[RationalFn, RationalFn]:
    """Split f = inner + outer across |w| = 1.

    ``inner`` keeps the polynomial part and the principal parts at poles
    outside the closed disc; ``outer`` collects principal parts at poles in
    the open disc and vanishes at infinity.
    """
    check_off_circle(f)
    poly, parts = f.partial_fractions()
    inner = RationalFn(poly)
    outer = RationalFn.const(0)
    for part in parts:
        if abs(part.pole) < 1:
            outer = outer + part.as_rational()
        else:
            inner = inner + part.as_rational()
    return inner, outer


def rational_primitive(f: RationalFn, base: complex = 0j) -> RationalFn:
    """Rational antiderivative F with F(base) = 0; requires every residue to vanish."""
    poly, parts = f.partial_fractions()
    scale = 1.0 + f.max_abs_on_circle() if f.poles else 1.0
    out = RationalFn.poly(npoly.polyint(poly.coeffs)) if not poly.is_zero() else RationalFn.const(0)
    for part in parts:
        c = part.coefficients
        if c and abs(c[0]) > 1e-10 * scale * (1 + abs(part.pole)):
            raise AlgebraError("multivalued antiderivative")
        tail = tuple(cj / (1 - j) for j, cj in enumerate(c[1:], start=2))
        if tail:
            out = out + PrincipalPart(part.pole, tail).as_rational()
    return out - complex(out(base))


def _residues(f: RationalFn) -> list[tuple[complex, complex]]:
    return [(pp.pole, pp.coefficients[0] if pp.coefficients else 0j) for pp in f.partial_fractions()[1]]


def _segment_distance(p, a, b) -> float:
    d = b - a
    if d == 0:
        return abs(p - a)
    t = min(1.0, max(0.0, ((p - a) * np.conj(d)).real / abs(d) ** 2))
    return abs(p - (a + t * d))


_GL_X, _GL_W = legendre.leggauss(16)


def _gauss_segment(f, a, b):
    mid, half = (a + b) / 2, (b - a) / 2
    return complex(np.sum(_GL_W * f(mid + half * _GL_X)) * half)


def _adaptive_gl(f, a, b, tol, depth=0):
    whole = _gauss_segment(f, a, b)
    m = (a + b) / 2
    left, right = _gauss_segment(f, a, m), _gauss_segment(f, m, b)
    if abs(left + right - whole) <= tol or depth > 40:
        return left + right
    return _adaptive_gl(f, a, m, tol / 2, depth + 1) + _adaptive_gl(f, m, b, tol / 2, depth + 1)


def antiderivative_eval(f: RationalFn, endpoint: complex, basepoint: complex = 0j) -> complex:
    """Integral of f along the segment basepoint -> endpoint (inside the closed disc)."""
    scale = 1.0 + (f.max_abs_on_circle() if f.poles else float(np.max(np.abs(f.numer.coeffs))))
    residues = _residues(f)
    for p, r in residues:
        if abs(p) < 1 and abs(r) > 1e-10 * scale * (1 + abs(p)):
            raise AlgebraError("multivalued antiderivative")
    for p, _ in f.poles:
        if _segment_distance(p, basepoint, endpoint) <= 1e-12 * (1 + abs(p)):
            raise AlgebraError("path hits pole")
    if all(abs(r) <= 1e-10 * scale * (1 + abs(p)) for p, r in residues):
        prim = rational_primitive(f, basepoint)
        return complex(prim(endpoint))
    return _adaptive_gl(f, complex(basepoint), complex(endpoint), 1e-14 * scale)
