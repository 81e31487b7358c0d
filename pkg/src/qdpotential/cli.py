"""Command-line front end.

    qdpotential validate        --domain D
    qdpotential solve-dirichlet --domain D --data R [--anchor re,im]
    qdpotential dtn             --domain D --data R
    qdpotential solve-neumann   --domain D --data PSI
    qdpotential decompose       --domain D --data R
    qdpotential project         --domain D --data R
    qdpotential verify          --domain D [--data R]
    qdpotential sample          --domain D --data R --out file.csv [--grid boundary|interior]

Exit codes: 0 ok, 2 parse / unwritable output, 3 invalid domain,
4 singular boundary data, 5 incompatible data, 6 residual or verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import decompose as dec_mod
from . import oracle, solvers
from .decompose import basic_decomposition, load_boundary_data, szego_project
from .domain import QuadDomain, invert_map, load_domain, quadrature_data
from .errors import ParseError, QDError
from .kernels import SpanElement, identity_residual, kernel_value
from .ratcalc import ComplexPoly, poly_roots


@dataclass
class JobConfig:
    command: str
    domain_path: str
    data_path: str | None = None
    anchor: complex = 0j
    samples: int = 256
    out_path: str | None = None
    tol: float | None = None
    grid: str = "boundary"
    radii: int = 16
    as_json: bool = False

    def __post_init__(self):
        n = self.samples
        if n < 64 or n > 8192 or n & (n - 1):
            raise ParseError("--samples: must be a power of two in [64, 8192]")
        if abs(self.anchor) >= 1:
            raise ParseError("--anchor: must lie strictly inside the unit disc")


@dataclass
class Report:
    lines: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    failed: bool = False

    def add(self, line: str):
        self.lines.append(line)

    def check(self, name: str, value: float, bound: float) -> bool:
        ok = bool(value <= bound)
        self.add(f"{'PASS' if ok else 'FAIL'}  {name}: {value:.3e} (bound {bound:.1e})")
        self.data.setdefault("checks", {})[name] = {"value": value, "bound": bound, "pass": ok}
        self.failed |= not ok
        return ok


def fmt(c: complex, digits: int = 12) -> str:
    c = complex(c)
    if abs(c.imag) <= 1e-13 * (1 + abs(c)):
        return f"{c.real:.{digits}g}"
    if abs(c.real) <= 1e-13 * (1 + abs(c)):
        return f"{c.imag:.{digits}g}i"
    sign = "+" if c.imag >= 0 else "-"
    return f"{c.real:.{digits}g}{sign}{abs(c.imag):.{digits}g}i"


def fmt_poly(p: ComplexPoly, var: str = "w") -> str:
    terms = []
    for k, c in enumerate(p.coeffs):
        if c == 0:
            continue
        s = fmt(c, 8)
        if k and s in ("1", "-1"):
            s = s[:-1]
        terms.append(s + ("" if k == 0 else var if k == 1 else f"{var}^{k}"))
    return " + ".join(terms).replace("+ -", "- ") or "0"


def _jsonable(c: complex) -> list[float]:
    return [float(np.real(c)), float(np.imag(c))]


def span_table(dom: QuadDomain, span: SpanElement, report: Report, title: str):
    rows = span.table()
    report.add(f"{title}: {len(rows)} term(s)")
    out = []
    for kind, v, m, c in rows:
        z = complex(dom.f(v))
        report.add(f"  {kind:<10} order {m}  w = {fmt(v, 8):<16} z = {fmt(z, 8):<16} coeff = {fmt(c)}")
        out.append({"kind": kind, "order": m, "w": _jsonable(v), "z": _jsonable(z), "coeff": _jsonable(c)})
    report.data[title] = out


def _circle(n):
    return np.exp(2j * np.pi * np.arange(n) / n)


def _interior_points(n: int = 20) -> np.ndarray:
    k = np.arange(n)
    return (0.05 + 0.85 * k / (n - 1)) * np.exp(2j * np.pi * 0.618034 * k)


def _boundary_function(dom: QuadDomain, R):
    """Boundary data as a function of the image point z (for oracles)."""
    if isinstance(R, dec_mod.BiRational):
        return lambda z: R(z)
    return lambda z: R(np.vectorize(lambda x: oracle.preimage(dom, x))(z))


def poisson_residual(dom: QuadDomain, rep, R, n: int = 1024) -> float:
    ps = oracle.PoissonSolution(dom, _boundary_function(dom, R), n)
    pts = _interior_points()
    return max(abs(solvers.harmonic_eval(rep, dom, v) - ps.at_w(v)) for v in pts)


# ---------------------------------------------------------------- commands


def cmd_validate(dom: QuadDomain, cfg: JobConfig, report: Report):
    report.add(f"domain: {dom.name or cfg.domain_path}")
    report.add("area QD: yes")
    if dom.q is not None:
        qtxt = fmt_poly(dom.q.numer) if not dom.q.poles else repr(dom.q)
        report.add(f"double witness: q={qtxt} valid")
        report.data["double_witness"] = qtxt
    else:
        roots = poly_roots(dom.fp.numer)
        square = all(m % 2 == 0 for _, m in roots) and all(m % 2 == 0 for _, m in dom.fp.poles)
        hint = "f' looks like a perfect square; supply double_witness_numer" if square else \
            "f' is not a perfect square of a rational function"
        report.add(f"double witness: none ({hint})")
        report.data["double_witness"] = None
    nodes = quadrature_data(dom).nodes
    report.add(f"quadrature nodes: {len(nodes)}")
    for nd in nodes:
        report.add(f"  a = {fmt(nd.point, 8)}  order {nd.order}  c = {fmt(nd.coefficient)}")
    report.data["quadrature"] = [{"point": _jsonable(n.point), "order": n.order,
                                  "coefficient": _jsonable(n.coefficient)} for n in nodes]


def _need_data(cfg: JobConfig):
    if not cfg.data_path:
        raise ParseError("--data: required for this command")
    return load_boundary_data(cfg.data_path)


def cmd_solve_dirichlet(dom, cfg, report):
    R = _need_data(cfg)
    rep = solvers.dirichlet_solve(dom, cfg.anchor, R)
    z0 = complex(dom.f(0))
    u0 = solvers.harmonic_eval(rep, dom, 0)
    report.add(f"u({fmt(z0)}) = {fmt(u0)}")
    report.data["u_at_f0"] = _jsonable(u0)
    span_table(dom, rep.meta["szego_terms"], report, "szego_terms")
    span_table(dom, rep.meta["garabedian_terms"], report, "garabedian_terms")
    report.add(f"h(f(w)) = {rep.h_hat!r}")
    report.add(f"H(f(w)) = {rep.H_hat!r}")
    report.check("Poisson oracle residual", poisson_residual(dom, rep, R), 1e-8)


def cmd_dtn(dom, cfg, report):
    R = _need_data(cfg)
    res = solvers.dtn_map(dom, cfg.anchor, R)
    if res.trace is not None:
        report.add(f"D-to-N trace (rational in w): {res.trace!r}")
        split = solvers.tangential_split(dom, res.trace)
        report.check("tangential split residual", split.residual, 1e-8)
    ps = oracle.PoissonSolution(dom, _boundary_function(dom, R), 4096)
    th = 2 * np.pi * np.arange(64) / 64
    err = max(abs(res(t) - oracle.fd_normal(dom, ps, t, 1e-5)) for t in th)
    report.check("FD normal-derivative oracle residual", float(err), 1e-6)
    report.data["psi_samples"] = [_jsonable(res(t)) for t in th[:8]]


def cmd_solve_neumann(dom, cfg, report):
    psi = _need_data(cfg)
    rep = solvers.neumann_solve(dom, psi)
    rho = dec_mod.pullback_boundary_data(dom, psi)
    u0 = solvers.harmonic_eval(rep, dom, 0)
    report.add(f"gauge: u({fmt(complex(dom.f(0)))}) = {fmt(u0)}")
    report.add(f"h'(f(w)) f'(w) = {rep.h_prime!r}")
    report.add(f"H'(f(w)) f'(w) = {rep.H_prime!r}")
    w = _circle(cfg.samples)
    back = solvers.dtn_of_rep(dom, rep).at_w(w)
    report.check("D-to-N round-trip residual", float(np.max(np.abs(back - rho(w)))), 1e-7)


def cmd_decompose(dom, cfg, report):
    R = _need_data(cfg)
    d = basic_decomposition(dom, cfg.anchor, R)
    span_table(dom, d.szego_terms, report, "szego_terms")
    span_table(dom, d.garabedian_terms, report, "garabedian_terms")
    scale = 1 + float(np.max(np.abs(d.trace(_circle(256)))))
    report.check("decomposition residual", d.residual, dec_mod.TOL_DECOMP * scale)


def cmd_project(dom, cfg, report):
    R = _need_data(cfg)
    direct = dom.q is not None
    span = szego_project(dom, cfg.anchor, R, direct=direct)
    report.add("projection of R" if direct else f"projection of S_a R, a = f({fmt(cfg.anchor)})")
    span_table(dom, span, report, "szego_terms")
    if direct and np.allclose(dom.raw_numer, [0, 1]) and np.allclose(dom.raw_denom, [1]):
        rho = dec_mod.pullback_boundary_data(dom, R)
        s = oracle.BoundarySamples.from_function(lambda t: rho(np.exp(1j * t)), cfg.samples)
        ref = oracle.hardy_project(s).values
        got = span.evaluate(dom, np.exp(1j * s.thetas))
        report.check("Hardy projection oracle residual", float(np.max(np.abs(got - ref))), 1e-8)


def cmd_verify(dom, cfg, report):
    for m in (0, 1, 2):
        for which in ("SL", "BL"):
            report.check(f"kernel identity {which} m={m}", identity_residual(dom, which, 0.2 + 0.1j, m), 1e-8)
    qd = quadrature_data(dom)
    for k in range(5):
        exact = oracle.area_integral(dom, lambda z, k=k: z**k)
        node = qd.apply(lambda a, m, k=k: _poly_deriv_at(k, m, a))
        report.check(f"quadrature identity z^{k}", abs(exact - node) / (1 + abs(exact)), 1e-6)
    w = _circle(512)
    ds = np.abs(oracle.map_deriv(dom, w)) * 2 * np.pi / 512
    z = oracle.map_value(dom, w)
    a = 0.2 + 0.1j
    sa = kernel_value(dom, "szego", a, 0, w)
    za = complex(oracle.map_value(dom, a))
    err = max(abs(np.sum(z**k * np.conj(sa) * ds) - za**k) for k in range(3))
    report.check("Szego reproducing property", float(err), 1e-8)
    if cfg.data_path:
        R = load_boundary_data(cfg.data_path)
        d = basic_decomposition(dom, cfg.anchor, R, check=False)
        scale = 1 + float(np.max(np.abs(d.trace(_circle(256)))))
        report.check("decomposition residual", d.residual, dec_mod.TOL_DECOMP * scale)
        rep = solvers.dirichlet_solve(dom, cfg.anchor, R)
        report.check("Dirichlet vs Poisson oracle", poisson_residual(dom, rep, R), 1e-8)
        other = solvers.dirichlet_solve(dom, 0.3 + 0.2j if cfg.anchor == 0 else 0j, R)
        pts = _interior_points()
        diff = np.max(np.abs(solvers.harmonic_eval(rep, dom, pts) - solvers.harmonic_eval(other, dom, pts)))
        report.check("anchor independence", float(diff), 1e-7)
        if dom.q is not None:
            res = solvers.dtn_of_rep(dom, rep)
            report.check("D-to-N split residual",
                         solvers.tangential_split(dom, res.trace).residual, 1e-8)
    report.add("verify: " + ("FAIL" if report.failed else "all checks passed"))


def _poly_deriv_at(k: int, m: int, a: complex) -> complex:
    if m > k:
        return 0j
    coef = 1.0
    for j in range(m):
        coef *= k - j
    return coef * a ** (k - m)


def cmd_sample(dom, cfg, report):
    R = _need_data(cfg)
    if not cfg.out_path:
        raise ParseError("--out: required for sample")
    rep = solvers.dirichlet_solve(dom, cfg.anchor, R)
    n = cfg.samples
    rows = []
    if cfg.grid == "boundary":
        header = ["theta", "re_z", "im_z", "re_value", "im_value", "re_tangent", "im_tangent", "speed"]
        th = 2 * np.pi * np.arange(n) / n
        w = np.exp(1j * th)
        z = dom.f(w)
        fpw = dom.fp(w)
        speed = np.abs(fpw)
        T = 1j * w * fpw / speed
        val = rep.boundary_values(w)
        for i in range(n):
            rows.append([th[i], z[i].real, z[i].imag, val[i].real, val[i].imag, T[i].real, T[i].imag, speed[i]])
    else:
        header = ["re_z", "im_z", "re_u", "im_u"]
        th = 2 * np.pi * np.arange(n) / n
        r = (np.arange(cfg.radii) + 0.5) / cfg.radii
        for t in th:
            v = r * np.exp(1j * t)
            z = dom.f(v)
            u = solvers.harmonic_eval(rep, dom, v)
            for i in range(len(r)):
                rows.append([z[i].real, z[i].imag, u[i].real, u[i].imag])
    try:
        with open(cfg.out_path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(header)
            wr.writerows([[repr(float(x)) for x in row] for row in rows])
    except OSError as exc:
        raise ParseError(f"cannot write {cfg.out_path}: {exc}") from exc
    report.add(f"wrote {len(rows)} rows to {cfg.out_path}")
    report.data["rows"] = len(rows)


COMMANDS = {
    "validate": cmd_validate,
    "solve-dirichlet": cmd_solve_dirichlet,
    "dtn": cmd_dtn,
    "solve-neumann": cmd_solve_neumann,
    "decompose": cmd_decompose,
    "project": cmd_project,
    "verify": cmd_verify,
    "sample": cmd_sample,
}


def run(cfg: JobConfig) -> tuple[int, Report]:
    report = Report()
    report.data["command"] = cfg.command
    saved = (solvers.TOL_SOLVE, dec_mod.TOL_DECOMP)
    if cfg.tol is not None:
        solvers.TOL_SOLVE = dec_mod.TOL_DECOMP = cfg.tol
    try:
        dom = load_domain(cfg.domain_path)
        COMMANDS[cfg.command](dom, cfg, report)
    except QDError as exc:
        report.add(f"error: {exc}")
        report.data["error"] = str(exc)
        return exc.exit_code, report
    finally:
        solvers.TOL_SOLVE, dec_mod.TOL_DECOMP = saved
    status = 6 if report.failed else 0
    return status, report


def _anchor(text: str) -> complex:
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError("expected re,im") from exc
    if len(parts) == 1:
        parts.append(0.0)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected re,im")
    return complex(parts[0], parts[1])


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qdpotential",
                                 description="Closed-form potential theory on quadrature domains.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--domain", required=True, help="domain JSON file")
    ap.add_argument("--data", help="boundary data JSON file")
    ap.add_argument("--anchor", type=_anchor, default=0j, help="disc parameter re,im (default 0)")
    ap.add_argument("--samples", type=int, default=256)
    ap.add_argument("--out", help="CSV output path (sample)")
    ap.add_argument("--tol", type=float, help="override residual tolerances")
    ap.add_argument("--grid", choices=("boundary", "interior"), default="boundary")
    ap.add_argument("--radii", type=int, default=16)
    ap.add_argument("--json", action="store_true", help="machine-readable summary")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = JobConfig(args.command, args.domain, args.data, args.anchor, args.samples, args.out,
                        args.tol, args.grid, args.radii, args.json)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    status, report = run(cfg)
    if cfg.as_json:
        report.data["status"] = status
        print(json.dumps(report.data, indent=2))
    else:
        print("\n".join(report.lines))
    return status


if __name__ == "__main__":
    sys.exit(main())
