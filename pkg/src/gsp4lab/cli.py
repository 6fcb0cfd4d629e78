"""Command-line interface: ``gsp4lab <command> [flags]``."""
from __future__ import annotations

import argparse
import io
import math
import sys
from pathlib import Path

import numpy as np

from . import characters as ch
from . import hecke, lfun, measures, onelevel
from .harness import dataset, report, stats, suites
from .satake import SatakeAngles, angles_to_spin, spin_to_standard


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _json(args, command: str, inputs: dict, rows: list[dict], seed=None) -> None:
    _emit(report.dumps(report.make_report(command, inputs, seed, rows)), args.out)


def _csv_rows(header: list[str], rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for r in rows:
        buf.write(",".join(repr(float(v)) if isinstance(v, (float, np.floating)) else str(v) for v in r) + "\n")
    return buf.getvalue()


def cmd_measure(args) -> int:
    grid = measures.density_grid(args.p, args.domain, args.n, normalized=True)
    if args.format == "csv":
        X, Y = np.meshgrid(grid.xs, grid.ys, indexing="ij")
        a, b = ("x", "y") if args.domain == "omega" else ("theta1", "theta2")
        _emit(_csv_rows([a, b, "density"], zip(X.ravel(), Y.ravel(), grid.values.ravel())), args.out)
        return 0
    rows = [report.result("max density", float(grid.values.max())),
            report.result("grid points", int(grid.values.size))]
    _json(args, "measure", {"p": args.p, "n": args.n, "domain": args.domain}, rows)
    return 0


def cmd_mass(args) -> int:
    rows = []
    for p in args.p_list:
        m = measures.total_mass(p, "angles", tol=args.tol)
        rows.append(report.result(f"plancherel mass p={p}", m, 1.0, abs(m - 1.0)))
        w = measures.total_mass(p, "omega")
        closed = 2.0 / ((p * p + 1) * (p + 1) ** 2)
        rows.append(report.result(f"literal mu_p mass p={p}", w, closed, abs(w - closed)))
    _json(args, "mass", {"p": args.p_list, "tol": args.tol}, rows)
    return 0


def cmd_sample(args) -> int:
    ds = dataset.synth_family(args.p_list, args.n, (args.k1, args.k2), args.N, args.seed)
    if args.out:
        dataset.serialize(ds, args.out, args.format)
        return 0
    if args.format == "json":
        rows = [report.result(f"mean x p={p}", float(np.mean(ds.at_prime(p)[0]))) for p in args.p_list]
        _json(args, "sample", {"p": args.p_list, "n": args.n}, rows, args.seed)
        return 0
    _emit(_csv_rows(dataset.OMEGA_COLS, zip(ds.form_ids, ds.ps.tolist(), ds.xs, ds.ys)), None)
    return 0


def cmd_verify(args) -> int:
    results = suites.run_all(args.seed)
    rows = []
    for s in results:
        rows.extend(dict(r, name=f"{s.name}: {r['name']}") for r in s.rows)
        rows.append(report.result(f"{s.name}: passed", s.passed))
    _json(args, "verify", {"suites": [s.name for s in results]}, rows, args.seed)
    for i, s in enumerate(results, start=1):
        status = "PASS" if s.passed else "FAIL"
        extra = "" if s.passed else "  " + "; ".join(s.notes)
        print(f"[{status}] {i:2d} {s.name}{extra}", file=sys.stderr)
    return 0 if all(s.passed for s in results) else 1


def _spin(args):
    return angles_to_spin(SatakeAngles(args.theta1, args.theta2, args.p))


def cmd_hecke(args) -> int:
    spin = _spin(args)
    sysm = hecke.HeckeEigSystem.from_spin(spin, args.p)
    x, y = 2 * math.cos(args.theta1), 2 * math.cos(args.theta2)
    rows = [
        report.result("lambda'(p)", sysm.lam1, x + y, abs(sysm.lam1 - x - y)),
        report.result("lambda'(p^2)", sysm.lam2),
        report.result("b_F(p)", hecke.b1_from_eigs(sysm), 1 + x * y, abs(hecke.b1_from_eigs(sysm) - 1 - x * y)),
        report.result("a_F(p^2) power sum", hecke.a2_from_eigs(sysm), hecke.spin_power_sum(spin, 2)),
        report.result("h2 complete sum", hecke.h2_spin(sysm)),
        report.result("lambda'_t2", sysm.lam_t2),
        report.result("lambda'_t1^2", sysm.lam_t1sq),
    ]
    _json(args, "hecke", {"theta1": args.theta1, "theta2": args.theta2, "p": args.p}, rows)
    return 0


def cmd_char(args) -> int:
    w = ch.Weight(args.k1, args.k2)
    l = w.hc_param
    g = ch.CartanElement(args.cartan, args.c1, args.c2)
    v = ch.character_value(l, g)
    rows = [
        report.result("Theta real", v.real),
        report.result("Theta imag", v.imag),
        report.result("GSp character", ch.gsp_character(l, args.z, g, xi=w).real),
        report.result("limit at delta1", ch.singular_limit_delta1(l)),
        report.result("limit at u_min", ch.singular_limit_umin(l)),
        report.result("dim xi", ch.dim_weyl(args.k1 - 3, args.k2 - 3)),
        report.result("formal degree", ch.formal_degree(w)),
    ]
    _json(args, "char", {"k1": args.k1, "k2": args.k2, "cartan": args.cartan, "coords": [args.c1, args.c2],
                         "z": args.z}, rows)
    return 0


def cmd_euler(args) -> int:
    spin = _spin(args)
    fs = lfun.spin_euler(spin, args.p)
    ft = lfun.std_euler(spin_to_standard(spin), args.p)
    rows = [report.result(f"spin Q c{i}", c) for i, c in enumerate(fs.coefficients)]
    rows += [report.result(f"std Q c{i}", c) for i, c in enumerate(ft.coefficients)]
    d = max(args.n, 1)
    rows += [report.result(f"a_F(p^{i})", v) for i, v in enumerate(lfun.log_deriv_coeffs(fs, d), start=1)]
    rows += [report.result(f"b_F(p^{i})", v) for i, v in enumerate(lfun.log_deriv_coeffs(ft, d), start=1)]
    local = lfun._inverse_series(fs.coefficients, d)
    rows += [report.result(f"lambda~(p^{i})", v) for i, v in enumerate(local[1:], start=1)]
    _json(args, "euler", {"theta1": args.theta1, "theta2": args.theta2, "p": args.p, "n": d}, rows)
    return 0


def cmd_density(args) -> int:
    phi = onelevel.fejer(args.u)
    rows = [
        report.result("prediction spin", onelevel.prediction(phi, "spin")),
        report.result("prediction std", onelevel.prediction(phi, "std")),
    ]
    inputs = {"u": args.u}
    if args.data:
        ds = dataset.ingest(args.data)
        log_c = args.log_c if args.log_c is not None else ds.log_conductor()
        inputs.update(data=str(args.data), log_c=log_c)
        for kind in ("spin", "std"):
            for order in (1, 2):
                v = onelevel.explicit_prime_sum(ds, phi, log_c, order, kind)
                rows.append(report.result(f"{kind} prime sum order {order}", v))
    _json(args, "density", inputs, rows)
    return 0


def cmd_report(args) -> int:
    ds = dataset.ingest(args.data)
    rows = [r.as_dict() for r in stats.equidist_report(ds, args.p, ["1", "x", "y", "xy", "x2"])]
    xs, ys = ds.at_prime(args.p)
    ks = stats.kolmogorov_distance(xs, ys, args.p)
    rows.append(report.result("Kolmogorov distance", ks))
    _json(args, "report", {"data": str(args.data), "p": args.p}, rows)
    return 0


def cmd_budget(args) -> int:
    b = stats.error_budget(args.aspect, args.p, args.kappa, args.k1, args.k2, args.N)
    rows = [report.result(k, getattr(b, k)) for k in ("A", "B1", "B2", "remainder")]
    rows.append(report.result("phi(N)", b.phi_N))
    _json(args, "budget", {"aspect": args.aspect, "p": args.p, "kappa": args.kappa, "k1": args.k1,
                           "k2": args.k2, "N": args.N}, rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gsp4lab", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(fn=fn)
        sp.add_argument("--out", default=None, help="write output to this file")
        sp.add_argument("--format", choices=("csv", "json"), default="json")
        return sp

    sp = add("measure", cmd_measure, "density grid")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--n", type=int, default=200)
    sp.add_argument("--domain", choices=("omega", "angles"), default="omega")

    sp = add("mass", cmd_mass, "total Plancherel and mu_p masses")
    sp.add_argument("--p", dest="p_list", type=float, nargs="+", required=True)
    sp.add_argument("--tol", type=float, default=1e-13)

    sp = add("sample", cmd_sample, "synthetic family")
    sp.add_argument("--p", dest="p_list", type=int, nargs="+", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--k1", type=int, default=3)
    sp.add_argument("--k2", type=int, default=3)
    sp.add_argument("--N", type=int, default=1)

    sp = add("verify", cmd_verify, "run all invariant suites")
    sp.add_argument("--seed", type=int, default=1)

    for name, fn, help_ in (("hecke", cmd_hecke, "eigenvalue identities"), ("euler", cmd_euler, "Euler factors")):
        sp = add(name, fn, help_)
        sp.add_argument("--theta1", type=float, required=True)
        sp.add_argument("--theta2", type=float, required=True)
        sp.add_argument("--p", type=int, required=True)
        if name == "euler":
            sp.add_argument("--n", type=int, default=4)

    sp = add("char", cmd_char, "character values")
    sp.add_argument("--k1", type=int, required=True)
    sp.add_argument("--k2", type=int, required=True)
    sp.add_argument("--cartan", choices=ch.CARTAN_TAGS, default="T4")
    sp.add_argument("--c1", type=float, required=True)
    sp.add_argument("--c2", type=float, required=True)
    sp.add_argument("--z", type=float, default=1.0)

    sp = add("density", cmd_density, "one-level density prediction and prime sums")
    sp.add_argument("--u", type=float, default=1.0)
    sp.add_argument("--data", default=None)
    sp.add_argument("--log-c", dest="log_c", type=float, default=None)

    sp = add("report", cmd_report, "equidistribution report")
    sp.add_argument("--data", required=True)
    sp.add_argument("--p", type=int, required=True)

    sp = add("budget", cmd_budget, "error budget shapes")
    sp.add_argument("--aspect", choices=("level", "weight"), required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--kappa", type=float, default=1.0)
    sp.add_argument("--k1", type=int, required=True)
    sp.add_argument("--k2", type=int, required=True)
    sp.add_argument("--N", type=int, required=True)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, KeyError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
