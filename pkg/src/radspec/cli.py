"""Command-line surface: machine-readable datasets and verification reports.

Subcommands: truncate (isolated truncation points), spectrum (numeric
branch samples), verify (invariant suites with a pass/fail table), figure
(the full point/curve/parabola dataset plus a plot script), fit
(constrained cubic per branch), energy (map reduced eigenvalues to
physical energies, optionally sweeping the cyclotron frequency).

Exit codes: 0 success, 1 verification or domain failure, 2 usage error.
Datasets are CSV (or JSON via --format); re-reading and re-emitting a CSV
reproduces it byte for byte.
"""

from __future__ import annotations

import csv
import json

import click
import numpy as np

from .analysis import (
    DegenerateFit,
    InvalidAlpha,
    InvalidMass,
    PhysicalParams,
    PUBLISHED_CUBICS,
    branch_fit_points,
    compare_fit_to_published,
    fit_cubic,
    map_physical_to_nu,
    map_W_to_E,
    match_truncation_to_curves,
    truncation_point_set,
)
from .frobenius import (
    IndexOutOfRange,
    ReducedProblem,
    RootRefinementFailure,
    ode_residual,
    polynomial_solution,
    root_isolation,
    truncation_energy,
    truncation_roots,
)
from .spectrum import SolverConfig, SolverError, curve_scan, hft_check, solve_spectrum

_MODULE_ERRORS = (
    DegenerateFit, InvalidAlpha, InvalidMass, SolverError,
    RootRefinementFailure, IndexOutOfRange, ValueError,
)


def _emit_rows(header: list[str], rows: list[list], fmt: str, out: str) -> None:
    with click.open_file(out, "w") as f:
        if fmt == "csv":
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
        else:
            f.write(json.dumps([dict(zip(header, row)) for row in rows], indent=2))
            f.write("\n")


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None,
              help="JSON file of per-subcommand flag defaults; explicit flags override.")
@click.pass_context
def main(ctx, config_path):
    """Two routes to a radial oscillator spectrum, cross-validated."""
    if config_path:
        with open(config_path) as f:
            ctx.default_map = json.load(f)


@main.command()
@click.option("--l", "l", type=int, default=0, show_default=True)
@click.option("--n-max", type=int, default=22, show_default=True)
@click.option("--i-max", type=int, default=3, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
@click.option("--out", type=click.Path(allow_dash=True), default="-", show_default=True)
def truncate(l, n_max, i_max, fmt, out):
    """Emit truncation points (l, n, i, nu, W), roots in decreasing order."""
    try:
        points = truncation_point_set(n_max, i_max, l)
    except _MODULE_ERRORS as exc:
        raise click.exceptions.Exit(_fail(exc))
    rows = [[pt.l, pt.n, pt.i, pt.nu_root, pt.W] for pt in points]
    _emit_rows(["l", "n", "i", "nu", "W"], rows, fmt, out)


@main.command()
@click.option("--l", "l", type=int, default=0, show_default=True)
@click.option("--branches", type=int, default=3, show_default=True)
@click.option("--nu", "nu_values", type=float, multiple=True,
              help="Coupling value; repeatable.")
@click.option("--nu-min", type=float, default=None)
@click.option("--nu-max", type=float, default=None)
@click.option("--nu-count", type=int, default=None)
@click.option("--grid-points", type=int, default=5000, show_default=True)
@click.option("--r-max", type=float, default=None,
              help="Domain cutoff; default grows with |nu|.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
@click.option("--out", type=click.Path(allow_dash=True), default="-", show_default=True)
def spectrum(l, branches, nu_values, nu_min, nu_max, nu_count, grid_points, r_max,
             fmt, out):
    """Emit numeric branch samples (l, j, nu, W)."""
    if nu_values:
        grid = sorted(set(nu_values))
    elif nu_min is not None and nu_max is not None and nu_count is not None:
        grid = list(np.linspace(nu_min, nu_max, nu_count))
    else:
        raise click.UsageError("give --nu values or --nu-min/--nu-max/--nu-count")
    config = SolverConfig(r_max=r_max, grid_points=grid_points, levels=branches)
    try:
        curves = curve_scan(l, branches, grid, config)
    except _MODULE_ERRORS as exc:
        raise click.exceptions.Exit(_fail(exc))
    rows = [[c.l, c.j, nu, W] for c in curves for nu, W in c.samples]
    _emit_rows(["l", "j", "nu", "W"], rows, fmt, out)


def _fail(exc) -> int:
    click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
    return 1


# --- verification suites ---------------------------------------------------

def _verify_roots(ls, n_max):
    checks = []
    for l in ls:
        worst = 0.0
        ok = True
        detail = ""
        for n in range(n_max + 1):
            iso = root_isolation(n, l)
            if not iso.all_real:
                ok, detail = False, f"n={n}: {iso.real_count}/{iso.degree} real roots"
                break
            zeros = [r for r in iso.roots if r == 0.0]
            if bool(zeros) != ((n + 1) % 2 == 1):
                ok, detail = False, f"n={n}: zero-root parity violated"
                break
            for idx, r in enumerate(iso.roots):
                mirror = iso.roots[len(iso.roots) - 1 - idx]
                worst = max(worst, abs(r + mirror))
                sol = polynomial_solution(n, idx + 1, l)
                worst = max(worst, abs(sol.W + r * r / 4 - 2 * (n + abs(l) + 1)))
        if ok:
            detail = f"n<={n_max}; worst symmetry/parabola defect {worst:.2e}"
            ok = worst <= 1e-10
        checks.append((f"roots l={l}", ok, detail))
    return checks


def _verify_residual(ls, n_max, tol, n_single=None, i_single=None):
    radii = np.linspace(0.1, 10.0, 100)
    checks = []
    for l in ls:
        if n_single is not None:
            targets = [(n_single, i_single or 1)]
        else:
            targets = [(n, i) for n in range(n_max + 1) for i in range(1, n + 2)]
        worst, where = 0.0, None
        for n, i in targets:
            sol = polynomial_solution(n, i, l)
            for r in radii:
                res = abs(ode_residual(sol, float(r), relative=True))
                if res > worst:
                    worst, where = res, (n, i, float(r))
        checks.append((f"residual l={l}", worst <= tol,
                       f"max {worst:.2e} at (n,i,r)={where}, tol {tol:g}"))
    return checks


def _verify_hft(ls, tol, nu_single=None, branch=0):
    checks = []
    cfg = SolverConfig()
    bound = max(tol, 10 * cfg.convergence_tol / 1e-4)
    if nu_single is not None:
        cases = [(ls[0], nu_single, branch)]
    else:
        cases = [(l, nu, j) for l in ls for nu in (0.0, 2.5, 5.0) for j in (0, 1, 2)]
    for l, nu, j in cases:
        res = hft_check(ReducedProblem(l, nu), j, config=cfg)
        ok = res.discrepancy <= bound and res.dW_dnu > 0
        checks.append((f"hft l={l} nu={nu:g} j={j}", ok,
                       f"dW/dnu={res.dW_dnu:.7f} <r>={res.r_expectation:.7f} "
                       f"diff={res.discrepancy:.2e}"))
    return checks


def _verify_match(ls, n_max, i_max, tol):
    checks = []
    for l in ls:
        report = match_truncation_to_curves(truncation_point_set(n_max, i_max, l), tol)
        if report.all_passed:
            worst = max(r.distance for r in report.results)
            detail = f"{len(report.results)} points on branch i-1, max |dW| {worst:.2e}"
        else:
            f0 = report.failures[0]
            detail = (f"{len(report.failures)} failures, first at "
                      f"(n={f0.n}, i={f0.i}, l={f0.l}, nu={f0.nu:.6f})")
        checks.append((f"match l={l}", report.all_passed, detail))
    return checks


@main.command()
@click.option("--hft", "do_hft", is_flag=True)
@click.option("--match", "do_match", is_flag=True)
@click.option("--residual", "do_residual", is_flag=True)
@click.option("--all", "do_all", is_flag=True)
@click.option("--l", "ls", type=int, multiple=True,
              help="Momentum scope; repeatable. Default 0 1 2.")
@click.option("--n-max", type=int, default=12, show_default=True)
@click.option("--i-max", type=int, default=3, show_default=True)
@click.option("--n", "n_single", type=int, default=None, help="Single order for --residual.")
@click.option("--i", "i_single", type=int, default=None, help="Single root index for --residual.")
@click.option("--nu", "nu_single", type=float, default=None, help="Single coupling for --hft.")
@click.option("--branch", type=int, default=0, show_default=True)
@click.option("--match-tol", type=float, default=1e-6, show_default=True)
@click.option("--hft-tol", type=float, default=1e-4, show_default=True)
@click.option("--residual-tol", type=float, default=1e-8, show_default=True)
@click.option("--out", type=click.Path(allow_dash=True), default=None,
              help="Also write the report as JSON.")
@click.pass_context
def verify(ctx, do_hft, do_match, do_residual, do_all, ls, n_max, i_max,
           n_single, i_single, nu_single, branch, match_tol, hft_tol,
           residual_tol, out):
    """Run invariant suites and print a pass/fail table."""
    if not (do_hft or do_match or do_residual or do_all):
        raise click.UsageError("select a suite: --hft, --match, --residual or --all")
    ls = list(ls) if ls else [0, 1, 2]
    checks = []
    try:
        if do_all:
            checks += _verify_roots(ls, n_max)
        if do_residual or do_all:
            checks += _verify_residual(ls, n_max, residual_tol, n_single, i_single)
        if do_hft or do_all:
            checks += _verify_hft(ls, hft_tol, nu_single, branch)
        if do_match or do_all:
            checks += _verify_match(ls, n_max, i_max, match_tol)
    except _MODULE_ERRORS as exc:
        raise click.exceptions.Exit(_fail(exc))
    for name, ok, detail in checks:
        click.echo(f"{'PASS' if ok else 'FAIL'}  {name:<24} {detail}")
    all_ok = all(ok for _, ok, _ in checks)
    click.echo(f"{'all checks passed' if all_ok else 'FAILURES present'} "
               f"({sum(ok for _, ok, _ in checks)}/{len(checks)})")
    if out:
        with click.open_file(out, "w") as f:
            json.dump({"all_passed": all_ok,
                       "checks": [{"name": n, "passed": p, "detail": d}
                                  for n, p, d in checks]}, f, indent=2)
            f.write("\n")
    ctx.exit(0 if all_ok else 1)


_PLOT_SCRIPT = '''\
#!/usr/bin/env python3
"""Plot truncation points, numeric branches, and the n=10 parabola."""
import csv
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = Path(__file__).resolve().parent


def read(name):
    with open(HERE / name, newline="") as f:
        return list(csv.DictReader(f))


curves = read("curves.csv")
points = read("points.csv")
parabola = read("parabola.csv")

fig, ax = plt.subplots(figsize=(7.0, 5.0))
for j in sorted({row["j"] for row in curves}, key=int):
    xs = [float(r["nu"]) for r in curves if r["j"] == j]
    ys = [float(r["W"]) for r in curves if r["j"] == j]
    ax.plot(xs, ys, lw=1.3, label=f"branch j={j}")
ax.plot([float(r["nu"]) for r in parabola], [float(r["W"]) for r in parabola],
        "k--", lw=1.0, label="n=10 truncation parabola")
ax.plot([float(r["nu"]) for r in points], [float(r["W"]) for r in points],
        "o", ms=4.5, mfc="none", color="crimson", label="truncation points")
ax.set_xlabel("nu")
ax.set_ylabel("W")
ax.set_ylim(0, None)
ax.legend(loc="upper left")
fig.tight_layout()
fig.savefig(HERE / "figure.png", dpi=150)
print(f"wrote {HERE / 'figure.png'}")
'''


@main.command()
@click.option("--out-dir", type=click.Path(file_okay=False), required=True)
@click.option("--curve-samples", type=int, default=241, show_default=True,
              help="Uniform curve grid size; truncation abscissae are added to it.")
@click.pass_context
def figure(ctx, out_dir, curve_samples):
    """Emit the l=0 dataset: points.csv, curves.csv, parabola.csv, plot script."""
    import os
    os.makedirs(out_dir, exist_ok=True)
    try:
        points = [pt for pt in truncation_point_set(22, 3, 0) if pt.nu_root >= 0]
        nu_top = truncation_roots(22, 0)[0]
        grid = sorted(set(np.linspace(0.0, nu_top, curve_samples))
                      | {pt.nu_root for pt in points})
        curves = curve_scan(0, 3, grid)
    except _MODULE_ERRORS as exc:
        raise click.exceptions.Exit(_fail(exc))
    _emit_rows(["l", "n", "i", "nu", "W"],
               [[pt.l, pt.n, pt.i, pt.nu_root, pt.W] for pt in points],
               "csv", os.path.join(out_dir, "points.csv"))
    _emit_rows(["l", "j", "nu", "W"],
               [[c.l, c.j, nu, W] for c in curves for nu, W in c.samples],
               "csv", os.path.join(out_dir, "curves.csv"))
    _emit_rows(["kind", "nu", "W"],
               [["parabola_n10", nu, truncation_energy(10, 0, nu)] for nu in grid],
               "csv", os.path.join(out_dir, "parabola.csv"))
    script = os.path.join(out_dir, "plot_figure.py")
    with open(script, "w") as f:
        f.write(_PLOT_SCRIPT)
    click.echo(f"wrote points.csv, curves.csv, parabola.csv, plot_figure.py to {out_dir}")


@main.command()
@click.option("--l", "l", type=int, default=0, show_default=True)
@click.option("--branch", type=int, default=0, show_default=True)
@click.option("--n-max", type=int, default=22, show_default=True)
@click.option("--out", type=click.Path(allow_dash=True), default=None,
              help="Also write the fit report as JSON.")
@click.pass_context
def fit(ctx, l, branch, n_max, out):
    """Constrained cubic through one branch's truncation points."""
    intercept = float(2 * (2 * branch + abs(l) + 1))
    try:
        pts = branch_fit_points(l, branch, n_max)
        model = fit_cubic(pts, intercept, branch=branch, l=l)
    except _MODULE_ERRORS as exc:
        raise click.exceptions.Exit(_fail(exc))
    b1, b2, b3 = model.coefficients
    click.echo(f"branch j={branch}, l={l}: {len(pts)} points, "
               f"nu in [{model.fit_domain[0]:.6f}, {model.fit_domain[1]:.6f}]")
    click.echo(f"W = {model.intercept:g} + ({b1:.10g}) nu + ({b2:.10g}) nu^2 "
               f"+ ({b3:.10g}) nu^3")
    click.echo(f"rms residual {model.rms_residual:.3e}")
    report = {"j": branch, "l": l, "intercept": model.intercept,
              "coefficients": [b1, b2, b3], "rms_residual": model.rms_residual,
              "fit_domain": list(model.fit_domain), "points": len(pts)}
    if l == 0 and branch in PUBLISHED_CUBICS:
        comp = compare_fit_to_published(model)
        click.echo(f"max deviation from published cubic: {comp.max_deviation:.4f} "
                   f"over nu in [{comp.nu_lo:.4f}, {comp.nu_hi:.4f}]")
        report["max_deviation_from_published"] = comp.max_deviation
    if out:
        with click.open_file(out, "w") as f:
            json.dump(report, f, indent=2)
            f.write("\n")


@main.command()
@click.option("--m", type=float, default=1.0, show_default=True)
@click.option("--a", type=float, default=0.0, show_default=True)
@click.option("--theta", type=float, default=None)
@click.option("--varpi", type=float, default=0.0, show_default=True)
@click.option("--l", "l", type=int, default=0, show_default=True)
@click.option("--branch", type=int, default=0, show_default=True)
@click.option("--W", "w_values", type=float, multiple=True,
              help="Map explicit reduced eigenvalues instead of solving.")
@click.option("--theta-min", type=float, default=None)
@click.option("--theta-max", type=float, default=None)
@click.option("--theta-steps", type=int, default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
@click.option("--out", type=click.Path(allow_dash=True), default="-", show_default=True)
def energy(m, a, theta, varpi, l, branch, w_values, theta_min, theta_max,
           theta_steps, fmt, out):
    """Physical energies from reduced eigenvalues; sweep theta to see continuity."""
    try:
        if w_values:
            if theta is None:
                raise click.UsageError("--W needs --theta")
            p = PhysicalParams(m=m, a=a, theta=theta, varpi=varpi, l=l)
            rows = [[W, map_W_to_E(W, p)] for W in w_values]
            _emit_rows(["W", "E"], rows, fmt, out)
            return
        if theta_min is not None and theta_max is not None and theta_steps is not None:
            thetas = np.linspace(theta_min, theta_max, theta_steps)
        elif theta is not None:
            thetas = [theta]
        else:
            raise click.UsageError(
                "give --W and --theta, a single --theta, or a sweep "
                "--theta-min/--theta-max/--theta-steps")
        config = SolverConfig(levels=branch + 1)
        rows = []
        for th in thetas:
            p = PhysicalParams(m=m, a=a, theta=float(th), varpi=varpi, l=l)
            nu = map_physical_to_nu(p)
            W = solve_spectrum(ReducedProblem(l, nu), config)[branch].W
            rows.append([float(th), map_W_to_E(W, p)])
        _emit_rows(["theta", "E"], rows, fmt, out)
    except _MODULE_ERRORS as exc:
        raise click.exceptions.Exit(_fail(exc))


if __name__ == "__main__":
    main()
