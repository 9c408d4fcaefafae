"""Command-line interface.

Subcommands: ``moments``, ``verify``, ``offset-scan``, ``stekloff``,
``optimize``, ``random``.  Every run writes ``report.json`` into the output
directory; ``--format tabular`` additionally emits CSV tables with PNG
figures rendered alongside.  Exit codes: 0 success, 1 input or hypothesis
error, 2 inequality violation (an implementation-bug signal, since every
checked inequality is a proven theorem).
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import inequalities, offsets, optimize, randomshapes, stekloff
from .errors import ShapeError, ShapeFileError
from .fourier import FourierBoundary, reparametrize_constant_speed
from .ops import is_convex, moments, shape_kind
from .report import (
    curve,
    emit_plot_data,
    make_report,
    moment_summary_dict,
    write_report,
)
from .shapeio import load_shape, save_shape

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_VIOLATION = 2


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default="isomoment_out", help="output directory")
    p.add_argument("--format", choices=("report", "tabular"), default="report",
                   help="'tabular' also emits CSV tables and PNG figures")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isomoment", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", help="moment functionals of a shape")
    p.add_argument("--shape", required=True, nargs="+", help="shape JSON file(s)")
    _add_common(p)

    p = sub.add_parser("verify", help="evaluate isoperimetric inequalities")
    p.add_argument("--shape", required=True, nargs="+", help="shape JSON file(s)")
    p.add_argument("--ids", default="all",
                   help="comma-separated inequality ids or 'all'")
    _add_common(p)

    p = sub.add_parser("offset-scan", help="parallel-body expansion and concavity scan")
    p.add_argument("--shape", required=True, help="convex polygon JSON file")
    p.add_argument("--count", type=int, default=12, help="offset grid size")
    _add_common(p)

    p = sub.add_parser("stekloff", help="Stekloff eigenvalue bounds")
    p.add_argument("--shape", required=True, help="2D shape JSON file")
    p.add_argument("--degree", type=int, default=14, help="maximum harmonic degree")
    p.add_argument("--tol", type=float, default=1e-10, help="sweep stopping tolerance")
    _add_common(p)

    p = sub.add_parser("optimize", help="minimize the boundary-moment product at fixed area")
    p.add_argument("--shape", help="initial Fourier boundary JSON file")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for a perturbed-circle start when --shape is omitted")
    p.add_argument("--count", type=int, default=1, help="number of multistart runs")
    p.add_argument("--degree", type=int, default=8, help="Fourier truncation order")
    p.add_argument("--tol", type=float, default=1e-9, help="relative area tolerance")
    _add_common(p)

    p = sub.add_parser("random", help="generate seeded random shapes")
    p.add_argument("--kind", required=True,
                   choices=("convex-polygon", "star-fourier", "convex-fourier",
                            "simplicial-box-perturbation"))
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--dimension", type=int, default=3,
                   help="dimension for simplicial bodies")
    p.add_argument("--amplitude", type=float, default=None,
                   help="perturbation amplitude where applicable")
    p.add_argument("--normalize-area", type=float, default=None,
                   help="rescale 2D shapes to this area")
    _add_common(p)
    return parser


def _finish(args, report: dict, figures_of=None) -> None:
    out = Path(args.out)
    write_report(report, out / "report.json")
    if args.format == "tabular":
        emit_plot_data(report, out)
        if figures_of:
            from .plotting import render_shape

            for name, shape in figures_of:
                render_shape(shape, out / f"{name}.png", title=name)


def cmd_moments(args) -> int:
    started = time.perf_counter()
    items = []
    shapes = []
    for path in args.shape:
        shape = load_shape(path)
        shapes.append((Path(path).stem, shape))
        items.append({
            "name": Path(path).stem,
            "kind": shape_kind(shape),
            "moments": moment_summary_dict(moments(shape)),
        })
    report = make_report(args.argv, items, {"shapes": len(items)}, started)
    _finish(args, report, figures_of=shapes)
    return EXIT_OK


def cmd_verify(args) -> int:
    started = time.perf_counter()
    ids = inequalities.INEQUALITY_IDS if args.ids == "all" \
        else tuple(s.strip() for s in args.ids.split(","))
    for ineq in ids:
        if ineq not in inequalities.INEQUALITY_IDS:
            raise ShapeFileError(f"unknown inequality id {ineq!r}")
    shapes = [(Path(p).stem, load_shape(p)) for p in args.shape]
    records, summary = inequalities.batch_verify([s for _, s in shapes], ids)
    items = []
    for idx, ineq, result in records:
        entry = {"shape": shapes[idx][0], "inequality": ineq}
        if isinstance(result, Exception):
            entry["error"] = f"{type(result).__name__}: {result}"
        else:
            entry.update(result.as_dict())
        items.append(entry)
    report = make_report(args.argv, items, {
        "total": summary.total,
        "holds": summary.holds,
        "equalities": summary.equalities,
        "violations": summary.violations,
        "errors": summary.errors,
    }, started)
    _finish(args, report)
    if summary.violations:
        return EXIT_VIOLATION
    if summary.errors:
        return EXIT_INPUT_ERROR
    return EXIT_OK


def cmd_offset_scan(args) -> int:
    started = time.perf_counter()
    shape = load_shape(args.shape)
    if shape_kind(shape) != "polygon" or not shape.is_convex():
        raise ShapeFileError("offset-scan needs a convex polygon shape")
    grid = offsets.chebyshev_grid(args.count)
    items = []
    name = Path(args.shape).stem
    for axis in range(2):
        fit = offsets.fit_expansion(shape, axis, grid)
        scan = offsets.concavity_scan(shape, "J", axis, grid)
        values = [offsets.offset_moments(shape, h).J[axis] for h in grid]
        items.append({
            "name": f"{name}_axis{axis}",
            "axis": axis,
            "fit_coefficients": list(fit.coefficients),
            "fit_residual": fit.residual,
            "base_J": fit.coefficients[0],
            "base_I": fit.coefficients[1],
            "concave": scan.is_concave(),
            "initial_slope": scan.initial_slope,
            "ball_slope": scan.ball_slope,
            "curves": {
                "offset_moments": curve(
                    ["h", "J", "root_transform"],
                    [(h, v, g) for h, v, g in zip(grid, values, scan.g_values)],
                ),
            },
        })
    vol = offsets.concavity_scan(shape, "volume", h_grid=grid)
    items.append({
        "name": f"{name}_volume",
        "functional": "volume",
        "concave": vol.is_concave(),
        "initial_slope": vol.initial_slope,
        "ball_slope": vol.ball_slope,
        "curves": {
            "root_volume": curve(["h", "root_transform"],
                                 list(zip(vol.h_grid, vol.g_values))),
        },
    })
    ok = all(i.get("concave", True) for i in items)
    report = make_report(args.argv, items, {"concave": ok}, started)
    _finish(args, report)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_stekloff(args) -> int:
    started = time.perf_counter()
    shape = load_shape(args.shape)
    name = Path(args.shape).stem
    cb = stekloff.coordinate_bounds(shape)
    sweep = stekloff.converge_spectrum(shape, max_degree=args.degree, tol=args.tol)
    lead = min(6, len(sweep.bounds))
    history_rows = [
        (deg, *bounds[:lead], *([math.nan] * max(0, lead - len(bounds))))
        for deg, bounds in sweep.history
    ]
    item = {
        "name": name,
        "coordinate_bounds": list(cb.bounds),
        "coordinate_product": cb.product_first_n,
        "method": sweep.method,
        "converged": sweep.converged,
        "bounds": list(sweep.bounds[:8]),
        "curves": {
            "convergence": curve(
                ["degree"] + [f"p{k + 2}" for k in range(lead)], history_rows),
        },
    }
    summary = {"converged": sweep.converged}
    if is_convex(shape):
        chain = stekloff.spectral_chain_check(shape, max_degree=args.degree, tol=args.tol)
        item["chain"] = {
            "product_spectrum": chain.product_spectrum,
            "product_bound": chain.product_bound,
            "ball_product": chain.ball_product,
            "reciprocal_sum": chain.reciprocal_sum,
            "ball_reciprocal_sum": chain.ball_reciprocal_sum,
            "holds": chain.holds(),
        }
        summary["chain_holds"] = chain.holds()
    report = make_report(args.argv, [item], summary, started)
    _finish(args, report)
    if summary.get("chain_holds") is False:
        return EXIT_VIOLATION
    return EXIT_OK


def _perturbed_circle(seed: int, order: int) -> FourierBoundary:
    rng = np.random.default_rng(seed)
    fb = FourierBoundary.circle(order=order)
    a = fb.a.copy()
    ap = fb.ap.copy()
    b = fb.b.copy()
    bp = fb.bp.copy()
    weights = rng.uniform(-1.0, 1.0, (4, order - 1)) / np.arange(2, order + 1) ** 2
    total = np.sum(np.abs(weights)) or 1.0
    weights *= min(1.0, 0.2 / total) * rng.uniform(0.5, 1.0)
    a[1:] += weights[0]
    ap[1:] += weights[1]
    b[1:] += weights[2]
    bp[1:] += weights[3]
    return FourierBoundary(0.0, 0.0, a, ap, b, bp)


def cmd_optimize(args) -> int:
    started = time.perf_counter()
    problem = optimize.OptimizationProblem(order=args.degree, area_tol=args.tol)
    items = []
    finals = []
    all_ok = True
    for run in range(args.count):
        if args.shape:
            initial = load_shape(args.shape)
            if shape_kind(initial) != "fourier":
                raise ShapeFileError("optimize needs a Fourier boundary start")
            name = Path(args.shape).stem if args.count == 1 else f"{Path(args.shape).stem}_{run}"
        else:
            initial = _perturbed_circle(args.seed + run, args.degree)
            name = f"start{args.seed + run}"
        trace = optimize.minimize_product(initial, problem)
        last = trace.entries[-1]
        const_speed = reparametrize_constant_speed(trace.final, 4 * args.degree)
        station = optimize.stationarity_report(const_speed)
        items.append({
            "name": name,
            "verdict": trace.verdict,
            "converged": trace.converged,
            "objective": last.objective,
            "disc_objective": problem.target_area ** 3 / math.pi,
            "area_residual": last.area_residual,
            "grad_norm": last.grad_norm,
            "multiplier": last.multiplier,
            "stationarity_multiplier": station.lam,
            "active_modes": list(station.active_modes),
            "evaluations": trace.evaluations,
            "curves": {
                "trace": curve(
                    ["iteration", "objective", "area_residual", "speed_residual",
                     "grad_norm", "multiplier"],
                    [(e.iteration, e.objective, e.area_residual, e.speed_residual,
                      e.grad_norm, e.multiplier) for e in trace.entries]),
            },
        })
        finals.append((f"{name}_final", trace.final))
        all_ok = all_ok and trace.converged
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        save_shape(trace.final, out / f"{name}_final.json", name=f"{name}_final")
    report = make_report(args.argv, items, {"runs": args.count, "all_converged": all_ok},
                         started)
    _finish(args, report, figures_of=finals)
    return EXIT_OK if all_ok else EXIT_INPUT_ERROR


def cmd_random(args) -> int:
    started = time.perf_counter()
    params = {}
    if args.kind == "simplicial-box-perturbation":
        params["dimension"] = args.dimension
        if args.amplitude is not None:
            params["amplitude"] = args.amplitude
    else:
        if args.amplitude is not None:
            params["amplitude"] = args.amplitude
        if args.normalize_area is not None:
            params["normalize_area"] = args.normalize_area
    shapes = randomshapes.generate_random(args.kind, args.seed, args.count, **params)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    items = []
    figures = []
    for i, shape in enumerate(shapes):
        name = f"{args.kind.replace('-', '_')}_{args.seed}_{i}"
        save_shape(shape, out / f"{name}.json", name=name)
        items.append({"name": name, "kind": shape_kind(shape), "file": f"{name}.json"})
        figures.append((name, shape))
    report = make_report(args.argv, items, {"count": len(items)}, started)
    _finish(args, report, figures_of=figures)
    return EXIT_OK


_HANDLERS = {
    "moments": cmd_moments,
    "verify": cmd_verify,
    "offset-scan": cmd_offset_scan,
    "stekloff": cmd_stekloff,
    "optimize": cmd_optimize,
    "random": cmd_random,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = list(argv) if argv is not None else sys.argv[1:]
    try:
        code = _HANDLERS[args.command](args)
    except (ShapeFileError, ShapeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    if code == EXIT_VIOLATION:
        print("error: inequality violation detected (implementation bug?)", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
