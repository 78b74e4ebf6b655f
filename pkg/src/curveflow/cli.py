"""Command line entry point ``curveflow``."""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

import numpy as np

from . import kernels as K
from .bench import COLUMNS as BENCH_COLUMNS
from .bench import bench_wmc
from .core import CurveflowError, merge_channels, per_channel, set_threads, split_channels
from .energies import KINDS, EnergyConfig, energy, integrand
from .flow import FlowConfig, mc_flow
from .imageio import load_image, save_image
from .metrics import ssim
from .operators import OPERATORS, apply_operator
from .solvers import SolveReport, SolverConfig, solve
from .stats import (
    SCATTER_COLUMNS,
    FitError,
    area_grad_scatter,
    corpus_stats,
    fit_sparsity_model,
    write_csv,
    write_stats,
)

log = logging.getLogger("curveflow")

SMOOTH_MODELS = {"l1": "l1_area", "l2": "l2_area", "tv": "l2_epstv"}


def _png_next_to(path) -> Path:
    return Path(path).with_suffix(".png")


def cmd_kernels(args) -> int:
    if args.spectrum:
        s = K.kernel(args.spectrum)
        mag = K.spectral_magnitude(s, args.grid)
        n = args.grid
        rows = ((ky, kx, 2 * np.pi * (kx if kx <= n // 2 else kx - n) / n,
                 2 * np.pi * (ky if ky <= n // 2 else ky - n) / n, float(mag[ky, kx]))
                for ky in range(n) for kx in range(n))
        header = ("ky", "kx", "wx", "wy", "magnitude")
        if args.out:
            write_csv(args.out, header, rows)
            from .plotting import plot_spectrum
            plot_spectrum(_png_next_to(args.out), mag, f"|{s.name}| spectrum")
        else:
            w = csv.writer(sys.stdout)
            w.writerow(header)
            w.writerows(rows)
        print(f"{s.name}: anisotropy {K.anisotropy(s):.6g}", file=sys.stderr)
        return 0
    # --dump is the default action
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        csv.writer(out).writerows(K.kernels_csv_rows())
    finally:
        if args.out:
            out.close()
    return 0


def cmd_op(args) -> int:
    img = load_image(args.inp)
    val = per_channel(lambda c: apply_operator(args.kind, c), img)
    save_image(args.out, val * args.scale + args.offset)
    return 0


def cmd_energy(args) -> int:
    cfg = EnergyConfig(args.reg, q=args.q, eps=args.eps)
    channels = split_channels(load_image(args.inp))
    print(f"{sum(energy(c, cfg) for c in channels):.10g}")
    if args.integrand:
        vals = merge_channels([integrand(c, cfg) for c in channels])
        save_image(args.integrand, vals * args.scale)
    return 0


def cmd_flow(args) -> int:
    cfg = FlowConfig(scheme=args.scheme, iters=args.iters, dt=args.dt)
    out = Path(args.out)

    def snap(t, img):
        save_image(out.with_name(f"{out.stem}_{t:05d}.png"), img)

    res = mc_flow(load_image(args.inp), cfg, snapshot_every=args.snapshot_every, on_snapshot=snap)
    save_image(out, res)
    return 0


def _solve_channels(f, cfg) -> tuple[np.ndarray, SolveReport]:
    """Solve each channel; the report sums the per-channel series."""
    outs, total = [], None
    for c in split_channels(f):
        rep = solve(c, cfg)
        outs.append(rep.image)
        if total is None:
            total = rep
            continue
        n = min(total.iterations, rep.iterations)
        total.fidelity = [a + b for a, b in zip(total.fidelity[:n], rep.fidelity[:n])]
        total.regularization = [a + b for a, b in zip(total.regularization[:n], rep.regularization[:n])]
        total.converged = total.converged and rep.converged
    return merge_channels(outs), total


def cmd_smooth(args) -> int:
    cfg = SolverConfig(model=SMOOTH_MODELS[args.model], lam=args.lam, alpha=args.alpha,
                       dt=args.dt, iters=args.iters, eps=args.eps)
    img, rep = _solve_channels(load_image(args.inp), cfg)
    save_image(args.out, img)
    if args.report:
        rows = list(rep.rows())
        write_csv(args.report, ("iter", "fidelity", "regularization", "total"), rows)
        from .plotting import plot_report
        plot_report(_png_next_to(args.report), rows)
    log.info("%d iterations, converged=%s", rep.iterations, rep.converged)
    return 0


def cmd_stats(args) -> int:
    prefix = args.out_prefix
    grad, wmc = corpus_stats(args.dir)
    try:
        fit = fit_sparsity_model(wmc)
    except FitError as e:
        log.warning("sparsity fit skipped: %s", e)
        fit = None
    paths = write_stats(prefix, grad, wmc, fit)
    samples = area_grad_scatter(args.dir, prefix + "scatter.csv", max_samples=args.max_samples)
    from .plotting import plot_histograms, plot_scatter
    plot_histograms(prefix + "hist.png", grad, wmc)
    plot_scatter(prefix + "scatter.png", samples, SCATTER_COLUMNS)
    cg, cw = grad.abs_cdf(), wmc.abs_cdf()
    print(f"p(|grad|<=30)={cg[30]:.4f} p(|wmc|<=30)={cw[30]:.4f}")
    if fit is not None:
        print(f"fit: coef={fit.coef:.4f} r2={fit.r2:.4f}")
    for p in paths + [Path(prefix + "scatter.csv")]:
        log.info("wrote %s", p)
    return 0


def cmd_ssim(args) -> int:
    print(f"{ssim(load_image(args.a), load_image(args.b)):.4f}")
    return 0


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s]
    threads = [int(t) for t in str(args.threads).split(",") if t]
    rep = bench_wmc(sizes, reps=args.reps, threads=threads)
    rows = [r.as_tuple() for r in rep.rows]
    w = csv.writer(sys.stdout)
    w.writerow(BENCH_COLUMNS)
    w.writerows(rows)
    if args.out:
        write_csv(args.out, BENCH_COLUMNS, rows)
        from .plotting import plot_bench
        plot_bench(_png_next_to(args.out), rep)
    if not rep.checksums_agree():
        print("error: output checksum differs across thread counts", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="curveflow", description="Weighted mean curvature filtering tools.")
    p.add_argument("--threads", dest="global_threads", type=int, default=None,
                   help="worker threads for stencil operations (0 = all cores)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("kernels", help="dump stencils or their spectra")
    s.add_argument("--dump", action="store_true", help="print all twelve stencils as CSV")
    s.add_argument("--spectrum", metavar="NAME", choices=K.NAMES)
    s.add_argument("--grid", type=int, default=64)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_kernels)

    s = sub.add_parser("op", help="apply a pointwise operator")
    s.add_argument("--kind", required=True, choices=sorted(OPERATORS))
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--scale", type=float, default=1.0)
    s.add_argument("--offset", type=float, default=0.0)
    s.set_defaults(fn=cmd_op)

    s = sub.add_parser("energy", help="evaluate a regularization energy")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--reg", required=True, choices=KINDS)
    s.add_argument("--q", type=float, default=1.0)
    s.add_argument("--eps", type=float, default=0.0)
    s.add_argument("--integrand", help="also save the per-pixel integrand image")
    s.add_argument("--scale", type=float, default=1.0, help="display scale for --integrand")
    s.set_defaults(fn=cmd_energy)

    s = sub.add_parser("flow", help="mean curvature flow")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--scheme", default="half", choices=("half", "half_laplace", "fd"))
    s.add_argument("--dt", type=float)
    s.add_argument("--iters", type=int, default=100)
    s.add_argument("--snapshot-every", type=int, default=0)
    s.set_defaults(fn=cmd_flow)

    s = sub.add_parser("smooth", help="variational smoothing")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--model", default="l2", choices=sorted(SMOOTH_MODELS))
    s.add_argument("--lambda", dest="lam", type=float, default=1.0)
    s.add_argument("--alpha", type=float, default=1.0)
    s.add_argument("--dt", type=float)
    s.add_argument("--eps", type=float, default=1.0, help="epsilon of the tv baseline")
    s.add_argument("--iters", type=int, default=500)
    s.add_argument("--report")
    s.set_defaults(fn=cmd_smooth)

    s = sub.add_parser("stats", help="corpus statistics")
    s.add_argument("--dir", required=True)
    s.add_argument("--out-prefix", default="stats_")
    s.add_argument("--max-samples", type=int, default=100_000)
    s.set_defaults(fn=cmd_stats)

    s = sub.add_parser("ssim", help="structural similarity of two images")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(fn=cmd_ssim)

    s = sub.add_parser("bench", help="time the discrete WMC operator")
    s.add_argument("--sizes", default="512,1024,2048")
    s.add_argument("--reps", type=int, default=5)
    s.add_argument("--threads", default="1", help="thread count or comma list")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if args.global_threads is not None:
        set_threads(args.global_threads)
    try:
        return args.fn(args)
    except (CurveflowError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
