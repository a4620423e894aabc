"""Command-line front end.

Subcommands: add-noise, denoise, psnr, calibrate, bench. Exit codes:
0 success, 2 usage, 3 I/O failure, 4 validation failure. Results go to
stdout, diagnostics to stderr.
"""

import argparse
import math
import sys


from . import ghm
from .bench import BENCH_ENGINES, BenchPlan, emit_csv, render_table, run_bench
from .image_io import PgmError, add_awgn, load_pgm, psnr, save_pgm
from .pipeline import DenoiseConfig, denoise_image, estimate_sigma
from .selection import calibrate_l2t
from .windows import build_grid, extract_windows

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_VALIDATION = 4


def _geometry_args(sub, m_default=16, s_default=8):
    sub.add_argument("--window", type=int, default=m_default, metavar="M",
                     help=f"window side length, multiple of 4 "
                          f"(default {m_default})")
    sub.add_argument("--step", type=int, default=s_default, metavar="S",
                     help=f"window step size (default {s_default})")


def _ga_args(sub):
    sub.add_argument("--nc", type=int, default=16,
                     help="windows kept per reference (default 16)")
    sub.add_argument("--pop", type=int, default=10,
                     help="GA population size (default 10)")
    sub.add_argument("--gmax", type=int, default=100,
                     help="GA generations per round (default 100)")
    sub.add_argument("--cp1", type=int, default=5,
                     help="first crossover point (default 5)")
    sub.add_argument("--cp2", type=int, default=12,
                     help="second crossover point (default 12)")
    sub.add_argument("--max-rounds", type=int, default=5,
                     help="GA round cap (default 5)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mwdenoise",
        description="Window-based GHM multi-wavelet CT image denoising")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("add-noise", help="add white Gaussian noise")
    p.add_argument("input"); p.add_argument("output")
    p.add_argument("--sigma", type=float, required=True,
                   help="noise standard deviation, >= 0")
    p.add_argument("--seed", type=int, default=0,
                   help="noise generator seed (default 0)")
    p.add_argument("--ascii", action="store_true",
                   help="write P2 instead of P5")

    p = subs.add_parser("denoise", help="denoise a PGM image")
    p.add_argument("input"); p.add_argument("output")
    p.add_argument("--method", choices=("exhaustive", "ga"),
                   default="exhaustive",
                   help="closer-window engine (default exhaustive)")
    _geometry_args(p)
    _ga_args(p)
    p.add_argument("--sigma", type=float, default=None,
                   help="known noise level; estimated when omitted")
    p.add_argument("--l2t", type=float, default=None,
                   help="distance threshold; noise-adaptive when omitted")
    p.add_argument("--threshold-scale", type=float, default=1.0,
                   help="scale on the universal shrinkage threshold "
                        "(default 1.0)")
    p.add_argument("--seed", type=int, default=0,
                   help="GA master seed (default 0)")
    p.add_argument("--threads", type=int, default=1,
                   help="worker thread cap (default 1)")
    p.add_argument("--trace", action="store_true",
                   help="stream GA trace records to stderr")
    p.add_argument("--dump-transform", metavar="CSV", default=None,
                   help="debug: dump the transform matrix as CSV")
    p.add_argument("--ascii", action="store_true",
                   help="write P2 instead of P5")

    p = subs.add_parser("psnr", help="PSNR between two PGM images")
    p.add_argument("a"); p.add_argument("b")

    p = subs.add_parser("calibrate",
                        help="empirical distance-threshold calibration")
    p.add_argument("input")
    _geometry_args(p)
    p.add_argument("--quantile", type=float, default=0.05,
                   help="distance quantile to return (default 0.05)")
    p.add_argument("--pairs", type=int, default=1000,
                   help="sampled window pairs (default 1000)")
    p.add_argument("--seed", type=int, default=0,
                   help="sampling seed (default 0)")

    p = subs.add_parser("bench", help="sigma sweep over both engines")
    p.add_argument("--images", nargs="+", default=["phantom:128"],
                   help="PGM paths or phantom:N (default phantom:128)")
    p.add_argument("--sigmas", type=float, nargs="+",
                   default=[10.0, 20.0, 30.0, 40.0, 50.0],
                   help="noise levels (default 10 20 30 40 50)")
    p.add_argument("--engines", nargs="+", default=list(BENCH_ENGINES),
                   choices=BENCH_ENGINES,
                   help="engines to run (default all)")
    p.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2],
                   help="per-cell seeds (default 0 1 2)")
    _geometry_args(p, m_default=8, s_default=4)
    _ga_args(p)
    p.add_argument("--l2t", type=float, default=None,
                   help="distance threshold; noise-adaptive when omitted")
    p.add_argument("--threshold-scale", type=float, default=0.25,
                   help="shrinkage threshold scale (default 0.25)")
    p.add_argument("--out", default=None, metavar="CSV",
                   help="write the report as CSV")
    p.add_argument("--timing", action="store_true",
                   help="record wall-clock times (breaks byte-identical "
                        "reruns)")
    return parser


def _cmd_add_noise(args) -> int:
    if args.sigma < 0:
        print(f"error: sigma must be >= 0, got {args.sigma}",
              file=sys.stderr)
        return EXIT_VALIDATION
    img = load_pgm(args.input)
    save_pgm(add_awgn(img, args.sigma, args.seed), args.output,
             binary=not args.ascii)
    return EXIT_OK


def _cmd_denoise(args) -> int:
    cfg = DenoiseConfig(
        m=args.window, s_size=args.step, engine=args.method, n_c=args.nc,
        l2_t=args.l2t, sigma=args.sigma,
        threshold_scale=args.threshold_scale, seed=args.seed,
        n_p=args.pop, g_max=args.gmax, c_p1=args.cp1, c_p2=args.cp2,
        max_rounds=args.max_rounds)
    img = load_pgm(args.input)
    build_grid(img, cfg.m, cfg.s_size)  # validate geometry before any work
    if args.dump_transform:
        ghm.dump_matrix_csv(ghm.build_ghm_matrix(cfg.m), args.dump_transform)
    trace = None
    if args.trace:
        def trace(gen, best_fitness, archive_size):
            print(f"gen={gen} best_fitness={best_fitness:.4f} "
                  f"archive={archive_size}", file=sys.stderr)
    out, stats = denoise_image(img, cfg, trace=trace, threads=args.threads)
    save_pgm(out, args.output, binary=not args.ascii)
    print(stats.as_block())
    return EXIT_OK


def _cmd_psnr(args) -> int:
    value = psnr(load_pgm(args.a), load_pgm(args.b))
    print("inf" if math.isinf(value) else f"{value:.2f}")
    return EXIT_OK


def _cmd_calibrate(args) -> int:
    img = load_pgm(args.input)
    geom = build_grid(img, args.window, args.step)
    F = ghm.build_ghm_matrix(args.window)
    coeffs = ghm.forward_all(extract_windows(img, geom), F)
    value = calibrate_l2t(coeffs, quantile=args.quantile,
                          sample_pairs=args.pairs, seed=args.seed)
    print(f"l2_t={value:.6g}")
    print(f"sigma_estimate={estimate_sigma(img, F, geom):.4f}",
          file=sys.stderr)
    return EXIT_OK


def _cmd_bench(args) -> int:
    plan = BenchPlan(
        images=tuple(args.images), sigmas=tuple(args.sigmas),
        engines=tuple(args.engines), seeds=tuple(args.seeds),
        m=args.window, s_size=args.step, n_c=args.nc, l2_t=args.l2t,
        threshold_scale=args.threshold_scale, n_p=args.pop,
        g_max=args.gmax, c_p1=args.cp1, c_p2=args.cp2,
        max_rounds=args.max_rounds, timing=args.timing)
    rows = run_bench(plan)
    print(render_table(rows))
    if args.out:
        emit_csv(rows, args.out)
    return EXIT_OK


_COMMANDS = {
    "add-noise": _cmd_add_noise,
    "denoise": _cmd_denoise,
    "psnr": _cmd_psnr,
    "calibrate": _cmd_calibrate,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (PgmError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
