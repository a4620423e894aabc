"""Benchmark harness: sweep noise levels, run the selection engines and
report PSNR plus distance-evaluation counts.

Images are PGM paths or "phantom:N" specifiers for the bundled synthetic
phantom. Reports are deterministic for a fixed plan; wall-clock timing is
opt-in because it breaks byte-identical reruns.
"""

import csv
import math
from dataclasses import dataclass

import numpy as np

from .image_io import add_awgn, load_pgm, psnr
from .phantom import ct_phantom
from .pipeline import DenoiseConfig, denoise_image

BENCH_ENGINES = ("noisy-only", "exhaustive", "ga")
CSV_COLUMNS = ("image", "sigma", "engine", "seed",
               "psnr_noisy", "psnr_denoised", "distance_evals", "wall_ms")


@dataclass
class BenchPlan:
    images: tuple = ("phantom:128",)
    sigmas: tuple = (10.0, 20.0, 30.0, 40.0, 50.0)
    engines: tuple = BENCH_ENGINES
    seeds: tuple = (0, 1, 2)
    # denoiser settings; the defaults suit the bundled 128x128 phantom
    m: int = 8
    s_size: int = 4
    n_c: int = 16
    threshold_scale: float = 0.25
    l2_t: float | None = None
    n_p: int = 10
    g_max: int = 100
    c_p1: int = 5
    c_p2: int = 12
    max_rounds: int = 5
    timing: bool = False

    def __post_init__(self):
        if not self.sigmas or any(s < 0 for s in self.sigmas):
            raise ValueError("sigmas must be non-empty and all >= 0")
        for e in self.engines:
            if e not in BENCH_ENGINES:
                raise ValueError(f"unknown engine {e!r}; "
                                 f"expected subset of {BENCH_ENGINES}")


@dataclass
class BenchRow:
    image: str
    sigma: float
    engine: str
    seed: int
    psnr_noisy: float
    psnr_denoised: float | None
    distance_evals: int
    wall_ms: float | None


def resolve_image(spec: str) -> np.ndarray:
    if spec.startswith("phantom:"):
        return ct_phantom(int(spec.split(":", 1)[1]))
    return load_pgm(spec)


def noise_seed(seed: int, image_index: int, sigma: float) -> int:
    """Stable per-cell noise seed derived from the plan coordinates."""
    ss = np.random.SeedSequence((seed, image_index, int(round(sigma * 1000))))
    return int(ss.generate_state(1)[0])


def run_bench(plan: BenchPlan):
    """Execute every (image, sigma, engine, seed) cell of the plan."""
    rows = []
    for img_idx, spec in enumerate(plan.images):
        clean = resolve_image(spec)
        for sigma in plan.sigmas:
            for seed in plan.seeds:
                noisy = add_awgn(clean, sigma,
                                 noise_seed(seed, img_idx, sigma))
                p_noisy = psnr(clean, noisy)
                for engine in plan.engines:
                    if engine == "noisy-only":
                        rows.append(BenchRow(spec, sigma, engine, seed,
                                             p_noisy, None, 0,
                                             0.0 if plan.timing else None))
                        continue
                    cfg = DenoiseConfig(
                        m=plan.m, s_size=plan.s_size, engine=engine,
                        n_c=plan.n_c, l2_t=plan.l2_t, sigma=sigma,
                        threshold_scale=plan.threshold_scale, seed=seed,
                        n_p=plan.n_p, g_max=plan.g_max, c_p1=plan.c_p1,
                        c_p2=plan.c_p2, max_rounds=plan.max_rounds)
                    denoised, stats = denoise_image(noisy, cfg)
                    rows.append(BenchRow(
                        spec, sigma, engine, seed, p_noisy,
                        psnr(clean, denoised), stats.distance_evals,
                        stats.wall_ms if plan.timing else None))
    return rows


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return "inf" if math.isinf(v) else f"{v:.4f}"
    return str(v)


def emit_csv(rows, path) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(CSV_COLUMNS)
        for r in rows:
            writer.writerow([r.image, _fmt(float(r.sigma)), r.engine, r.seed,
                             _fmt(r.psnr_noisy), _fmt(r.psnr_denoised),
                             r.distance_evals, _fmt(r.wall_ms)])


def summarize(rows):
    """Per-(image, sigma, engine) mean PSNR over seeds."""
    cells = {}
    for r in rows:
        cells.setdefault((r.image, r.sigma, r.engine), []).append(r)
    out = []
    for (image, sigma, engine), group in cells.items():
        noisy = float(np.mean([g.psnr_noisy for g in group]))
        den = [g.psnr_denoised for g in group if g.psnr_denoised is not None]
        out.append((image, sigma, engine, noisy,
                    float(np.mean(den)) if den else None))
    return out


def render_table(rows) -> str:
    """Human-readable per-cell means, aligned columns."""
    lines = [f"{'image':<16} {'sigma':>6} {'engine':<12} "
             f"{'psnr_noisy':>10} {'psnr_out':>9}"]
    for image, sigma, engine, noisy, den in summarize(rows):
        den_s = f"{den:9.2f}" if den is not None else f"{'-':>9}"
        lines.append(f"{image:<16} {sigma:>6g} {engine:<12} "
                     f"{noisy:>10.2f} {den_s}")
    return "\n".join(lines)
