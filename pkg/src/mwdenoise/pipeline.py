"""The full denoiser: window transform, closer-window selection,
transform-domain thresholding and overlap aggregation.

For each reference window the configured engine (exhaustive scan or GA
search) picks the closest candidate windows; their coefficients are
averaged with the reference, the detail bands are soft-thresholded, and
the inverse transform is placed back on the pixel grid. Overlapping
contributions are averaged uniformly.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from . import ghm
from .ga import GaParams, ga_select
from .image_io import PEAK
from .selection import SelectionParams, exhaustive_select, noise_gate
from .windows import GridGeometry, build_grid, extract_windows, origin_of

ENGINES = ("exhaustive", "ga")


@dataclass
class DenoiseConfig:
    m: int = 16
    s_size: int = 8
    engine: str = "exhaustive"
    n_c: int = 16
    l2_t: float | None = None      # None: noise-adaptive gate from sigma
    include_self: bool = True
    sigma: float | None = None     # None: estimate from the noisy image
    threshold_scale: float = 1.0
    seed: int = 0
    n_p: int = 10
    g_max: int = 100
    c_p1: int = 5
    c_p2: int = 12
    max_rounds: int = 5

    def __post_init__(self):
        if self.engine not in ENGINES:
            raise ValueError(f"unknown engine {self.engine!r}; "
                             f"expected one of {ENGINES}")
        if not self.threshold_scale > 0:
            raise ValueError("threshold_scale must be > 0")
        if self.sigma is not None and self.sigma < 0:
            raise ValueError("sigma must be >= 0")

    def ga_params(self, l2_t: float) -> GaParams:
        return GaParams(n_c=self.n_c, n_p=self.n_p, g_max=self.g_max,
                        c_p1=self.c_p1, c_p2=self.c_p2, l2_t=l2_t,
                        max_rounds=self.max_rounds, seed=self.seed)


@dataclass
class RunStats:
    engine: str
    m: int
    s_size: int
    n_c: int
    sigma: float
    distance_evals: int
    wall_ms: float
    seed: int
    psnr_in: float | None = None
    psnr_out: float | None = None

    def as_block(self) -> str:
        """Flat key=value rendering, one field per line."""
        pairs = [("engine", self.engine), ("m", self.m),
                 ("s_size", self.s_size), ("n_c", self.n_c),
                 ("sigma", f"{self.sigma:.4f}"),
                 ("psnr_in", _fmt_db(self.psnr_in)),
                 ("psnr_out", _fmt_db(self.psnr_out)),
                 ("distance_evals", self.distance_evals),
                 ("wall_ms", f"{self.wall_ms:.1f}"), ("seed", self.seed)]
        return "\n".join(f"{k}={v}" for k, v in pairs)


def _fmt_db(v):
    if v is None:
        return "n/a"
    return "inf" if math.isinf(v) else f"{v:.2f}"


def estimate_sigma(img, F: np.ndarray, geom: GridGeometry | None = None) -> float:
    """Robust noise estimate from constant-free detail coefficients.

    Uses the high-pass rows whose filter taps sum to zero on both axes, so
    flat image content contributes nothing; the estimate is the median
    absolute coefficient divided by 0.6745.
    """
    m = F.shape[0]
    if geom is None:
        geom = build_grid(img, m, m)
    coeffs = ghm.forward_all(extract_windows(img, geom), F)
    return sigma_from_coeffs(coeffs, m)


def sigma_from_coeffs(coeffs: np.ndarray, m: int) -> float:
    rows = np.array(ghm.constant_free_rows(m))
    fine = coeffs[np.ix_(np.arange(len(coeffs)), rows, rows)]
    return float(np.median(np.abs(fine)) / 0.6745)


def universal_threshold(sigma: float, m: int, scale: float = 1.0) -> float:
    return scale * sigma * math.sqrt(2.0 * math.log(m * m))


def soft_threshold(coeffs: np.ndarray, t: float) -> np.ndarray:
    """Shrink detail coefficients toward zero by t; low-pass untouched."""
    if t < 0:
        raise ValueError(f"threshold must be >= 0, got {t}")
    out = np.array(coeffs, dtype=np.float64)
    mask = ghm.detail_mask(out.shape[0])
    d = out[mask]
    out[mask] = np.sign(d) * np.maximum(np.abs(d) - t, 0.0)
    return out


def denoise_window(ref_coeffs: np.ndarray, closer_coeffs: np.ndarray,
                   t: float, F: np.ndarray) -> np.ndarray:
    """Average, shrink and invert one reference window.

    `closer_coeffs` is a (k, m, m) stack of the selected windows'
    coefficients (k may be 0, leaving the reference alone).
    """
    if len(closer_coeffs):
        combined = (ref_coeffs + closer_coeffs.sum(axis=0)) / (
            1 + len(closer_coeffs))
    else:
        combined = ref_coeffs
    return ghm.inverse(soft_threshold(combined, t), F)


class Accumulator:
    """Per-pixel running sums and contribution counts for overlap-add."""

    def __init__(self, shape):
        self.sums = np.zeros(shape)
        self.weights = np.zeros(shape)

    def add(self, patch: np.ndarray, origin_x: int, origin_y: int):
        m = patch.shape[0]
        self.sums[origin_y:origin_y + m, origin_x:origin_x + m] += patch
        self.weights[origin_y:origin_y + m, origin_x:origin_x + m] += 1.0

    def finalize(self) -> np.ndarray:
        if (self.weights == 0).any():
            raise AssertionError("uncovered pixels in aggregation")
        out = self.sums / self.weights
        return np.clip(np.rint(out), 0, PEAK).astype(np.uint8)


def aggregate(patches, geom: GridGeometry, shape) -> np.ndarray:
    """Rebuild an image from per-window patches (row-major window order)."""
    acc = Accumulator(shape)
    for idx, patch in enumerate(patches):
        x, y = origin_of(geom, idx)
        acc.add(patch, x, y)
    return acc.finalize()


def denoise_image(noisy, cfg: DenoiseConfig, trace=None, threads: int = 1):
    """Denoise a grayscale image; returns (image, RunStats).

    Per-window work is independent; with threads > 1 it runs on a thread
    pool and results are merged in window order, so the output does not
    depend on scheduling.
    """
    start = time.perf_counter()
    noisy = np.asarray(noisy)
    geom = build_grid(noisy, cfg.m, cfg.s_size)
    F = ghm.build_ghm_matrix(cfg.m)
    coeffs = ghm.forward_all(extract_windows(noisy, geom), F)

    sigma = cfg.sigma if cfg.sigma is not None else sigma_from_coeffs(
        coeffs, cfg.m)
    t = universal_threshold(sigma, cfg.m, cfg.threshold_scale)
    l2_t = cfg.l2_t if cfg.l2_t is not None else noise_gate(sigma, cfg.m)

    if cfg.engine == "exhaustive":
        params = SelectionParams(n_c=cfg.n_c, l2_t=l2_t,
                                 include_self=cfg.include_self)
        def engine(ref_idx):
            return exhaustive_select(ref_idx, coeffs, params)
    else:
        ga_params = cfg.ga_params(l2_t)
        def engine(ref_idx):
            return ga_select(ref_idx, coeffs, ga_params, trace=trace)

    def work(ref_idx):
        closest = engine(ref_idx)
        # fallback-filled members failed the distance gate; averaging them
        # in would mix dissimilar content into the estimate
        gated = closest.gated_indices
        members = gated[gated != ref_idx]
        patch = denoise_window(coeffs[ref_idx], coeffs[members], t, F)
        return patch, closest.evaluations

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, range(geom.n_w)))
    else:
        results = [work(i) for i in range(geom.n_w)]

    acc = Accumulator(noisy.shape)
    total_evals = 0
    for ref_idx, (patch, evals) in enumerate(results):
        total_evals += evals
        x, y = origin_of(geom, ref_idx)
        acc.add(patch, x, y)
    out = acc.finalize()

    wall_ms = (time.perf_counter() - start) * 1000.0
    stats = RunStats(engine=cfg.engine, m=cfg.m, s_size=cfg.s_size,
                     n_c=cfg.n_c, sigma=sigma, distance_evals=total_evals,
                     wall_ms=wall_ms, seed=cfg.seed)
    return out, stats
