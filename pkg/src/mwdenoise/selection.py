"""Closer-window selection: distance kernel, threshold gate and the
exhaustive baseline engine.

Distances are L2 norms of coefficient differences in the multi-wavelet
domain. Because the transform is orthogonal this equals the pixel-domain
distance; the equality is exercised by tests rather than exploited here.
"""

import warnings
from dataclasses import dataclass

import numpy as np


@dataclass
class SelectionParams:
    n_c: int = 16
    l2_t: float = np.inf
    include_self: bool = True

    def __post_init__(self):
        if self.n_c < 1:
            raise ValueError(f"n_c must be >= 1, got {self.n_c}")
        if not self.l2_t > 0:
            raise ValueError(f"l2_t must be > 0, got {self.l2_t}")


@dataclass
class ClosestSet:
    """Windows closest to one reference window, ascending by distance.

    `gated` counts the leading members that passed the distance threshold;
    any members past it were added by the GA's fallback fill.
    """
    ref_idx: int
    indices: np.ndarray
    distances: np.ndarray
    evaluations: int = 0
    gated: int | None = None

    def __post_init__(self):
        if self.gated is None:
            self.gated = len(self.indices)

    def __len__(self):
        return len(self.indices)

    @property
    def fallback_used(self) -> bool:
        return self.gated < len(self.indices)

    @property
    def gated_indices(self) -> np.ndarray:
        return self.indices[:self.gated]

    @property
    def members(self):
        return list(zip(self.indices.tolist(), self.distances.tolist()))


def l2_distance(a: np.ndarray, b: np.ndarray) -> float:
    """L2 norm of the coefficient difference between two windows."""
    x = np.asarray(a, dtype=np.float64)
    y = np.asarray(b, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"size mismatch: {x.shape} vs {y.shape}")
    return float(np.sqrt(np.sum((x - y) ** 2)))


def distances_from(coeffs: np.ndarray, ref_idx: int) -> np.ndarray:
    """Distances from window `ref_idx` to every window in the stack."""
    flat = coeffs.reshape(len(coeffs), -1)
    return np.sqrt(np.sum((flat - flat[ref_idx]) ** 2, axis=1))


def rank_ascending(indices: np.ndarray, distances: np.ndarray) -> np.ndarray:
    """Sort order by (distance, index); ties go to the smaller index."""
    return np.lexsort((indices, distances))


def exhaustive_select(ref_idx: int, coeffs: np.ndarray,
                      params: SelectionParams) -> ClosestSet:
    """Scan every candidate window: gate by l2_t, sort, keep n_c."""
    n_w = len(coeffs)
    if not 0 <= ref_idx < n_w:
        raise IndexError(f"reference index {ref_idx} out of range [0, {n_w})")
    dists = distances_from(coeffs, ref_idx)
    cand = np.arange(n_w)
    evaluations = n_w
    if not params.include_self:
        keep = cand != ref_idx
        cand, dists = cand[keep], dists[keep]
        evaluations = n_w - 1
    gate = dists <= params.l2_t
    cand, dists = cand[gate], dists[gate]
    order = rank_ascending(cand, dists)[:params.n_c]
    return ClosestSet(ref_idx, cand[order], dists[order], evaluations)


def calibrate_l2t(coeffs: np.ndarray, quantile: float = 0.05,
                  sample_pairs: int = 1000, seed: int = 0) -> float:
    """Empirical distance quantile over randomly sampled window pairs."""
    if not 0.0 < quantile <= 1.0:
        raise ValueError(f"quantile must be in (0, 1], got {quantile}")
    if sample_pairs < 100:
        raise ValueError(f"need at least 100 sample pairs, got {sample_pairs}")
    n_w = len(coeffs)
    flat = coeffs.reshape(n_w, -1)
    rng = np.random.default_rng(seed)
    dists = np.empty(sample_pairs)
    got = 0
    while got < sample_pairs:
        i = rng.integers(0, n_w, size=sample_pairs - got)
        j = rng.integers(0, n_w, size=sample_pairs - got)
        ok = i != j if n_w > 1 else np.ones(len(i), dtype=bool)
        k = ok.sum()
        dists[got:got + k] = np.sqrt(
            np.sum((flat[i[ok]] - flat[j[ok]]) ** 2, axis=1))
        got += k
    value = float(np.quantile(dists, quantile))
    if value <= 0.0:
        warnings.warn("all sampled window distances are zero; "
                      "returning a tiny positive threshold")
        return float(np.finfo(np.float64).tiny)
    return value


def noise_gate(sigma: float, m: int, noise_mult: float = 1.05,
               mismatch: float = 6.0) -> float:
    """Distance gate for a known noise level.

    Two windows with identical clean content differ by about
    sigma * sqrt(2 m^2) from noise alone; the gate admits that noise floor
    (scaled by `noise_mult`) plus a clean-content mismatch budget of
    `mismatch` intensity levels per pixel.
    """
    floor = (noise_mult * sigma) ** 2 * 2.0 * m * m
    budget = (mismatch * m) ** 2
    return float(np.sqrt(floor + budget))
