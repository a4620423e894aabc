import numpy as np
import pytest

from mwdenoise import ghm
from mwdenoise.image_io import add_awgn
from mwdenoise.phantom import ct_phantom
from mwdenoise.selection import (SelectionParams, calibrate_l2t,
                                 exhaustive_select, l2_distance, noise_gate)
from mwdenoise.windows import build_grid, extract_windows

BIG = 1e12


@pytest.fixture(scope="module")
def coeffs():
    img = add_awgn(ct_phantom(64), 15, 0)
    geom = build_grid(img, 8, 4)
    F = ghm.build_ghm_matrix(8)
    return ghm.forward_all(extract_windows(img, geom), F)


class TestL2Distance:
    def test_identical_zero(self):
        w = np.random.default_rng(0).normal(size=(8, 8))
        assert l2_distance(w, w) == 0.0

    def test_single_coefficient(self):
        a = np.zeros((8, 8))
        b = a.copy()
        b[3, 5] = 7.25
        assert l2_distance(a, b) == pytest.approx(7.25)

    def test_matches_pixel_domain(self):
        F = ghm.build_ghm_matrix(8)
        rng = np.random.default_rng(1)
        for _ in range(30):
            a = rng.uniform(0, 255, (8, 8))
            b = rng.uniform(0, 255, (8, 8))
            assert l2_distance(ghm.forward(a, F), ghm.forward(b, F)) == \
                pytest.approx(np.linalg.norm(a - b), rel=1e-9)

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            l2_distance(np.zeros((8, 8)), np.zeros((4, 4)))

    def test_metric_axioms(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            a, b, c = rng.normal(size=(3, 8, 8))
            dab = l2_distance(a, b)
            dba = l2_distance(b, a)
            assert dab >= 0 and dab == dba
            assert l2_distance(a, b) <= \
                l2_distance(a, c) + l2_distance(c, b) + 1e-9


def brute_force_select(ref_idx, coeffs, params):
    """Independent oracle: materialize every distance, python-sort, gate."""
    entries = []
    for j in range(len(coeffs)):
        if j == ref_idx and not params.include_self:
            continue
        d = float(np.sqrt(((coeffs[ref_idx] - coeffs[j]) ** 2).sum()))
        if d <= params.l2_t:
            entries.append((d, j))
    entries.sort()
    return entries[:params.n_c]


class TestExhaustiveSelect:
    def test_self_is_first_member(self, coeffs):
        res = exhaustive_select(10, coeffs, SelectionParams(n_c=4, l2_t=BIG))
        assert res.indices[0] == 10 and res.distances[0] == 0.0

    def test_matches_brute_force(self, coeffs):
        params = SelectionParams(n_c=4, l2_t=BIG)
        for ref in (0, 7, 100, 224):
            res = exhaustive_select(ref, coeffs, params)
            oracle = brute_force_select(ref, coeffs, params)
            assert res.indices.tolist() == [j for _, j in oracle]
            assert np.allclose(res.distances, [d for d, _ in oracle])

    def test_tight_gate_excludes_all(self, coeffs):
        params = SelectionParams(n_c=4, l2_t=1e-9, include_self=False)
        res = exhaustive_select(0, coeffs, params)
        assert len(res) == 0
        assert res.evaluations == len(coeffs) - 1

    def test_evaluation_count(self, coeffs):
        res = exhaustive_select(0, coeffs, SelectionParams(n_c=4, l2_t=BIG))
        assert res.evaluations == len(coeffs)

    def test_monotone_truncation(self, coeffs):
        small = exhaustive_select(5, coeffs, SelectionParams(n_c=4, l2_t=BIG))
        large = exhaustive_select(5, coeffs, SelectionParams(n_c=9, l2_t=BIG))
        assert large.indices[:4].tolist() == small.indices.tolist()

    def test_bad_ref_index(self, coeffs):
        with pytest.raises(IndexError):
            exhaustive_select(len(coeffs), coeffs, SelectionParams(l2_t=BIG))

    def test_deterministic_tie_break(self):
        # three identical windows: ties resolve to smaller indices
        coeffs = np.zeros((3, 8, 8))
        res = exhaustive_select(1, coeffs, SelectionParams(n_c=3, l2_t=BIG))
        assert res.indices.tolist() == [0, 1, 2]


class TestCalibrate:
    def test_constant_image_warns(self):
        coeffs = np.zeros((50, 8, 8))
        with pytest.warns(UserWarning):
            value = calibrate_l2t(coeffs, 0.5, 200, seed=0)
        assert value > 0

    def test_full_quantile_dominates(self, coeffs):
        v = calibrate_l2t(coeffs, 1.0, 500, seed=1)
        # replay the same sampling stream; v must dominate all of it
        flat = coeffs.reshape(len(coeffs), -1)
        rng = np.random.default_rng(1)
        i = rng.integers(0, len(flat), 500)
        j = rng.integers(0, len(flat), 500)
        sample = np.linalg.norm(flat[i] - flat[j], axis=1)
        assert v >= sample[i != j].max() - 1e-9

    def test_matches_second_quantile_implementation(self, coeffs):
        quantile, pairs, seed = 0.05, 1000, 3
        value = calibrate_l2t(coeffs, quantile, pairs, seed)

        # second implementation: replay the sampling, sort, interpolate
        flat = coeffs.reshape(len(coeffs), -1)
        rng = np.random.default_rng(seed)
        dists = []
        while len(dists) < pairs:
            i = rng.integers(0, len(flat), size=pairs - len(dists))
            j = rng.integers(0, len(flat), size=pairs - len(dists))
            for a, b in zip(i, j):
                if a != b:
                    dists.append(float(np.linalg.norm(flat[a] - flat[b])))
        dists.sort()
        pos = quantile * (pairs - 1)
        lo, hi = int(np.floor(pos)), int(np.ceil(pos))
        expected = dists[lo] + (pos - lo) * (dists[hi] - dists[lo])
        assert value == pytest.approx(expected, rel=1e-12)

    def test_deterministic(self, coeffs):
        assert calibrate_l2t(coeffs, 0.1, 500, 7) == \
            calibrate_l2t(coeffs, 0.1, 500, 7)

    def test_too_few_pairs(self, coeffs):
        with pytest.raises(ValueError):
            calibrate_l2t(coeffs, 0.5, 99, 0)


def test_noise_gate_admits_noise_floor():
    sigma, m = 20.0, 8
    gate = noise_gate(sigma, m)
    assert gate > sigma * np.sqrt(2.0 * m * m)
