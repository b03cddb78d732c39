import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weedsvm.errors import DegenerateInputError, ParameterError
from weedsvm.features.glcm import DIRECTIONS, Glcm, GlcmParams, compute_glcm, haralick_features
from weedsvm.imaging import GrayImage

# 12 horizontal adjacencies, counted both ways in symmetric mode
FIXTURE_4X4 = np.array(
    [[0, 0, 1, 1],
     [0, 0, 1, 1],
     [0, 2, 2, 2],
     [2, 2, 3, 3]], dtype=np.int32
)

# brute-force pair enumeration over the fixture (oracle output, frozen)
FIXTURE_COUNTS = np.array(
    [[4, 2, 1, 0],
     [2, 4, 0, 0],
     [1, 0, 6, 1],
     [0, 0, 1, 2]], dtype=np.int64
)

# literal evaluation of the nine statistics on FIXTURE_COUNTS / 24
FIXTURE_HARALICK = {
    "energy": 0.14583333333333331,
    "contrast": 0.5833333333333333,
    "entropy": 2.0947290475276485,
    "homogeneity": 0.8083333333333335,
    "correlation_as_printed": 0.6919044261303622,
    "correlation_standard": 0.7195325542570953,
    "moments": (0.0, 0.5833333333333333, 0.0, 1.5833333333333335),
    "mu": 1.2916666666666665,
    "sigma": 1.0197698542100346,
}


def brute_force_counts(pixels, levels, drow, dcol, symmetric):
    """Oracle: literal enumeration of every co-occurring pair."""
    h, w = pixels.shape
    counts = np.zeros((levels, levels), dtype=np.int64)
    for r in range(h):
        for c in range(w):
            rr, cc = r + drow, c + dcol
            if 0 <= rr < h and 0 <= cc < w:
                counts[pixels[r, c], pixels[rr, cc]] += 1
                if symmetric:
                    counts[pixels[rr, cc], pixels[r, c]] += 1
    return counts


def gray(pixels, levels):
    return GrayImage(np.asarray(pixels, dtype=np.int32), levels)


class TestComputeGlcm:
    def test_constant_image_single_entry(self):
        for angle in DIRECTIONS:
            g = compute_glcm(gray(np.full((4, 4), 3), 8), GlcmParams(angle=angle))
            assert g.p[3, 3] == 1.0
            assert g.p.sum() == 1.0
            assert np.count_nonzero(g.p) == 1

    def test_two_pixel_row(self):
        g = compute_glcm(gray([[0, 1]], 2), GlcmParams(distance=1, angle=0, symmetric=True))
        assert g.p[0, 1] == 0.5 and g.p[1, 0] == 0.5
        assert g.p[0, 0] == 0.0 and g.p[1, 1] == 0.0

    def test_fixture_counts_match_enumeration(self):
        g = compute_glcm(gray(FIXTURE_4X4, 4), GlcmParams(distance=1, angle=0, symmetric=True))
        assert np.array_equal(g.p * 24.0, FIXTURE_COUNTS.astype(np.float64))
        oracle = brute_force_counts(FIXTURE_4X4, 4, 0, 1, symmetric=True)
        assert np.array_equal(oracle, FIXTURE_COUNTS)

    @pytest.mark.parametrize("angle,offset", [(0, (0, 1)), (45, (-1, 1)), (90, (-1, 0)), (135, (-1, -1))])
    def test_every_direction_matches_enumeration(self, rng, angle, offset):
        pixels = rng.integers(0, 6, (7, 9)).astype(np.int32)
        for symmetric in (False, True):
            g = compute_glcm(gray(pixels, 6), GlcmParams(1, angle, symmetric))
            oracle = brute_force_counts(pixels, 6, *offset, symmetric=symmetric)
            assert np.allclose(g.p, oracle / oracle.sum(), atol=1e-15)

    def test_distance_scales_offset(self, rng):
        pixels = rng.integers(0, 4, (6, 8)).astype(np.int32)
        g = compute_glcm(gray(pixels, 4), GlcmParams(distance=3, angle=0, symmetric=False))
        oracle = brute_force_counts(pixels, 4, 0, 3, symmetric=False)
        assert np.allclose(g.p, oracle / oracle.sum())

    def test_too_small_image_names_offset(self):
        with pytest.raises(DegenerateInputError, match=r"dcol=1"):
            compute_glcm(gray([[0], [1]], 2), GlcmParams(distance=1, angle=0))

    def test_marginals_satisfy_their_definition(self, rng):
        pixels = rng.integers(0, 8, (10, 10)).astype(np.int32)
        g = compute_glcm(gray(pixels, 8), GlcmParams())
        idx = np.arange(8)
        mu_x = (idx[:, None] * g.p).sum()
        mu_y = (idx[None, :] * g.p).sum()
        sigma_x = math.sqrt((((idx - mu_x) ** 2)[:, None] * g.p).sum())
        sigma_y = math.sqrt((((idx - mu_y) ** 2)[None, :] * g.p).sum())
        assert g.mu_x == pytest.approx(mu_x, abs=1e-9)
        assert g.mu_y == pytest.approx(mu_y, abs=1e-9)
        assert g.sigma_x == pytest.approx(sigma_x, abs=1e-9)
        assert g.sigma_y == pytest.approx(sigma_y, abs=1e-9)

    def test_invalid_params(self):
        with pytest.raises(ParameterError):
            GlcmParams(distance=0)
        with pytest.raises(ParameterError):
            GlcmParams(angle=30)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_normalization_and_symmetry_properties(self, seed):
        r = np.random.default_rng(seed)
        pixels = r.integers(0, 5, (r.integers(2, 9), r.integers(2, 9))).astype(np.int32)
        g = compute_glcm(gray(pixels, 5), GlcmParams(symmetric=True))
        assert abs(g.p.sum() - 1.0) < 1e-9
        assert np.array_equal(g.p, g.p.T)


class TestHaralickFeatures:
    def test_constant_image_golden_values(self):
        g = compute_glcm(gray(np.full((5, 5), 2), 4), GlcmParams())
        feats = haralick_features(g)
        assert np.array_equal(feats, [1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0])

    def test_fixture_against_direct_summation_oracle(self):
        g = compute_glcm(gray(FIXTURE_4X4, 4), GlcmParams(distance=1, angle=0, symmetric=True))
        feats = haralick_features(g)
        expected = FIXTURE_HARALICK
        assert feats[0] == pytest.approx(expected["energy"], abs=1e-12)
        assert feats[1] == pytest.approx(expected["contrast"], abs=1e-12)
        assert feats[2] == pytest.approx(expected["entropy"], abs=1e-12)
        assert feats[3] == pytest.approx(expected["homogeneity"], abs=1e-12)
        assert feats[4] == pytest.approx(expected["correlation_as_printed"], abs=1e-12)
        assert feats[5:9] == pytest.approx(expected["moments"], abs=1e-12)
        assert g.mu_x == pytest.approx(expected["mu"], abs=1e-12)
        assert g.sigma_x == pytest.approx(expected["sigma"], abs=1e-12)

    def test_fixture_standard_correlation(self):
        g = compute_glcm(gray(FIXTURE_4X4, 4), GlcmParams(distance=1, angle=0, symmetric=True))
        feats = haralick_features(g, correlation_normalization="standard")
        assert feats[4] == pytest.approx(FIXTURE_HARALICK["correlation_standard"], abs=1e-12)

    def test_oracle_recomputation_on_random_images(self, rng):
        # second path: literal double loop over the printed formulas
        for _ in range(5):
            pixels = rng.integers(0, 7, (8, 8)).astype(np.int32)
            g = compute_glcm(gray(pixels, 7), GlcmParams(symmetric=rng.random() < 0.5))
            feats = haralick_features(g)
            n = 7
            energy = sum(g.p[i, j] ** 2 for i in range(n) for j in range(n))
            entropy = -sum(
                g.p[i, j] * math.log(g.p[i, j])
                for i in range(n) for j in range(n) if g.p[i, j] > 0
            )
            homog = sum(g.p[i, j] / (1 + (i - j) ** 2) for i in range(n) for j in range(n))
            moments = [
                sum((i - j) ** k * g.p[i, j] for i in range(n) for j in range(n))
                for k in (1, 2, 3, 4)
            ]
            assert feats[0] == pytest.approx(energy, abs=1e-12)
            assert feats[2] == pytest.approx(entropy, abs=1e-12)
            assert feats[3] == pytest.approx(homog, abs=1e-12)
            assert feats[5:9] == pytest.approx(moments, abs=1e-12)

    def test_symmetric_odd_moments_exactly_zero(self, rng):
        for _ in range(10):
            pixels = rng.integers(0, 9, (6, 11)).astype(np.int32)
            feats = haralick_features(compute_glcm(gray(pixels, 9), GlcmParams(symmetric=True)))
            assert feats[5] == 0.0  # mean of i - j
            assert feats[7] == 0.0  # skewness

    def test_contrast_equals_second_moment_exactly(self, rng):
        pixels = rng.integers(0, 16, (9, 9)).astype(np.int32)
        for symmetric in (False, True):
            feats = haralick_features(compute_glcm(gray(pixels, 16), GlcmParams(symmetric=symmetric)))
            assert feats[1] == feats[6]

    def test_energy_at_most_one_with_equality_iff_single_entry(self, rng):
        constant = haralick_features(compute_glcm(gray(np.full((4, 4), 1), 3), GlcmParams()))
        assert constant[0] == 1.0
        varied = haralick_features(compute_glcm(gray(rng.integers(0, 3, (6, 6)).astype(np.int32), 3), GlcmParams()))
        assert varied[0] < 1.0

    def test_gray_shift_leaves_difference_statistics_unchanged(self, rng):
        pixels = rng.integers(0, 5, (7, 7)).astype(np.int32)
        f1 = haralick_features(compute_glcm(gray(pixels, 5), GlcmParams()))
        f2 = haralick_features(compute_glcm(gray(pixels + 3, 8), GlcmParams()))
        # energy, contrast, entropy, homogeneity and the moments only see i - j
        for slot in (0, 1, 2, 3, 5, 6, 7, 8):
            assert f1[slot] == pytest.approx(f2[slot], abs=1e-12)

    def test_linear_ramp_correlation_semantics(self):
        ramp = np.tile(np.arange(32, dtype=np.int32), (4, 1))
        g = compute_glcm(gray(ramp, 32), GlcmParams(symmetric=True))
        standard = haralick_features(g, correlation_normalization="standard")[4]
        printed = haralick_features(g, correlation_normalization="as_printed")[4]
        assert standard > 0.99
        assert printed == pytest.approx(standard / (g.sigma_x * g.sigma_y), rel=1e-9)

    def test_degenerate_correlation_is_zero(self):
        g = compute_glcm(gray(np.full((3, 3), 1), 4), GlcmParams())
        for mode in ("as_printed", "standard"):
            assert haralick_features(g, correlation_normalization=mode)[4] == 0.0

    def test_unknown_normalization_rejected(self):
        g = compute_glcm(gray(np.full((3, 3), 1), 4), GlcmParams())
        with pytest.raises(ParameterError):
            haralick_features(g, correlation_normalization="nonsense")


def test_extreme_bit_depths_rejected_with_guidance():
    img = gray(np.zeros((4, 4)), 65536)
    with pytest.raises(ParameterError, match="quantize"):
        compute_glcm(img, GlcmParams())
    # the documented dense limit itself stays usable
    ok = gray(np.zeros((2, 2)), 4096)
    assert compute_glcm(ok, GlcmParams()).p.shape == (4096, 4096)
