import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from warpad import ImageTensor, WaveletSpec, dwt2_multilevel, high_frequency_component, idwt2_multilevel
from warpad.errors import ConfigurationError, StructuralError, ValidationError
from warpad.wavelet import (
    BOUNDARIES,
    FAMILIES,
    WaveletPyramid,
    dump_pyramid,
    load_pyramid,
    low_frequency_component,
    max_levels,
)
from warpad.wavelet._coeffs import FILTERS

ALL_FAMILIES = list(FAMILIES)
ORTHOGONAL = [f for f in ALL_FAMILIES if not f.startswith("bior")]
VANISHING2 = ["db2", "db3", "db4", "coif1", "coif2", "coif3"]


def tensor(arr):
    return ImageTensor(np.asarray(arr, dtype=np.float64))


class TestFilterTables:
    def test_twelve_families(self):
        assert len(FILTERS) == 12

    @pytest.mark.parametrize("family", ALL_FAMILIES)
    def test_quadruple_shape(self, family):
        dec_lo, dec_hi, rec_lo, rec_hi = FILTERS[family]
        n = len(dec_lo)
        assert n % 2 == 0
        assert len(dec_hi) == len(rec_lo) == len(rec_hi) == n

    @pytest.mark.parametrize("family", ALL_FAMILIES)
    def test_halfband_identity(self, family):
        # odd part of conv(dec_lo, rec_lo) must be a unit spike at n-1
        dec_lo, _, rec_lo, _ = (np.asarray(f) for f in FILTERS[family])
        p = np.convolve(dec_lo, rec_lo)
        odd = p[1::2]
        expected = np.zeros_like(odd)
        expected[(len(dec_lo) - 1) // 2] = 1.0
        assert np.max(np.abs(odd - expected)) < 1e-12

    @pytest.mark.parametrize("family", ORTHOGONAL)
    def test_orthonormality(self, family):
        _, _, h, _ = (np.asarray(f) for f in FILTERS[family])
        n = len(h)
        for m in range(n // 2):
            inner = float(np.dot(h[: n - 2 * m], h[2 * m :]))
            assert inner == pytest.approx(1.0 if m == 0 else 0.0, abs=1e-12)

    @pytest.mark.parametrize("family", ALL_FAMILIES)
    def test_highpass_kills_dc(self, family):
        _, dec_hi, _, rec_hi = (np.asarray(f) for f in FILTERS[family])
        assert abs(dec_hi.sum()) < 1e-12
        assert abs(rec_hi.sum()) < 1e-12

    @pytest.mark.parametrize("family", ALL_FAMILIES)
    def test_biorthogonal_distinct_pairs(self, family):
        dec_lo, _, rec_lo, _ = (np.asarray(f) for f in FILTERS[family])
        if family.startswith("bior"):
            assert not np.allclose(dec_lo, rec_lo[::-1])
        else:
            np.testing.assert_allclose(dec_lo, rec_lo[::-1], atol=1e-15)


class TestWaveletSpec:
    def test_rejects_unknown_family(self):
        with pytest.raises(ConfigurationError):
            WaveletSpec("sym4", 1)

    def test_rejects_bad_levels(self):
        with pytest.raises(ConfigurationError):
            WaveletSpec("haar", 0)

    def test_rejects_bad_boundary(self):
        with pytest.raises(ConfigurationError):
            WaveletSpec("haar", 1, "reflect101")

    def test_levels_too_deep_for_image(self):
        x = tensor(np.zeros((1, 8, 8)))
        with pytest.raises(ConfigurationError):
            dwt2_multilevel(x, WaveletSpec("haar", 4))  # max_levels(8,8) == 3

    def test_max_levels(self):
        assert max_levels(224, 224) == 7
        assert max_levels(8, 64) == 3


class TestHandComputedHaar:
    """2x2 blocks where every coefficient is known in closed form."""

    def test_constant_block(self):
        p = dwt2_multilevel(tensor([[[1.0, 1.0], [1.0, 1.0]]]), WaveletSpec("haar", 1))
        np.testing.assert_allclose(p.approx, [[[2.0]]], atol=1e-12)
        for plane in p.details[0]:
            np.testing.assert_allclose(plane, [[[0.0]]], atol=1e-12)

    def test_diagonal_block(self):
        p = dwt2_multilevel(tensor([[[1.0, 0.0], [0.0, 1.0]]]), WaveletSpec("haar", 1))
        lh, hl, hh = p.details[0]
        np.testing.assert_allclose(p.approx, [[[1.0]]], atol=1e-12)
        np.testing.assert_allclose(lh, [[[0.0]]], atol=1e-12)
        np.testing.assert_allclose(hl, [[[0.0]]], atol=1e-12)
        np.testing.assert_allclose(hh, [[[1.0]]], atol=1e-12)

    def test_butterfly_orientation(self):
        # LH responds to horizontal (width-axis) oscillation, HL to vertical
        p = dwt2_multilevel(tensor([[[1.0, 0.0], [1.0, 0.0]]]), WaveletSpec("haar", 1))
        lh, hl, hh = p.details[0]
        assert lh[0, 0, 0] == pytest.approx(1.0, abs=1e-12)
        assert hl[0, 0, 0] == pytest.approx(0.0, abs=1e-12)
        assert hh[0, 0, 0] == pytest.approx(0.0, abs=1e-12)

    def test_hf_of_diagonal_block(self):
        hf = high_frequency_component(tensor([[[1.0, 0.0], [0.0, 1.0]]]), WaveletSpec("haar", 1))
        expected = np.array([[[0.5, -0.5], [-0.5, 0.5]]])
        np.testing.assert_allclose(hf.data, expected, atol=1e-12)


class TestConstantImages:
    @pytest.mark.parametrize("family", ALL_FAMILIES)
    @pytest.mark.parametrize("boundary", ["symmetric", "periodic"])
    def test_details_vanish(self, family, boundary):
        x = tensor(np.full((1, 32, 32), 0.73))
        p = dwt2_multilevel(x, WaveletSpec(family, 2, boundary))
        for level in p.details:
            for plane in level:
                assert np.max(np.abs(plane)) < 1e-6

    @pytest.mark.parametrize("family", ALL_FAMILIES)
    def test_details_vanish_zero_mode_interior(self, family):
        # zero extension turns the border into a step edge, so only the
        # interior coefficients vanish for a constant image
        x = tensor(np.full((1, 64, 64), 0.73))
        p = dwt2_multilevel(x, WaveletSpec(family, 1, "zero"))
        margin = len(FILTERS[family][0])
        for plane in p.details[0]:
            assert np.max(np.abs(plane[0, margin:-margin, margin:-margin])) < 1e-6

    def test_hf_is_zero(self):
        x = tensor(np.full((3, 16, 16), 0.25))
        hf = high_frequency_component(x, WaveletSpec("haar", 2))
        assert np.max(np.abs(hf.data)) < 1e-6


class TestPerfectReconstruction:
    @pytest.mark.parametrize("family", ALL_FAMILIES)
    def test_224_all_modes_level2(self, family, rng):
        x = ImageTensor(rng.random((3, 224, 224)))
        for boundary in BOUNDARIES:
            spec = WaveletSpec(family, 2, boundary)
            back = idwt2_multilevel(dwt2_multilevel(x, spec), spec)
            assert np.max(np.abs(back.data - x.data)) <= 1e-4

    @pytest.mark.parametrize("family", ALL_FAMILIES)
    def test_64_level1(self, family, rng):
        x = ImageTensor(rng.random((1, 64, 64)))
        spec = WaveletSpec(family, 1)
        back = idwt2_multilevel(dwt2_multilevel(x, spec), spec)
        assert np.max(np.abs(back.data - x.data)) <= 1e-4

    @pytest.mark.parametrize("boundary", BOUNDARIES)
    def test_odd_dimensions(self, boundary, rng):
        x = ImageTensor(rng.random((2, 37, 51)))
        spec = WaveletSpec("db3", 3, boundary)
        back = idwt2_multilevel(dwt2_multilevel(x, spec), spec)
        assert np.max(np.abs(back.data - x.data)) <= 1e-10

    @settings(max_examples=25, deadline=None)
    @given(
        family=st.sampled_from(ALL_FAMILIES),
        boundary=st.sampled_from(BOUNDARIES),
        levels=st.integers(1, 3),
        h=st.integers(16, 48),
        w=st.integers(16, 48),
        seed=st.integers(0, 2**31),
    )
    def test_property_roundtrip(self, family, boundary, levels, h, w, seed):
        x = ImageTensor(np.random.default_rng(seed).random((1, h, w)))
        spec = WaveletSpec(family, levels, boundary)
        back = idwt2_multilevel(dwt2_multilevel(x, spec), spec)
        assert np.max(np.abs(back.data - x.data)) <= 1e-4

    def test_zero_pyramid_reconstructs_zero(self, rng):
        spec = WaveletSpec("haar", 2)
        p = dwt2_multilevel(ImageTensor(rng.random((1, 16, 16))), spec)
        hollow = WaveletPyramid(
            approx=np.zeros_like(p.approx),
            details=[tuple(np.zeros_like(b) for b in d) for d in p.details],
            shapes=p.shapes,
        )
        out = idwt2_multilevel(hollow, spec)
        assert np.max(np.abs(out.data)) == 0.0


class TestLinearity:
    @settings(max_examples=15, deadline=None)
    @given(
        family=st.sampled_from(["haar", "db2", "bior2.2", "coif1"]),
        a=st.floats(-3, 3, allow_nan=False),
        b=st.floats(-3, 3, allow_nan=False),
        seed=st.integers(0, 2**31),
    )
    def test_dwt_linear(self, family, a, b, seed):
        gen = np.random.default_rng(seed)
        x = gen.random((1, 16, 16))
        y = gen.random((1, 16, 16))
        spec = WaveletSpec(family, 2)
        p_mix = dwt2_multilevel(ImageTensor(a * x + b * y), spec)
        p_x = dwt2_multilevel(ImageTensor(x), spec)
        p_y = dwt2_multilevel(ImageTensor(y), spec)
        np.testing.assert_allclose(p_mix.approx, a * p_x.approx + b * p_y.approx, atol=1e-6)
        for mix, px, py in zip(p_mix.details, p_x.details, p_y.details):
            for bm, bx, by in zip(mix, px, py):
                np.testing.assert_allclose(bm, a * bx + b * by, atol=1e-6)

    def test_hf_linear(self, rng):
        x = rng.random((3, 16, 16))
        spec = WaveletSpec("haar", 2)
        doubled = high_frequency_component(ImageTensor(2.0 * x), spec)
        single = high_frequency_component(ImageTensor(x), spec)
        np.testing.assert_allclose(doubled.data, 2.0 * single.data, atol=1e-10)


class TestDecompositionAdditivity:
    @pytest.mark.parametrize("family", ["haar", "db4", "bior1.5", "coif2"])
    @pytest.mark.parametrize("boundary", BOUNDARIES)
    def test_lf_plus_hf(self, family, boundary, rng):
        x = ImageTensor(rng.random((3, 32, 32)))
        spec = WaveletSpec(family, 2, boundary)
        lf = low_frequency_component(x, spec)
        hf = high_frequency_component(x, spec)
        assert np.max(np.abs(lf.data + hf.data - x.data)) <= 1e-5

    def test_x_minus_hf_equals_lf(self, rng):
        x = ImageTensor(rng.random((1, 24, 24)))
        spec = WaveletSpec("haar", 2)
        lf = low_frequency_component(x, spec)
        hf = high_frequency_component(x, spec)
        np.testing.assert_allclose(x.data - hf.data, lf.data, atol=1e-5)


class TestVanishingMoments:
    @pytest.mark.parametrize("family", VANISHING2)
    def test_linear_ramp_annihilated(self, family):
        # two or more vanishing moments kill linear ramps away from boundaries
        n = 64
        yy, xx = np.mgrid[0:n, 0:n].astype(np.float64)
        x = tensor((0.3 * xx + 0.6 * yy + 5.0)[None])
        p = dwt2_multilevel(x, WaveletSpec(family, 1, "symmetric"))
        margin = len(FILTERS[family][0])  # one filter length clears boundary effects
        for plane in p.details[0]:
            interior = plane[0, margin:-margin, margin:-margin]
            assert np.max(np.abs(interior)) < 1e-6

    def test_haar_does_not_annihilate_ramps(self):
        n = 32
        xx = np.mgrid[0:n, 0:n][1].astype(np.float64)
        p = dwt2_multilevel(tensor(xx[None]), WaveletSpec("haar", 1))
        assert np.max(np.abs(p.details[0][0])) > 0.1


class TestEnergyPreservation:
    @pytest.mark.parametrize("family", ORTHOGONAL)
    def test_periodic_orthogonal(self, family, rng):
        x = ImageTensor(rng.random((3, 64, 64)))
        p = dwt2_multilevel(x, WaveletSpec(family, 3, "periodic"))
        coeff_energy = float((p.approx**2).sum()) + sum(
            float((plane**2).sum()) for level in p.details for plane in level
        )
        pixel_energy = float((x.data**2).sum())
        assert coeff_energy == pytest.approx(pixel_energy, rel=1e-4)


class TestStructuralValidation:
    def test_level_count_mismatch(self, rng):
        spec = WaveletSpec("haar", 2)
        p = dwt2_multilevel(ImageTensor(rng.random((1, 16, 16))), spec)
        with pytest.raises(StructuralError):
            idwt2_multilevel(p, WaveletSpec("haar", 3))

    def test_plane_shape_mismatch(self, rng):
        spec = WaveletSpec("haar", 1)
        p = dwt2_multilevel(ImageTensor(rng.random((1, 16, 16))), spec)
        lh, hl, hh = p.details[0]
        p.details[0] = (lh[:, :4, :], hl, hh)
        with pytest.raises(StructuralError):
            idwt2_multilevel(p, spec)

    def test_non_finite_rejected(self):
        with pytest.raises(ValidationError):
            ImageTensor(np.array([[[np.nan, 0.0], [0.0, 0.0]]]))


class TestDebugDump:
    def test_roundtrip(self, tmp_path, rng):
        spec = WaveletSpec("db2", 2)
        p = dwt2_multilevel(ImageTensor(rng.random((3, 33, 40))), spec)
        dump_pyramid(p, tmp_path / "pyr")
        loaded = load_pyramid(tmp_path / "pyr")
        assert loaded.shapes == p.shapes
        np.testing.assert_allclose(loaded.approx, p.approx, atol=1e-5)
        for lvl in range(p.levels):
            for got, want in zip(loaded.details[lvl], p.details[lvl]):
                np.testing.assert_allclose(got, want, atol=1e-5)
        back = idwt2_multilevel(loaded, spec)
        assert back.data.shape == (3, 33, 40)

    def test_truncated_plane_detected(self, tmp_path, rng):
        spec = WaveletSpec("haar", 1)
        p = dwt2_multilevel(ImageTensor(rng.random((1, 8, 8))), spec)
        dump_pyramid(p, tmp_path / "pyr")
        target = tmp_path / "pyr" / "approx.f32"
        target.write_bytes(target.read_bytes()[:-8])
        with pytest.raises(StructuralError):
            load_pyramid(tmp_path / "pyr")
