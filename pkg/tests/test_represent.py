import numpy as np
import pytest

from quatimg import represent as rep
from quatimg.autoencoder import PairModel
from quatimg.errors import DataError, ShapeError


def _identityish_model():
    """A decoder that inverts the encoder exactly on a 4-D subspace is
    impossible for arbitrary input, so tests that need exactness use the
    pure path; this model just has well-defined shapes."""
    rng = np.random.default_rng(0)
    return PairModel(rng.standard_normal((4, 6)) * 0.1, np.zeros(4),
                     rng.standard_normal((6, 4)) * 0.1, np.zeros(6))


class TestValidation:
    def test_rejects_grayscale(self):
        with pytest.raises(ShapeError):
            rep.as_image(np.zeros((4, 4), dtype=np.uint8))

    def test_rejects_float(self):
        with pytest.raises(DataError):
            rep.as_image(np.zeros((4, 4, 3)))

    def test_meta_mode(self):
        with pytest.raises(DataError):
            rep.QImageMeta(4, 4, "other")
        with pytest.raises(DataError):
            rep.QImageMeta(4, 7, "pure")
        with pytest.raises(DataError):
            rep.QImageMeta(4, 5, "full")  # odd padded width


class TestPadding:
    def test_even_width_untouched(self):
        img = np.zeros((2, 4, 3), dtype=np.uint8)
        assert rep.pad_even_columns(img) is img

    def test_odd_width_replicates(self):
        img = np.arange(9, dtype=np.uint8).reshape(1, 3, 3)
        padded = rep.pad_even_columns(img)
        assert padded.shape == (1, 4, 3)
        assert np.array_equal(padded[0, 3], padded[0, 2])


class TestPixelPairs:
    def test_values_and_order(self):
        img = np.arange(12, dtype=np.uint8).reshape(1, 4, 3)
        pairs = rep.pixel_pairs(img)
        assert pairs.shape == (2, 6)
        assert np.array_equal(pairs[0], np.arange(6, dtype=float))

    def test_raw_scale(self):
        img = np.full((1, 2, 3), 255, dtype=np.uint8)
        assert rep.pixel_pairs(img).max() == 255.0


class TestFullRepresentation:
    def test_matrix_geometry(self):
        model = _identityish_model()
        img = np.zeros((5, 7, 3), dtype=np.uint8)
        q, meta = rep.to_full_quaternion(img, model)
        assert q.shape == (5, 4)
        assert meta.original_width == 7 and meta.padded_width == 8

    def test_decode_crops_padding(self):
        model = _identityish_model()
        img = np.random.default_rng(1).integers(0, 256, (3, 5, 3),
                                                dtype=np.uint8)
        q, meta = rep.to_full_quaternion(img, model)
        out = rep.from_full_quaternion(q, meta, model)
        assert out.shape == img.shape
        assert out.dtype == np.uint8

    def test_decode_checks_meta(self):
        model = _identityish_model()
        img = np.zeros((2, 4, 3), dtype=np.uint8)
        q, meta = rep.to_full_quaternion(img, model)
        with pytest.raises(DataError):
            rep.from_full_quaternion(q, rep.QImageMeta(4, 4, "pure"), model)

    def test_trained_roundtrip_close(self, trained_model):
        rng = np.random.default_rng(2)
        base = rng.integers(60, 200, (16, 1, 3))
        img = np.clip(base + rng.integers(-10, 10, (16, 32, 3)), 0,
                      255).astype(np.uint8)
        q, meta = rep.to_full_quaternion(img, trained_model)
        out = rep.from_full_quaternion(q, meta, trained_model)
        assert np.abs(out.astype(int) - img.astype(int)).mean() < 12


class TestPureRepresentation:
    def test_exact_roundtrip(self):
        img = np.random.default_rng(3).integers(0, 256, (9, 13, 3),
                                                dtype=np.uint8)
        q = rep.to_pure_quaternion(img)
        assert np.all(q.scalar_part() == 0.0)
        assert np.array_equal(rep.from_pure_quaternion(q), img)

    def test_rounding_and_clamping(self):
        from quatimg.quat import QuaternionMatrix

        data = np.zeros((1, 1, 4))
        data[0, 0] = [0.0, -3.7, 127.5, 300.0]
        out = rep.from_pure_quaternion(QuaternionMatrix(data))
        assert tuple(out[0, 0]) == (0, 128, 255)
