import numpy as np
import pytest

from quatimg import imgio
from quatimg.errors import (DataError, MalformedHeaderError,
                            TruncatedDataError, UnsupportedFormatError)


def _img(seed=0, shape=(5, 7, 3)):
    return np.random.default_rng(seed).integers(0, 256, shape, dtype=np.uint8)


class TestPpm:
    def test_roundtrip(self, tmp_path):
        img = _img()
        p = tmp_path / "a.ppm"
        imgio.save_image(img, p)
        assert np.array_equal(imgio.load_image(p), img)

    def test_exact_bytes(self, tmp_path):
        img = np.array([[[1, 2, 3], [4, 5, 6]]], dtype=np.uint8)
        p = tmp_path / "tiny.ppm"
        imgio.save_image(img, p)
        assert p.read_bytes() == b"P6\n2 1\n255\n\x01\x02\x03\x04\x05\x06"

    def test_deterministic_writer(self, tmp_path):
        img = _img(1)
        p1, p2 = tmp_path / "x.ppm", tmp_path / "y.ppm"
        imgio.save_image(img, p1)
        imgio.save_image(img, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_comments_in_header(self, tmp_path):
        p = tmp_path / "c.ppm"
        p.write_bytes(b"P6\n# a comment\n1 1\n255\n\x09\x08\x07")
        assert np.array_equal(imgio.load_image(p),
                              np.array([[[9, 8, 7]]], dtype=np.uint8))

    def test_wrong_maxval(self, tmp_path):
        p = tmp_path / "m.ppm"
        p.write_bytes(b"P6\n1 1\n65535\n\x00\x00\x00\x00\x00\x00")
        with pytest.raises(UnsupportedFormatError):
            imgio.load_image(p)

    def test_truncated_raster(self, tmp_path):
        p = tmp_path / "t.ppm"
        p.write_bytes(b"P6\n2 2\n255\n\x00\x00\x00")
        with pytest.raises(TruncatedDataError):
            imgio.load_image(p)

    def test_garbage_header(self, tmp_path):
        p = tmp_path / "g.ppm"
        p.write_bytes(b"P6\nxx yy\n255\n")
        with pytest.raises(MalformedHeaderError):
            imgio.load_image(p)


class TestPng:
    def test_roundtrip(self, tmp_path):
        img = _img(2, (12, 9, 3))
        p = tmp_path / "a.png"
        imgio.save_image(img, p)
        assert np.array_equal(imgio.load_image(p), img)

    def test_rgba_alpha_dropped(self, tmp_path):
        from PIL import Image

        rgba = np.dstack([_img(3, (4, 4, 3)),
                          np.full((4, 4), 128, dtype=np.uint8)])
        p = tmp_path / "a.png"
        Image.fromarray(rgba, mode="RGBA").save(p)
        assert np.array_equal(imgio.load_image(p), rgba[:, :, :3])

    def test_grayscale_rejected(self, tmp_path):
        from PIL import Image

        p = tmp_path / "g.png"
        Image.fromarray(np.zeros((4, 4), dtype=np.uint8), mode="L").save(p)
        with pytest.raises(UnsupportedFormatError):
            imgio.load_image(p)


class TestMisc:
    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            imgio.load_image(tmp_path / "nope.png")

    def test_unknown_format(self, tmp_path):
        p = tmp_path / "x.bin"
        p.write_bytes(b"GIF89a....")
        with pytest.raises(UnsupportedFormatError):
            imgio.load_image(p)

    def test_unknown_save_format(self, tmp_path):
        with pytest.raises(UnsupportedFormatError):
            imgio.save_image(_img(), tmp_path / "a.jpg")


class TestCorpusSplit:
    def test_60_40(self):
        paths = [f"img{k}.png" for k in range(10)]
        m = imgio.split_corpus(paths, seed=0)
        assert len(m.paths("train")) == 6
        assert len(m.paths("test")) == 4
        assert sorted(m.paths("train") + m.paths("test")) == sorted(paths)

    def test_deterministic(self):
        paths = [f"img{k}.png" for k in range(20)]
        assert (imgio.split_corpus(paths, 7).entries
                == imgio.split_corpus(paths, 7).entries)
        assert (imgio.split_corpus(paths, 7).entries
                != imgio.split_corpus(paths, 8).entries)

    def test_both_splits_nonempty(self):
        m = imgio.split_corpus(["a", "b"], seed=0)
        assert len(m.paths("train")) == 1
        assert len(m.paths("test")) == 1

    def test_too_small(self):
        with pytest.raises(DataError):
            imgio.split_corpus(["only"], seed=0)

    def test_manifest_roundtrip(self, tmp_path):
        m = imgio.split_corpus([f"i{k}.png" for k in range(9)], seed=3)
        p = tmp_path / "manifest.txt"
        imgio.save_manifest(m, p)
        back = imgio.load_manifest(p)
        assert back.entries == m.entries
        assert back.seed == m.seed

    def test_manifest_bad_seed_line(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("no seed here\n")
        with pytest.raises(MalformedHeaderError):
            imgio.load_manifest(p)
