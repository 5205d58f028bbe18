"""Image file loading/saving and corpus split bookkeeping.

Supported formats: binary PPM (P6, maxval 255) with a hand-rolled,
byte-deterministic writer, and 8-bit RGB/RGBA PNG through Pillow
(alpha dropped on load).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import (DataError, MalformedHeaderError, TruncatedDataError,
                     UnsupportedFormatError)
from .represent import as_image

__all__ = ["CorpusManifest", "load_image", "save_image", "split_corpus",
           "save_manifest", "load_manifest"]

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


@dataclass
class CorpusManifest:
    entries: list[tuple[str, str]]  # (path, "train" | "test")
    seed: int

    def paths(self, split: str) -> list[str]:
        return [p for p, s in self.entries if s == split]


# -- PPM (P6) ----------------------------------------------------------------

def _read_ppm_token(data: bytes, pos: int) -> tuple[bytes, int]:
    n = len(data)
    while pos < n:
        ch = data[pos:pos + 1]
        if ch == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif ch.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < n and not data[pos:pos + 1].isspace():
        pos += 1
    if start == pos:
        raise MalformedHeaderError("unexpected end of PPM header")
    return data[start:pos], pos


def _load_ppm(data: bytes) -> np.ndarray:
    try:
        width_tok, pos = _read_ppm_token(data, 2)
        height_tok, pos = _read_ppm_token(data, pos)
        maxval_tok, pos = _read_ppm_token(data, pos)
        width, height, maxval = int(width_tok), int(height_tok), int(maxval_tok)
    except ValueError as exc:
        raise MalformedHeaderError(f"bad PPM header field: {exc}") from exc
    if width < 1 or height < 1:
        raise MalformedHeaderError(f"bad PPM dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedFormatError(f"PPM maxval {maxval} unsupported, need 255")
    pos += 1  # single whitespace after maxval
    raster = data[pos:pos + width * height * 3]
    if len(raster) < width * height * 3:
        raise TruncatedDataError(
            f"PPM raster truncated: have {len(raster)} bytes, "
            f"need {width * height * 3}")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3).copy()


def _save_ppm(img: np.ndarray, path: Path) -> None:
    header = f"P6\n{img.shape[1]} {img.shape[0]}\n255\n".encode("ascii")
    path.write_bytes(header + img.tobytes())


# -- PNG ----------------------------------------------------------------------

def _load_png(path: Path) -> np.ndarray:
    try:
        with Image.open(path) as im:
            if im.mode == "RGBA":
                arr = np.asarray(im)[:, :, :3]
            elif im.mode == "RGB":
                arr = np.asarray(im)
            else:
                raise UnsupportedFormatError(
                    f"unsupported PNG mode {im.mode!r}: requires 3-channel RGB")
            if arr.dtype != np.uint8:
                raise UnsupportedFormatError("only 8-bit PNG is supported")
            return arr.copy()
    except UnidentifiedImageError as exc:
        raise MalformedHeaderError(f"cannot decode PNG: {exc}") from exc


# -- public API ----------------------------------------------------------------

def load_image(path) -> np.ndarray:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such image file: {path}")
    data = path.read_bytes()
    if data[:2] == b"P6":
        return _load_ppm(data)
    if data[:8] == _PNG_MAGIC:
        return _load_png(path)
    raise UnsupportedFormatError(
        f"{path}: unrecognized format (only P6 PPM and PNG are supported)")


def save_image(img: np.ndarray, path, fmt: str | None = None) -> None:
    img = as_image(img)
    path = Path(path)
    if fmt is None:
        fmt = path.suffix.lstrip(".").lower()
    if fmt in ("ppm", "pnm"):
        _save_ppm(img, path)
    elif fmt == "png":
        Image.fromarray(img, mode="RGB").save(path, format="PNG")
    else:
        raise UnsupportedFormatError(f"cannot save format {fmt!r}")


# -- corpus split ----------------------------------------------------------------

def split_corpus(paths, seed: int) -> CorpusManifest:
    """Seeded 60/40 train/test shuffle of a corpus."""
    paths = [str(p) for p in paths]
    if len(paths) < 2:
        raise DataError(f"corpus needs at least 2 images, got {len(paths)}")
    order = list(paths)
    rng = np.random.default_rng(seed)
    rng.shuffle(order)
    n_train = int(round(0.6 * len(order)))
    n_train = min(max(n_train, 1), len(order) - 1)
    entries = [(p, "train") for p in order[:n_train]]
    entries += [(p, "test") for p in order[n_train:]]
    return CorpusManifest(entries, seed)


def save_manifest(manifest: CorpusManifest, path) -> None:
    lines = [f"seed\t{manifest.seed}"]
    lines += [f"{p}\t{s}" for p, s in manifest.entries]
    Path(path).write_text("\n".join(lines) + "\n")


def load_manifest(path) -> CorpusManifest:
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("seed\t"):
        raise MalformedHeaderError("manifest must start with a seed line")
    try:
        seed = int(lines[0].split("\t", 1)[1])
    except ValueError as exc:
        raise MalformedHeaderError(f"bad manifest seed: {exc}") from exc
    entries = []
    for line in lines[1:]:
        if not line.strip():
            continue
        p, _, s = line.rpartition("\t")
        if s not in ("train", "test"):
            raise MalformedHeaderError(f"bad manifest split tag {s!r}")
        entries.append((p, s))
    return CorpusManifest(entries, seed)
