"""RGB image <-> quaternion matrix conversions.

Two representations:
  * full  - adjacent pixel pairs pushed through a trained PairModel,
            giving an N x ceil(W/2) matrix of full quaternions;
  * pure  - the classical embedding 0 + R*i + G*j + B*k at raw
            [0, 255] scale, N x W, lossless both ways.

Images are (H, W, 3) uint8 arrays.  Odd widths get one replicated
column before pairing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import DataError, ShapeError
from .quat import QuaternionMatrix

if TYPE_CHECKING:
    from .autoencoder import PairModel

__all__ = ["QImageMeta", "as_image", "pad_even_columns", "pixel_pairs",
           "to_full_quaternion", "from_full_quaternion",
           "to_pure_quaternion", "from_pure_quaternion"]


@dataclass(frozen=True)
class QImageMeta:
    original_width: int
    padded_width: int
    mode: str  # "full" or "pure"

    def __post_init__(self):
        if self.mode not in ("full", "pure"):
            raise DataError(f"unknown representation mode {self.mode!r}")
        if not self.original_width <= self.padded_width <= self.original_width + 1:
            raise DataError("padded width must be the original width or one more")
        if self.mode == "full" and self.padded_width % 2:
            raise DataError("full mode requires an even padded width")


def as_image(data) -> np.ndarray:
    """Validate and return an (H, W, 3) uint8 image array."""
    img = np.asarray(data)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ShapeError(f"expected (H, W, 3) image, got shape {img.shape}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ShapeError("image dimensions must be positive")
    if img.dtype != np.uint8:
        raise DataError(f"expected uint8 samples, got {img.dtype}")
    return img


def pad_even_columns(img: np.ndarray) -> np.ndarray:
    """Replicate the last column once if the width is odd."""
    img = as_image(img)
    if img.shape[1] % 2 == 0:
        return img
    return np.concatenate([img, img[:, -1:, :]], axis=1)


def pixel_pairs(img: np.ndarray) -> np.ndarray:
    """All non-overlapping horizontal pixel pairs as an (n, 6) float array.

    Values stay at raw [0, 255] scale; row-major pair order.
    """
    padded = pad_even_columns(img).astype(np.float64)
    h, w, _ = padded.shape
    return padded.reshape(h, w // 2, 6).reshape(-1, 6)


def _round_half_away(x: np.ndarray) -> np.ndarray:
    return np.copysign(np.floor(np.abs(x) + 0.5), x)


def _quantize_u8(x: np.ndarray) -> np.ndarray:
    return np.clip(_round_half_away(x), 0.0, 255.0).astype(np.uint8)


def to_full_quaternion(img: np.ndarray, model: "PairModel") -> tuple[QuaternionMatrix, QImageMeta]:
    """Encode pixel pairs into an N x (padded W / 2) quaternion matrix."""
    img = as_image(img)
    padded = pad_even_columns(img)
    h, w_pad = padded.shape[0], padded.shape[1]
    pairs = padded.astype(np.float64).reshape(h, w_pad // 2, 6) / model.norm_scale
    latent = pairs @ model.w_enc.T + model.b_enc
    meta = QImageMeta(original_width=img.shape[1], padded_width=w_pad, mode="full")
    return QuaternionMatrix(latent), meta


def from_full_quaternion(q: QuaternionMatrix, meta: QImageMeta,
                         model: "PairModel") -> np.ndarray:
    """Decode a full-quaternion matrix back to an RGB image."""
    if meta.mode != "full":
        raise DataError(f"metadata is for mode {meta.mode!r}, expected 'full'")
    if q.cols * 2 != meta.padded_width:
        raise ShapeError(
            f"matrix has {q.cols} columns but metadata says padded width "
            f"{meta.padded_width}")
    raw = q.data @ model.w_dec.T + model.b_dec
    pixels = _quantize_u8(raw * model.norm_scale)
    img = pixels.reshape(q.rows, meta.padded_width, 3)
    return img[:, :meta.original_width, :]


def to_pure_quaternion(img: np.ndarray) -> QuaternionMatrix:
    """Classical embedding: entry (i, j) = 0 + R*i + G*j + B*k, raw scale."""
    img = as_image(img)
    data = np.zeros(img.shape[:2] + (4,))
    data[:, :, 1:] = img
    return QuaternionMatrix(data)


def from_pure_quaternion(q: QuaternionMatrix) -> np.ndarray:
    """Drop the scalar part, round and clamp the vector part to [0, 255]."""
    return _quantize_u8(q.data[:, :, 1:])
