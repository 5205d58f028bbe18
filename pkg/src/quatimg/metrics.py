"""Reconstruction quality and size measures.

MSE is per channel; PSNR pools the squared error over all subpixels
with MAX_I = 255; SSIM is the single global statistic (no sliding
window) on the Rec. BT.601 luma with K1=0.01, K2=0.03, L=255 and
population-normalized variances; CR is the plain byte ratio against the
raw 24-bit size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError, ShapeError

__all__ = ["QualityReport", "CSV_COLUMNS", "mse_channel", "mse_per_channel",
           "pooled_mse", "psnr", "ssim", "compression_ratio",
           "raw_size_bytes", "evaluate"]

_SSIM_K1 = 0.01
_SSIM_K2 = 0.03
_SSIM_L = 255.0
_LUMA_WEIGHTS = (0.299, 0.587, 0.114)  # Rec. BT.601

CSV_COLUMNS = ["image_id", "mode", "n", "t", "mse_r", "mse_g", "mse_b",
               "psnr_db", "ssim", "cr", "container_bytes", "qsvd_seconds"]


@dataclass
class QualityReport:
    mse_r: float
    mse_g: float
    mse_b: float
    psnr_db: float
    ssim: float
    cr: float | None = None
    image_id: str = ""
    mode: str = ""
    n: int = 0
    t: int = 0
    container_bytes: int = 0
    qsvd_seconds: float = 0.0

    def csv_row(self) -> list[str]:
        return [self.image_id, self.mode, str(self.n), str(self.t),
                repr(self.mse_r), repr(self.mse_g), repr(self.mse_b),
                repr(self.psnr_db), repr(self.ssim),
                "" if self.cr is None else repr(self.cr),
                str(self.container_bytes), repr(self.qsvd_seconds)]

    @classmethod
    def from_csv_row(cls, row: list[str]) -> "QualityReport":
        return cls(image_id=row[0], mode=row[1], n=int(row[2]), t=int(row[3]),
                   mse_r=float(row[4]), mse_g=float(row[5]), mse_b=float(row[6]),
                   psnr_db=float(row[7]), ssim=float(row[8]),
                   cr=float(row[9]) if row[9] else None,
                   container_bytes=int(row[10]), qsvd_seconds=float(row[11]))


def _check_same_shape(i1: np.ndarray, i2: np.ndarray) -> None:
    if i1.shape != i2.shape:
        raise ShapeError(f"image shapes differ: {i1.shape} vs {i2.shape}")


def mse_channel(c1: np.ndarray, c2: np.ndarray) -> float:
    """Mean squared difference of two equally sized channels."""
    c1 = np.asarray(c1)
    c2 = np.asarray(c2)
    _check_same_shape(c1, c2)
    diff = c1.astype(np.float64) - c2.astype(np.float64)
    return float(np.mean(diff * diff))


def mse_per_channel(i1: np.ndarray, i2: np.ndarray) -> tuple[float, float, float]:
    _check_same_shape(i1, i2)
    return tuple(mse_channel(i1[:, :, c], i2[:, :, c]) for c in range(3))


def pooled_mse(i1: np.ndarray, i2: np.ndarray) -> float:
    """Single mean over all 3*N*M subpixel squared differences."""
    return mse_channel(i1, i2)


def psnr(i1: np.ndarray, i2: np.ndarray) -> float:
    """10 log10(255^2 / pooled MSE); +inf for identical images."""
    mse = pooled_mse(i1, i2)
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0**2 / mse)


def _luma(img: np.ndarray) -> np.ndarray:
    r, g, b = _LUMA_WEIGHTS
    f = img.astype(np.float64)
    return r * f[:, :, 0] + g * f[:, :, 1] + b * f[:, :, 2]


def ssim(i1: np.ndarray, i2: np.ndarray) -> float:
    """Global (whole-image) SSIM on the BT.601 luma."""
    i1 = np.asarray(i1)
    i2 = np.asarray(i2)
    _check_same_shape(i1, i2)
    x = _luma(i1).ravel()
    y = _luma(i2).ravel()
    c1 = (_SSIM_K1 * _SSIM_L) ** 2
    c2 = (_SSIM_K2 * _SSIM_L) ** 2
    mx, my = x.mean(), y.mean()
    # population normalization (divide by the sample count)
    vx = np.mean((x - mx) ** 2)
    vy = np.mean((y - my) ** 2)
    cov = np.mean((x - mx) * (y - my))
    return float(((2 * mx * my + c1) * (2 * cov + c2))
                 / ((mx * mx + my * my + c1) * (vx + vy + c2)))


def raw_size_bytes(img: np.ndarray) -> int:
    """Uncompressed reference size: 3 bytes per pixel."""
    return 3 * img.shape[0] * img.shape[1]


def compression_ratio(uncompressed_size: int, compressed_size: int) -> float:
    if compressed_size <= 0:
        raise DataError("compressed size must be positive")
    return uncompressed_size / compressed_size


def evaluate(original: np.ndarray, reconstructed: np.ndarray,
             container_bytes: int | None = None, **ids) -> QualityReport:
    """Full QualityReport for a reconstruction."""
    mr, mg, mb = mse_per_channel(original, reconstructed)
    cr = None
    if container_bytes:
        cr = compression_ratio(raw_size_bytes(original), container_bytes)
    return QualityReport(mse_r=mr, mse_g=mg, mse_b=mb,
                         psnr_db=psnr(original, reconstructed),
                         ssim=ssim(original, reconstructed), cr=cr,
                         container_bytes=container_bytes or 0, **ids)
