"""Block-wise QSVD image compression and the inverse pipeline.

compress: image -> quaternion representation (full or pure) -> n x n
blocks -> per-block QSVD truncated to rank t -> float32 factors ->
DEFLATE.  decompress runs the same steps backwards.

Container layout (little-endian):

    magic "QSVC" | version u16 | mode u8 (1=full, 2=pure) | n u16 |
    t u16 | height u32 | original width u32 | padded width u32 |
    matrix rows u32 | matrix cols u32 | model crc32 u32 |
    payload length u64 | DEFLATE-compressed payload

Payload, per block in row-major block order: U as n*t quaternions
(4 x f32 each, a b c d), sigma as t x f32, V as n*t quaternions.
"""

from __future__ import annotations

import struct
import time
import zlib
from dataclasses import dataclass
from math import ceil

import numpy as np

from . import qsvd as qsvd_mod
from .autoencoder import PairModel, model_checksum
from .errors import (BadMagicError, DataError, PayloadError,
                     UnsupportedVersionError, UsageError, WrongModelError)
from .quat import QuaternionMatrix
from .represent import (QImageMeta, as_image, from_full_quaternion,
                        from_pure_quaternion, to_full_quaternion,
                        to_pure_quaternion)

__all__ = ["CodecParams", "CodecStats", "SUPPORTED_BLOCK_SIZES",
           "split_blocks", "merge_blocks", "compress", "compress_with_stats",
           "decompress", "compress_bytes", "decompress_bytes",
           "time_block_qsvd"]

CONTAINER_MAGIC = b"QSVC"
CONTAINER_VERSION = 1
SUPPORTED_BLOCK_SIZES = (16, 32, 64, 128, 256)

_MODE_CODES = {"full": 1, "pure": 2}
_MODE_NAMES = {v: k for k, v in _MODE_CODES.items()}

_HEADER = struct.Struct("<4sHBHHIIIIIIQ")


@dataclass(frozen=True)
class CodecParams:
    block_size: int
    rank: int
    mode: str = "full"

    def __post_init__(self):
        if self.block_size not in SUPPORTED_BLOCK_SIZES:
            raise UsageError(
                f"block size must be one of {SUPPORTED_BLOCK_SIZES}, "
                f"got {self.block_size}")
        if not 1 <= self.rank <= self.block_size:
            raise UsageError(
                f"rank t={self.rank} must satisfy 1 <= t <= n={self.block_size}")
        if self.mode not in _MODE_CODES:
            raise UsageError(f"mode must be 'full' or 'pure', got {self.mode!r}")


@dataclass
class CodecStats:
    qsvd_seconds: float = 0.0
    payload_bytes: int = 0
    container_bytes: int = 0


def split_blocks(q: QuaternionMatrix, n: int) -> list[QuaternionMatrix]:
    """Tile into n x n blocks, row-major, replicate-padding the edges."""
    if n < 1:
        raise UsageError("block size must be >= 1")
    rows, cols = q.shape
    pr = (-rows) % n
    pc = (-cols) % n
    data = np.pad(q.data, ((0, pr), (0, pc), (0, 0)), mode="edge")
    blocks = []
    for i in range(0, rows + pr, n):
        for j in range(0, cols + pc, n):
            blocks.append(QuaternionMatrix(data[i:i + n, j:j + n]))
    return blocks


def merge_blocks(blocks: list[QuaternionMatrix], rows: int, cols: int,
                 n: int) -> QuaternionMatrix:
    """Inverse of split_blocks, cropping the padding away."""
    bx = ceil(cols / n)
    by = ceil(rows / n)
    if len(blocks) != bx * by:
        raise DataError(f"expected {bx * by} blocks, got {len(blocks)}")
    data = np.empty((by * n, bx * n, 4))
    for idx, block in enumerate(blocks):
        i, j = divmod(idx, bx)
        data[i * n:(i + 1) * n, j * n:(j + 1) * n] = block.data
    return QuaternionMatrix(data[:rows, :cols])


# -- lossless backend ------------------------------------------------------

def compress_bytes(payload: bytes) -> bytes:
    """Deterministic DEFLATE, fixed maximum-effort settings."""
    return zlib.compress(payload, 9)


def decompress_bytes(blob: bytes) -> bytes:
    try:
        return zlib.decompress(blob)
    except zlib.error as exc:
        raise PayloadError(f"corrupt compressed payload: {exc}") from exc


# -- block factor serialization ---------------------------------------------

def _serialize_block(tf: qsvd_mod.TruncatedFactors) -> bytes:
    return (tf.u.data.astype("<f4").tobytes()
            + tf.sigma.astype("<f4").tobytes()
            + tf.v.data.astype("<f4").tobytes())


def _deserialize_block(buf: memoryview, n: int, t: int) -> qsvd_mod.TruncatedFactors:
    flat = np.frombuffer(buf, dtype="<f4").astype(np.float64)
    u_len = n * t * 4
    u = flat[:u_len].reshape(n, t, 4)
    sigma = flat[u_len:u_len + t]
    v = flat[u_len + t:].reshape(n, t, 4)
    return qsvd_mod.TruncatedFactors(QuaternionMatrix(u), sigma, QuaternionMatrix(v))


def _block_nbytes(n: int, t: int) -> int:
    return 4 * t * (8 * n + 1)


# -- pipelines ---------------------------------------------------------------

def compress_with_stats(img: np.ndarray, model: PairModel | None,
                        params: CodecParams) -> tuple[bytes, CodecStats]:
    img = as_image(img)
    if params.mode == "full":
        if model is None:
            raise UsageError("full mode requires a pair model")
        q, meta = to_full_quaternion(img, model)
        crc = model_checksum(model)
    else:
        q = to_pure_quaternion(img)
        meta = QImageMeta(img.shape[1], img.shape[1], "pure")
        crc = 0

    stats = CodecStats()
    chunks = []
    for block in split_blocks(q, params.block_size):
        t0 = time.perf_counter()
        factors = qsvd_mod.qsvd(block)
        stats.qsvd_seconds += time.perf_counter() - t0
        chunks.append(_serialize_block(qsvd_mod.truncate(factors, params.rank)))
    payload = b"".join(chunks)
    stats.payload_bytes = len(payload)

    header = _HEADER.pack(
        CONTAINER_MAGIC, CONTAINER_VERSION, _MODE_CODES[params.mode],
        params.block_size, params.rank, img.shape[0], meta.original_width,
        meta.padded_width, q.rows, q.cols, crc, len(payload))
    blob = header + compress_bytes(payload)
    stats.container_bytes = len(blob)
    return blob, stats


def compress(img: np.ndarray, model: PairModel | None,
             params: CodecParams) -> bytes:
    return compress_with_stats(img, model, params)[0]


def decompress(blob: bytes, model: PairModel | None = None) -> np.ndarray:
    if len(blob) < _HEADER.size or blob[:4] != CONTAINER_MAGIC:
        raise BadMagicError("not a QSVC container (bad magic)")
    (_, version, mode_code, n, t, height, orig_w, padded_w,
     rows, cols, crc, payload_len) = _HEADER.unpack(blob[:_HEADER.size])
    if version != CONTAINER_VERSION:
        raise UnsupportedVersionError(f"unsupported container version {version}")
    mode = _MODE_NAMES.get(mode_code)
    if mode is None:
        raise PayloadError(f"unknown mode code {mode_code}")

    if mode == "full":
        if model is None:
            raise UsageError("full-mode container requires the pair model")
        if model_checksum(model) != crc:
            raise WrongModelError(
                "container was produced with a different pair model "
                f"(checksum {crc:#010x})")

    payload = decompress_bytes(blob[_HEADER.size:])
    if len(payload) != payload_len:
        raise PayloadError(
            f"payload decompressed to {len(payload)} bytes, header declares "
            f"{payload_len}")
    n_blocks = ceil(rows / n) * ceil(cols / n)
    per_block = _block_nbytes(n, t)
    if len(payload) != n_blocks * per_block:
        raise PayloadError("payload size inconsistent with block geometry")

    view = memoryview(payload)
    blocks = []
    for b in range(n_blocks):
        tf = _deserialize_block(view[b * per_block:(b + 1) * per_block], n, t)
        blocks.append(qsvd_mod.reconstruct(tf))
    q = merge_blocks(blocks, rows, cols, n)

    if mode == "full":
        meta = QImageMeta(orig_w, padded_w, "full")
        return from_full_quaternion(q, meta, model)
    return from_pure_quaternion(q)


def time_block_qsvd(img: np.ndarray, model: PairModel | None, mode: str,
                    n: int, reps: int = 1) -> float:
    """Median wall-clock seconds for the QSVD of all blocks of one image.

    Measures decomposition only: representation, splitting and
    serialization are excluded.
    """
    if mode == "full":
        if model is None:
            raise UsageError("full mode requires a pair model")
        q, _ = to_full_quaternion(as_image(img), model)
    else:
        q = to_pure_quaternion(as_image(img))
    blocks = split_blocks(q, n)
    times = []
    for _ in range(max(1, reps)):
        t0 = time.perf_counter()
        for block in blocks:
            qsvd_mod.qsvd(block)
        times.append(time.perf_counter() - t0)
    return float(np.median(times))
