"""Linear 6-4-6 autoencoder mapping adjacent pixel pairs to quaternions.

Six subpixels (two horizontally adjacent RGB pixels, normalized to
[0, 1]) are encoded into four latent values that become the components
(a, b, c, d) of one quaternion, then decoded back.  No hidden layers,
pure linear activations, L2 penalty on the weights only.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass, field

import numpy as np

from .errors import (BadMagicError, ChecksumError, DataError,
                     TrainingDivergedError, UnsupportedVersionError)
from .quat import Quaternion
from .represent import pixel_pairs

__all__ = ["PairModel", "TrainConfig", "TrainResult", "extract_pairs",
           "train", "train_detailed", "loss_and_grads", "encode_pair",
           "decode_pair", "encode_array", "decode_array", "save_model",
           "load_model", "model_checksum"]

MODEL_MAGIC = b"QPM1"
MODEL_VERSION = 1


@dataclass(frozen=True)
class PairModel:
    """Trained encoder/decoder weights of the pixel-pair autoencoder."""

    w_enc: np.ndarray  # (4, 6)
    b_enc: np.ndarray  # (4,)
    w_dec: np.ndarray  # (6, 4)
    b_dec: np.ndarray  # (6,)
    norm_scale: float = 255.0
    format_version: int = MODEL_VERSION

    def __post_init__(self):
        for name, shape in (("w_enc", (4, 6)), ("b_enc", (4,)),
                            ("w_dec", (6, 4)), ("b_dec", (6,))):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            if arr.shape != shape:
                raise DataError(f"{name} must have shape {shape}, got {arr.shape}")
            if not np.all(np.isfinite(arr)):
                raise DataError(f"{name} contains non-finite values")
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class TrainConfig:
    l2_lambda: float = 1e-4
    learning_rate: float = 0.1
    max_epochs: int = 3000
    full_batch: bool = True
    seed: int = 0
    convergence_tol: float = 1e-10
    max_pairs_per_image: int = 4096

    def __post_init__(self):
        if self.l2_lambda < 0:
            raise DataError("l2_lambda must be nonnegative")
        if self.learning_rate <= 0 or self.max_epochs <= 0:
            raise DataError("learning_rate and max_epochs must be positive")
        if self.convergence_tol <= 0 or self.max_pairs_per_image <= 0:
            raise DataError("convergence_tol and max_pairs_per_image must be positive")


@dataclass
class TrainResult:
    model: PairModel
    loss_history: np.ndarray = field(repr=False)
    epochs_run: int = 0


def extract_pairs(images, cfg: TrainConfig) -> np.ndarray:
    """Non-overlapping adjacent-pixel pairs from a corpus, normalized.

    Returns an (n, 6) array in [0, 1].  Each image contributes at most
    cfg.max_pairs_per_image samples, chosen by a seeded uniform
    subsample so the result is reproducible.
    """
    images = list(images)
    if not images:
        raise DataError("empty corpus: no images to extract pairs from")
    rng = np.random.default_rng(cfg.seed)
    chunks = []
    for img in images:
        pairs = pixel_pairs(img) / 255.0
        if len(pairs) > cfg.max_pairs_per_image:
            idx = rng.choice(len(pairs), size=cfg.max_pairs_per_image, replace=False)
            idx.sort()
            pairs = pairs[idx]
        chunks.append(pairs)
    return np.concatenate(chunks, axis=0)


def loss_and_grads(w_enc, b_enc, w_dec, b_dec, x: np.ndarray, l2_lambda: float):
    """Regularized MSE loss and analytic gradients on a batch.

    Loss = mean over all n*6 residual entries of the squared error,
    plus l2_lambda * (sum of squared weights); biases unpenalized.
    """
    n = len(x)
    z = x @ w_enc.T + b_enc
    y = z @ w_dec.T + b_dec
    resid = y - x
    loss = float(np.mean(resid**2)) + l2_lambda * (
        float(np.sum(w_enc**2)) + float(np.sum(w_dec**2)))
    dy = (2.0 / (n * 6)) * resid
    g_b_dec = dy.sum(axis=0)
    g_w_dec = dy.T @ z + 2.0 * l2_lambda * w_dec
    dz = dy @ w_dec
    g_b_enc = dz.sum(axis=0)
    g_w_enc = dz.T @ x + 2.0 * l2_lambda * w_enc
    return loss, (g_w_enc, g_b_enc, g_w_dec, g_b_dec)


def train_detailed(samples: np.ndarray, cfg: TrainConfig) -> TrainResult:
    """Full-batch Adam with a cosine step-size decay over max_epochs.

    Deterministic for fixed (samples, cfg): seeded init, fixed update
    order.  Stops early once 200 consecutive epochs fail to improve on
    the best loss seen so far by a relative cfg.convergence_tol; the
    window has to be generous because Adam's trajectory is not
    monotone.
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != 6:
        raise DataError(f"samples must be (n, 6), got {x.shape}")
    if len(x) < 64:
        raise DataError(f"need at least 64 samples to train, got {len(x)}")

    rng = np.random.default_rng(cfg.seed)
    params = [
        rng.uniform(-0.1, 0.1, (4, 6)),
        np.zeros(4),
        rng.uniform(-0.1, 0.1, (6, 4)),
        np.zeros(6),
    ]
    m = [np.zeros_like(p) for p in params]
    v = [np.zeros_like(p) for p in params]
    beta1, beta2, eps = 0.9, 0.999, 1e-8

    history = np.empty(cfg.max_epochs)
    best_loss = np.inf
    flat_epochs = 0
    epochs_run = 0
    for epoch in range(cfg.max_epochs):
        loss, grads = loss_and_grads(*params, x, cfg.l2_lambda)
        if not np.isfinite(loss):
            raise TrainingDivergedError(epoch)
        history[epoch] = loss
        epochs_run = epoch + 1
        if np.isinf(best_loss):
            improvement = np.inf
        else:
            improvement = (best_loss - loss) / max(best_loss, 1e-300)
        if improvement >= cfg.convergence_tol:
            best_loss = loss
            flat_epochs = 0
        else:
            flat_epochs += 1
        if flat_epochs >= 200:
            break
        t = epoch + 1
        lr = cfg.learning_rate * 0.5 * (1.0 + np.cos(np.pi * epoch / cfg.max_epochs))
        for i, g in enumerate(grads):
            m[i] = beta1 * m[i] + (1 - beta1) * g
            v[i] = beta2 * v[i] + (1 - beta2) * g * g
            m_hat = m[i] / (1 - beta1**t)
            v_hat = v[i] / (1 - beta2**t)
            params[i] = params[i] - lr * m_hat / (np.sqrt(v_hat) + eps)

    model = PairModel(params[0], params[1], params[2], params[3])
    return TrainResult(model, history[:epochs_run], epochs_run)


def train(samples: np.ndarray, cfg: TrainConfig) -> PairModel:
    return train_detailed(samples, cfg).model


def encode_array(model: PairModel, samples: np.ndarray) -> np.ndarray:
    """(n, 6) normalized samples -> (n, 4) latent quaternion components."""
    return samples @ model.w_enc.T + model.b_enc


def decode_array(model: PairModel, latent: np.ndarray) -> np.ndarray:
    """(n, 4) latent components -> raw (n, 6) affine outputs, unclamped."""
    return latent @ model.w_dec.T + model.b_dec


def encode_pair(model: PairModel, sample) -> Quaternion:
    a, b, c, d = encode_array(model, np.asarray(sample, dtype=np.float64))
    return Quaternion(float(a), float(b), float(c), float(d))


def decode_pair(model: PairModel, q: Quaternion) -> np.ndarray:
    raw = decode_array(model, np.array([q.a, q.b, q.c, q.d]))
    return np.clip(raw, 0.0, 1.0)


# -- model file format ---------------------------------------------------
#
# magic "QPM1" | version u16 | norm_scale f64 | payload | crc32 u32
# payload = w_enc (24 f64, row-major) + b_enc (4) + w_dec (24) + b_dec (6),
# all little-endian.

_HEADER = struct.Struct("<4sHd")
_N_PAYLOAD_F64 = 24 + 4 + 24 + 6


def _payload_bytes(model: PairModel) -> bytes:
    flat = np.concatenate([model.w_enc.ravel(), model.b_enc,
                           model.w_dec.ravel(), model.b_dec])
    return flat.astype("<f8").tobytes()


def model_checksum(model: PairModel) -> int:
    """CRC-32 of the serialized parameters; stored in containers."""
    return zlib.crc32(_payload_bytes(model))


def save_model(model: PairModel) -> bytes:
    payload = _payload_bytes(model)
    return (_HEADER.pack(MODEL_MAGIC, model.format_version, model.norm_scale)
            + payload + struct.pack("<I", zlib.crc32(payload)))


def load_model(blob: bytes) -> PairModel:
    if len(blob) < _HEADER.size or blob[:4] != MODEL_MAGIC:
        raise BadMagicError("not a pair-model file (bad magic)")
    magic, version, norm_scale = _HEADER.unpack(blob[:_HEADER.size])
    if version != MODEL_VERSION:
        raise UnsupportedVersionError(f"unsupported model version {version}")
    body = blob[_HEADER.size:]
    expected = _N_PAYLOAD_F64 * 8
    if len(body) != expected + 4:
        raise ChecksumError(
            f"model file truncated or padded: payload {len(body)} bytes, "
            f"expected {expected + 4}")
    payload, crc_bytes = body[:expected], body[expected:]
    if zlib.crc32(payload) != struct.unpack("<I", crc_bytes)[0]:
        raise ChecksumError("model payload checksum mismatch")
    flat = np.frombuffer(payload, dtype="<f8")
    return PairModel(
        flat[0:24].reshape(4, 6), flat[24:28],
        flat[28:52].reshape(6, 4), flat[52:58],
        norm_scale=norm_scale, format_version=version)
