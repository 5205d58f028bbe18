"""Full-quaternion color image representation and QSVD block compression."""

from ._backend import BACKEND_NAME, HAVE_COMPILED
from .autoencoder import (PairModel, TrainConfig, decode_pair, encode_pair,
                          extract_pairs, load_model, save_model, train)
from .codec import CodecParams, compress, decompress
from .metrics import QualityReport, compression_ratio, psnr, ssim
from .qsvd import QsvdFactors, TruncatedFactors, complex_adjoint, qsvd, reconstruct, truncate
from .quat import Quaternion, QuaternionMatrix

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME", "HAVE_COMPILED", "Quaternion", "QuaternionMatrix",
    "QsvdFactors", "TruncatedFactors", "complex_adjoint", "qsvd", "truncate",
    "reconstruct", "PairModel", "TrainConfig", "train", "extract_pairs",
    "encode_pair", "decode_pair", "save_model", "load_model", "CodecParams",
    "compress", "decompress", "QualityReport", "psnr", "ssim",
    "compression_ratio", "__version__",
]
