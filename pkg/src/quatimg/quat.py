"""Quaternion scalars and dense quaternion matrices.

A quaternion q = a + b*i + c*j + d*k is stored as four float64
components.  Matrices keep their entries in a read-only
(rows, cols, 4) array in row-major order; all operations return fresh
values, nothing mutates in place.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import qmatmul
from .errors import ShapeError

__all__ = ["Quaternion", "QuaternionMatrix"]


@dataclass(frozen=True)
class Quaternion:
    """a + b*i + c*j + d*k with Hamilton multiplication."""

    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0

    @property
    def scalar_part(self) -> float:
        return self.a

    @property
    def vector_part(self) -> tuple[float, float, float]:
        return (self.b, self.c, self.d)

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def norm(self) -> float:
        return math.sqrt(self.a * self.a + self.b * self.b
                         + self.c * self.c + self.d * self.d)

    def cayley_dickson(self) -> tuple[complex, complex]:
        """Split q = z1 + z2*j into (z1, z2) = (a+bi, c+di)."""
        return (complex(self.a, self.b), complex(self.c, self.d))

    @staticmethod
    def from_cayley_dickson(z1: complex, z2: complex) -> "Quaternion":
        return Quaternion(z1.real, z1.imag, z2.real, z2.imag)

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d])

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.a + other.a, self.b + other.b,
                          self.c + other.c, self.d + other.d)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.a - other.a, self.b - other.b,
                          self.c - other.c, self.d - other.d)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            p, q = self, other
            # fsum keeps each component correctly rounded; the algebra
            # test tolerances are tight enough to care.
            return Quaternion(
                math.fsum((p.a * q.a, -p.b * q.b, -p.c * q.c, -p.d * q.d)),
                math.fsum((p.a * q.b, p.b * q.a, p.c * q.d, -p.d * q.c)),
                math.fsum((p.a * q.c, -p.b * q.d, p.c * q.a, p.d * q.b)),
                math.fsum((p.a * q.d, p.b * q.c, -p.c * q.b, p.d * q.a)),
            )
        if isinstance(other, (int, float)):
            s = float(other)
            return Quaternion(self.a * s, self.b * s, self.c * s, self.d * s)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            s = float(other)
            return Quaternion(s * self.a, s * self.b, s * self.c, s * self.d)
        return NotImplemented

    def isclose(self, other: "Quaternion", atol: float = 1e-12) -> bool:
        return (abs(self.a - other.a) <= atol and abs(self.b - other.b) <= atol
                and abs(self.c - other.c) <= atol and abs(self.d - other.d) <= atol)

    def __repr__(self) -> str:
        return f"Quaternion({self.a}, {self.b}, {self.c}, {self.d})"


class QuaternionMatrix:
    """Dense N x M quaternion matrix backed by a (N, M, 4) float64 array."""

    __slots__ = ("_data",)

    def __init__(self, data: np.ndarray):
        arr = np.asarray(data, dtype=np.float64)
        if arr.ndim != 3 or arr.shape[2] != 4:
            raise ShapeError(f"expected (rows, cols, 4) array, got {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ShapeError(f"matrix dimensions must be positive, got {arr.shape[:2]}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("quaternion matrix entries must be finite")
        arr = np.ascontiguousarray(arr)
        if arr is data or not arr.flags.owndata:
            arr = arr.copy()
        arr.flags.writeable = False
        self._data = arr

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QuaternionMatrix":
        return cls(np.zeros((rows, cols, 4)))

    @classmethod
    def identity(cls, n: int) -> "QuaternionMatrix":
        data = np.zeros((n, n, 4))
        data[np.arange(n), np.arange(n), 0] = 1.0
        return cls(data)

    @classmethod
    def from_components(cls, a, b, c, d) -> "QuaternionMatrix":
        return cls(np.stack([a, b, c, d], axis=-1))

    @classmethod
    def from_complex_pair(cls, z1: np.ndarray, z2: np.ndarray) -> "QuaternionMatrix":
        """Inverse of cayley_dickson(): entries z1 + z2*j."""
        return cls.from_components(z1.real, z1.imag, z2.real, z2.imag)

    # -- basic queries ---------------------------------------------------------

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return (self._data.shape[0], self._data.shape[1])

    @property
    def data(self) -> np.ndarray:
        """Read-only (rows, cols, 4) component array."""
        return self._data

    def component(self, idx: int) -> np.ndarray:
        return self._data[:, :, idx]

    def scalar_part(self) -> np.ndarray:
        return self._data[:, :, 0]

    def vector_part(self) -> np.ndarray:
        return self._data[:, :, 1:]

    def __getitem__(self, key) -> Quaternion:
        i, j = key
        return Quaternion(*self._data[i, j])

    # -- algebra ---------------------------------------------------------------

    def conj(self) -> "QuaternionMatrix":
        out = self._data.copy()
        out[:, :, 1:] *= -1.0
        return QuaternionMatrix(out)

    def conj_transpose(self) -> "QuaternionMatrix":
        out = self._data.transpose(1, 0, 2).copy()
        out[:, :, 1:] *= -1.0
        return QuaternionMatrix(out)

    def cayley_dickson(self) -> tuple[np.ndarray, np.ndarray]:
        """Entrywise split Q = Z1 + Z2*j into two complex arrays."""
        z1 = self._data[:, :, 0] + 1j * self._data[:, :, 1]
        z2 = self._data[:, :, 2] + 1j * self._data[:, :, 3]
        return z1, z2

    def __matmul__(self, other: "QuaternionMatrix") -> "QuaternionMatrix":
        if not isinstance(other, QuaternionMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ShapeError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        return QuaternionMatrix(qmatmul(self._data, other._data))

    def scale_columns(self, factors: np.ndarray) -> "QuaternionMatrix":
        """Multiply column k by the real scalar factors[k]."""
        factors = np.asarray(factors, dtype=np.float64)
        if factors.shape != (self.cols,):
            raise ShapeError(f"expected {self.cols} factors, got {factors.shape}")
        return QuaternionMatrix(self._data * factors[None, :, None])

    def __add__(self, other: "QuaternionMatrix") -> "QuaternionMatrix":
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")
        return QuaternionMatrix(self._data + other._data)

    def __sub__(self, other: "QuaternionMatrix") -> "QuaternionMatrix":
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")
        return QuaternionMatrix(self._data - other._data)

    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self._data))

    def allclose(self, other: "QuaternionMatrix", atol: float = 1e-10) -> bool:
        return self.shape == other.shape and bool(
            np.allclose(self._data, other._data, rtol=0.0, atol=atol))

    def __repr__(self) -> str:
        return f"QuaternionMatrix({self.rows}x{self.cols})"
