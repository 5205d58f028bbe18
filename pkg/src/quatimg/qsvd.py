"""Quaternion singular value decomposition via the complex adjoint.

An N x M quaternion matrix Q = Z1 + Z2*j embeds into the 2N x 2M
complex matrix

    [[ Z1,        Z2      ],
     [ -conj(Z2), conj(Z1) ]]

whose singular values are those of Q, each with doubled multiplicity.
One complex singular triplet per pair maps back to a quaternion triplet
through phi([x; y]) = x - conj(y)*j, which intertwines the two products
exactly.  Degenerate singular-value clusters need a re-orthogonalization
pass because the complex SVD is free to mix the paired subspaces there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ._backend import qmatmul
from .errors import ShapeError, SvdConvergenceError
from .quat import QuaternionMatrix

__all__ = ["QsvdFactors", "TruncatedFactors", "complex_adjoint", "qsvd",
           "truncate", "reconstruct"]

# Relative gap under which neighbouring singular values are treated as
# one degenerate cluster, relative size under which dividing by sigma
# is no longer safe, and relative size under which a value counts as zero.
_CLUSTER_RTOL = 1e-7
_DIV_RTOL = 1e-9
_ZERO_RTOL = 1e-12


@dataclass(frozen=True)
class QsvdFactors:
    """Economy factors Q = U diag(sigma) V^H with r = min(N, M)."""

    u: QuaternionMatrix
    sigma: np.ndarray
    v: QuaternionMatrix


@dataclass(frozen=True)
class TruncatedFactors:
    """Leading-t slice of a QsvdFactors."""

    u: QuaternionMatrix
    sigma: np.ndarray
    v: QuaternionMatrix

    @property
    def t(self) -> int:
        return len(self.sigma)


def complex_adjoint(q: QuaternionMatrix) -> np.ndarray:
    """The 2N x 2M complex adjoint of an N x M quaternion matrix."""
    z1, z2 = q.cayley_dickson()
    top = np.hstack([z1, z2])
    bottom = np.hstack([-np.conj(z2), np.conj(z1)])
    return np.vstack([top, bottom])


def _hamilton(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Elementwise Hamilton product of (..., 4) component arrays."""
    pa, pb, pc, pd = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    qa, qb, qc, qd = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    return np.stack([
        pa * qa - pb * qb - pc * qc - pd * qd,
        pa * qb + pb * qa + pc * qd - pd * qc,
        pa * qc - pb * qd + pc * qa + pd * qb,
        pa * qd + pb * qc - pc * qb + pd * qa,
    ], axis=-1)


def _qconj(p: np.ndarray) -> np.ndarray:
    out = p.copy()
    out[..., 1:] *= -1.0
    return out


def _qdot(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Quaternion inner product sum_i conj(u_i) v_i of (N,4) columns."""
    return _hamilton(_qconj(u), v).sum(axis=0)


def _phi(vec: np.ndarray) -> np.ndarray:
    """Map a complex 2n-vector [x; y] to the quaternion column x - conj(y)*j."""
    n = vec.shape[0] // 2
    x, y = vec[:n], vec[n:]
    z2 = -np.conj(y)
    return np.stack([x.real, x.imag, z2.real, z2.imag], axis=-1)


def _pick_orthonormal(candidates: list[np.ndarray], count: int,
                      against: list[np.ndarray] = ()) -> list[np.ndarray]:
    """Greedy pivoted quaternion Gram-Schmidt.

    The 2c complex singular vectors of a degenerate cluster map to
    quaternion columns spanning only a c-dimensional quaternion
    subspace, so individual picks may be dependent; selecting the
    largest residual at each step is rank-revealing.  Columns in
    `against` are projected out first.
    """
    residuals = [c.copy() for c in candidates]
    for b in against:
        for r in residuals:
            coeff = _qdot(b, r)
            r -= _hamilton(b, np.broadcast_to(coeff, b.shape))
    picked: list[np.ndarray] = []
    for _ in range(count):
        norms = [np.linalg.norm(r) for r in residuals]
        best = int(np.argmax(norms))
        col = residuals.pop(best) / norms[best]
        picked.append(col)
        for r in residuals:
            c = _qdot(col, r)
            r -= _hamilton(col, np.broadcast_to(c, col.shape))
    return picked


def qsvd(q: QuaternionMatrix) -> QsvdFactors:
    """Economy QSVD with sigma real, nonnegative and non-increasing."""
    n, m = q.shape
    r = min(n, m)
    adj = complex_adjoint(q)
    try:
        # Golub-Kahan bidiagonalization (LAPACK gesvd) on the adjoint.
        uc, sc, vch = scipy.linalg.svd(adj, full_matrices=False,
                                       lapack_driver="gesvd")
    except np.linalg.LinAlgError as exc:
        raise SvdConvergenceError(
            f"complex SVD of the {2*n}x{2*m} adjoint did not converge: {exc}"
        ) from exc
    vc = vch.conj().T

    sigma = sc[0::2].copy()
    smax = sigma[0] if sigma.size else 0.0
    zero_tol = smax * _ZERO_RTOL
    div_tol = smax * _DIV_RTOL
    gap_tol = smax * _CLUSTER_RTOL

    ucols = np.empty((n, r, 4))
    vcols = np.empty((m, r, 4))

    # Walk sigma in degenerate clusters.  Singleton clusters take the
    # matched complex singular vectors directly; inside a cluster the
    # right vectors are rebuilt by pivoted quaternion Gram-Schmidt over
    # all of the cluster's complex columns and the left ones recomputed
    # as Q v / sigma (or rebuilt the same way for a zero cluster).
    start = 0
    while start < r:
        stop = start + 1
        while (stop < r and sigma[stop - 1] - sigma[stop] <= gap_tol
               and (sigma[stop] > zero_tol) == (sigma[start] > zero_tol)):
            stop += 1
        size = stop - start
        if size == 1 and sigma[start] > div_tol:
            ucols[:, start] = _phi(uc[:, 2 * start])
            vcols[:, start] = _phi(vc[:, 2 * start])
        else:
            v_picked = _pick_orthonormal(
                [_phi(vc[:, l]) for l in range(2 * start, 2 * stop)], size)
            for k, vk in zip(range(start, stop), v_picked):
                vcols[:, k] = vk
            # sigma is sorted, so the divide-safe part is a prefix
            n_big = int(np.searchsorted(-sigma[start:stop], -div_tol, side="left"))
            u_big: list[np.ndarray] = []
            if n_big:
                qv = qmatmul(q.data,
                             np.ascontiguousarray(np.stack(v_picked[:n_big], axis=1)))
                for k in range(start, start + n_big):
                    ucols[:, k] = qv[:, k - start] / sigma[k]
                    u_big.append(ucols[:, k])
            if n_big < size:
                sigma[start + n_big:stop][sigma[start + n_big:stop] <= zero_tol] = 0.0
                u_small = _pick_orthonormal(
                    [_phi(uc[:, l]) for l in range(2 * start, 2 * stop)],
                    size - n_big, against=u_big)
                for k, uk in zip(range(start + n_big, stop), u_small):
                    ucols[:, k] = uk
        start = stop

    _normalize_phases(ucols, vcols)
    return QsvdFactors(QuaternionMatrix(ucols), sigma, QuaternionMatrix(vcols))


def _normalize_phases(ucols: np.ndarray, vcols: np.ndarray) -> None:
    """Right-multiply each column pair by a unit quaternion so the first
    significant entry of the U column becomes real and nonnegative."""
    n, r = ucols.shape[0], ucols.shape[1]
    for k in range(r):
        col = ucols[:, k]
        norms = np.linalg.norm(col, axis=-1)
        thresh = norms.max() * 1e-9
        if thresh == 0.0:
            continue
        first = int(np.argmax(norms > thresh))
        pivot = col[first]
        d = _qconj(pivot) / np.linalg.norm(pivot)
        ucols[:, k] = _hamilton(col, np.broadcast_to(d, col.shape))
        vc = vcols[:, k]
        vcols[:, k] = _hamilton(vc, np.broadcast_to(d, vc.shape))


def truncate(f: QsvdFactors, t: int) -> TruncatedFactors:
    """Keep the t largest singular values and matching factor columns."""
    r = len(f.sigma)
    if not 1 <= t <= r:
        raise ValueError(f"truncation rank t={t} out of range [1, {r}]")
    return TruncatedFactors(
        QuaternionMatrix(f.u.data[:, :t]),
        f.sigma[:t].copy(),
        QuaternionMatrix(f.v.data[:, :t]),
    )


def reconstruct(f: TruncatedFactors | QsvdFactors) -> QuaternionMatrix:
    """U diag(sigma) V^H with left-to-right quaternion products."""
    t = len(f.sigma)
    if f.u.cols != t or f.v.cols != t:
        raise ShapeError(
            f"inconsistent factors: U has {f.u.cols} cols, V has {f.v.cols}, "
            f"sigma has {t} values")
    return f.u.scale_columns(f.sigma) @ f.v.conj_transpose()
