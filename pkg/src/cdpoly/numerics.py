"""Finite-difference Jacobians and numerical kernel dimension."""
from __future__ import annotations

from collections.abc import Callable

import numpy as np

BatchMap = Callable[[np.ndarray], np.ndarray]


def fd_step(x: np.ndarray) -> float:
    return 1e-6 * (1.0 + float(np.linalg.norm(x)))


def jacobian_fd(f: BatchMap, x: np.ndarray, h: float | None = None) -> np.ndarray:
    """Central-difference Jacobian of a batched map at ``x``.

    ``f`` must accept an array of points with shape ``(B, d)`` and return
    ``(B, d_out)``. All ``2 d`` shifted points are evaluated in one call.
    """
    x = np.asarray(x, dtype=np.float64)
    d = x.shape[0]
    if h is None:
        h = fd_step(x)
    shifts = np.eye(d) * h
    pts = np.concatenate([x + shifts, x - shifts])
    vals = np.asarray(f(pts))
    return ((vals[:d] - vals[d:]) / (2.0 * h)).T


def kernel_dimension(J: np.ndarray, threshold_ratio: float = 1e-6) -> tuple[int, np.ndarray]:
    """Kernel dimension of ``J`` and its singular values (descending).

    Singular values below ``threshold_ratio * sigma_max`` count as zero, as do
    the surplus columns of a wide matrix.
    """
    sv = np.linalg.svd(J, compute_uv=False)
    cols = J.shape[1]
    if sv.size == 0 or sv[0] == 0.0:
        return cols, sv
    rank = int(np.count_nonzero(sv >= threshold_ratio * sv[0]))
    return cols - rank, sv


def kernel_basis(J: np.ndarray, threshold_ratio: float = 1e-6) -> np.ndarray:
    """Orthonormal basis of the numerical kernel, one vector per row."""
    _, sv, vt = np.linalg.svd(J)
    if sv.size == 0 or sv[0] == 0.0:
        return np.eye(J.shape[1])
    rank = int(np.count_nonzero(sv >= threshold_ratio * sv[0]))
    return vt[rank:]
