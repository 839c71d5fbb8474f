"""Dense matrix functions on small real matrices.

Symmetric eigendecomposition, SPD square roots, spectral norm and the
matrix exponential, sized for coefficient matrices of modest order.
"""

import math

import numpy as np

from .errors import EigenFailure, NotPositiveDefinite

__all__ = [
    "symmetrize",
    "as_real_matrix",
    "sym_eigen",
    "spd_sqrt",
    "spd_inv_sqrt",
    "spectral_norm",
    "matrix_exp",
    "canonical_sign",
]

MAX_ORDER = 64
_EXP_TAYLOR_TERMS = 18


def symmetrize(entries) -> np.ndarray:
    """Return the exactly symmetric part 0.5*(M + M^T) as a float array."""
    m = np.asarray(entries, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return 0.5 * (m + m.T)


def as_real_matrix(entries) -> np.ndarray:
    """Validate a finite real matrix and return it as a float array."""
    m = np.asarray(entries, dtype=float)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def canonical_sign(vec) -> np.ndarray:
    """Pick the lexicographically smaller of {v, -v} (reproducible maximizers)."""
    v = np.asarray(vec, dtype=float) + 0.0  # drop negative zeros
    w = -v + 0.0
    return v if tuple(v) <= tuple(w) else w


def sym_eigen(m):
    """Eigendecomposition of a symmetric matrix.

    Returns ``(w, V)`` with eigenvalues sorted in descending order and
    orthonormal eigenvector columns such that ``M = V @ diag(w) @ V.T``.
    """
    m = symmetrize(m)
    if m.shape[0] > MAX_ORDER:
        raise ValueError(f"matrix order {m.shape[0]} exceeds supported {MAX_ORDER}")
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        off = m - np.diag(np.diag(m))
        raise EigenFailure(np.max(np.abs(off))) from exc
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]


def _spd_eigen(m):
    w, v = sym_eigen(m)
    norm = max(abs(w[0]), abs(w[-1])) if w.size else 0.0
    floor = 1e-12 * max(1.0, norm)
    if w.size == 0 or w[-1] <= floor:
        raise NotPositiveDefinite(w[-1] if w.size else 0.0, floor)
    return w, v


def spd_sqrt(m) -> np.ndarray:
    """Symmetric positive definite square root of an SPD matrix."""
    w, v = _spd_eigen(m)
    return symmetrize(v @ np.diag(np.sqrt(w)) @ v.T)


def spd_inv_sqrt(m) -> np.ndarray:
    """Inverse of the SPD square root of an SPD matrix."""
    w, v = _spd_eigen(m)
    return symmetrize(v @ np.diag(1.0 / np.sqrt(w)) @ v.T)


def spectral_norm(b):
    """Spectral norm of a real matrix.

    Returns ``(value, z)`` where ``value = max_{|z|=1} |B z|`` and ``z`` is a
    maximizing unit vector (sign-canonicalized).
    """
    b = as_real_matrix(b)
    _, s, vt = np.linalg.svd(b)
    return float(s[0]), canonical_sign(vt[0])


def matrix_exp(b) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a fixed-order series.

    The squaring count comes from ``ceil(log2 ||B||_1)`` so the series is
    always applied at norm <= 1.
    """
    b = as_real_matrix(b)
    if b.shape[0] != b.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {b.shape}")
    norm1 = float(np.abs(b).sum(axis=0).max()) if b.size else 0.0
    squarings = max(0, math.ceil(math.log2(norm1))) if norm1 > 1.0 else 0
    a = b / (2.0**squarings)
    eye = np.eye(b.shape[0])
    term = eye.copy()
    out = eye.copy()
    for k in range(1, _EXP_TAYLOR_TERMS + 1):
        term = term @ a / k
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out
