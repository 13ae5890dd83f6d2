"""Small dense linear algebra on complex and real vectors.

Every function broadcasts over leading axes; the last axis (or last two,
for matrices) carries the vector/matrix structure.
"""

import numpy as np

from .errors import DimensionError


def _check_same_length(u, v):
    if u.shape[-1] != v.shape[-1]:
        raise DimensionError(f"length mismatch: {u.shape[-1]} != {v.shape[-1]}")


def hermitian_inner(u, v):
    """Hermitian product ``sum(conj(u) * v)``, conjugate-linear in `u`."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    _check_same_length(u, v)
    # split real/imag so that <u, u> is exactly real (complex multiply may fuse)
    re = np.sum(u.real * v.real + u.imag * v.imag, axis=-1)
    im = np.sum(u.real * v.imag - u.imag * v.real, axis=-1)
    return re + 1j * im


def complex_det(M):
    """Determinant of a square complex matrix (LU with partial pivoting)."""
    M = np.asarray(M, dtype=complex)
    if M.ndim < 2 or M.shape[-1] != M.shape[-2]:
        raise DimensionError(f"expected square matrix, got shape {M.shape}")
    return np.linalg.det(M)


def real_det(vectors):
    """Determinant of the matrix whose columns are `vectors`.

    Parameters
    ----------
    vectors : array_like, shape (..., n, n)
        ``vectors[..., k, :]`` is the k-th column.
    """
    V = np.asarray(vectors, dtype=float)
    if V.ndim < 2 or V.shape[-1] != V.shape[-2]:
        raise DimensionError(f"expected n vectors of length n, got shape {V.shape}")
    return np.linalg.det(np.swapaxes(V, -1, -2))


def apply_J(u):
    """Standard complex structure on C^n: multiplication by i."""
    return 1j * np.asarray(u, dtype=complex)
