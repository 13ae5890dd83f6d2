"""Pointwise evaluation of the ambient forms and metrics on C^n.

Tangent vectors are stored by their complex components. All functions
broadcast over leading axes, so a batch of points and vector pairs can be
evaluated in one call.

Conventions: ``omega_st(u, v) = sum Im(conj(u_j) v_j)`` and every metric is
recovered from its Kahler form as ``g(u, v) = omega(u, J v)``.
"""

import numpy as np

from .errors import DimensionError
from .linalg import apply_J, complex_det, hermitian_inner


def _as_complex(*arrays):
    out = [np.asarray(a, dtype=complex) for a in arrays]
    n = out[0].shape[-1]
    for a in out[1:]:
        if a.shape[-1] != n:
            raise DimensionError(f"length mismatch: {a.shape[-1]} != {n}")
    return out


def kahler_potential_scale(z):
    """``K = 1 + |z|^2``."""
    z = np.asarray(z, dtype=complex)
    return 1.0 + np.sum(z.real**2 + z.imag**2, axis=-1)


def omega_st(u, v):
    """Standard symplectic form ``(i/2) sum dz_j ^ dzbar_j`` on (u, v)."""
    u, v = _as_complex(u, v)
    return np.imag(hermitian_inner(u, v))


def tau(z, u, v):
    """The (1,1)-form ``sum zbar_p z_q dz_p ^ dzbar_q`` on (u, v) at `z`.

    With ``A = <z, u> * conj(<z, v>)`` the double sum collapses to
    ``A - conj(A)``, so the real part is exactly zero.
    """
    z, u, v = _as_complex(z, u, v)
    A = hermitian_inner(z, u) * np.conj(hermitian_inner(z, v))
    return A - np.conj(A)


def omega_fs(z, u, v):
    """Fubini-Study form ``(i/2) ddbar log(1 + |z|^2)`` on (u, v) at `z`.

    Evaluated through the split ``omega_st / K - i tau / (2 K^2)``.
    """
    z, u, v = _as_complex(z, u, v)
    K = kahler_potential_scale(z)
    return omega_st(u, v) / K + np.real(-0.5j * tau(z, u, v)) / K**2


def omega(kind, z, u, v):
    """Dispatch on ``kind`` in {"standard", "fubini-study"}."""
    if kind == "standard":
        return omega_st(u, v)
    if kind == "fubini-study":
        return omega_fs(z, u, v)
    raise ValueError(f"unknown form kind {kind!r}")


def holomorphic_volume(V):
    """``dz_1 ^ ... ^ dz_n`` evaluated on the vectors ``V[..., k, :]``."""
    V = np.asarray(V, dtype=complex)
    if V.ndim < 2 or V.shape[-1] != V.shape[-2]:
        raise DimensionError(f"expected n vectors in C^n, got shape {V.shape}")
    return complex_det(np.swapaxes(V, -1, -2))


def fs_metric(z, u, v):
    """Fubini-Study Riemannian metric ``omega_fs(z, u, J v)``."""
    return omega_fs(z, u, apply_J(v))


def fs_hermitian_matrix(z):
    """Components ``h[p, q] = delta_pq / K - conj(z_p) z_q / K^2``."""
    z = np.asarray(z, dtype=complex)
    K = kahler_potential_scale(z)[..., None, None]
    n = z.shape[-1]
    outer = np.conj(z)[..., :, None] * z[..., None, :]
    return np.eye(n) / K - outer / K**2


def conformal_factor(z, n=None):
    """Almost Calabi-Yau factor ``c = det(h)^(-1/n)``.

    Analytically ``c = (1 + |z|^2)^((n + 1) / n)``.
    """
    z = np.asarray(z, dtype=complex)
    if n is None:
        n = z.shape[-1]
    if n < 1:
        raise ValueError("n must be >= 1")
    det = np.real(complex_det(fs_hermitian_matrix(z)))
    return det ** (-1.0 / n)


def real_basis(n):
    """The real basis ``e_1, ..., e_n, i e_1, ..., i e_n`` of C^n as rows."""
    eye = np.eye(n, dtype=complex)
    return np.concatenate([eye, 1j * eye])


def real_metric_matrix(z, kind="fubini-study"):
    """Gram matrix of a metric in the real basis of :func:`real_basis`.

    Parameters
    ----------
    z : array_like, shape (..., n)
    kind : {"flat", "fubini-study", "conformal-fubini-study"}

    Returns
    -------
    G : ndarray, shape (..., 2n, 2n)
    """
    z = np.asarray(z, dtype=complex)
    n = z.shape[-1]
    E = real_basis(n)
    if kind == "flat":
        return np.broadcast_to(np.eye(2 * n), z.shape[:-1] + (2 * n, 2 * n)).copy()
    zb = z[..., None, None, :]
    G = fs_metric(zb, E[:, None, :], E[None, :, :])
    if kind == "fubini-study":
        return G
    if kind == "conformal-fubini-study":
        return conformal_factor(z)[..., None, None] * G
    raise ValueError(f"unknown metric kind {kind!r}")
