"""The quadric ``Sigma = {sum lam_j x_j^2 = C}``: sampling, frames, pushforwards."""

from dataclasses import dataclass

import numpy as np

from .errors import ConstraintError, DimensionError, HypothesisViolation, SamplingError
from .families import CONSTRAINT_RTOL, constraint_residual, immersion_mask


@dataclass(frozen=True)
class SigmaPoint:
    x: np.ndarray
    constraint_residual: float


@dataclass(frozen=True)
class Frame:
    """Oriented orthonormal frame: ``det(e_1, ..., e_{n-1}, normal) = +1``."""

    tangent: np.ndarray  # (n-1, n)
    normal: np.ndarray  # (n,)

    @property
    def vectors(self):
        return np.vstack([self.tangent, self.normal[None, :]])


def _sigma_point(lam, C, x):
    res, scale = constraint_residual(lam, C, x)
    if res > CONSTRAINT_RTOL * scale:
        raise ConstraintError(f"point {x} off the quadric: residual {res:.3g}")
    return SigmaPoint(np.asarray(x, dtype=float), float(res))


def make_rng(seed):
    """Counter-based generator (Philox) for reproducible sampling."""
    return np.random.Generator(np.random.Philox(seed))


def sigma_sample(lam, C, count, seed):
    """Draw `count` points of an ellipsoidal quadric.

    Directions are uniform on the unit sphere and rescaled radially onto
    the quadric. All ``lam_j`` must share the sign of `C`; for other
    signatures pass explicit points to :func:`sigma_points`.
    """
    lam = np.asarray(lam, dtype=float)
    if C == 0 or not np.all(lam * C > 0):
        raise SamplingError("random sampling needs lambda_j / C > 0 for all j; supply explicit points instead")
    y = make_rng(seed).standard_normal((count, lam.size))
    y /= np.linalg.norm(y, axis=1, keepdims=True)
    X = y * np.sqrt(C / np.sum(lam * y**2, axis=1))[:, None]
    return [_sigma_point(lam, C, x) for x in X]


def chart_solve(lam, C, x):
    """Move `x` onto the quadric by re-solving its first coordinate.

    ``x_2, ..., x_n`` are kept and ``x_1`` keeps its sign (``+`` if zero).
    """
    lam = np.asarray(lam, dtype=float)
    x = np.array(x, dtype=float)
    rest = C - np.sum(lam[1:] * x[1:] ** 2)
    x1_sq = rest / lam[0]
    if x1_sq < 0:
        raise ConstraintError(f"no real solution for x_1 with tail {x[1:]}")
    x[0] = np.copysign(np.sqrt(x1_sq), x[0] if x[0] != 0 else 1.0)
    return x


def sigma_points(lam, C, points, rtol=1e-3):
    """Validate user points, polishing each with :func:`chart_solve`.

    Points whose relative constraint residual exceeds `rtol` before
    polishing are rejected.
    """
    out = []
    for x in np.atleast_2d(np.asarray(points, dtype=float)):
        res, scale = constraint_residual(lam, C, x)
        if res > rtol * scale:
            raise ConstraintError(f"point {x.tolist()} off the quadric: residual {res:.3g}")
        out.append(_sigma_point(lam, C, chart_solve(lam, C, x)))
    return out


def unit_normals(lam, X):
    """Batched unit normals ``(lam * x) / |lam * x|``."""
    g = np.asarray(lam, dtype=float) * np.asarray(X, dtype=float)
    norm = np.linalg.norm(g, axis=-1, keepdims=True)
    if np.any(norm == 0):
        raise HypothesisViolation("degenerate point: lam_j x_j = 0 for all j")
    return g / norm


def unit_normal(lam, x):
    x = x.x if isinstance(x, SigmaPoint) else x
    return unit_normals(lam, x)


def tangent_frames(lam, X):
    """Batched oriented frames.

    Returns ``E`` of shape ``(..., n, n)`` with ``E[..., k, :] = e_{k+1}``
    and ``E[..., -1, :]`` the unit normal.

    The Householder reflection ``H = I - 2 v v^T / v^T v`` with
    ``v = e_last + sgn * N`` sends ``e_last`` to ``-sgn * N``; its other
    columns complete ``N`` orthonormally. The sign is chosen so that
    ``v`` never suffers cancellation.
    """
    N = unit_normals(lam, X)
    n = N.shape[-1]
    if n < 2:
        raise DimensionError("frames need n >= 2")
    sgn = np.where(N[..., -1] >= 0, 1.0, -1.0)[..., None]
    v = sgn * N
    v[..., -1] += 1.0
    vv = np.sum(v * v, axis=-1)[..., None, None]
    H = np.eye(n) - 2.0 * v[..., :, None] * v[..., None, :] / vv
    E = np.empty(N.shape[:-1] + (n, n))
    E[..., : n - 1, :] = np.swapaxes(H[..., :, : n - 1], -1, -2)
    E[..., n - 1, :] = N
    flip = np.linalg.det(E) < 0
    E[flip, 0, :] *= -1.0
    return E


def tangent_frame(lam, x):
    """Oriented orthonormal frame of the quadric at `x`."""
    x = x.x if isinstance(x, SigmaPoint) else np.asarray(x, dtype=float)
    E = tangent_frames(lam, x[None, :])[0]
    return Frame(E[:-1], E[-1])


def pushforward_batch(E, X, pv):
    """Pushforward vectors for every pair of quadric sample and parameter.

    Parameters
    ----------
    E : ndarray, shape (m, n, n)
        Frames from :func:`tangent_frames`.
    X : ndarray, shape (m, n)
    pv : ProfileValue with arrays of shape (k, n)

    Returns
    -------
    V : ndarray, shape (m, k, n, n)
        ``V[a, b, i]`` is ``iota_*(e_{i+1})`` for ``i < n - 1`` and
        ``iota_*(d/ds)`` for ``i = n - 1``.
    """
    m, n = X.shape
    k = pv.omega.shape[0]
    V = np.empty((m, k, n, n), dtype=complex)
    V[:, :, : n - 1, :] = E[:, None, : n - 1, :] * pv.omega[None, :, None, :]
    V[:, :, n - 1, :] = X[:, None, :] * pv.omega_dot[None, :, :]
    return V


def pushforward(family, frame, x, s):
    """``iota_*(e_1), ..., iota_*(e_{n-1}), iota_*(d/ds)`` at ``(x, s)``.

    Returns an ``(n, n)`` complex array, one vector per row.
    """
    x = x.x if isinstance(x, SigmaPoint) else np.asarray(x, dtype=float)
    pv = family.profiles(np.atleast_1d(float(s)))
    if not immersion_mask(family, x, pv)[0]:
        raise HypothesisViolation(f"immersion hypothesis fails at x={x.tolist()}, s={s}")
    E = np.vstack([np.atleast_2d(frame.tangent), frame.normal[None, :]])
    return pushforward_batch(E[None], x[None], pv)[0, 0]
