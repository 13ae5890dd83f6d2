"""Discrete Laplace-Beltrami operator on surfaces in C^2.

A two-dimensional family is parametrized by ``F(alpha, s) = x(alpha) * w(s)``
with ``x(alpha)`` running once around the ellipse ``lam_1 x_1^2 + lam_2 x_2^2 = C``.
``Delta F`` is discretized in divergence form,

    Delta F = (1/sqrt(det g)) d_i (sqrt(det g) g^{ij} d_j F),

with fluxes at half-grid points (periodic in ``alpha``), so the scheme is
second order. The induced metric ``g`` is evaluated analytically.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, HypothesisViolation
from .forms import conformal_factor, fs_metric, real_metric_matrix

METRIC_KINDS = ("flat", "fubini-study", "conformal-fubini-study")


@dataclass(frozen=True)
class ParamGrid:
    """``alpha_count`` periodic nodes times ``s_count`` cells on ``s_range``."""

    alpha_count: int
    s_count: int
    s_range: tuple = (-1.0, 1.0)

    def __post_init__(self):
        if self.alpha_count < 8 or self.s_count < 8:
            raise ValueError("grid counts must be >= 8")
        if not self.s_range[1] > self.s_range[0]:
            raise ValueError("empty s_range")

    @property
    def h_alpha(self):
        return 2 * np.pi / self.alpha_count

    @property
    def h_s(self):
        return (self.s_range[1] - self.s_range[0]) / self.s_count

    @property
    def alpha(self):
        return self.h_alpha * np.arange(self.alpha_count)

    @property
    def s(self):
        return np.linspace(self.s_range[0], self.s_range[1], self.s_count + 1)


def metric_eval(kind, z, u, v):
    """Ambient metric ``kind`` at `z` on complex tangent vectors."""
    if kind == "flat":
        return np.real(np.sum(np.conj(u) * v, axis=-1))
    if kind == "fubini-study":
        return fs_metric(z, u, v)
    if kind == "conformal-fubini-study":
        return conformal_factor(z) * fs_metric(z, u, v)
    raise ValueError(f"unknown metric kind {kind!r}")


def _check_surface(family):
    if family.n != 2:
        raise DimensionError(f"the discrete Laplacian supports n = 2 only, got n = {family.n}")
    radii = family.C / family.lam
    if np.any(radii <= 0):
        raise HypothesisViolation("the (alpha, s) chart needs an ellipse cross-section")
    return np.sqrt(radii)


def surface_partials(family, alpha, s):
    """``F``, ``dF/dalpha`` and ``dF/ds`` at broadcast ``(alpha, s)``.

    Returns three complex arrays of shape ``broadcast(alpha, s).shape + (2,)``.
    """
    radii = _check_surface(family)
    alpha, s = np.broadcast_arrays(np.asarray(alpha, dtype=float), np.asarray(s, dtype=float))
    pv = family.profiles(s)
    x = radii * np.stack([np.cos(alpha), np.sin(alpha)], axis=-1)
    dx = radii * np.stack([-np.sin(alpha), np.cos(alpha)], axis=-1)
    return x * pv.omega, dx * pv.omega, x * pv.omega_dot


def induced_metric(family, metric, alpha, s):
    """Pullback ``F^* G`` of the ambient metric at ``(alpha, s)``.

    Returns an array of shape ``(..., 2, 2)`` ordered ``(alpha, s)``.
    """
    if metric not in METRIC_KINDS:
        raise ValueError(f"unknown metric kind {metric!r}")
    F, Fa, Fs = surface_partials(family, alpha, s)
    g_aa = metric_eval(metric, F, Fa, Fa)
    g_as = metric_eval(metric, F, Fa, Fs)
    g_ss = metric_eval(metric, F, Fs, Fs)
    g = np.stack([np.stack([g_aa, g_as], -1), np.stack([g_as, g_ss], -1)], -2)
    if np.any(np.linalg.det(g) <= 0):
        raise HypothesisViolation("induced metric is degenerate on the grid")
    return g


def _divergence_coefficients(family, metric, alpha, s):
    # sqrt(det g) * g^{-1} and sqrt(det g)
    g = induced_metric(family, metric, alpha, s)
    det = np.linalg.det(g)
    root = np.sqrt(det)
    inv = np.linalg.inv(g)
    return root[..., None, None] * inv, root


def _to_real(u):
    return np.concatenate([u.real, u.imag], axis=-1)


def christoffel(z, metric, step=1e-5):
    """Christoffel symbols ``Gamma[..., k, a, b]`` of an ambient metric on R^{2n}.

    Real coordinates are ``(Re z, Im z)``; metric derivatives are central
    differences with the given step.
    """
    z = np.asarray(z, dtype=complex)
    n = z.shape[-1]
    m = 2 * n
    G = real_metric_matrix(z, metric)
    dG = np.empty(z.shape[:-1] + (m, m, m))  # dG[..., c, a, b] = d_c G_ab
    for c in range(m):
        dz = np.zeros(n, dtype=complex)
        dz[c % n] = step if c < n else 1j * step
        dG[..., c, :, :] = (real_metric_matrix(z + dz, metric) - real_metric_matrix(z - dz, metric)) / (2 * step)
    # Gamma_{l a b} = (d_a G_lb + d_b G_la - d_l G_ab) / 2
    lower = 0.5 * (
        np.swapaxes(dG, -3, -2)  # d_a G_lb -> index [l, a, b] via dG[a, l, b]
        + np.moveaxis(dG, -3, -1)  # d_b G_la -> dG[b, l, a]
        - dG
    )
    return np.einsum("...kl,...lab->...kab", np.linalg.inv(G), lower)


@dataclass(frozen=True)
class LaplacianResult:
    residual: float
    max_norm: float
    scale: float
    argmax: tuple  # (alpha, s)
    grid: ParamGrid


def laplace_beltrami(family, metric, grid, connection=False):
    """Discrete ``Delta F`` on the interior nodes of `grid`.

    With ``connection=True`` the ambient Christoffel term
    ``g^{ij} Gamma(d_i F, d_j F)`` is added, giving the tension field of
    ``F`` (the mean curvature vector) instead of the componentwise
    Laplacian.

    Returns
    -------
    lap : ndarray, shape (alpha_count, s_count - 1, 4)
        Real components ``(Re F, Im F)``.
    scale : ndarray, shape (alpha_count, s_count - 1)
        ``|T_alpha| + |T_s|`` where ``T`` are the two divergence terms.
    """
    ha, hs = grid.h_alpha, grid.h_s
    a = grid.alpha
    s = grid.s
    F = _to_real(surface_partials(family, a[:, None], s[None, :])[0])  # (Na, Ns+1, 4)

    # alpha fluxes at (i + 1/2, j), interior rows j = 1..Ns-1
    A_half, _ = _divergence_coefficients(family, metric, (a + ha / 2)[:, None], s[None, 1:-1])
    Fp = np.roll(F, -1, axis=0)
    dFa = (Fp[:, 1:-1] - F[:, 1:-1]) / ha
    dFs = (F[:, 2:] - F[:, :-2] + Fp[:, 2:] - Fp[:, :-2]) / (4 * hs)
    flux_a = A_half[..., 0, 0, None] * dFa + A_half[..., 0, 1, None] * dFs
    T_a = (flux_a - np.roll(flux_a, 1, axis=0)) / ha

    # s fluxes at (i, j + 1/2), all cells
    S_half, _ = _divergence_coefficients(family, metric, a[:, None], (s[:-1] + hs / 2)[None, :])
    dFs = (F[:, 1:] - F[:, :-1]) / hs
    Fr, Fl = np.roll(F, -1, axis=0), np.roll(F, 1, axis=0)
    dFa = (Fr[:, 1:] - Fl[:, 1:] + Fr[:, :-1] - Fl[:, :-1]) / (4 * ha)
    flux_s = S_half[..., 1, 0, None] * dFa + S_half[..., 1, 1, None] * dFs
    T_s = (flux_s[:, 1:] - flux_s[:, :-1]) / hs

    _, root = _divergence_coefficients(family, metric, a[:, None], s[None, 1:-1])
    T_a = T_a / root[..., None]
    T_s = T_s / root[..., None]
    lap = T_a + T_s
    scale = np.linalg.norm(T_a, axis=-1) + np.linalg.norm(T_s, axis=-1)

    if connection:
        z, Fa, Fs = surface_partials(family, a[:, None], s[None, 1:-1])
        g_inv = np.linalg.inv(induced_metric(family, metric, a[:, None], s[None, 1:-1]))
        Gam = christoffel(z, metric)
        P = np.stack([_to_real(Fa), _to_real(Fs)], axis=-2)  # (..., 2, 4)
        lap = lap + np.einsum("...ij,...kab,...ia,...jb->...k", g_inv, Gam, P, P)
    return lap, scale


def laplace_beltrami_residual(family, metric, grid, connection=False):
    """Max interior ``|Delta F|`` relative to the size of its two divergence terms."""
    if metric not in METRIC_KINDS:
        raise ValueError(f"unknown metric kind {metric!r}")
    lap, scale = laplace_beltrami(family, metric, grid, connection)
    norm = np.linalg.norm(lap, axis=-1)
    i, j = np.unravel_index(np.argmax(norm), norm.shape)
    top = float(scale.max())
    return LaplacianResult(float(norm[i, j]) / top, float(norm[i, j]), top, (float(grid.alpha[i]), float(grid.s[j + 1])), grid)


def convergence_study(family, metric, grid_levels, s_range=(-1.0, 1.0), connection=False):
    """Residuals on successively refined square grids.

    Returns a list of ``(h_s, residual, observed_order)``; the order of the
    first level is ``None``.
    """
    levels = list(grid_levels)
    if len(levels) < 3:
        raise ValueError("a convergence study needs at least three grid levels")
    for coarse, fine in zip(levels, levels[1:]):
        if fine != 2 * coarse:
            raise ValueError(f"grid levels must double: {coarse} -> {fine}")
    rows = []
    prev = None
    for count in levels:
        grid = ParamGrid(count, count, tuple(s_range))
        res = laplace_beltrami_residual(family, metric, grid, connection).residual
        order = None if prev is None else float(np.log2(prev[1] / res))
        rows.append((grid.h_s, res, order))
        prev = (grid.h_s, res)
    return rows
