"""Residuals of the Lagrangian and special Lagrangian conditions.

All checks evaluate the analytic pushforward frame
``iota_*(e_1), ..., iota_*(e_{n-1}), iota_*(d/ds)`` on a grid of quadric
samples times parameter values and aggregate pointwise residuals into a
:class:`ResidualReport`.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import HypothesisViolation
from .families import LawlorFamily, check_on_sigma, immersion_mask, immersion_values
from .forms import holomorphic_volume, omega
from .linalg import apply_J
from .sigma import SigmaPoint, make_rng, pushforward_batch, sigma_sample, tangent_frames

DEFAULT_TOLERANCES = {
    "lagrangian": 1e-9,
    "angle": 1e-8,
    "identity": 1e-10,
    "condition": 1e-10,
    "negative": 1e-3,
}


@dataclass(frozen=True)
class ResidualReport:
    check_name: str
    max_residual: float
    mean_residual: float
    argmax: tuple  # (x as list or None, s)
    samples_used: int
    tolerance: float
    skipped: int = 0

    @property
    def passed(self):
        return self.max_residual <= self.tolerance

    def to_dict(self):
        x, s = self.argmax
        return {
            "check": self.check_name,
            "max_residual": float(self.max_residual),
            "mean_residual": float(self.mean_residual),
            "argmax": {"x": None if x is None else [float(v) for v in x], "s": None if s is None else float(s)},
            "samples_used": int(self.samples_used),
            "skipped": int(self.skipped),
            "tolerance": float(self.tolerance),
            "pass": bool(self.passed),
        }


@dataclass(frozen=True)
class AngleTrace:
    """Lagrangian angles over samples, reduced mod pi around a fitted phase."""

    theta: list  # (x, s, theta) triples, theta in (-pi, pi]
    fitted_phase: float
    std_dev: float
    tolerance: float = DEFAULT_TOLERANCES["angle"]
    skipped: int = 0

    @property
    def passed(self):
        return self.std_dev <= self.tolerance

    def to_dict(self, include_samples=False):
        out = {
            "check": "angle_constancy",
            "fitted_phase": float(self.fitted_phase),
            "std_dev": float(self.std_dev),
            "samples_used": len(self.theta),
            "skipped": int(self.skipped),
            "tolerance": float(self.tolerance),
            "pass": bool(self.passed),
        }
        if include_samples:
            out["theta"] = [{"x": [float(v) for v in x], "s": float(s), "theta": float(t)} for x, s, t in self.theta]
        return out


def _as_points(family, sigma_samples):
    if isinstance(sigma_samples, (int, np.integer)):
        raise TypeError("pass sample points, not a count; see sigma_sample")
    X = np.array([p.x if isinstance(p, SigmaPoint) else p for p in sigma_samples], dtype=float)
    return check_on_sigma(family, np.atleast_2d(X))


@dataclass
class _Evaluation:
    X: np.ndarray  # (m, n)
    s: np.ndarray  # (k,)
    Z: np.ndarray  # (m, k, n)
    V: np.ndarray  # (m, k, n, n)
    mask: np.ndarray  # (m, k) immersion holds
    pv: object = field(repr=False)


def evaluate(family, sigma_samples, s_samples):
    """Points, pushforward frames and immersion mask on the sample grid."""
    X = _as_points(family, sigma_samples)
    s = np.atleast_1d(np.asarray(s_samples, dtype=float))
    pv = family.profiles(s)
    E = tangent_frames(family.lam, X)
    V = pushforward_batch(E, X, pv)
    Z = X[:, None, :] * pv.omega[None, :, :]
    mask = immersion_mask(family, X[:, None, :], _broadcast_pv(pv))
    return _Evaluation(X, s, Z, V, mask, pv)


def _broadcast_pv(pv):
    # profile arrays (k, n) -> (1, k, n) so they broadcast against X[:, None, :]
    return type(pv)(*(a[None] for a in (pv.omega, pv.omega_dot, pv.r, pv.phi, pv.phi_dot)))


def _report(name, per_sample, ev, tol):
    valid = ev.mask
    used = int(valid.sum())
    skipped = int(valid.size - used)
    if used == 0:
        return ResidualReport(name, float("inf"), float("inf"), (None, None), 0, tol, skipped)
    masked = np.where(valid, per_sample, -np.inf)
    a, b = np.unravel_index(np.argmax(masked), masked.shape)
    vals = per_sample[valid]
    return ResidualReport(name, float(vals.max()), float(vals.mean()), (ev.X[a].tolist(), float(ev.s[b])), used, tol, skipped)


def _pair_residuals(ev, form, pairs):
    """Max over `pairs` of ``|w(V_i, V_j)| / (|V_i|_g |V_j|_g)`` per sample."""
    Z, V = ev.Z, ev.V
    n = V.shape[-1]
    norms = np.sqrt(np.abs(np.stack([omega(form, Z, V[..., i, :], apply_J(V[..., i, :])) for i in range(n)], axis=-1)))
    out = np.zeros(V.shape[:2])
    for i, j in pairs:
        w = np.abs(omega(form, Z, V[..., i, :], V[..., j, :])) / (norms[..., i] * norms[..., j])
        out = np.maximum(out, w)
    return out


def _form_name(form):
    return {"standard": "st", "fubini-study": "fs"}[form]


def lagrangian_residual(family, form, sigma_samples, s_samples, tol=DEFAULT_TOLERANCES["lagrangian"]):
    """Normalized pullback of the symplectic form `form` over all frame pairs.

    `form` is ``"standard"`` or ``"fubini-study"``. Samples where the
    immersion hypothesis fails are skipped and counted.
    """
    ev = evaluate(family, sigma_samples, s_samples)
    n = family.n
    per_sample = _pair_residuals(ev, form, itertools.combinations(range(n), 2))
    return _report(f"lagrangian_{_form_name(form)}", per_sample, ev, tol)


def frame_pair_residual_split(family, form, sigma_samples, s_samples, tol=DEFAULT_TOLERANCES["lagrangian"]):
    """Residuals split into tangent-tangent pairs and tangent-``d/ds`` pairs.

    The first group vanishes for every family; only the second one
    discriminates Lagrangian from non-Lagrangian families.
    """
    ev = evaluate(family, sigma_samples, s_samples)
    n = family.n
    tangent_pairs = list(itertools.combinations(range(n - 1), 2))
    flow_pairs = [(i, n - 1) for i in range(n - 1)]
    name = _form_name(form)
    return (
        _report(f"tangent_pairs_{name}", _pair_residuals(ev, form, tangent_pairs), ev, tol),
        _report(f"flow_pairs_{name}", _pair_residuals(ev, form, flow_pairs), ev, tol),
    )


def _spread_report(name, values, s, tol, normalize):
    # values: (k, n); residual per s = max_j,k |v_j - v_k| = max - min
    spread = values.max(axis=-1) - values.min(axis=-1)
    if normalize:
        scale = np.abs(values).max(axis=-1)
        spread = np.where(scale > 0, spread / np.where(scale > 0, scale, 1.0), spread)
    b = int(np.argmax(spread))
    return ResidualReport(name, float(spread.max()), float(spread.mean()), (None, float(s[b])), len(s), tol)


def phase_speed_ratios(family, s_samples):
    """``Im(w'_j conj(w_j)) / lam_j`` per parameter, shape ``(k, n)``."""
    pv = family.profiles(np.atleast_1d(np.asarray(s_samples, dtype=float)))
    return np.imag(pv.omega_dot * np.conj(pv.omega)) / family.lam


def condition_Im_residual(family, s_samples, tol=DEFAULT_TOLERANCES["condition"]):
    """Relative spread of ``Im(w'_j conj(w_j)) / lam_j`` across ``j``."""
    s = np.atleast_1d(np.asarray(s_samples, dtype=float))
    return _spread_report("condition_im", phase_speed_ratios(family, s), s, tol, normalize=True)


def condition_r2_residual(family, s_samples, tol=DEFAULT_TOLERANCES["condition"]):
    """Absolute spread of ``|w_j|^2 / lam_j`` across ``j``."""
    s = np.atleast_1d(np.asarray(s_samples, dtype=float))
    pv = family.profiles(s)
    return _spread_report("condition_r2", np.abs(pv.omega) ** 2 / family.lam, s, tol, normalize=False)


def det_closed_form(family, X, pv):
    """``prod(w_j) / sqrt(sum lam_k^2 x_k^2) * sum lam_j x_j^2 w'_j / w_j``."""
    value, _ = immersion_values(family, X, pv)
    lam = family.lam
    return np.prod(pv.omega, axis=-1) / np.sqrt(np.sum(lam**2 * X**2, axis=-1)) * value


def det_identity_check(family, x, s):
    """Compare ``Omega`` on the pushforward frame with its closed form.

    Returns ``(lhs, rhs, rel_err)``.
    """
    x = check_on_sigma(family, np.asarray(x, dtype=float))
    ev = evaluate(family, [x], [s])
    if not ev.mask[0, 0]:
        raise HypothesisViolation(f"immersion hypothesis fails at x={x.tolist()}, s={s}")
    lhs = complex(holomorphic_volume(ev.V[0, 0]))
    rhs = complex(det_closed_form(family, x, _take(ev.pv, 0)))
    return lhs, rhs, abs(lhs - rhs) / abs(rhs)


def _take(pv, b):
    return type(pv)(*(a[b] for a in (pv.omega, pv.omega_dot, pv.r, pv.phi, pv.phi_dot)))


def det_identity_report(family, sigma_samples, s_samples, tol=DEFAULT_TOLERANCES["identity"]):
    ev = evaluate(family, sigma_samples, s_samples)
    lhs = holomorphic_volume(ev.V)
    rhs = det_closed_form(family, ev.X[:, None, :], _broadcast_pv(ev.pv))
    rel = np.abs(lhs - rhs) / np.abs(rhs)
    return _report("det_identity", rel, ev, tol)


def lagrangian_angle(family, x, s):
    """Argument of ``Omega`` on the oriented pushforward frame, in (-pi, pi]."""
    lhs, _, _ = det_identity_check(family, x, s)
    if lhs == 0:
        raise HypothesisViolation("pushforward frame is degenerate")
    return float(np.angle(lhs))


def _wrap(theta, period):
    # into (-period/2, period/2]
    return period / 2 - np.mod(period / 2 - theta, period)


def angle_constancy(family, sigma_samples, s_samples, tol=DEFAULT_TOLERANCES["angle"]):
    """Fit a constant phase mod pi to the Lagrangian angle over the samples.

    The phase is the circular mean of ``exp(2 i theta)`` halved; the spread
    is the RMS of the deviations reduced mod pi.
    """
    ev = evaluate(family, sigma_samples, s_samples)
    theta = np.angle(holomorphic_volume(ev.V))
    valid = ev.mask
    vals = theta[valid]
    phase = float(np.angle(np.mean(np.exp(2j * vals))) / 2)
    dev = _wrap(vals - phase, np.pi)
    std = float(np.sqrt(np.mean(dev**2))) if vals.size else float("inf")
    idx = np.argwhere(valid)
    triples = [(ev.X[a].tolist(), float(ev.s[b]), float(theta[a, b])) for a, b in idx]
    return AngleTrace(triples, phase, std, tol, int(valid.size - valid.sum()))


def angle_slope(family, x, s_samples):
    """Least-squares slope of the unwrapped angle along ``s`` at fixed `x`."""
    ev = evaluate(family, [x], s_samples)
    theta = np.unwrap(np.angle(holomorphic_volume(ev.V[0])))
    slope, _ = np.polyfit(ev.s, theta, 1)
    return float(slope)


@dataclass(frozen=True)
class SweepRow:
    a: tuple
    standard: ResidualReport
    fubini_study: ResidualReport
    angle: AngleTrace
    equal_a: bool

    @property
    def fs_class(self):
        """"pass", "fail" or "gray" for the Fubini-Study check."""
        if self.fubini_study.passed:
            return "pass"
        if self.fubini_study.max_residual > DEFAULT_TOLERANCES["negative"]:
            return "fail"
        return "gray"

    @property
    def consistent(self):
        expected = "pass" if self.equal_a else "fail"
        return self.standard.passed and self.fs_class == expected

    def to_dict(self):
        return {
            "a": [float(v) for v in self.a],
            "equal_a": self.equal_a,
            "standard": self.standard.to_dict(),
            "fubini_study": self.fubini_study.to_dict(),
            "angle": self.angle.to_dict(),
            "fs_class": self.fs_class,
            "consistent": self.consistent,
        }


def theorem_sweep(n, a_grid, tolerances=None, sigma_count=200, s_samples=None, seed=0, psi=None, equal_tol=1e-12):
    """Lagrangian checks over a grid of Lawlor parameters.

    For each ``a`` the flat and Fubini-Study residuals and the angle trace
    are computed; a row is consistent when the flat check passes and the
    Fubini-Study check passes exactly for (numerically) equal ``a``.
    """
    tols = dict(DEFAULT_TOLERANCES, **(tolerances or {}))
    s = np.linspace(-2.0, 2.0, 41) if s_samples is None else np.asarray(s_samples, dtype=float)
    if psi is None:
        psi = make_rng(seed).uniform(-np.pi, np.pi, n)
    points = sigma_sample(np.ones(n), 1.0, sigma_count, seed)
    rows = []
    for a in a_grid:
        a = tuple(float(v) for v in a)
        if len(a) != n:
            raise ValueError(f"grid entry {a} has length {len(a)} != n={n}")
        fam = LawlorFamily(np.array(a), np.asarray(psi, dtype=float))
        st = lagrangian_residual(fam, "standard", points, s, tols["lagrangian"])
        fs = lagrangian_residual(fam, "fubini-study", points, s, tols["lagrangian"])
        ang = angle_constancy(fam, points, s, tols["angle"])
        rows.append(SweepRow(a, st, fs, ang, bool(max(a) - min(a) <= equal_tol)))
    return rows
