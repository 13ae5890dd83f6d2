"""Profile families ``iota(x, s) = (x_1 w_1(s), ..., x_n w_n(s))``.

A family is fixed by the quadric data ``(lam, C)`` of its cross-section
``{sum lam_j x_j^2 = C}`` together with complex profiles ``w_j`` on an
interval. Three kinds are provided:

* :class:`LawlorFamily` -- Lawlor's necks over the unit sphere, with phases
  given by an integral evaluated by adaptive Gauss-Kronrod quadrature;
* :class:`ExponentialFamily` -- ``w_j(s) = exp(i (lam_j + C) s)``;
* :class:`CustomFamily` -- user-supplied callables.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import ConstraintError, HypothesisViolation, QuadratureError

DEFAULT_INTERVAL = (-2.0, 2.0)
IMMERSION_EPS = 1e-12
CONSTRAINT_RTOL = 1e-10


@dataclass(frozen=True)
class ProfileValue:
    """Profiles and their derivatives at one or more parameters ``s``.

    Arrays have shape ``s.shape + (n,)``; ``omega = r * exp(i phi)``.
    """

    omega: np.ndarray
    omega_dot: np.ndarray
    r: np.ndarray
    phi: np.ndarray
    phi_dot: np.ndarray


# -- Lawlor phases -----------------------------------------------------------


def lawlor_r(a_j, s):
    """Radius ``sqrt(1/a_j + s^2)``."""
    if np.any(np.asarray(a_j) <= 0):
        raise ValueError("a_j must be positive")
    return np.sqrt(1.0 / np.asarray(a_j, dtype=float) + np.asarray(s, dtype=float) ** 2)


def _reduced_product(a, t):
    # (prod(1 + a_k t^2) - 1) / t^2 via q <- q (1 + a_k t^2) + a_k; no cancellation at t = 0
    t2 = np.asarray(t, dtype=float) ** 2
    q = np.zeros_like(t2)
    for a_k in a:
        q = q * (1.0 + a_k * t2) + a_k
    return q


def lawlor_phase_integrand(a, j, t):
    """Phase speed ``|t| / ((1/a_j + t^2) sqrt(prod(1 + a_k t^2) - 1))``.

    The factor ``|t|`` is cancelled analytically against the square root,
    so the value at ``t = 0`` is the removable limit ``a_j / sqrt(sum a)``.
    """
    a = np.asarray(a, dtype=float)
    if not 0 <= j < a.size:
        raise IndexError(f"index {j} out of range for n={a.size}")
    t = np.asarray(t, dtype=float)
    return 1.0 / ((1.0 / a[j] + t**2) * np.sqrt(_reduced_product(a, t)))


def _quad(f, lo, hi, tol, limit):
    result = integrate.quad(f, lo, hi, epsabs=tol, epsrel=0.0, limit=limit, full_output=1)
    value, abserr = result[0], result[1]
    if len(result) > 3 or abserr > tol:
        raise QuadratureError(
            f"quadrature on [{lo}, {hi}] did not converge: estimate {abserr:.3g} > tol {tol:.3g}"
        )
    return value


def lawlor_phase_offsets(a, j, s, tol=1e-12, limit=200):
    """``phi_j(s) - psi_j`` for an array of ``s``.

    The integral is accumulated over the sorted distinct ``|s|`` so each
    point costs one short quadrature; the total error stays below `tol`.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    s = np.asarray(s, dtype=float)
    mags, inverse = np.unique(np.abs(s).ravel(), return_inverse=True)
    f = lambda t: float(lawlor_phase_integrand(a, j, t))  # noqa: E731
    seg_tol = tol / max(len(mags), 1)
    pieces = np.empty_like(mags)
    lo = 0.0
    for k, hi in enumerate(mags):
        pieces[k] = _quad(f, lo, hi, seg_tol, limit) if hi > lo else 0.0
        lo = hi
    cumulative = np.cumsum(pieces)[inverse].reshape(s.shape)
    return np.sign(s) * cumulative


def lawlor_phi(params, j, s, tol=1e-12):
    """Lawlor phase ``phi_j(s)`` to absolute error `tol`."""
    psi = params.psi[j]
    return psi + lawlor_phase_offsets(params.a, j, s, tol=tol)


# -- family types ------------------------------------------------------------


class ProfileFamily:
    """Base class: quadric data and profile evaluation.

    Subclasses set ``lam``, ``C``, ``interval`` and implement
    :meth:`profiles`.
    """

    kind = "generic"
    lam: np.ndarray
    C: float
    interval: tuple
    require_positive_phase_speed = True

    @property
    def n(self):
        return len(self.lam)

    def profiles(self, s) -> ProfileValue:
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class LawlorFamily(ProfileFamily):
    """Lawlor neck with parameters ``a_j > 0`` and phase offsets ``psi_j``.

    The cross-section is the unit sphere (``lam_j = 1``, ``C = 1``).
    """

    a: np.ndarray
    psi: np.ndarray = None
    interval: tuple = DEFAULT_INTERVAL
    quad_tol: float = 1e-12
    kind = "lawlor"

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.a, dtype=float))
        psi = np.zeros_like(a) if self.psi is None else np.atleast_1d(np.asarray(self.psi, dtype=float))
        if a.size < 1 or psi.shape != a.shape:
            raise ValueError("a and psi must be non-empty and of equal length")
        for k, a_k in enumerate(a):
            if not a_k > 0:
                raise ValueError(f"a[{k}] must be positive, got {a_k}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "lam", np.ones_like(a))
        object.__setattr__(self, "C", 1.0)

    def profiles(self, s):
        s = np.asarray(s, dtype=float)
        S = s[..., None]
        r = lawlor_r(self.a, S)
        r_dot = S / r
        phi = np.stack(
            [self.psi[j] + lawlor_phase_offsets(self.a, j, s, tol=self.quad_tol) for j in range(self.n)],
            axis=-1,
        )
        phi_dot = np.stack([lawlor_phase_integrand(self.a, j, s) for j in range(self.n)], axis=-1)
        rot = np.exp(1j * phi)
        return ProfileValue(r * rot, (r_dot + 1j * r * phi_dot) * rot, r, phi, phi_dot)

    def describe(self):
        return {"kind": self.kind, "a": self.a.tolist(), "psi": self.psi.tolist()}


@dataclass(frozen=True, eq=False)
class ExponentialFamily(ProfileFamily):
    """Profiles ``exp(i (lam_j + C) s)`` over ``{sum lam_j x_j^2 = C}``.

    Requires ``lam_j (lam_j + C) > 0``; this alone makes the family an
    immersion, so the phase speeds ``lam_j + C`` may have either sign.
    """

    lam: np.ndarray
    C: float
    interval: tuple = DEFAULT_INTERVAL
    kind = "exponential"
    require_positive_phase_speed = False

    def __post_init__(self):
        lam = np.atleast_1d(np.asarray(self.lam, dtype=float))
        C = float(self.C)
        if C == 0:
            raise ValueError("C must be nonzero")
        for k, l_k in enumerate(lam):
            if l_k == 0:
                raise ValueError(f"lambda[{k}] must be nonzero")
            if not l_k * (l_k + C) > 0:
                raise ValueError(f"lambda[{k}] * (lambda[{k}] + C) = {l_k * (l_k + C):g} must be positive")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "C", C)

    @property
    def frequencies(self):
        return self.lam + self.C

    def profiles(self, s):
        s = np.asarray(s, dtype=float)[..., None]
        freq = self.frequencies
        w = np.exp(1j * freq * s)
        ones = np.ones_like(w.real)
        return ProfileValue(w, 1j * freq * w, ones, freq * s, freq * ones)

    def describe(self):
        return {"kind": self.kind, "lambda": self.lam.tolist(), "C": self.C}


@dataclass(frozen=True, eq=False)
class CustomFamily(ProfileFamily):
    """Family with user-supplied profiles.

    `omega` and `omega_dot` map an array of ``s`` (shape ``S``) to complex
    arrays of shape ``S + (n,)``.
    """

    lam: np.ndarray
    C: float
    omega: Callable = field(repr=False, default=None)
    omega_dot: Callable = field(repr=False, default=None)
    interval: tuple = DEFAULT_INTERVAL
    require_positive_phase_speed: bool = True
    kind = "custom"

    def __post_init__(self):
        lam = np.atleast_1d(np.asarray(self.lam, dtype=float))
        if np.any(lam == 0) or self.C == 0:
            raise ValueError("lambda and C must be nonzero")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "C", float(self.C))

    def profiles(self, s):
        s = np.asarray(s, dtype=float)
        w = np.asarray(self.omega(s), dtype=complex)
        wd = np.asarray(self.omega_dot(s), dtype=complex)
        r = np.abs(w)
        phi = np.angle(w)
        phi_dot = np.imag(wd * np.conj(w)) / r**2
        return ProfileValue(w, wd, r, phi, phi_dot)

    def describe(self):
        return {"kind": self.kind, "lambda": self.lam.tolist(), "C": self.C}


# -- pointwise operations ----------------------------------------------------


def profile_eval(family, j, s):
    """Profile ``j`` of `family` at scalar `s` as a :class:`ProfileValue`.

    Raises :class:`HypothesisViolation` if the phase speed is not positive
    and the family requires it.
    """
    pv = family.profiles(np.asarray(s, dtype=float))
    value = ProfileValue(*(arr[..., j] for arr in (pv.omega, pv.omega_dot, pv.r, pv.phi, pv.phi_dot)))
    if family.require_positive_phase_speed and np.any(value.phi_dot <= 0):
        raise HypothesisViolation(f"phase speed of profile {j} is not positive at s={s}")
    return value


def constraint_residual(lam, C, x):
    """``|sum lam_j x_j^2 - C|`` and its scale ``|C| + sum |lam_j| x_j^2``."""
    x = np.asarray(x, dtype=float)
    lam = np.asarray(lam, dtype=float)
    q = np.sum(lam * x**2, axis=-1)
    return np.abs(q - C), abs(C) + np.sum(np.abs(lam) * x**2, axis=-1)


def check_on_sigma(family, x, rtol=CONSTRAINT_RTOL):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != family.n:
        raise ConstraintError(f"point has {x.shape[-1]} coordinates, family has n={family.n}")
    res, scale = constraint_residual(family.lam, family.C, x)
    if np.any(res > rtol * scale):
        raise ConstraintError(f"point off the quadric: residual {np.max(res):.3g}")
    return x


def embed(family, x, s):
    """``iota(x, s)``; `x` must lie on the quadric."""
    x = check_on_sigma(family, x)
    return x * family.profiles(s).omega


def immersion_values(family, x, pv):
    """``sum lam_j x_j^2 w'_j / w_j`` and its scale ``sum |lam_j| x_j^2 |w'_j / w_j|``.

    `x` broadcasts against the profile arrays in `pv`.
    """
    ratio = pv.omega_dot / pv.omega
    weights = family.lam * np.asarray(x, dtype=float) ** 2
    return np.sum(weights * ratio, axis=-1), np.sum(np.abs(weights * ratio), axis=-1)


def immersion_mask(family, x, pv, eps=IMMERSION_EPS):
    value, scale = immersion_values(family, x, pv)
    ok = np.abs(value) > eps * scale
    if family.require_positive_phase_speed:
        ok = ok & np.all(pv.phi_dot > 0, axis=-1)
    return ok


def immersion_check(family, x, s, eps=IMMERSION_EPS):
    """Whether ``iota`` is an immersion at ``(x, s)`` under the family's hypotheses."""
    x = check_on_sigma(family, x)
    return bool(immersion_mask(family, x, family.profiles(s), eps))
