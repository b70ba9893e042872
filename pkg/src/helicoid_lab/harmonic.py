"""Explicit harmonic functions on the universal cover: the Green-type function
h_p, the barrier H_t, the supersolution g_n, and positive-harmonic fitting.

Functions taking cover points also accept arrays through the ``*_values``
variants, which work on (modulus, argument) arrays directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import nnls

from .errors import NotRepresentableError, OutsideHalfplaneError, PoleEvaluationError
from .geometry import CoverPoint, cover_log


def _log_cover(modulus, argument):
    return np.log(np.asarray(modulus, dtype=float)) + 1j * np.asarray(argument, dtype=float)


def h_pole_values(p: CoverPoint, modulus, argument):
    """h_p(z) = -log |(log z - log p) / (log z - log conj(p))| on arrays of cover points."""
    lz = _log_cover(modulus, argument)
    lp = cover_log(p)
    num = lz - lp
    den = lz - np.conj(lp)
    if np.any(num == 0) or np.any(den == 0):
        raise PoleEvaluationError("h_p evaluated at p or conj(p)")
    return -np.log(np.abs(num / den))


def h_pole(p: CoverPoint, z: CoverPoint) -> float:
    return float(h_pole_values(p, z.modulus, z.argument))


def h_pole_dz(p: CoverPoint, z, argument=None):
    """Complex derivative d h_p / dz = -(1/2z) (1/(log z - log p) - 1/(log z - log conj p)).

    ``z`` is a complex array; ``argument`` fixes the sheet (principal by default).
    """
    z = np.asarray(z, dtype=complex)
    arg = np.angle(z) if argument is None else np.asarray(argument, dtype=float)
    lz = np.log(np.abs(z)) + 1j * arg
    lp = cover_log(p)
    return -(1.0 / (2 * z)) * (1.0 / (lz - lp) - 1.0 / (lz - np.conj(lp)))


def barrier_values(t: float, modulus, argument):
    if not 0 < t < 1:
        raise ValueError("t must lie in (0, 1)")
    argument = np.asarray(argument, dtype=float)
    if np.any(argument <= 0):
        raise OutsideHalfplaneError("H_t is defined for arg z > 0 only")
    lt = math.log(t)
    lz = _log_cover(modulus, argument)
    return np.imag(lt * lz / (lt + 1j * lz))


def barrier_polar(t: float, r, theta):
    """Closed form of H_t in polar coordinates (used as an independent check)."""
    lt = math.log(t)
    lr = np.log(np.asarray(r, dtype=float))
    theta = np.asarray(theta, dtype=float)
    return (lt ** 2 * theta + abs(lt) * (lr ** 2 + theta ** 2)) / ((lt - theta) ** 2 + lr ** 2)


def barrier_Ht(t: float, z: CoverPoint) -> float:
    return float(barrier_values(t, z.modulus, z.argument))


def barrier_radial_derivative(t: float, r, theta):
    lt = math.log(t)
    lr = np.log(np.asarray(r, dtype=float))
    theta = np.asarray(theta, dtype=float)
    return 2 * lr * lt ** 2 * (abs(lt) + theta) / (((lt - theta) ** 2 + lr ** 2) ** 2) / np.asarray(r)


def barrier_properties(t: float, n_r: int = 200, n_theta: int = 200, rng=None) -> dict:
    """Check the six listed properties of H_t on sample grids; returns measured margins.

    Every entry has a ``value`` and a ``bound`` and passes when value satisfies
    the stated comparison.
    """
    L = abs(math.log(t))
    r = np.exp(np.linspace(math.log(t), -math.log(t), n_r))
    theta = np.linspace(1e-3, 40 * math.pi, n_theta)
    R, TH = np.meshgrid(r, theta, indexing="ij")
    H = barrier_values(t, R, TH)
    out = {}
    out["positivity"] = {"value": float(H.min()), "bound": 0.0, "pass": bool(H.min() > 0)}
    Hinv = barrier_values(t, 1 / R, TH)
    sym = float(np.max(np.abs(Hinv - H) / np.maximum(1.0, np.abs(H))))
    out["inversion_symmetry"] = {"value": sym, "bound": 1e-12, "pass": sym <= 1e-12}
    dr = barrier_radial_derivative(t, np.ones_like(theta), theta)
    out["neumann_on_unit_circle"] = {"value": float(np.max(np.abs(dr))), "bound": 1e-12,
                                     "pass": bool(np.max(np.abs(dr)) <= 1e-12)}
    th_circle = np.linspace(1e-9, 60 * math.pi, 4000)
    on_t = barrier_values(t, np.full_like(th_circle, t), th_circle)
    m3 = float(on_t.min())
    out["lower_bound_on_r_eq_t"] = {"value": m3, "bound": L / 2 - 1e-12, "pass": m3 >= L / 2 - 1e-12}
    big_theta = 10 * L
    rr = np.exp(np.linspace(math.log(t), 0.0, 2000))
    m4 = float(barrier_values(t, rr, np.full_like(rr, big_theta)).min())
    out["large_argument_bound"] = {"value": m4, "bound": L / 2, "pass": m4 > L / 2}
    # point 5 at fixed z = (0.5, 1): the error to arg z shrinks along t -> 0
    ts = [10.0 ** (-k) for k in (2, 4, 6, 8, 12, 16)]
    errs = [abs(barrier_values(s, 0.5, 1.0) - 1.0) for s in ts]
    mono = all(b < a for a, b in zip(errs, errs[1:]))
    out["limit_arg_z"] = {"value": float(errs[-1]), "bound": float(errs[0]), "pass": mono,
                          "errors": [float(e) for e in errs]}
    logz = np.abs(_log_cover(R, TH))
    m6 = float(np.max(H - logz))
    out["upper_bound_log_z"] = {"value": m6, "bound": 1e-12, "pass": m6 <= 1e-12}
    return out


# --- the supersolution g_n ----------------------------------------------------

def _psi(x):
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)
        b = np.where(x < 1, np.exp(-1.0 / np.where(x < 1, 1 - x, 1.0)), 0.0)
    return a / (a + b)


def cutoff_chi(theta):
    """Smooth ramp: 1 on [0, pi], 0 on [2 pi, inf)."""
    return _psi((2 * np.pi - np.asarray(theta, dtype=float)) / np.pi)


def neck_distance(modulus, argument, poles: Sequence[complex]):
    """delta(z): min(|z|, |z - p_i|) on the sheet 0 < arg z < pi, |z| for arg z >= pi."""
    modulus = np.asarray(modulus, dtype=float)
    argument = np.asarray(argument, dtype=float)
    z = modulus * np.exp(1j * argument)
    d = modulus.copy()
    sheet = (argument > 0) & (argument < np.pi)
    for p in poles:
        d = np.where(sheet, np.minimum(d, np.abs(z - p)), d)
    return d


@dataclass(frozen=True)
class SupersolutionGn:
    poles: tuple
    C2: float = 64.0

    def __post_init__(self):
        object.__setattr__(self, "poles", tuple(complex(p) for p in self.poles))
        if self.C2 < 1:
            raise ValueError("C2 must be >= 1")

    def values(self, modulus, argument):
        modulus = np.asarray(modulus, dtype=float)
        argument = np.asarray(argument, dtype=float)
        z = modulus * np.exp(1j * argument)
        g = self.C2 / modulus ** 2
        chi = cutoff_chi(argument)
        for p in self.poles:
            g = g + chi / np.abs(z - p) ** 2
        return g

    def laplacian_exact_sheet(self, modulus, argument):
        """Closed-form Laplacian where chi is locally constant (arg < pi or arg > 2 pi)."""
        modulus = np.asarray(modulus, dtype=float)
        argument = np.asarray(argument, dtype=float)
        z = modulus * np.exp(1j * argument)
        lap = 4 * self.C2 / modulus ** 4
        chi = cutoff_chi(argument)
        for p in self.poles:
            lap = lap + 4 * chi / np.abs(z - p) ** 4
        return lap

    def laplacian_5pt(self, modulus, argument, rel_step: float = 0.02):
        """Five-point Laplacian with a local step rel_step * delta(z), neighbours lifted by continuity."""
        modulus = np.asarray(modulus, dtype=float)
        argument = np.asarray(argument, dtype=float)
        h = rel_step * neck_distance(modulus, argument, self.poles)
        z = modulus * np.exp(1j * argument)
        centre = self.values(modulus, argument)
        total = -4 * centre
        for step in (1, -1, 1j, -1j):
            w = z + step * h
            arg_w = argument + np.angle(w / z)
            total = total + self.values(np.abs(w), arg_w)
        return total / h ** 2


def supersolution_gn(cfg: SupersolutionGn, z: CoverPoint, rel_step: float = 0.02):
    """(g_n(z), discrete Laplacian of g_n at z)."""
    return (float(cfg.values(z.modulus, z.argument)),
            float(cfg.laplacian_5pt(z.modulus, z.argument, rel_step)))


def working_set_grid(t: float, alpha: float, poles, n_r: int = 120, n_theta: int = 360,
                     max_arg: float = 3 * math.pi):
    """Polar sample of A_n: t^alpha < |z| < 1, 0 < arg z <= max_arg, minus D(p_i, t^alpha)."""
    rad = t ** alpha
    r = np.exp(np.linspace(math.log(rad), 0.0, n_r + 2)[1:-1])
    th = np.linspace(0.0, max_arg, n_theta + 1)[1:]
    R, TH = np.meshgrid(r, th, indexing="ij")
    z = R * np.exp(1j * TH)
    keep = np.ones(R.shape, dtype=bool)
    sheet = TH < np.pi
    for p in poles:
        keep &= ~(sheet & (np.abs(z - p) <= rad))
    return R[keep], TH[keep]


def supersolution_check(t: float = 1e-3, alpha: float = 0.5, poles=(0.5j, 2j), C2: float = 64.0,
                        margin: float = 0.05, **grid) -> dict:
    """Discrete check of Laplacian(g_n) >= 4/delta^4 (with a relative margin) on A_n."""
    cfg = SupersolutionGn(poles, C2)
    R, TH = working_set_grid(t, alpha, cfg.poles, **grid)
    lap = cfg.laplacian_5pt(R, TH)
    target = 4 / neck_distance(R, TH, cfg.poles) ** 4
    ratio = lap / target
    g = cfg.values(R, TH)
    bound13 = (C2 + len(cfg.poles)) / t ** (2 * alpha)
    return {
        "min_ratio": float(ratio.min()),
        "required_ratio": 1 - margin,
        "pass": bool(ratio.min() >= 1 - margin),
        "nodes": int(R.size),
        "max_g": float(g.max()),
        "g_bound": float(bound13),
        "g_bound_pass": bool(g.max() <= bound13),
    }


def chi_derivative_bounds(n: int = 20001):
    th = np.linspace(np.pi, 2 * np.pi, n)
    h = th[1] - th[0]
    c = cutoff_chi(th)
    d1 = np.gradient(c, h)
    d2 = np.gradient(d1, h)
    return float(np.max(np.abs(d1))), float(np.max(np.abs(d2)))


def barrier_sum_check(t: float, alpha: float, beta: float, poles, C1: float = 1.0, C2: float = 64.0,
                      n_r: int = 200, n_theta: int = 200) -> dict:
    """Evaluate (t/|log t|)(v1 + v2 + v3) on A'_n (sheet 0 < arg z < pi) against (N+2)(beta/alpha) t."""
    if not 0 < beta < alpha < 1:
        raise ValueError("need 0 < beta < alpha < 1")
    L = abs(math.log(t))
    N = len(poles)
    cfg = SupersolutionGn(poles, C2)
    R, TH = working_set_grid(t, beta, cfg.poles, n_r=n_r, n_theta=n_theta, max_arg=math.pi)
    v1 = -C1 * t ** 2 * L * cfg.values(R, TH) + C1 * (C2 + N) * t ** (2 - 2 * alpha) * L
    v2 = sum(h_pole_values(CoverPoint.from_complex(p, math.pi / 2), R, TH) for p in cfg.poles) / alpha
    v3 = barrier_values(t ** alpha, R, TH) / alpha
    u_bound = t / L * (v1 + v2 + v3)
    target = (N + 2) * beta / alpha * t
    return {"max_barrier": float(u_bound.max()), "bound": float(target),
            "pass": bool(u_bound.max() <= target), "nodes": int(R.size)}


# --- positive harmonic functions on the half plane -----------------------------

@dataclass
class PositiveHarmonicFit:
    c0: float
    coefficients: np.ndarray
    residual: float
    info: dict = field(default_factory=dict)


def positive_harmonic_model(z, c0: float, poles, coefficients):
    z = np.asarray(z, dtype=complex)
    u = c0 * z.imag
    for q, c in zip(poles, coefficients):
        u = u - c * np.log(np.abs((z - q) / (z - np.conj(q))))
    return u


def fit_positive_harmonic(points, samples, poles, rel_zero: float = 1e-8, neg_tol: float = 1e-8):
    """Nonnegative least squares fit of c0 Im z - sum c_i log|(z - q_i)/(z - conj q_i)|.

    ``points`` are sample locations in the upper half plane (away from the
    poles). A coefficient below rel_zero * max coefficient is reported as 0.
    If the unconstrained fit needs a clearly negative coefficient the samples
    are not of the model class.
    """
    z = np.asarray(points, dtype=complex).ravel()
    y = np.asarray(samples, dtype=float).ravel()
    cols = [z.imag] + [-np.log(np.abs((z - q) / (z - np.conj(q)))) for q in poles]
    A = np.column_stack(cols)
    free, *_ = np.linalg.lstsq(A, y, rcond=None)
    scale = max(float(np.max(np.abs(free))), 1e-300)
    if np.any(free < -neg_tol * max(1.0, scale)):
        raise NotRepresentableError(f"least squares needs negative coefficients: {free}")
    coef, _ = nnls(A, y)
    cmax = float(coef.max()) if coef.size else 0.0
    coef = np.where(coef < rel_zero * cmax, 0.0, coef)
    resid = float(np.max(np.abs(A @ coef - y))) if y.size else 0.0
    return PositiveHarmonicFit(float(coef[0]), coef[1:], resid, {"unconstrained": free})
