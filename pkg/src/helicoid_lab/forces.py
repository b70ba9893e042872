"""Interaction forces between catenoidal necks on the imaginary axis.

Necks sit at p_i = i y_i. The limit function of a configuration is

    u = c_0 arg z + sum_j c_j h_{p_j}         (case 1, case 2)
    u_z = -sum_j c_j / (2 (z - p_j))          (case 3b, after blow-up)

and the force on neck i is the contour integral -Re int (u_z)^2 w(z) dz over a
small circle around p_i with w = 1 - z^2 (case 1) or w = 1, divided by a
positive prefactor. Closed forms use the kernel

    f(x, y) = -2 pi^2 / ((log x - log y) |log x - log y + i pi|^2).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Literal, Sequence

import numpy as np

from .complexkit import Contour, contour_integral
from .errors import (
    CaseHypothesisViolated,
    ClusterUnresolvedError,
    CoincidentNecksError,
    InvalidRadiusError,
)
from .geometry import CoverPoint
from .harmonic import h_pole_dz

Case = Literal["case1", "case2", "case3b"]
CASES = ("case1", "case2", "case3b")


@dataclass(frozen=True)
class NeckConfiguration:
    """Neck heights ``positions`` (non-decreasing) with weights, c_0 and a case tag."""

    positions: tuple
    weights: tuple
    c0: float = 0.0
    case: Case = "case1"

    def __post_init__(self):
        y = tuple(float(v) for v in self.positions)
        c = tuple(float(v) for v in self.weights)
        object.__setattr__(self, "positions", y)
        object.__setattr__(self, "weights", c)
        if self.case not in CASES:
            raise ValueError(f"unknown case {self.case!r}")
        if len(y) == 0 or len(y) != len(c):
            raise ValueError("need one weight per neck and at least one neck")
        if any(b < a for a, b in zip(y, y[1:])):
            raise ValueError("positions must be sorted increasingly")
        if any(w < 0 for w in c) or self.c0 < 0:
            raise ValueError("weights and c0 must be nonnegative")
        if self.case in ("case1", "case2") and min(y) <= 0:
            raise ValueError("case1/case2 positions must be positive")
        if self.case == "case2" and not math.isclose(y[0], 1.0, abs_tol=1e-12):
            raise CaseHypothesisViolated("case2 needs the blow-up normalisation y_1 = 1")
        if self.case == "case3b":
            if len(y) < 2:
                raise CaseHypothesisViolated("case3b needs m >= 2 necks")
            if not (math.isclose(y[0], -0.5) and math.isclose(y[-1], 0.5)):
                raise CaseHypothesisViolated("case3b needs necks at -i/2 and i/2")

    @property
    def n(self) -> int:
        return len(self.positions)

    @property
    def points(self):
        return [1j * y for y in self.positions]

    def has_clusters(self) -> bool:
        return any(b == a for a, b in zip(self.positions, self.positions[1:]))

    def merged(self) -> "NeckConfiguration":
        """Coincident necks merged into one neck carrying the summed weight."""
        ys, cs = [], []
        for y, c in zip(self.positions, self.weights):
            if ys and ys[-1] == y:
                cs[-1] += c
            else:
                ys.append(y)
                cs.append(c)
        return NeckConfiguration(tuple(ys), tuple(cs), self.c0, self.case)

    def inverted(self) -> "NeckConfiguration":
        """Image under y -> 1/y (case 1), with weights carried along."""
        return NeckConfiguration(tuple(1 / y for y in reversed(self.positions)),
                                 tuple(reversed(self.weights)), self.c0, self.case)


@dataclass
class ForceVector:
    forces: np.ndarray
    self_terms: np.ndarray
    pair_terms: np.ndarray  # pair_terms[i, j]: contribution of neck j to F_i

    def __getitem__(self, i):
        return float(self.forces[i])


def kernel_f(x: float, y: float) -> float:
    if not (x > 0 and y > 0):
        raise ValueError("kernel arguments must be positive")
    if x == y:
        raise CoincidentNecksError("kernel evaluated at coincident necks")
    d = math.log(x) - math.log(y)
    return -2 * math.pi ** 2 / (d * (d * d + math.pi ** 2))


def _kernel_case3b(x: float, y: float) -> float:
    if x == y:
        raise CoincidentNecksError("coincident necks")
    return -math.pi / (x - y)


def _require(cfg: NeckConfiguration, case: str, i: int):
    if cfg.case != case:
        raise CaseHypothesisViolated(f"configuration is tagged {cfg.case}, not {case}")
    if not 0 <= i < cfg.n:
        raise IndexError(f"neck index {i} out of range")
    if cfg.has_clusters():
        raise ClusterUnresolvedError("coincident necks: merge the cluster first")


def _pairs(cfg, i, kernel):
    y, c = cfg.positions, cfg.weights
    return np.array([0.0 if j == i else c[i] * c[j] * kernel(y[i], y[j]) for j in range(cfg.n)])


def force_case1(cfg: NeckConfiguration, i: int = 0) -> float:
    _require(cfg, "case1", i)
    y, c = cfg.positions[i], cfg.weights[i]
    return float(c * c * (1 - y * y) / (1 + y * y) + _pairs(cfg, i, kernel_f).sum())


def force_case2(cfg: NeckConfiguration, i: int = 0) -> float:
    _require(cfg, "case2", i)
    c = cfg.weights[i]
    return float(c * c + _pairs(cfg, i, kernel_f).sum())


def force_case3b(cfg: NeckConfiguration, i: int = 0) -> float:
    _require(cfg, "case3b", i)
    return float(_pairs(cfg, i, _kernel_case3b).sum())


def force_vector(cfg: NeckConfiguration) -> ForceVector:
    """All forces with their self/pair decomposition."""
    kernel = _kernel_case3b if cfg.case == "case3b" else kernel_f
    fn = {"case1": force_case1, "case2": force_case2, "case3b": force_case3b}[cfg.case]
    pairs = np.array([_pairs(cfg, i, kernel) for i in range(cfg.n)])
    forces = np.array([fn(cfg, i) for i in range(cfg.n)])
    return ForceVector(forces, forces - pairs.sum(axis=1), pairs)


def limit_uz(cfg: NeckConfiguration):
    """u_z of the limit function, as a callable on the principal sheet near the necks."""
    if cfg.case == "case3b":
        pts = np.array(cfg.points)
        c = np.array(cfg.weights)

        def uz(z):
            z = np.asarray(z, dtype=complex)
            return -np.sum(c[:, None] / (2 * (z.ravel()[None, :] - pts[:, None])), axis=0).reshape(z.shape)
        return uz

    poles = [CoverPoint(y, math.pi / 2) for y in cfg.positions]

    def uz(z):
        z = np.asarray(z, dtype=complex)
        out = cfg.c0 / (2j * z)
        for p, c in zip(poles, cfg.weights):
            out = out + c * h_pole_dz(p, z)
        return out
    return uz


def contour_prefactor(cfg: NeckConfiguration, i: int) -> float:
    y = cfg.positions[i]
    if cfg.case == "case1":
        return math.pi * (y * y + 1) / (2 * y)
    if cfg.case == "case2":
        return math.pi / (2 * y)
    return 1.0


def _max_radius(cfg: NeckConfiguration, i: int) -> float:
    p = cfg.points[i]
    others = [q for j, q in enumerate(cfg.points) if j != i]
    if cfg.case != "case3b":
        others += [-q for q in cfg.points]  # conjugate poles sit at -i y on the principal sheet
        others.append(0j)
    return 0.5 * min(abs(p - q) for q in others)


def force_via_contour(cfg: NeckConfiguration, i: int, eps: float | None = None,
                      tol: float = 1e-13) -> float:
    """Force on neck i from -Re int (u_z)^2 w dz over C(p_i, eps), divided by the case prefactor."""
    if not 0 <= i < cfg.n:
        raise IndexError(f"neck index {i} out of range")
    if cfg.has_clusters():
        raise ClusterUnresolvedError("coincident necks: merge the cluster first")
    rmax = _max_radius(cfg, i)
    eps = 0.5 * rmax if eps is None else eps
    if not 0 < eps < rmax:
        raise InvalidRadiusError(f"eps={eps} must lie in (0, {rmax:.6g})")
    uz = limit_uz(cfg)
    weight = (lambda z: 1 - z * z) if cfg.case == "case1" else (lambda z: 1.0)
    val = contour_integral(lambda z: uz(z) ** 2 * weight(z), Contour(cfg.points[i], eps), tol=tol)
    return float(-val.real / contour_prefactor(cfg, i))


def residue_hand_expansion(cfg: NeckConfiguration, i: int = 0) -> complex:
    """Residue at p_i of (u_z)^2 (1 - z^2) from the explicit log-pole expansion (case 1)."""
    if cfg.case != "case1":
        raise CaseHypothesisViolated("the hand expansion is for case1")
    y, c = cfg.positions, cfg.weights
    p = 1j * y[i]
    lp = lambda k: complex(math.log(y[k]), math.pi / 2)
    bracket = -cfg.c0 / 1j - c[i] / (lp(i) - lp(i).conjugate())
    for j in range(cfg.n):
        if j != i:
            bracket += c[j] / (lp(i) - lp(j)) - c[j] / (lp(i) - lp(j).conjugate())
    return -c[i] ** 2 * (1 + p * p) / (4 * p) + c[i] * (1 - p * p) / (2 * p) * bracket


def residue_via_quadrature(cfg: NeckConfiguration, i: int = 0, eps: float | None = None) -> complex:
    if cfg.case != "case1":
        raise CaseHypothesisViolated("the residue check is for case1")
    eps = 0.5 * _max_radius(cfg, i) if eps is None else eps
    uz = limit_uz(cfg)
    val = contour_integral(lambda z: uz(z) ** 2 * (1 - z * z), Contour(cfg.points[i], eps), tol=1e-13)
    return complex(val / (2j * math.pi))


# --- equilibrium scans -------------------------------------------------------

LOG_RANGE = (1e-2, 1e2)


def _log_uniform(rng, n, lo=LOG_RANGE[0], hi=LOG_RANGE[1]):
    return np.exp(rng.uniform(math.log(lo), math.log(hi), n))


def sample_configuration(case: Case, n: int, rng: np.random.Generator) -> NeckConfiguration:
    """Random admissible configuration; the neck carrying the sign claim comes first."""
    c = _log_uniform(rng, n)
    if case == "case1":
        while True:
            y = np.sort(_log_uniform(rng, n))
            if y[0] < 1 and (n == 1 or y[1] > y[0]):
                break
        return NeckConfiguration(tuple(y), tuple(c), float(rng.uniform(0, 1)), "case1")
    if case == "case2":
        rest = np.sort(_log_uniform(rng, n - 1, 1.0, LOG_RANGE[1]))
        return NeckConfiguration((1.0,) + tuple(rest), tuple(c), 0.0, "case2")
    if case == "case3b":
        if n < 2:
            raise CaseHypothesisViolated("case3b needs m >= 2 necks")
        mid = np.sort(rng.uniform(-0.5, 0.5, n - 2))
        return NeckConfiguration((-0.5,) + tuple(mid) + (0.5,), tuple(c), 0.0, "case3b")
    raise ValueError(f"unknown case {case!r}")


def _force(cfg: NeckConfiguration, i: int = 0) -> float:
    return {"case1": force_case1, "case2": force_case2, "case3b": force_case3b}[cfg.case](cfg, i)


@dataclass
class ScanReport:
    case: str
    n: int
    trials: int
    seed: int
    min_margin: float
    all_positive: bool
    equilibria: int
    worst: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)
    rows: list = field(default_factory=list, repr=False)

    def as_dict(self, include_rows: bool = False):
        d = asdict(self)
        if not include_rows:
            d.pop("rows")
        return d

    def write_csv(self, path, header_comment: str = ""):
        with open(path, "w", newline="") as fh:
            if header_comment:
                fh.write(f"# {header_comment}\n")
            w = csv.writer(fh)
            w.writerow([f"y{k}" for k in range(1, self.n + 1)] + [f"c{k}" for k in range(1, self.n + 1)]
                       + [f"F{k}" for k in range(1, self.n + 1)] + ["margin"])
            for r in self.rows:
                w.writerow([repr(v) for v in r])

    def write_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.as_dict(), fh, indent=2, sort_keys=True)


def equilibrium_scan(case: Case, n: int, trials: int, seed: int = 0,
                     force_equator: bool = False, keep_rows: bool = True) -> ScanReport:
    """Sample admissible configurations and record the force on the lowest neck.

    The margin of a trial is F_1 (for case2 it is also compared with c_1^2).
    ``force_equator`` pins a single case1 neck at y = 1, the one equilibrium.
    """
    if n < 1:
        raise ValueError("need N >= 1")
    children = np.random.SeedSequence(seed).spawn(trials)
    min_margin, min_excess, worst, equilibria = math.inf, math.inf, {}, 0
    rows = []
    for child in children:
        rng = np.random.default_rng(child)
        if force_equator:
            if case != "case1" or n != 1:
                raise ValueError("force_equator applies to case1 with N = 1")
            cfg = NeckConfiguration((1.0,), (float(_log_uniform(rng, 1)[0]),), 0.0, "case1")
        else:
            cfg = sample_configuration(case, n, rng)
        forces = [_force(cfg, i) for i in range(cfg.n)]
        margin = forces[0]
        if case == "case2":
            # every pair term is positive, so F_1 >= c_1^2
            min_excess = min(min_excess, forces[0] - cfg.weights[0] ** 2)
        if force_equator and abs(forces[0]) < 1e-15:
            equilibria += 1
        if margin < min_margin:
            min_margin = margin
            worst = {"positions": list(cfg.positions), "weights": list(cfg.weights), "force": margin}
        if keep_rows:
            rows.append(list(cfg.positions) + list(cfg.weights) + forces + [margin])
    if force_equator:
        all_positive = bool(equilibria == trials)
    else:
        all_positive = bool(min_margin > 0) and not (case == "case2" and min_excess < -1e-12 * abs(min_margin))
    extra = {"min_F1_minus_c1_squared": float(min_excess)} if case == "case2" else {}
    return ScanReport(case, n, trials, int(seed), float(min_margin), all_positive, equilibria, worst,
                      extra, rows)


# --- cross-term decay --------------------------------------------------------

def _tail(t: float, p: complex, order: int):
    ks = np.arange(2, order + 1)
    coeffs = t ** ks.astype(float)

    def tail(z):
        z = np.asarray(z, dtype=complex)
        return np.sum(coeffs[:, None] * (z.ravel()[None, :] - p) ** (-ks[:, None].astype(float)),
                      axis=0).reshape(z.shape)
    return tail


def cross_term_decay(ts: Sequence[float], cfg: NeckConfiguration, i: int = 0, eps: float | None = None,
                     tail_order: int = 4):
    """Cross and quadratic terms of the finite-t flux integrand on C(p_i, eps).

    Model: u_{t,z} = (t/|log t|) u~_z + sum_{k=2..K} t^k (z - p_i)^{-k}. The tail
    respects the decay |a_k| <= C t^{1+(k-1) alpha} for every alpha <= 1 and
    is what makes the cross term nonzero (the limit part alone contributes
    only to its imaginary part).
    Returns a list of rows with the normalised cross and quadratic terms.
    """
    if cfg.case != "case1":
        raise CaseHypothesisViolated("cross-term decay is defined for case1")
    eps = 0.5 * _max_radius(cfg, i) if eps is None else eps
    p = cfg.points[i]
    uz = limit_uz(cfg)
    gamma = Contour(p, eps)
    F = force_case1(cfg, i)
    pref = contour_prefactor(cfg, i)
    rows = []
    for t in ts:
        scale = t / abs(math.log(t))
        tail = _tail(t, p, tail_order)
        ut = lambda z: scale * uz(z) + tail(z)
        cross = contour_integral(lambda z: 2 * t / (4j * math.pi * z) * ut(z) * (1 - z * z), gamma, tol=1e-14)
        quad = contour_integral(lambda z: ut(z) ** 2 * (1 - z * z), gamma, tol=1e-14)
        cross_n = cross.real / scale ** 2
        quad_n = -quad.real / scale ** 2 / pref
        rows.append({"t": t, "cross": cross.real, "cross_normalised": cross_n,
                     "quadratic": -quad.real, "quadratic_normalised": quad_n,
                     "closed_form": F, "relative_error": abs(quad_n - F) / max(abs(F), 1e-300)})
    return rows


def residue_free_check(p: complex, eps: float) -> complex:
    """int (1 - z^2)/z^2 dz over C(p, eps); zero when 0 is outside the circle."""
    return complex(contour_integral(lambda z: (1 - z * z) / (z * z), Contour(p, eps), tol=1e-14))
