"""Chernoff-bound metric tensor of XY-chain thermal states in coordinates (beta, gamma, lambda).

Per-mode contributions (sums run over every momentum k of the chain):

    classical     g^c_ab  = (1/16) sum_k d_a(beta L_k) d_b(beta L_k) / (cosh(beta L_k) + 1)
    nonclassical  g^nc_ab = (1/8)  sum_k tanh^2(beta L_k / 2) d_a theta_k d_b theta_k

The nonclassical weight 1/8 per momentum is 1/4 per (k, -k) pair, which is what
the exact pair density matrices give (see `qcbxy.oracle`).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .quadrature import graded_breakpoints, integrate
from .xy_model import (CouplingPoint, ThermalPoint, dispersion, dispersion_minima, gap,
                       is_critical, modes)

COORDS = ("beta", "gamma", "lambda")
CLASSICAL = ("c_bb", "c_bg", "c_bl", "c_gg", "c_gl", "c_ll")
NONCLASSICAL = ("nc_gg", "nc_gl", "nc_ll")
COMPONENTS = CLASSICAL + NONCLASSICAL

_CLASSICAL_IDX = {"c_bb": (0, 0), "c_bg": (0, 1), "c_bl": (0, 2),
                  "c_gg": (1, 1), "c_gl": (1, 2), "c_ll": (2, 2)}
_NONCLASSICAL_IDX = {"nc_gg": (1, 1), "nc_gl": (1, 2), "nc_ll": (2, 2)}

SMALL_X = 1e-4


class Normalization(str, enum.Enum):
    PER_SITE = "PerSite"
    TOTAL = "Total"


@dataclass(frozen=True)
class EvaluationScheme:
    """Either a finite chain of N sites (mode sums) or the thermodynamic limit (quadrature)."""

    N: int | None = None
    rtol: float = 1e-9
    max_depth: int = 40

    def __post_init__(self):
        if self.N is not None:
            modes(self.N)  # validates odd N >= 3

    @classmethod
    def finite(cls, N: int, **kw) -> "EvaluationScheme":
        return cls(N=int(N), **kw)

    @classmethod
    def thermodynamic(cls, **kw) -> "EvaluationScheme":
        return cls(N=None, **kw)

    @property
    def is_finite(self) -> bool:
        return self.N is not None

    @property
    def kind(self) -> str:
        return f"FiniteN({self.N})" if self.is_finite else "ThermodynamicLimit"


@dataclass
class MetricTensor:
    classical: np.ndarray
    nonclassical: np.ndarray
    point: ThermalPoint
    scheme: EvaluationScheme
    normalization: Normalization = Normalization.PER_SITE
    classical_is_limit: bool = False
    converged: bool = True
    extra: dict = field(default_factory=dict)

    def component(self, name: str) -> float:
        if name in CLASSICAL:
            return float(self.classical[CLASSICAL.index(name)])
        if name in NONCLASSICAL:
            return float(self.nonclassical[NONCLASSICAL.index(name)])
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {name: self.component(name) for name in COMPONENTS}

    @property
    def classical_matrix(self) -> np.ndarray:
        return _symmetric(self.classical, _CLASSICAL_IDX, CLASSICAL)

    @property
    def nonclassical_matrix(self) -> np.ndarray:
        return _symmetric(self.nonclassical, _NONCLASSICAL_IDX, NONCLASSICAL)

    @property
    def matrix(self) -> np.ndarray:
        return self.classical_matrix + self.nonclassical_matrix


def _symmetric(values, index, names):
    g = np.zeros((3, 3))
    for name, v in zip(names, values):
        i, j = index[name]
        g[i, j] = g[j, i] = v
    return g


def sech2_half(x, shift=0.0):
    """exp(shift) * sech^2(x/2) for x >= 0 without overflow; sech^2(x/2) = 2/(cosh x + 1).

    A shift of beta * gap keeps exponentially small kernels representable.
    """
    return 4.0 * np.exp(shift - x) / (1.0 + np.exp(-x)) ** 2


def tanh2_half(x):
    """tanh^2(x/2); equals (cosh x - 1)/(cosh x + 1) for x >= 0."""
    return np.tanh(0.5 * x) ** 2


def _tanh2_over_lam2(beta, lam_k):
    """tanh^2(beta L / 2) / L^2, series-guarded as beta L -> 0."""
    if np.isinf(beta):
        with np.errstate(divide="ignore"):
            return 1.0 / lam_k**2
    x = beta * lam_k
    small = x < SMALL_X
    safe = np.where(small, 1.0, lam_k)
    series = (0.5 * beta) ** 2 * (1.0 - x * x / 12.0) ** 2
    return np.where(small, series, tanh2_half(x) / safe**2)


def _shape_factors(k, c: CouplingPoint):
    """Bounded angular factors; at Lambda_k = 0 they take their limits along lambda."""
    eps, dlt, lam_k = dispersion(k, c)
    s = np.sin(k)
    pos = lam_k > 0
    safe = np.where(pos, lam_k, 1.0)
    ce = np.where(pos, eps / safe, 1.0)    # cos theta_k
    sd = np.where(pos, dlt / safe, 0.0)    # sin theta_k
    eps2, dlt2, mixed = ce * ce, sd * sd, ce * sd
    return eps, s, lam_k, eps2, dlt2, mixed


def classical_integrands(k, p: ThermalPoint, shift: float = 0.0):
    beta, c = p.beta, p.coupling
    eps, s, lam_k, eps2, dlt2, mixed = _shape_factors(k, c)
    kern = 0.5 * sech2_half(beta * lam_k, shift) / 16.0
    g = c.gamma
    return np.stack([
        kern * lam_k**2,
        beta * kern * g * s**2,
        -beta * kern * eps,
        beta**2 * kern * s**2 * dlt2,
        -beta**2 * kern * s * mixed,
        beta**2 * kern * eps2,
    ])


def nonclassical_integrands(k, p: ThermalPoint, deficit: bool = False, shift: float = 0.0):
    """(1/8) tanh^2(beta L/2) dtheta_a dtheta_b, or with `deficit` the amount by which
    that falls short of its zero-temperature value, (1/8) sech^2(beta L/2) dtheta_a dtheta_b."""
    beta, c = p.beta, p.coupling
    eps, s, lam_k, eps2, dlt2, mixed = _shape_factors(k, c)
    if deficit:
        with np.errstate(divide="ignore", invalid="ignore"):
            q = sech2_half(beta * lam_k, shift) / lam_k**2
    else:
        q = _tanh2_over_lam2(beta, lam_k)
    q = q / 8.0
    return np.stack([q * s**2 * eps2, q * s * mixed, q * dlt2])


def _breakpoints(p: ThermalPoint):
    width = np.pi / 8
    if np.isfinite(p.beta) and p.beta > 0:
        width = min(1.0 / p.beta, width)
    return graded_breakpoints(dispersion_minima(p.coupling), width, 0.0, np.pi,
                              coarse=np.pi / 8)


def _evaluate(integrand, p: ThermalPoint, s: EvaluationScheme,
              normalization: Normalization, pairs_only: bool = False):
    if s.is_finite:
        k = modes(s.N)
        if pairs_only:
            k = k[k != 0]
        vals = integrand(k).sum(axis=1)
        if normalization is Normalization.PER_SITE:
            vals = vals / s.N
        return vals, True
    # integrands are even in k: (1/2pi) int_{-pi}^{pi} = (1/pi) int_0^{pi}
    res = integrate(integrand, _breakpoints(p), rtol=s.rtol, max_depth=s.max_depth)
    return res.value / np.pi, res.converged


def classical_metric(p: ThermalPoint, s: EvaluationScheme = EvaluationScheme(),
                     normalization: Normalization = Normalization.PER_SITE) -> np.ndarray:
    """Six classical components (bb, bg, bl, gg, gl, ll)."""
    if p.zero_temperature:
        raise ValueError("classical part undefined at zero temperature; use full_metric for the limit")
    if not s.is_finite and normalization is Normalization.TOTAL:
        raise ValueError("Total normalization needs a finite chain")
    vals, _ = _evaluate(lambda k: classical_integrands(k, p), p, s, normalization)
    return vals


def nonclassical_metric(p: ThermalPoint, s: EvaluationScheme = EvaluationScheme(),
                        normalization: Normalization = Normalization.PER_SITE) -> np.ndarray:
    """Three nonclassical components (gg, gl, ll)."""
    if p.zero_temperature and is_critical(p.coupling):
        raise ValueError("nonclassical metric diverges at zero temperature on a critical coupling")
    if not s.is_finite and normalization is Normalization.TOTAL:
        raise ValueError("Total normalization needs a finite chain")
    if p.beta == 0:
        return np.zeros(3)
    vals, _ = _evaluate(lambda k: nonclassical_integrands(k, p), p, s, normalization,
                        pairs_only=True)
    return vals


def nonclassical_deficit(p: ThermalPoint, s: EvaluationScheme = EvaluationScheme(),
                         normalization: Normalization = Normalization.PER_SITE,
                         gap_scaled: bool = False) -> np.ndarray:
    """g^nc(beta = inf) - g^nc(beta), evaluated directly rather than by subtraction.

    Deep in a gapped phase the difference is of order exp(-beta * gap), far below
    double-precision resolution of g^nc itself. With `gap_scaled` the result is
    multiplied by exp(beta * gap).
    """
    if is_critical(p.coupling):
        raise ValueError("deficit diverges on a critical coupling")
    if p.zero_temperature:
        return np.zeros(3)
    shift = p.beta * gap(p.coupling).value if gap_scaled else 0.0
    vals, _ = _evaluate(lambda k: nonclassical_integrands(k, p, deficit=True, shift=shift),
                        p, s, normalization, pairs_only=True)
    return vals


def gap_scaled_classical(p: ThermalPoint, s: EvaluationScheme = EvaluationScheme(),
                         normalization: Normalization = Normalization.PER_SITE) -> np.ndarray:
    """exp(beta * gap) times the six classical components, free of underflow."""
    if p.zero_temperature:
        raise ValueError("classical part undefined at zero temperature")
    shift = p.beta * gap(p.coupling).value
    vals, _ = _evaluate(lambda k: classical_integrands(k, p, shift), p, s, normalization)
    return vals


def full_metric(p: ThermalPoint, s: EvaluationScheme = EvaluationScheme(),
                normalization: Normalization = Normalization.PER_SITE) -> MetricTensor:
    if not s.is_finite and normalization is Normalization.TOTAL:
        raise ValueError("Total normalization needs a finite chain")
    if p.zero_temperature:
        nc = nonclassical_metric(p, s, normalization)
        return MetricTensor(np.zeros(6), nc, p, s, normalization, classical_is_limit=True)
    if p.beta == 0:
        c = classical_metric(p, s, normalization)
        return MetricTensor(c, np.zeros(3), p, s, normalization)

    def both(k):
        return np.concatenate([classical_integrands(k, p), nonclassical_integrands(k, p)])

    # the unpaired k = 0 mode contributes nothing to the nc terms, so one pass covers both
    vals, ok = _evaluate(both, p, s, normalization)
    return MetricTensor(vals[:6], vals[6:], p, s, normalization, converged=ok)


def max_eigenvalue(m) -> tuple[float, np.ndarray]:
    """Largest eigenvalue of the assembled tensor and its unit eigenvector.

    The eigenvector sign is fixed so that its largest-magnitude entry is positive.
    """
    g = m.matrix if isinstance(m, MetricTensor) else np.asarray(m, dtype=float)
    if not np.all(np.isfinite(g)):
        raise ValueError("metric tensor has non-finite entries")
    w, v = np.linalg.eigh(g)
    vec = v[:, -1]
    if vec[np.argmax(np.abs(vec))] < 0:
        vec = -vec
    return float(w[-1]), vec
