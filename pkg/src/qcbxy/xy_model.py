"""Single-mode spectral data of the anisotropic XY chain in a transverse field.

Momenta live on [-pi, pi]. For a finite chain of odd length N they are
2*pi*j/N with j = -(N-1)/2 .. (N-1)/2; `modes` is the only place that
conversion happens.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

BOUNDARY_TOL = 1e-12


class Region(str, enum.Enum):
    A = "A"
    B = "B"
    CRITICAL = "Critical"


@dataclass(frozen=True)
class CouplingPoint:
    """Position (gamma, lambda) in coupling space."""

    lam: float
    gamma: float

    def __post_init__(self):
        if not np.isfinite(self.lam):
            raise ValueError(f"lambda must be finite, got {self.lam}")
        if not (-1.0 <= self.gamma <= 1.0):
            raise ValueError(f"gamma must lie in [-1, 1], got {self.gamma}")

    @property
    def region(self) -> Region:
        return gap(self).region


@dataclass(frozen=True)
class ThermalPoint:
    """Inverse temperature plus couplings; beta may be +inf (zero temperature)."""

    beta: float
    coupling: CouplingPoint

    def __post_init__(self):
        if np.isnan(self.beta) or self.beta < 0:
            raise ValueError(f"beta must be >= 0 or +inf, got {self.beta}")

    @classmethod
    def from_values(cls, beta: float, gamma: float, lam: float) -> "ThermalPoint":
        return cls(float(beta), CouplingPoint(float(lam), float(gamma)))

    @property
    def temperature(self) -> float:
        if self.beta == 0:
            return np.inf
        return 1.0 / self.beta

    @property
    def zero_temperature(self) -> bool:
        return np.isinf(self.beta)


@dataclass(frozen=True)
class GapInfo:
    value: float
    region: Region


@dataclass(frozen=True)
class ModeData:
    """Per-momentum quantities. Fields are arrays broadcast against `k`.

    The two derivative fields are NaN wherever the mode is gapless.
    """

    k: np.ndarray
    epsilon: np.ndarray
    delta: np.ndarray
    lambda_k: np.ndarray
    theta: np.ndarray
    dtheta_dlambda: np.ndarray
    dtheta_dgamma: np.ndarray


def modes(N: int) -> np.ndarray:
    """Momenta 2*pi*j/N of a chain with an odd number of sites N >= 3."""
    if int(N) != N or N < 3 or N % 2 == 0:
        raise ValueError(f"N must be an odd integer >= 3, got {N}")
    N = int(N)
    j = np.arange(-(N - 1) // 2, (N - 1) // 2 + 1)
    return 2.0 * np.pi * j / N


def dispersion(k, c: CouplingPoint):
    """Return (epsilon_k, Delta_k, Lambda_k)."""
    k = np.asarray(k, dtype=float)
    eps = np.cos(k) - c.lam
    dlt = c.gamma * np.sin(k)
    return eps, dlt, np.hypot(eps, dlt)


def mode_data(k, c: CouplingPoint) -> ModeData:
    k = np.asarray(k, dtype=float)
    if np.any(np.abs(k) > np.pi + 1e-12):
        raise ValueError("momenta must lie in [-pi, pi]")
    eps, dlt, lam_k = dispersion(k, c)
    # atan2 picks the branch; cos(theta) = eps/Lambda alone is sign-ambiguous
    theta = np.arctan2(dlt, eps)
    lam2 = lam_k**2
    gapless = lam_k == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        d_lam = np.where(gapless, np.nan, dlt / lam2)
        # eps*Delta/(gamma*Lambda^2) with the 1/gamma cancelled, regular at gamma = 0
        d_gam = np.where(gapless, np.nan, eps * np.sin(k) / lam2)
    return ModeData(k, eps, dlt, lam_k, theta, d_lam, d_gam)


def quasiparticle_energies(N: int, c: CouplingPoint) -> np.ndarray:
    """Lambda_k aligned with `modes(N)`."""
    return dispersion(modes(N), c)[2]


def gap(c: CouplingPoint) -> GapInfo:
    lam, g = abs(c.lam), c.gamma
    width = abs(1.0 - g * g)
    if lam < width - BOUNDARY_TOL:
        value = abs(g) * np.sqrt(max(0.0, 1.0 - lam * lam / (1.0 - g * g)))
        region = Region.B
    else:
        # the two formulas coincide on the boundary, so ties go to A
        value = abs(1.0 - lam)
        region = Region.A
    if value < BOUNDARY_TOL:
        return GapInfo(0.0, Region.CRITICAL)
    return GapInfo(float(value), region)


def is_critical(c: CouplingPoint) -> bool:
    return gap(c).region is Region.CRITICAL


def dispersion_minima(c: CouplingPoint) -> list[float]:
    """Momenta in [0, pi] where Lambda_k has its minima, plus mirror images k -> pi - k.

    Mirroring makes any breakpoint set built from this list symmetric under
    lambda -> -lambda.
    """
    pts = {0.0, np.pi}
    width = 1.0 - c.gamma**2
    if width > 0 and abs(c.lam) <= width:
        ks = float(np.arccos(np.clip(c.lam / width, -1.0, 1.0)))
        pts.update((ks, np.pi - ks))
    if c.gamma == 0 and abs(c.lam) <= 1:
        ks = float(np.arccos(c.lam))
        pts.update((ks, np.pi - ks))
    return sorted(pts)
