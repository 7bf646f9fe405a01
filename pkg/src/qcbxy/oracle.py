"""Brute-force check of the metric from exact thermal density matrices.

The thermal state of the chain is a tensor product over momentum pairs
(k, -k), k > 0, and the unpaired k = 0 mode. Each factor is built from the
pair Hamiltonian in the d_k, d_{-k} occupation basis |00>, |01>, |10>, |11>
and exponentiated directly, so nothing here uses the Bogoliubov angle or
the metric formulas.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.linalg import expm

from .metric import EvaluationScheme, Normalization, full_metric
from .xy_model import ThermalPoint, dispersion, modes

EIG_TOL = 1e-12
GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix with a cached clamped spectrum."""

    def __init__(self, matrix, check: bool = True):
        m = np.asarray(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        if check:
            if np.max(np.abs(m - m.conj().T)) > EIG_TOL:
                raise ValueError("density matrix is not Hermitian")
            if abs(np.trace(m) - 1.0) > EIG_TOL:
                raise ValueError(f"density matrix trace is {np.trace(m).real}, not 1")
        self.matrix = 0.5 * (m + m.conj().T)
        if check and self.eigh[0].min(initial=0.0) < -EIG_TOL:
            raise ValueError("density matrix has negative eigenvalues")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def eigh(self):
        w, v = np.linalg.eigh(self.matrix)
        return w, v

    @property
    def spectrum(self) -> np.ndarray:
        w = self.eigh[0]
        return np.where(w > EIG_TOL, w, 0.0)

    def power(self, s: float) -> np.ndarray:
        """rho^s with 0^s = 0 for every s, so rho^0 is the support projector."""
        p = self.spectrum
        v = self.eigh[1]
        ps = np.where(p > 0, np.power(np.where(p > 0, p, 1.0), s), 0.0)
        return (v * ps) @ v.conj().T


@dataclass
class ModePairState:
    k: float
    rho: DensityMatrix


def pair_hamiltonian(k: float, p: ThermalPoint) -> np.ndarray:
    """eps (n_k + n_-k - 1) plus the Delta pairing term; the k = 0 mode gets eps (n_0 - 1/2)."""
    eps, dlt, _ = dispersion(k, p.coupling)
    eps, dlt = float(eps), float(dlt)
    if k == 0:
        return np.diag([-0.5 * eps, 0.5 * eps]).astype(complex)
    h = np.zeros((4, 4), dtype=complex)
    h[0, 0], h[3, 3] = -eps, eps
    h[0, 3], h[3, 0] = 1j * dlt, -1j * dlt
    return h


def mode_pair_thermal_state(k: float, p: ThermalPoint) -> ModePairState:
    if not np.isfinite(p.beta):
        raise ValueError("thermal state needs finite beta")
    h = pair_hamiltonian(k, p)
    # shift by the lowest eigenvalue so large beta does not overflow
    e0 = np.linalg.eigvalsh(h)[0]
    r = expm(-p.beta * (h - e0 * np.eye(len(h))))
    r = r / np.trace(r).real
    return ModePairState(float(k), DensityMatrix(0.5 * (r + r.conj().T), check=False))


def chernoff_trace(rho: DensityMatrix, sigma: DensityMatrix):
    """Return s -> Tr(rho^s sigma^(1-s)) evaluated in the two eigenbases."""
    a, u = rho.spectrum, rho.eigh[1]
    b, v = sigma.spectrum, sigma.eigh[1]
    overlap = np.abs(u.conj().T @ v) ** 2
    a_pos, b_pos = a > 0, b > 0
    la = np.log(np.where(a_pos, a, 1.0))
    lb = np.log(np.where(b_pos, b, 1.0))
    mask = overlap * (a_pos[:, None] & b_pos[None, :])

    def f(s):
        return float(np.sum(mask * np.exp(s * la[:, None] + (1.0 - s) * lb[None, :])))

    return f


def golden_section_min(f, lo: float = 0.0, hi: float = 1.0, tol: float = 1e-10,
                       max_iter: int = 200):
    """Minimize a convex function on [lo, hi]; endpoints are compared explicitly."""
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    a, b = lo, hi
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = f(x2)
    best = min([(f1, x1), (f2, x2), (f(lo), lo), (f(hi), hi)])
    return best[1], best[0]


def chernoff_q(rho: DensityMatrix, sigma: DensityMatrix) -> tuple[float, float]:
    """Q = min_s Tr(rho^s sigma^(1-s)) and the minimizing s."""
    if rho.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    s_star, q = golden_section_min(chernoff_trace(rho, sigma))
    return min(max(q, 0.0), 1.0), s_star


def chernoff_q_product(pairs) -> tuple[float, float]:
    """Q for rho = (x)_i rho_i and sigma = (x)_i sigma_i without forming the product space."""
    fs = [chernoff_trace(r, s) for r, s in pairs]
    for r, s in pairs:
        if r.dim != s.dim:
            raise ValueError(f"dimension mismatch: {r.dim} vs {s.dim}")
    s_star, q = golden_section_min(lambda s: float(np.prod([f(s) for f in fs])))
    return min(max(q, 0.0), 1.0), s_star


def quantum_chernoff_bound(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    q, _ = chernoff_q(rho, sigma)
    return np.inf if q == 0 else -np.log(q)


def spectral_line_element(rho: DensityMatrix, drho) -> float:
    """ds^2 = 1/2 sum_ij |<i|drho|j>|^2 / (sqrt p_i + sqrt p_j)^2 over the eigenbasis of rho."""
    d = np.asarray(drho, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(d))))
    if np.max(np.abs(d - d.conj().T)) > 1e-12 * scale:
        raise ValueError("drho must be Hermitian")
    if abs(np.trace(d)) > 1e-10 * scale:
        raise ValueError("drho must be traceless")
    p, u = rho.spectrum, rho.eigh[1]
    m = np.abs(u.conj().T @ d @ u) ** 2
    root = np.sqrt(p)
    den = (root[:, None] + root[None, :]) ** 2
    live = den > 0
    ds2 = 0.5 * float(np.sum(m[live] / den[live]))
    if ds2 < -1e-14:
        raise ArithmeticError(f"negative line element {ds2}")
    return max(ds2, 0.0)


def _shift(p: ThermalPoint, v, h: float) -> ThermalPoint:
    c = p.coupling
    return ThermalPoint.from_values(p.beta + h * v[0], c.gamma + h * v[1], c.lam + h * v[2])


def _oracle_quadratic_form(p: ThermalPoint, v, h: float, N: int) -> float:
    total = 0.0
    for k in modes(N):
        if k < 0:
            continue
        rho = mode_pair_thermal_state(k, p).rho
        plus = mode_pair_thermal_state(k, _shift(p, v, h)).rho.matrix
        minus = mode_pair_thermal_state(k, _shift(p, v, -h)).rho.matrix
        total += spectral_line_element(rho, 0.5 * (plus - minus))
    return total / h**2


@dataclass
class FDCheck:
    analytic: float
    oracle: float
    rel_err: float
    step_warning: bool


def fd_metric_check(p: ThermalPoint, direction, step: float = 1e-2, N: int = 11) -> FDCheck:
    """Compare v.g.v (finite chain, total normalization) with the exact line element
    of central-difference perturbations of the pair states, Richardson-extrapolated
    over steps h and h/2."""
    v = np.asarray(direction, dtype=float)
    coarse = _oracle_quadratic_form(p, v, step, N)
    fine = _oracle_quadratic_form(p, v, step / 2, N)
    oracle = (4.0 * fine - coarse) / 3.0
    warn = abs(fine - coarse) > 0.1 * abs(fine)
    if warn:
        warnings.warn(f"step {step} too large: Richardson levels differ by more than 10%")
    g = full_metric(p, EvaluationScheme.finite(N), Normalization.TOTAL).matrix
    analytic = float(v @ g @ v)
    denom = abs(analytic) if analytic != 0 else 1.0
    return FDCheck(analytic, oracle, abs(oracle - analytic) / denom, warn)


def thermal_product_state(p: ThermalPoint, N: int) -> list[DensityMatrix]:
    return [mode_pair_thermal_state(k, p).rho for k in modes(N) if k >= 0]


def chernoff_ratio(p: ThermalPoint, direction, eps: float, N: int,
                   centered: bool = False) -> float:
    """(1 - Q(rho(x), rho(x + eps v))) / (eps^2 v.g.v): tends to 1 as eps -> 0.

    The error is O(eps). With `centered` the pair is rho(x -+ eps v / 2), which
    makes it O(eps^2).
    """
    v = np.asarray(direction, dtype=float)
    lo, hi = (-0.5 * eps, 0.5 * eps) if centered else (0.0, eps)
    a = thermal_product_state(_shift(p, v, lo), N)
    b = thermal_product_state(_shift(p, v, hi), N)
    q, _ = chernoff_q_product(list(zip(a, b)))
    g = full_metric(p, EvaluationScheme.finite(N), Normalization.TOTAL).matrix
    return (1.0 - q) / (eps**2 * float(v @ g @ v))


CANONICAL_DIRECTIONS = (
    (1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0),
    (0.0, 1.0, 1.0), (1.0, 0.0, 1.0), (1.0, 1.0, 0.0),
)


def canonical_directions() -> list[np.ndarray]:
    return [np.asarray(d) / np.linalg.norm(d) for d in CANONICAL_DIRECTIONS]
