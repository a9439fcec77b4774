"""Entropies, mutual information, and entropy production for a single mode.

Both sites start thermal near a common occupation n with a small split:
n_a = n + dn/2, n_b = n - dn/2.  Writing E = exp(-lam t) for the coherence
envelope, the site occupations relax as n +- (dn/2) E cos(2 g t), and a
second-order expansion of the binary entropy H(p) around n gives

    S_A = s0 + s1 dn + s2 dn^2        S_B = s0 - s1 dn + s2 dn^2
    s0 = H(n)
    s1 = (E cos(2 g t)/2) ln((1 - n)/n)
    s2 = -E^2 cos(2 g t)^2 / (8 n (1 - n))

    I(A:B)  = E^2 sin(2 g t)^2 dn^2 / (4 n (1 - n))
    S_AB    = 2 s0 - dn^2 E^2 / (4 n (1 - n))
    Pi      = (lam/2) E^2 dn^2 / (n (1 - n))        (entropy production rate)

all through O(dn^2).  The joint entropy depends on the envelope only, not
the oscillation phase, so it is exactly constant at lam = 0 and strictly
increasing for lam > 0; the exact two-site spectrum

    {(1-n)^2 - dn^2/4,  n^2 - dn^2/4,
     n(1-n) + dn^2/4 + (dn/2) E,  n(1-n) + dn^2/4 - (dn/2) E}

makes that manifest and is used for the non-perturbative checks.  The rate
bookkeeping Pi = d(S_A + S_B)/dt - dI/dt holds term by term at this order,
and integrating Pi over all time gives dn^2 / (4 n (1 - n)) whenever
lam > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import dynamics
from .lattice import ModeSpec


def _xlogx(p):
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    mask = p > 0.0
    out[mask] = p[mask] * np.log(p[mask])
    return out


def binary_entropy(p):
    """H(p) = -p ln p - (1-p) ln(1-p), with 0 ln 0 = 0.  Scalar or array."""
    p = np.asarray(p, dtype=float)
    if np.any(p < -1e-12) or np.any(p > 1.0 + 1e-12):
        raise ValueError("occupation outside [0, 1]")
    p = np.clip(p, 0.0, 1.0)
    val = -_xlogx(p) - _xlogx(1.0 - p)
    return float(val) if val.ndim == 0 else val


def von_neumann(rho: np.ndarray, atol: float = 1e-10) -> float:
    """-Tr rho ln rho for a density matrix, with validation."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if not np.allclose(rho, rho.conj().T, atol=atol):
        raise ValueError("density matrix must be Hermitian")
    if abs(np.trace(rho).real - 1.0) > atol:
        raise ValueError("density matrix must have unit trace")
    evals = np.linalg.eigvalsh(rho)
    if evals.min() < -atol:
        raise ValueError("density matrix has negative eigenvalue %g" % evals.min())
    evals = np.clip(evals, 0.0, None)
    return float(-_xlogx(evals).sum())


@dataclass(frozen=True)
class EquilibriumModePrep:
    """Near-equilibrium preparation of one mode: common occupation plus split."""

    n_eq: float
    delta_n: float
    coupling: float
    dephasing: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.n_eq < 1.0:
            raise ValueError("n_eq must lie strictly inside (0, 1)")
        if self.dephasing < 0.0:
            raise ValueError("dephasing rate must be >= 0")
        for occ in (self.occupation_a, self.occupation_b):
            if not 0.0 < occ < 1.0:
                raise ValueError("delta_n pushes an occupation out of (0, 1)")

    @property
    def occupation_a(self) -> float:
        return self.n_eq + 0.5 * self.delta_n

    @property
    def occupation_b(self) -> float:
        return self.n_eq - 0.5 * self.delta_n

    def mode(self) -> ModeSpec:
        # momentum/energy placeholders: nothing here depends on eps_k
        return ModeSpec(momentum=0.5 * math.pi, energy=0.0,
                        coupling=self.coupling, dephasing=self.dephasing)


@dataclass(frozen=True)
class ModeEntropyBreakdown:
    """Expansion coefficients of the one-site entropies in the split dn."""

    s0: object
    s1: object
    s2: object
    delta_n: float

    @property
    def entropy_a(self):
        return self.s0 + self.s1 * self.delta_n + self.s2 * self.delta_n ** 2

    @property
    def entropy_b(self):
        return self.s0 - self.s1 * self.delta_n + self.s2 * self.delta_n ** 2


def _envelope_phase(prep: EquilibriumModePrep, t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise ValueError("time must be >= 0")
    env = np.exp(-prep.dephasing * t)
    phase = 2.0 * prep.coupling * t
    return t, env, phase


def entropy_coeffs(prep: EquilibriumModePrep, t) -> ModeEntropyBreakdown:
    """s0, s1, s2 at time t (scalar or array)."""
    _, env, phase = _envelope_phase(prep, t)
    n = prep.n_eq
    s0 = binary_entropy(n)
    s1 = 0.5 * env * np.cos(phase) * (math.log(1.0 - n) - math.log(n))
    s2 = -(env * np.cos(phase)) ** 2 / (8.0 * n * (1.0 - n))
    s0 = s0 if np.ndim(s1) == 0 else np.full_like(s1, s0)
    return ModeEntropyBreakdown(s0=s0, s1=s1, s2=s2, delta_n=prep.delta_n)


def entropy_sum(prep: EquilibriumModePrep, t):
    """S_A + S_B through O(dn^2); the odd term cancels."""
    c = entropy_coeffs(prep, t)
    out = 2.0 * (c.s0 + c.s2 * prep.delta_n ** 2)
    return float(out) if np.ndim(out) == 0 else out


def mutual_information(prep: EquilibriumModePrep, t):
    """I(A:B) through O(dn^2): the coherence carries the correlations."""
    _, env, phase = _envelope_phase(prep, t)
    n = prep.n_eq
    out = (env * np.sin(phase)) ** 2 * prep.delta_n ** 2 / (4.0 * n * (1.0 - n))
    return float(out) if out.ndim == 0 else out


def joint_entropy(prep: EquilibriumModePrep, t):
    """S_AB through O(dn^2); depends on the envelope only."""
    _, env, _ = _envelope_phase(prep, t)
    n = prep.n_eq
    s0 = binary_entropy(n)
    out = 2.0 * s0 - prep.delta_n ** 2 * env ** 2 / (4.0 * n * (1.0 - n))
    return float(out) if np.ndim(out) == 0 else out


def entropy_production(prep: EquilibriumModePrep, t):
    """Irreversible entropy rate Pi(t) through O(dn^2); zero at lam = 0."""
    _, env, _ = _envelope_phase(prep, t)
    n = prep.n_eq
    out = 0.5 * prep.dephasing * env ** 2 * prep.delta_n ** 2 / (n * (1.0 - n))
    return float(out) if np.ndim(out) == 0 else out


def entropy_production_integral(prep: EquilibriumModePrep) -> float:
    """int_0^inf Pi dt: total produced entropy; zero when there is no noise."""
    if prep.dephasing == 0.0:
        return 0.0
    n = prep.n_eq
    return prep.delta_n ** 2 / (4.0 * n * (1.0 - n))


def entropy_sum_rate(prep: EquilibriumModePrep, t):
    """d(S_A + S_B)/dt through O(dn^2)."""
    _, env, phase = _envelope_phase(prep, t)
    n = prep.n_eq
    lam, g = prep.dephasing, prep.coupling
    out = (prep.delta_n ** 2 * env ** 2
           * (2.0 * lam * np.cos(phase) ** 2 + 2.0 * g * np.sin(2.0 * phase))
           / (4.0 * n * (1.0 - n)))
    return float(out) if np.ndim(out) == 0 else out


def mutual_information_rate(prep: EquilibriumModePrep, t):
    """dI/dt through O(dn^2)."""
    _, env, phase = _envelope_phase(prep, t)
    n = prep.n_eq
    lam, g = prep.dephasing, prep.coupling
    out = (prep.delta_n ** 2 * env ** 2
           * (-2.0 * lam * np.sin(phase) ** 2 + 2.0 * g * np.sin(2.0 * phase))
           / (4.0 * n * (1.0 - n)))
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# Non-perturbative counterparts (no expansion in dn)
# ---------------------------------------------------------------------------

def joint_density(prep: EquilibriumModePrep, t: float) -> np.ndarray:
    """The full 4x4 state of the mode at time t."""
    return dynamics.density_matrix_from_occupations(
        prep.occupation_a, prep.occupation_b, prep.coupling, prep.dephasing, t)


def joint_spectrum(prep: EquilibriumModePrep, t):
    """Eigenvalues of the 4x4 state in closed form (phase drops out)."""
    _, env, _ = _envelope_phase(prep, t)
    n, dn = prep.n_eq, prep.delta_n
    quarter = 0.25 * dn * dn
    corner_hi = (1.0 - n) ** 2 - quarter
    corner_lo = n * n - quarter
    mid = n * (1.0 - n) + quarter
    split = 0.5 * abs(dn) * env
    return np.stack([np.broadcast_to(corner_hi, np.shape(env)),
                     np.broadcast_to(corner_lo, np.shape(env)),
                     mid + split, mid - split], axis=0)


def joint_entropy_exact(prep: EquilibriumModePrep, t):
    """-Tr rho ln rho of the two-site state, from the closed-form spectrum."""
    evals = joint_spectrum(prep, t)
    out = -_xlogx(evals).sum(axis=0)
    return float(out) if np.ndim(out) == 0 else out


def entropy_a_exact(prep: EquilibriumModePrep, t):
    occ = dynamics.occ_a(prep.mode(), prep.occupation_a, prep.occupation_b, t)
    return binary_entropy(occ)


def entropy_b_exact(prep: EquilibriumModePrep, t):
    occ = dynamics.occ_b(prep.mode(), prep.occupation_a, prep.occupation_b, t)
    return binary_entropy(occ)


def mutual_information_exact(prep: EquilibriumModePrep, t):
    """S_A + S_B - S_AB without any expansion in dn."""
    return (entropy_a_exact(prep, t) + entropy_b_exact(prep, t)
            - joint_entropy_exact(prep, t))
