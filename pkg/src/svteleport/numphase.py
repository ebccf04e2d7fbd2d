"""Number/phase teleportation over the two-mode squeezed vacuum.

Alice measures the photon-number difference ``m = N_T - N_A`` (twice the
``J_z`` eigenvalue ``k``) and then the phase sum ``phi_+`` of modes T and A.
Bob removes the phase with ``U = exp(i phi_+ (N_B + m/2))`` and, when
possible, shifts the number spectrum back by ``m``.

The three-mode state is never materialized: given ``m``, mode B is fixed by
the resource correlation ``n_B = n_A`` and ``n_T = n_A + m``, so every
conditional quantity is a one-dimensional array over ``n_B``.

The phase-sum POVM is handled analytically. Conditioned on ``m`` the outcome
``phi_+`` is uniform on ``[-pi, pi)`` and imprints ``exp(-i phi_+ (n_B + m/2))``
on the B amplitudes.
"""

from dataclasses import dataclass
import math

import numpy as np

from . import fock
from .errors import InvalidOutcomeError, InvalidParameterError, LossyDownshiftError

DOWNSHIFT_TOL = 1e-12
# overlaps see amplitude tails (square root of the mass), so coherent targets
# are cut at a squared mass tolerance
TARGET_TAIL_TOL = 1e-24


@dataclass(frozen=True, eq=False)
class TargetCoeffs:
    """Target amplitudes ``c_0 .. c_N`` in the photon-number basis."""

    c: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=complex)
        if c.ndim != 1 or c.size == 0:
            raise InvalidParameterError("target coefficients must be a non-empty 1-D array")
        norm = np.linalg.norm(c)
        if abs(norm**2 - 1) > 1e-12:
            raise InvalidParameterError(f"target coefficients have norm^2 {norm**2}, expected 1")
        object.__setattr__(self, "c", c)

    @property
    def cutoff(self):
        return self.c.size - 1

    @classmethod
    def coherent(cls, alpha, tail_tol=TARGET_TAIL_TOL, cutoff=None):
        if cutoff is None:
            cutoff = fock.coherent_cutoff(alpha, tail_tol)
        return cls(fock.coherent(alpha, cutoff).amps)

    @classmethod
    def number(cls, N):
        return cls(fock.fock(N, max(N, 1)).amps)

    @classmethod
    def from_amplitudes(cls, amps):
        amps = np.asarray(amps, dtype=complex)
        return cls(amps / np.linalg.norm(amps))


@dataclass(frozen=True, eq=False)
class OutcomePmf:
    """Probabilities ``P(m)`` on the contiguous range ``ms[0] .. ms[-1]``."""

    ms: np.ndarray
    probs: np.ndarray

    def __getitem__(self, m):
        i = int(m) - int(self.ms[0])
        if 0 <= i < self.ms.size:
            return float(self.probs[i])
        return 0.0

    def __len__(self):
        return self.ms.size

    def items(self):
        return zip(self.ms.tolist(), self.probs.tolist())

    def total(self):
        return float(self.probs.sum())

    def support(self, threshold=0.0):
        return self.ms[self.probs > threshold]


@dataclass(frozen=True, eq=False)
class ConditionalState:
    """Mode-B amplitudes conditioned on outcome ``m`` (and possibly ``phi_+``).

    Unnormalized states carry ``norm**2 == P(m)``.
    """

    amps: np.ndarray
    m: int
    phi: float | None = None
    normalized: bool = False

    def norm(self):
        return float(np.linalg.norm(self.amps))

    def normalize(self):
        return ConditionalState(self.amps / self.norm(), self.m, self.phi, True)


@dataclass(frozen=True)
class RunRecord:
    m: int
    phi: float
    fidelity_displaced: float | None
    fidelity_undisplaced: float
    seed: int
    trial: int = 0

    def to_dict(self):
        return {
            "trial": self.trial,
            "seed": self.seed,
            "m": self.m,
            "phi": self.phi,
            "fidelity_displaced": self.fidelity_displaced,
            "fidelity_undisplaced": self.fidelity_undisplaced,
        }


def _check_lambda(lam):
    if not 0 <= lam < 1:
        raise InvalidParameterError(f"lambda must lie in [0, 1), got {lam}")


def _coeffs(c):
    return c.c if isinstance(c, TargetCoeffs) else TargetCoeffs(c).c


def jz_pmf(c, lam, tail_tol=fock.DEFAULT_TAIL_TOL, cutoff=None):
    """Distribution of ``m = N_T - N_A`` by direct summation over ``(n_T, n_A)``.

    The resource is truncated at ``cutoff`` (adaptive for ``lam`` by default)
    and the target at its own length; the pmf is returned on
    ``-cutoff_A .. cutoff_T``.
    """
    _check_lambda(lam)
    c = _coeffs(c)
    n_a = fock.resource_cutoff(lam, tail_tol) if cutoff is None else int(cutoff)
    p_t = np.abs(c) ** 2
    p_a = (1 - lam**2) * lam ** (2 * np.arange(n_a + 1))
    joint = np.outer(p_t, p_a)
    diff = np.subtract.outer(np.arange(c.size), np.arange(n_a + 1))
    probs = np.bincount((diff + n_a).ravel(), weights=joint.ravel(), minlength=c.size + n_a)
    ms = np.arange(-n_a, c.size)
    return OutcomePmf(ms, probs)


def conditional_after_outcome(c, lam, m):
    """Unnormalized mode-B state after the number-difference outcome ``m``.

    ``m >= 0``: amplitude ``sqrt(1-lam^2) lam^n c_{n+m}`` on ``|n>``.
    ``m < 0``:  amplitude ``sqrt(1-lam^2) lam^{n+|m|} c_n`` on ``|n+|m|>``.
    """
    _check_lambda(lam)
    c = _coeffs(c)
    m = int(m)
    pref = math.sqrt(1 - lam**2)
    if m >= 0:
        src = c[m:]
        amps = pref * lam ** np.arange(src.size) * src
    else:
        amps = np.zeros(c.size + abs(m), dtype=complex)
        n = np.arange(c.size)
        amps[abs(m):] = pref * lam ** (n + abs(m)) * c
    if amps.size == 0 or not np.any(amps):
        raise InvalidOutcomeError(f"outcome m={m} has zero probability")
    return ConditionalState(amps.astype(complex), m)


def _phase_exponent(state):
    return np.arange(state.amps.size) + state.m / 2


def apply_phase_outcome(state, phi):
    """Imprint the phase-sum outcome: amplitude ``j`` gains ``exp(-i phi (j + m/2))``."""
    amps = state.amps * np.exp(-1j * phi * _phase_exponent(state))
    return ConditionalState(amps, state.m, phi, state.normalized)


def phase_outcome_density(c, lam, m, phi):
    """Conditional density of ``phi_+`` given ``m``, evaluated at ``phi``.

    Computed by marginalizing the phase-projected B state; comes out as
    ``1/(2 pi)`` because the B number states are orthogonal.
    """
    state = conditional_after_outcome(c, lam, m)
    p_m = state.norm() ** 2
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    phases = np.exp(-1j * np.outer(phi, _phase_exponent(state)))
    weight = np.sum(np.abs(phases * state.amps[None, :]) ** 2, axis=1)
    return weight / (2 * math.pi * p_m)


def phase_correction(state, phi=None):
    """Bob's ``U(m/2, phi) = exp(i phi (N_B + m/2))``; defaults to the recorded ``phi``."""
    if phi is None:
        phi = state.phi if state.phi is not None else 0.0
    amps = state.amps * np.exp(1j * phi * _phase_exponent(state))
    return ConditionalState(amps, state.m, None, state.normalized)


def number_displace(state, shift):
    """Shift every Fock index by ``shift``.

    A downshift that would drop amplitude above ``DOWNSHIFT_TOL`` raises
    ``LossyDownshiftError``: the number spectrum has no states below 0.
    """
    shift = int(shift)
    amps = state.amps
    if shift >= 0:
        out = np.concatenate([np.zeros(shift, dtype=complex), amps])
    else:
        lost = amps[:abs(shift)]
        if np.any(np.abs(lost) > DOWNSHIFT_TOL):
            mass = float(np.sum(np.abs(lost) ** 2))
            raise LossyDownshiftError(
                f"downshift by {abs(shift)} would destroy probability {mass:.3e}", mass)
        out = amps[abs(shift):].copy()
    return ConditionalState(out, state.m, state.phi, state.normalized)


def _overlap_with_target(c, amps):
    n = min(c.size, amps.size)
    return complex(np.vdot(c[:n], amps[:n]))


def _corrected(c, lam, m, phi):
    state = conditional_after_outcome(c, lam, m).normalize()
    return phase_correction(apply_phase_outcome(state, phi))


def fidelity_displaced(c, lam, m, phi=0.0):
    """``|<psi|psi~(m)>|^2`` after phase correction and number displacement by ``m``."""
    c = _coeffs(c)
    out = number_displace(_corrected(c, lam, m, phi), m)
    return abs(_overlap_with_target(c, out.amps)) ** 2


def fidelity_undisplaced(c, lam, m, phi=0.0):
    """Fidelity of the phase-corrected state when no number displacement is made."""
    c = _coeffs(c)
    out = _corrected(c, lam, m, phi)
    return abs(_overlap_with_target(c, out.amps)) ** 2


def sample_runs(c, lam, seed, trials, tail_tol=fock.DEFAULT_TAIL_TOL):
    """Monte Carlo trials of the full protocol from one seeded generator.

    Each trial draws ``m`` from :func:`jz_pmf` and ``phi_+`` uniformly, then
    applies the outcome phase, Bob's correction and the displacement. A
    displacement that would be lossy leaves ``fidelity_displaced`` as None.
    """
    c = _coeffs(c)
    pmf = jz_pmf(c, lam, tail_tol)
    p = pmf.probs / pmf.probs.sum()
    rng = np.random.default_rng(seed)
    ms = rng.choice(pmf.ms, size=trials, p=p)
    phis = rng.uniform(-math.pi, math.pi, size=trials)
    conditioned = {}
    records = []
    for trial, (m, phi) in enumerate(zip(ms.tolist(), phis.tolist())):
        if m not in conditioned:
            conditioned[m] = conditional_after_outcome(c, lam, m).normalize()
        corrected = phase_correction(apply_phase_outcome(conditioned[m], phi))
        f_und = abs(_overlap_with_target(c, corrected.amps)) ** 2
        try:
            shifted = number_displace(corrected, m)
            f_disp = abs(_overlap_with_target(c, shifted.amps)) ** 2
        except LossyDownshiftError:
            f_disp = None
        records.append(RunRecord(m, phi, f_disp, f_und, seed, trial))
    return records


def sample_run(c, lam, seed, tail_tol=fock.DEFAULT_TAIL_TOL):
    return sample_runs(c, lam, seed, 1, tail_tol)[0]
