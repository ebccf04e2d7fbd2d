"""Two-mode squeezed vacuum: two constructions and entanglement diagnostics."""

from dataclasses import dataclass
import math

import numpy as np

from . import fock
from .errors import InvalidParameterError


@dataclass(frozen=True)
class ResourceParams:
    r: float

    def __post_init__(self):
        if not (self.r >= 0 and math.isfinite(self.r)):
            raise InvalidParameterError(f"squeezing r must be finite and >= 0, got {self.r}")
        if math.tanh(self.r) >= 1:
            raise InvalidParameterError(f"r={self.r} saturates tanh r to 1 in double precision")

    @property
    def lam(self):
        return math.tanh(self.r)

    @classmethod
    def from_lambda(cls, lam):
        _check_lambda(lam)
        return cls(math.atanh(lam))


def _check_lambda(lam):
    if not 0 <= lam < 1:
        raise InvalidParameterError(f"lambda must lie in [0, 1), got {lam}")


def build_schmidt(lam, cutoff=None, tail_tol=fock.DEFAULT_TAIL_TOL):
    """``sqrt(1-lam^2) sum_n lam^n |n>|n>``, renormalized on ``n <= cutoff``."""
    _check_lambda(lam)
    if cutoff is None:
        cutoff = fock.resource_cutoff(lam, tail_tol)
    n = np.arange(cutoff + 1)
    amps = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    amps[n, n] = math.sqrt(1 - lam**2) * lam**n
    return fock.TwoModeState(amps).normalize()


def squeezing_generator(cutoffs):
    """Sparse ``-(a†b† - ab)`` on the two-mode space."""
    a = fock.embed_op(fock.annihilator(cutoffs[0]), "A", cutoffs)
    b = fock.embed_op(fock.annihilator(cutoffs[1]), "B", cutoffs)
    ab = a @ b
    return (ab - ab.conj().T).tocsr()


def build_by_evolution(r, cutoff=None, tail_tol=fock.DEFAULT_TAIL_TOL,
                       leak_tol=fock.DEFAULT_LEAK_TOL):
    """``exp(-r(a†b† - ab))|0,0>`` evaluated in the truncated space.

    Note the result carries amplitudes ``(-tanh r)^n``: it equals
    ``build_schmidt(tanh r)`` only after the local parity ``(-1)^{N_B}``.
    """
    params = ResourceParams(r)
    if cutoff is None:
        cutoff = fock.resource_cutoff(params.lam, tail_tol)
    cutoffs = (cutoff, cutoff)
    vac = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    vac[0, 0] = 1.0
    state, _ = fock.apply_exponential(squeezing_generator(cutoffs), fock.TwoModeState(vac),
                                      params.r, leak_tol=leak_tol)
    return state


def parity_b(state):
    """Apply ``(-1)^{N_B}`` to a two-mode state."""
    sign = (-1.0) ** np.arange(state.amps.shape[1])
    return fock.TwoModeState(state.amps * sign[None, :])


def schmidt_coefficients(state):
    """Schmidt coefficients (descending singular values of ``c[n_A, n_B]``)."""
    return np.linalg.svd(state.amps, compute_uv=False)


def quadrature_sum_variance(state, quadrature, sign):
    """``Var(Q_A + sign * Q_B)`` for ``quadrature`` in ``{"X", "Y"}``."""
    cutoffs = state.cutoffs
    qa = fock.quadratures(cutoffs[0])["XY".index(quadrature)]
    qb = fock.quadratures(cutoffs[1])["XY".index(quadrature)]
    op = fock.embed_op(qa, "A", cutoffs) + sign * fock.embed_op(qb, "B", cutoffs)
    return fock.variance(state, op)


def epr_variances(state):
    """Return ``(Var(X_A + X_B), Var(Y_A - Y_B))``."""
    return quadrature_sum_variance(state, "X", +1), quadrature_sum_variance(state, "Y", -1)


def mean_photon(lam):
    """Mean photon number per mode, ``lam^2 / (1 - lam^2)``."""
    _check_lambda(lam)
    return lam**2 / (1 - lam**2)


def mean_photon_numeric(state, mode="A"):
    cutoff = state.cutoffs["AB".index(mode)]
    op = fock.embed_op(fock.number_op(cutoff), mode, state.cutoffs)
    return fock.expectation(state, op).real


def joint_phase_pdf(lam, phi_a, phi_b):
    """Canonical joint phase density ``(1-lam^2)/|1 - lam e^{i(phi_a+phi_b)}|^2``.

    Normalized against ``dphi_a dphi_b / (4 pi^2)``; broadcasts over arrays.
    """
    _check_lambda(lam)
    phase_sum = np.add(phi_a, phi_b)
    return (1 - lam**2) / np.abs(1 - lam * np.exp(1j * phase_sum)) ** 2


def joint_phase_pdf_from_state(state, phi_a, phi_b):
    """``|<phi_a, phi_b|psi>|^2`` on the outer grid of two 1-D angle arrays.

    Uses the unnormalizable phase states ``sum_n e^{in phi}|n>`` truncated at
    the state's cutoffs. Entry ``[i, j]`` belongs to ``(phi_a[i], phi_b[j])``.
    Truncation error scales with the amplitude tail (``lam^N``), not the
    probability tail, so build the state with a squared tolerance.
    """
    phi_a = np.atleast_1d(phi_a)
    phi_b = np.atleast_1d(phi_b)
    na, nb = state.amps.shape
    bra_a = np.exp(-1j * np.outer(phi_a, np.arange(na)))
    bra_b = np.exp(-1j * np.outer(phi_b, np.arange(nb)))
    return np.abs(bra_a @ state.amps @ bra_b.T) ** 2
