"""Truncated Fock-space states and operators.

Single-mode operators are dense ``(cutoff+1, cutoff+1)`` arrays. Two-mode
operators are sparse and act on the row-major flattening of a
``TwoModeState`` amplitude matrix ``c[n_A, n_B]``, i.e. mode A is the slow
(row) index and mode B the fast (column) index, so ``kron(op_A, op_B)``
acts directly on ``state.vector``.

Quadratures follow ``X = a + a†`` and ``Y = -i(a - a†)``, giving unit
vacuum variance.
"""

from dataclasses import dataclass
import math

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply
from scipy.special import gammaln
from scipy.stats import poisson

from .errors import InvalidDimensionError, InvalidParameterError, TruncationError

DEFAULT_TAIL_TOL = 1e-12
DEFAULT_LEAK_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ModeState:
    """Single-mode pure state, amplitudes ``a_0 .. a_cutoff``."""

    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        if amps.ndim != 1 or amps.size == 0:
            raise InvalidDimensionError("ModeState needs a non-empty 1-D amplitude array")
        object.__setattr__(self, "amps", amps)

    @property
    def cutoff(self):
        return self.amps.size - 1

    @property
    def vector(self):
        return self.amps

    def norm(self):
        return float(np.linalg.norm(self.amps))

    def normalize(self):
        return ModeState(self.amps / self.norm())


@dataclass(frozen=True, eq=False)
class TwoModeState:
    """Two-mode pure state with amplitude matrix ``c[n_A, n_B]``."""

    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        if amps.ndim != 2 or amps.size == 0:
            raise InvalidDimensionError("TwoModeState needs a non-empty 2-D amplitude matrix")
        object.__setattr__(self, "amps", amps)

    @property
    def cutoffs(self):
        return self.amps.shape[0] - 1, self.amps.shape[1] - 1

    @property
    def vector(self):
        return self.amps.reshape(-1)

    @classmethod
    def from_vector(cls, vec, cutoffs):
        return cls(np.asarray(vec).reshape(cutoffs[0] + 1, cutoffs[1] + 1))

    def norm(self):
        return float(np.linalg.norm(self.amps))

    def normalize(self):
        return TwoModeState(self.amps / self.norm())


def _check_cutoff(cutoff):
    if int(cutoff) != cutoff or cutoff < 1:
        raise InvalidDimensionError(f"cutoff must be an integer >= 1, got {cutoff!r}")
    return int(cutoff)


def annihilator(cutoff):
    """Matrix of ``a`` with ``a|n> = sqrt(n)|n-1>`` on ``|0>..|cutoff>``."""
    cutoff = _check_cutoff(cutoff)
    return np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), 1).astype(complex)


def creator(cutoff):
    return annihilator(cutoff).conj().T


def number_op(cutoff):
    cutoff = _check_cutoff(cutoff)
    return np.diag(np.arange(cutoff + 1, dtype=float)).astype(complex)


def quadratures(cutoff):
    """Return ``(X, Y)`` with ``X = a + a†`` and ``Y = -i(a - a†)``.

    The truncated commutator ``[X, Y]`` equals ``2i`` except in the last
    row/column, where the cut ladder breaks it.
    """
    a = annihilator(cutoff)
    ad = a.conj().T
    return a + ad, -1j * (a - ad)


def embed_op(op, which, cutoffs):
    """Lift a single-mode operator to the two-mode space.

    ``which`` is ``"A"`` (``op ⊗ 1``) or ``"B"`` (``1 ⊗ op``). Returns a
    CSR matrix of shape ``((NA+1)(NB+1),) * 2``.
    """
    na, nb = cutoffs[0] + 1, cutoffs[1] + 1
    op = sp.csr_array(op)
    if which == "A":
        if op.shape != (na, na):
            raise InvalidDimensionError(f"operator shape {op.shape} does not match mode A dim {na}")
        return sp.kron(op, sp.identity(nb, dtype=complex, format="csr"), format="csr")
    if which == "B":
        if op.shape != (nb, nb):
            raise InvalidDimensionError(f"operator shape {op.shape} does not match mode B dim {nb}")
        return sp.kron(sp.identity(na, dtype=complex, format="csr"), op, format="csr")
    raise InvalidDimensionError(f"which must be 'A' or 'B', got {which!r}")


def jz(cutoffs):
    """Half the photon-number difference, ``(N_A - N_B)/2``, on two modes."""
    na = embed_op(number_op(cutoffs[0]), "A", cutoffs)
    nb = embed_op(number_op(cutoffs[1]), "B", cutoffs)
    return 0.5 * (na - nb)


def _vec(state):
    if isinstance(state, (ModeState, TwoModeState)):
        return state.vector
    return np.asarray(state, dtype=complex).reshape(-1)


def _wrap(vec, like):
    if isinstance(like, TwoModeState):
        return TwoModeState.from_vector(vec, like.cutoffs)
    if isinstance(like, ModeState):
        return ModeState(vec)
    return vec


def expectation(state, op):
    v = _vec(state)
    if op.shape != (v.size, v.size):
        raise InvalidDimensionError(f"operator shape {op.shape} does not match state dim {v.size}")
    return complex(np.vdot(v, op @ v))


def variance(state, op):
    """``<A^2> - <A>^2`` for Hermitian ``op``; tiny negatives are clamped to 0."""
    v = _vec(state)
    if op.shape != (v.size, v.size):
        raise InvalidDimensionError(f"operator shape {op.shape} does not match state dim {v.size}")
    av = op @ v
    mean = np.vdot(v, av).real
    var = np.vdot(av, av).real - mean**2
    if var < -1e-12:
        raise ValueError(f"negative variance {var}; is op Hermitian and state normalized?")
    return max(var, 0.0)


def boundary_mass(state):
    """Population sitting on the outermost Fock layer of each mode."""
    if isinstance(state, TwoModeState):
        p = np.abs(state.amps) ** 2
        return float(p[-1, :].sum() + p[:, -1].sum() - p[-1, -1])
    v = _vec(state)
    return float(abs(v[-1]) ** 2)


def apply_exponential(generator, state, time, leak_tol=DEFAULT_LEAK_TOL):
    """Return ``(exp(time * generator) @ state, leakage)``.

    ``leakage`` is the larger of the norm loss and the population on the
    truncation boundary; with an anti-Hermitian generator the former is at
    round-off level and the latter measures how much the evolution pushed
    against the cutoff. Raises ``TruncationError`` when it exceeds
    ``leak_tol`` (pass ``None`` to skip the check).
    """
    v = _vec(state)
    if generator.shape != (v.size, v.size):
        raise InvalidDimensionError(
            f"generator shape {generator.shape} does not match state dim {v.size}")
    if time == 0:
        out = v.copy()
    else:
        out = expm_multiply(sp.csr_array(generator) * time, v)
    result = _wrap(out, state)
    norm_loss = float(np.vdot(v, v).real - np.vdot(out, out).real)
    leakage = max(norm_loss, boundary_mass(result))
    if leak_tol is not None and leakage > leak_tol:
        raise TruncationError(
            f"truncation leakage {leakage:.3e} exceeds {leak_tol:.1e}; increase the cutoff")
    return result, leakage


def overlap(s1, s2):
    """``<s1|s2>``."""
    v1, v2 = _vec(s1), _vec(s2)
    if v1.shape != v2.shape:
        raise InvalidDimensionError(f"dimension mismatch: {v1.shape} vs {v2.shape}")
    return complex(np.vdot(v1, v2))


def fidelity(s1, s2):
    return abs(overlap(s1, s2)) ** 2


def fock(n, cutoff):
    if not 0 <= n <= cutoff:
        raise InvalidDimensionError(f"|{n}> does not fit under cutoff {cutoff}")
    amps = np.zeros(cutoff + 1, dtype=complex)
    amps[n] = 1.0
    return ModeState(amps)


def coherent_amplitudes(alpha, cutoff):
    """Unnormalized-by-truncation coherent amplitudes ``e^{-|a|^2/2} a^n / sqrt(n!)``."""
    n = np.arange(cutoff + 1)
    r = abs(alpha)
    if r == 0:
        amps = np.zeros(cutoff + 1, dtype=complex)
        amps[0] = 1.0
        return amps
    logmag = -0.5 * r**2 + n * math.log(r) - 0.5 * gammaln(n + 1)
    return np.exp(logmag) * np.exp(1j * n * np.angle(alpha))


def coherent(alpha, cutoff):
    """Truncated coherent state, renormalized on its support."""
    return ModeState(coherent_amplitudes(alpha, cutoff)).normalize()


def coherent_cutoff(alpha, tail_tol=DEFAULT_TAIL_TOL):
    """Smallest cutoff whose Poisson tail beyond it is below ``tail_tol``."""
    mean = abs(alpha) ** 2
    if mean == 0:
        return 1
    n = int(mean + 10 * math.sqrt(mean) + 10)
    while poisson.sf(n, mean) > tail_tol:
        n *= 2
    lo, hi = 0, n
    while lo < hi:
        mid = (lo + hi) // 2
        if poisson.sf(mid, mean) > tail_tol:
            lo = mid + 1
        else:
            hi = mid
    return max(lo, 1)


def resource_cutoff(lam, tail_tol=DEFAULT_TAIL_TOL):
    """Cutoff with ``lam**(2N) / (1 - lam**2) < tail_tol``."""
    if not 0 <= lam < 1:
        raise InvalidParameterError(f"lambda must lie in [0, 1), got {lam}")
    if lam == 0:
        return 1
    n = math.ceil((math.log(tail_tol) + math.log1p(-lam**2)) / (2 * math.log(lam)))
    return max(n, 1)


def adaptive_cutoff(lam, tail_tol=DEFAULT_TAIL_TOL, alpha=None, target=None):
    """Cutoff that bounds both the resource tail and the target tail.

    The target is given either as a coherent amplitude ``alpha`` or as an
    explicit amplitude array ``target`` (whose length is then a floor).
    """
    n = resource_cutoff(lam, tail_tol)
    if alpha is not None:
        n = max(n, coherent_cutoff(alpha, tail_tol))
    if target is not None:
        n = max(n, len(target) - 1)
    return n
