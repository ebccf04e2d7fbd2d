"""Closed-form results for the squeezed-vacuum teleportation protocols.

These are the reference values the numerical protocol code is checked
against. Outcomes ``m`` are the photon-number difference ``N_T - N_A``.

For a coherent target and ``m < 0`` the probability is
``(1-lam^2) lam^{2|m|} exp(-|alpha|^2 (1-lam^2))``. A form with
``lam^{-2|m|}`` would not be normalizable; the brute-force pmf in
:mod:`svteleport.numphase` singles out the decaying branch.
"""

import math

import numpy as np

from .errors import InvalidOutcomeError, InvalidParameterError

SERIES_RTOL = 1e-15
MAX_SERIES_TERMS = 1_000_000


def _check_lambda(lam):
    if not 0 <= lam < 1:
        raise InvalidParameterError(f"lambda must lie in [0, 1), got {lam}")


def _log_poisson(k, mean):
    if mean == 0:
        return 0.0 if k == 0 else -math.inf
    return k * math.log(mean) - mean - math.lgamma(k + 1)


def _poisson_weighted_sum(weight, mean, m):
    """``sum_{n>=0} weight^n * Poisson(n + m; mean)`` for ``0 <= weight < 1``.

    Terms are positive; summation stops once the geometric bound on the
    remainder is below ``SERIES_RTOL`` times the partial sum.
    """
    log_term = _log_poisson(m, mean)
    if weight == 0 or mean == 0:
        return math.exp(log_term) if log_term > -math.inf else 0.0
    term = math.exp(log_term)
    total = 0.0
    n = 0
    while n < MAX_SERIES_TERMS:
        total += term
        ratio = weight * mean / (n + m + 1)
        if ratio < 1 and term * ratio / (1 - ratio) <= SERIES_RTOL * total:
            break
        n += 1
        # recurse in log space: leading terms can be far below 1e-308
        log_term += math.log(weight) + math.log(mean) - math.log(n + m)
        term = math.exp(log_term)
    return total


def p_m_number(N, lam, m):
    """Outcome probability for the number-state target ``|N>``."""
    _check_lambda(lam)
    if m > N:
        return 0.0
    return (1 - lam**2) * lam ** (2 * (N - m))


def p_m_coherent(alpha, lam, m):
    """Outcome probability for a coherent target ``|alpha>``."""
    _check_lambda(lam)
    mean = abs(alpha) ** 2
    if m < 0:
        return (1 - lam**2) * lam ** (2 * abs(m)) * math.exp(-mean * (1 - lam**2))
    return (1 - lam**2) * _poisson_weighted_sum(lam**2, mean, m)


def f_m_coherent(alpha, lam, m):
    """Fidelity after phase correction and number displacement, coherent target."""
    _check_lambda(lam)
    mean = abs(alpha) ** 2
    p = p_m_coherent(alpha, lam, m)
    if p == 0:
        raise InvalidOutcomeError(f"outcome m={m} has zero probability")
    if m < 0:
        return math.exp(-mean * (1 - lam) ** 2)
    s = _poisson_weighted_sum(lam, mean, m)
    return min((1 - lam**2) / p * s**2, 1.0)


def f0_undisplaced(alpha, lam):
    """Fidelity for outcome ``m = 0`` without displacement: ``exp(-|alpha|^2 (1-lam)^2)``."""
    _check_lambda(lam)
    return math.exp(-abs(alpha) ** 2 * (1 - lam) ** 2)


def f0_ratio_form(nbar_target, nbar_sv, lam):
    """``exp(-(nbar_target / nbar_sv) lam^2)``.

    With the resource's own mean photon number ``lam^2/(1-lam^2)`` this is
    *not* equal to :func:`f0_undisplaced`; the two coincide only for
    ``nbar_sv = lam^2 / (1-lam)^2`` (see :func:`nbar_sv_consistent`).
    """
    if nbar_sv <= 0:
        return 1.0 if nbar_target == 0 else 0.0
    return math.exp(-nbar_target / nbar_sv * lam**2)


def nbar_sv_consistent(lam):
    """The ``nbar_sv`` that makes :func:`f0_ratio_form` equal :func:`f0_undisplaced`."""
    _check_lambda(lam)
    return lam**2 / (1 - lam) ** 2


def epr_variance(r):
    """Squeezed EPR quadrature variance ``2 e^{-2r}``."""
    if r < 0:
        raise InvalidParameterError(f"r must be >= 0, got {r}")
    return 2 * math.exp(-2 * r)


def p_m_coherent_table(alpha, lam, ms):
    return np.array([p_m_coherent(alpha, lam, int(m)) for m in ms])


def f_m_coherent_table(alpha, lam, ms):
    return np.array([f_m_coherent(alpha, lam, int(m)) for m in ms])
