"""Finite-squeezing quadrature teleportation on a position grid.

Wavefunctions are sampled in the ``X = a + a†`` representation, so the
vacuum is ``(2 pi)^{-1/4} exp(-x^2/4)``. Alice's outcome ``(X, Y)`` leaves
mode B in

    phi(x) = ∫ dx' exp(i x' Y) G(x', x; r) psi(X - x')

which Bob corrects with a phase-space displacement scaled by gains
``(g_X, g_Y)``. Integrals use the trapezoid rule on a uniform grid; the
grid spacing must resolve the narrow direction of ``G`` (width ~ e^{-r}).
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import GridCoverageError, InvalidParameterError

DEFAULT_POINTS = 2048
MIN_EXTENT = 12.0
EDGE_FRACTION = 0.05
EDGE_TOL = 1e-10
_CHUNK = 256


@dataclass(frozen=True)
class Grid:
    """Uniform grid on ``[-extent, extent]``."""

    extent: float
    points: int

    def __post_init__(self):
        if self.points < 64:
            raise InvalidParameterError(f"grid needs at least 64 points, got {self.points}")
        if self.extent <= 0:
            raise InvalidParameterError(f"grid extent must be positive, got {self.extent}")

    @property
    def spacing(self):
        return 2 * self.extent / (self.points - 1)

    @property
    def x(self):
        return np.linspace(-self.extent, self.extent, self.points)

    @property
    def weights(self):
        w = np.full(self.points, self.spacing)
        w[0] = w[-1] = self.spacing / 2
        return w

    def resolves(self, r):
        return self.spacing <= math.exp(-r) / 8

    @classmethod
    def for_protocol(cls, r, center=0.0, points=DEFAULT_POINTS, extent=None):
        """Default grid: extent ``max(12, |center| + 10)``, spacing <= e^{-r}/8."""
        if extent is None:
            extent = max(MIN_EXTENT, abs(center) + 10)
        needed = math.ceil(2 * extent / (math.exp(-r) / 8)) + 1
        return cls(float(extent), max(int(points), needed))


@dataclass(frozen=True, eq=False)
class WaveFunction:
    grid: Grid
    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=complex)
        if samples.shape != (self.grid.points,):
            raise InvalidParameterError(
                f"expected {self.grid.points} samples, got shape {samples.shape}")
        object.__setattr__(self, "samples", samples)

    def norm(self):
        return math.sqrt(float(np.sum(self.grid.weights * np.abs(self.samples) ** 2)))

    def normalize(self):
        return WaveFunction(self.grid, self.samples / self.norm())

    def mean_x(self):
        p = np.abs(self.samples) ** 2
        return float(np.sum(self.grid.weights * self.grid.x * p) / np.sum(self.grid.weights * p))

    def mean_y(self):
        """``<Y>`` with ``Y = -2i d/dx``; derivative taken spectrally."""
        k = 2 * np.pi * np.fft.fftfreq(self.grid.points, d=self.grid.spacing)
        deriv = np.fft.ifft(1j * k * np.fft.fft(self.samples))
        num = np.sum(self.grid.weights * np.conj(self.samples) * (-2j) * deriv)
        den = np.sum(self.grid.weights * np.abs(self.samples) ** 2)
        return float((num / den).real)


@dataclass(frozen=True)
class QuadOutcome:
    X: float
    Y: float


@dataclass(frozen=True)
class Coherent:
    alpha: complex


@dataclass(frozen=True)
class Number:
    N: int


def _check_coverage(wf, what):
    p = np.abs(wf.samples) ** 2
    band = max(1, int(EDGE_FRACTION * wf.grid.points))
    total = np.sum(p)
    edge = (np.sum(p[:band]) + np.sum(p[-band:])) / total if total > 0 else 1.0
    if edge > EDGE_TOL:
        raise GridCoverageError(
            f"{what} has relative weight {edge:.2e} at the grid edge "
            f"(extent {wf.grid.extent}); enlarge the grid")
    return wf


def hermite_functions(n_max, x):
    """Oscillator eigenfunctions ``psi_0 .. psi_{n_max}`` in the ``X = a + a†`` scaling.

    Rows are normalized against ``dx``; built with the stable three-term
    recursion ``psi_{n+1} = (x psi_n - sqrt(n) psi_{n-1}) / sqrt(n+1)``.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1, x.size))
    out[0] = (2 * np.pi) ** -0.25 * np.exp(-x**2 / 4)
    if n_max >= 1:
        out[1] = x * out[0]
    for n in range(1, n_max):
        out[n + 1] = (x * out[n] - math.sqrt(n) * out[n - 1]) / math.sqrt(n + 1)
    return out


def target_wavefunction(target, grid):
    """Sample a target state on ``grid``.

    ``target`` is :class:`Coherent`, :class:`Number` or an array of custom
    samples. Coherent states are the vacuum moved to ``<X> = 2 Re(alpha)``
    with momentum phase ``exp(i Im(alpha) x)`` (global phase dropped).
    """
    x = grid.x
    if isinstance(target, Coherent):
        a = complex(target.alpha)
        samples = (2 * np.pi) ** -0.25 * np.exp(-(x - 2 * a.real) ** 2 / 4 + 1j * a.imag * x)
    elif isinstance(target, Number):
        if target.N < 0:
            raise InvalidParameterError(f"number state index must be >= 0, got {target.N}")
        samples = hermite_functions(target.N, x)[target.N]
    else:
        samples = np.asarray(target, dtype=complex)
    wf = WaveFunction(grid, samples)
    return _check_coverage(wf, "target wavefunction").normalize()


def kernel_G(x1, x2, r):
    """``(2 pi)^{-1/2} exp[-(x1+x2)^2 e^{2r}/4 - (x1-x2)^2 e^{-2r}/4]``."""
    if r < 0:
        raise InvalidParameterError(f"r must be >= 0, got {r}")
    s = np.add(x1, x2)
    d = np.subtract(x1, x2)
    return np.exp(-0.25 * s**2 * math.exp(2 * r) - 0.25 * d**2 * math.exp(-2 * r)) / math.sqrt(2 * np.pi)


def teleport_conditional(psi, outcome, r, kernel=None):
    """Mode-B wavefunction after Alice's outcome, normalized.

    The integral is taken over the target's own grid via ``u = X - x'``, so
    ``psi`` is never interpolated. ``kernel(x1, x2)`` replaces ``G(.,.;r)``
    when given (e.g. to model a different resource).
    """
    grid = psi.grid
    if kernel is None:
        kernel = lambda x1, x2: kernel_G(x1, x2, r)  # noqa: E731
    x = grid.x
    xp = outcome.X - x
    vec = grid.weights * np.exp(1j * xp * outcome.Y) * psi.samples
    out = np.empty(grid.points, dtype=complex)
    for start in range(0, grid.points, _CHUNK):
        rows = x[start:start + _CHUNK]
        out[start:start + _CHUNK] = kernel(xp[None, :], rows[:, None]) @ vec
    wf = WaveFunction(grid, out)
    if wf.norm() == 0:
        raise GridCoverageError("conditional output vanished on the grid; enlarge the grid")
    return _check_coverage(wf, "conditional output").normalize()


def displace(wf, shift, kick):
    """Weyl displacement ``e^{i kick (x - shift/2)} wf(x - shift)``.

    The shift is applied spectrally, so ``displace(displace(f, s, k), -s, -k)``
    returns ``f`` to round-off.
    """
    grid = wf.grid
    samples = wf.samples
    if shift != 0:
        k = 2 * np.pi * np.fft.fftfreq(grid.points, d=grid.spacing)
        samples = np.fft.ifft(np.fft.fft(samples) * np.exp(-1j * k * shift))
    if kick != 0:
        samples = samples * np.exp(1j * kick * (grid.x - shift / 2))
    return WaveFunction(grid, samples)


def correct(phi, outcome, gains):
    """Bob's correction: move by ``g_X X`` in position and kick by ``g_Y Y``.

    The conditional output carries ``exp(-i Y x)`` and sits at ``-X`` relative
    to the target in the large-r limit; unit gains undo both there.
    """
    gx, gy = gains
    shift = gx * outcome.X
    if abs(shift) >= phi.grid.extent:
        raise GridCoverageError(f"correction shift {shift} exceeds the grid extent")
    out = displace(phi, shift, gy * outcome.Y)
    return _check_coverage(out, "corrected output")


def matched_gains(r):
    """Gains that make the corrected output outcome-independent for coherent targets.

    The conditional output's position responds to ``X`` with slope
    ``-sinh 2r / (cosh 2r + 2)`` and its momentum phase to ``Y`` with slope
    ``-2 sinh 2r / (2 cosh 2r + 1)``; both tend to -1 as ``r`` grows.
    """
    e = math.exp(2 * r)
    diff = e - 1 / e
    s = e + 1 / e
    return diff / (s + 4), diff / (s + 1)


def calibrate_gains(r, grid=None):
    """Measure the gains from the grid: response of ``<x>`` and ``<Y>`` to the outcome."""
    if grid is None:
        grid = Grid.for_protocol(r)
    psi = target_wavefunction(Coherent(0), grid)
    base = teleport_conditional(psi, QuadOutcome(0.0, 0.0), r)
    moved = teleport_conditional(psi, QuadOutcome(1.0, 0.0), r)
    kicked = teleport_conditional(psi, QuadOutcome(0.0, 1.0), r)
    gx = base.mean_x() - moved.mean_x()
    gy = (base.mean_y() - kicked.mean_y()) / 2
    return gx, gy


def fidelity(psi, phi):
    if psi.grid != phi.grid:
        raise InvalidParameterError("wavefunctions live on different grids")
    ov = np.sum(psi.grid.weights * np.conj(psi.samples) * phi.samples)
    return float(abs(ov) ** 2)


def _target_center(target):
    if isinstance(target, Coherent):
        return 2 * abs(complex(target.alpha))
    if isinstance(target, Number):
        return 2 * math.sqrt(target.N + 1)
    return 0.0


def protocol_fidelity(target, r, outcome=QuadOutcome(0.0, 0.0), gains=None, grid=None,
                      kernel=None):
    """Fidelity of Bob's corrected state with the target.

    ``gains`` defaults to :func:`matched_gains` at ``r``; ``grid`` defaults to
    :meth:`Grid.for_protocol` sized for the target and ``r``.
    """
    if grid is None:
        grid = Grid.for_protocol(r, center=_target_center(target))
    if gains is None:
        gains = matched_gains(r)
    psi = target_wavefunction(target, grid)
    phi = teleport_conditional(psi, outcome, r, kernel=kernel)
    return fidelity(psi, correct(phi, outcome, gains))
