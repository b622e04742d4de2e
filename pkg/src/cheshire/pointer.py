"""Pointer wavefunctions on a line.

Two representations: analytic Gaussians A * exp(-(x - c)^2 / W^2) carrying a
complex amplitude, and complex profiles sampled on a uniform grid.  Overlaps
and moments are closed-form for Gaussian pairs and trapezoidal for anything
sampled.  A peak-amplitude-one Gaussian has squared norm W * sqrt(pi / 2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DisplacementError, GridMismatchError, ZeroStateError

DEFAULT_GRID_POINTS = 512
DEFAULT_SPAN_WIDTHS = 8.0
MIN_POINTS_PER_WIDTH = 8
MAX_SHIFT_FRACTION = 0.1


@dataclass(frozen=True)
class UniformGrid1D:
    lo: float
    hi: float
    n: int

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError("grid needs lo < hi")
        if self.n < 16:
            raise ValueError("grid needs at least 16 points")

    @property
    def span(self) -> float:
        return self.hi - self.lo

    @property
    def spacing(self) -> float:
        return self.span / (self.n - 1)

    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n)


@dataclass(frozen=True)
class GaussianPointer:
    width: float
    center: float = 0.0
    amplitude: complex = 1.0 + 0j

    def __post_init__(self) -> None:
        if not self.width > 0:
            raise ValueError("Gaussian width must be positive")


@dataclass(frozen=True, eq=False)
class SampledPointer:
    grid: UniformGrid1D
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.grid.n,):
            raise ValueError("values length must match the grid")
        object.__setattr__(self, "values", vals)


Pointer = GaussianPointer | SampledPointer


def gaussian(width: float, center: float = 0.0, amplitude: complex = 1.0) -> GaussianPointer:
    """Gaussian pointer with peak amplitude `amplitude` (1 by default)."""
    return GaussianPointer(width=width, center=center, amplitude=complex(amplitude))


def unit_norm_gaussian(width: float, center: float = 0.0) -> GaussianPointer:
    """Gaussian pointer scaled to unit squared norm."""
    amp = (2.0 / math.pi) ** 0.25 / math.sqrt(width)
    return GaussianPointer(width=width, center=center, amplitude=amp + 0j)


def default_grid(width: float,
                 span_widths: float = DEFAULT_SPAN_WIDTHS,
                 n: int = DEFAULT_GRID_POINTS) -> UniformGrid1D:
    return UniformGrid1D(-span_widths * width, span_widths * width, n)


def values_on(p: Pointer, grid: UniformGrid1D) -> np.ndarray:
    """Complex values of the pointer on `grid`."""
    if isinstance(p, GaussianPointer):
        x = grid.points()
        return p.amplitude * np.exp(-((x - p.center) ** 2) / p.width ** 2)
    if p.grid != grid:
        raise GridMismatchError("sampled pointer is defined on a different grid")
    return p.values.copy()


def sample(p: Pointer, grid: UniformGrid1D) -> SampledPointer:
    """Sampled representation of `p` on `grid`."""
    if isinstance(p, GaussianPointer) and grid.spacing > p.width / MIN_POINTS_PER_WIDTH:
        raise GridMismatchError(
            f"grid spacing {grid.spacing:.4g} under-resolves width {p.width:.4g}")
    return SampledPointer(grid=grid, values=values_on(p, grid))


def displace(p: Pointer, delta: float) -> Pointer:
    """The pointer translated by `delta`: x -> x - delta in its argument.

    Sampled profiles are shifted spectrally (FFT phase ramp), which assumes the
    profile is negligible near the grid edges; displacements beyond 10% of the
    span are refused.
    """
    if isinstance(p, GaussianPointer):
        return replace(p, center=p.center + delta)
    if abs(delta) >= MAX_SHIFT_FRACTION * p.grid.span:
        raise DisplacementError(
            f"displacement {delta:.4g} exceeds 10% of the grid span {p.grid.span:.4g}")
    freqs = np.fft.fftfreq(p.grid.n, d=p.grid.spacing)
    shifted = np.fft.ifft(np.fft.fft(p.values) * np.exp(-2j * np.pi * freqs * delta))
    return SampledPointer(grid=p.grid, values=shifted)


def _gauss_pair(p: GaussianPointer, q: GaussianPointer) -> tuple[complex, float, float]:
    # Returns (overlap integral, centroid of the product, combined exponent).
    a = 1.0 / p.width ** 2
    b = 1.0 / q.width ** 2
    s = a + b
    pref = (p.amplitude.conjugate() * q.amplitude
            * math.sqrt(math.pi / s)
            * math.exp(-((p.center - q.center) ** 2) * a * b / s))
    mu = (a * p.center + b * q.center) / s
    return pref, mu, s


def _pair_values(p: Pointer, q: Pointer) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if isinstance(p, SampledPointer):
        grid = p.grid
    elif isinstance(q, SampledPointer):
        grid = q.grid
    else:  # pragma: no cover - callers dispatch Gaussians to closed forms
        raise TypeError("at least one sampled pointer expected")
    return grid.points(), values_on(p, grid), values_on(q, grid)


def overlap(p: Pointer, q: Pointer) -> complex:
    """<p|q> = integral of conj(p(x)) q(x) dx."""
    if isinstance(p, GaussianPointer) and isinstance(q, GaussianPointer):
        return _gauss_pair(p, q)[0]
    x, pv, qv = _pair_values(p, q)
    return complex(np.trapezoid(np.conj(pv) * qv, x))


def moment1(p: Pointer, q: Pointer) -> complex:
    """<p|x|q>."""
    if isinstance(p, GaussianPointer) and isinstance(q, GaussianPointer):
        pref, mu, _ = _gauss_pair(p, q)
        return pref * mu
    x, pv, qv = _pair_values(p, q)
    return complex(np.trapezoid(np.conj(pv) * x * qv, x))


def moment2(p: Pointer, q: Pointer) -> complex:
    """<p|x^2|q>."""
    if isinstance(p, GaussianPointer) and isinstance(q, GaussianPointer):
        pref, mu, s = _gauss_pair(p, q)
        return pref * (mu * mu + 0.5 / s)
    x, pv, qv = _pair_values(p, q)
    return complex(np.trapezoid(np.conj(pv) * x * x * qv, x))


def norm2(p: Pointer) -> float:
    return overlap(p, p).real


def centroid(p: Pointer) -> float:
    n2 = norm2(p)
    if n2 == 0.0:
        raise ZeroStateError("centroid of a zero pointer is undefined")
    return moment1(p, p).real / n2


def variance(p: Pointer) -> float:
    n2 = norm2(p)
    if n2 == 0.0:
        raise ZeroStateError("variance of a zero pointer is undefined")
    c = moment1(p, p).real / n2
    return moment2(p, p).real / n2 - c * c
