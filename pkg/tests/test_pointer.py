"""Gaussian and grid-sampled pointer wavefunctions."""
from __future__ import annotations

import math

import numpy as np
import pytest

from cheshire import pointer as ptr
from cheshire.errors import DisplacementError, GridMismatchError, ZeroStateError

SQRT_PI_OVER_2 = 1.2533141373155003


def test_gaussian_norm_closed_form():
    assert abs(ptr.norm2(ptr.gaussian(1.0)) - SQRT_PI_OVER_2) < 1e-14
    # norm2 scales linearly with the width for unit amplitude
    for w in (0.3, 2.0, 7.5):
        assert abs(ptr.norm2(ptr.gaussian(w)) - w * SQRT_PI_OVER_2) < 1e-12


def test_unit_norm_gaussian():
    for w in (0.2, 1.0, 4.0):
        assert abs(ptr.norm2(ptr.unit_norm_gaussian(w)) - 1.0) < 1e-12


def test_displaced_overlap_matches_closed_form():
    # <g_0|g_d> = exp(-d^2 / (2 W^2)) for unit-norm pointers
    g = ptr.unit_norm_gaussian(1.0)
    ov = ptr.overlap(g, ptr.displace(g, 0.1))
    assert abs(ov - 0.9950124791926823) < 1e-14
    tiny = 1.0 - ptr.overlap(g, ptr.displace(g, 1e-3)).real
    assert math.isclose(tiny, 4.9999987500002076e-07, rel_tol=1e-9)


def test_centroid_and_variance():
    g = ptr.gaussian(1.0, center=0.35)
    assert abs(ptr.centroid(g) - 0.35) < 1e-13
    # |psi|^2 = exp(-2 x^2 / W^2) has variance W^2 / 4
    for w in (0.5, 1.0, 3.0):
        assert abs(ptr.variance(ptr.gaussian(w)) - w * w / 4.0) < 1e-11


def test_sampling_reproduces_closed_forms():
    g = ptr.unit_norm_gaussian(1.0, center=0.2)
    grid = ptr.default_grid(1.0)
    s = ptr.sample(g, grid)
    assert abs(ptr.norm2(s) - 1.0) < 1e-10
    assert abs(ptr.centroid(s) - 0.2) < 1e-10
    assert abs(ptr.overlap(s, s) - 1.0) < 1e-10


def test_mixed_overlap_gaussian_with_sampled():
    g = ptr.unit_norm_gaussian(1.0)
    grid = ptr.default_grid(1.0)
    shifted = ptr.sample(ptr.displace(g, 0.4), grid)
    direct = ptr.overlap(g, ptr.displace(g, 0.4))
    quad = ptr.overlap(g, shifted)
    assert abs(direct - quad) < 1e-10


def test_fft_displacement_matches_analytic():
    g = ptr.unit_norm_gaussian(1.0)
    grid = ptr.default_grid(1.0)
    via_fft = ptr.displace(ptr.sample(g, grid), 0.37)
    direct = ptr.sample(ptr.displace(g, 0.37), grid)
    assert np.max(np.abs(via_fft.values - direct.values)) < 1e-8


def test_fft_displacement_limit():
    g = ptr.sample(ptr.unit_norm_gaussian(1.0), ptr.default_grid(1.0))
    with pytest.raises(DisplacementError):
        ptr.displace(g, 2.0)  # 12.5% of the 16-width span


def test_grid_resolution_guard():
    g = ptr.unit_norm_gaussian(0.05)
    with pytest.raises(GridMismatchError):
        ptr.sample(g, ptr.default_grid(1.0))


def test_foreign_grid_rejected():
    grid_a = ptr.default_grid(1.0)
    grid_b = ptr.UniformGrid1D(-4.0, 4.0, 512)
    s = ptr.sample(ptr.unit_norm_gaussian(1.0), grid_a)
    with pytest.raises(GridMismatchError):
        ptr.values_on(s, grid_b)


def test_grid_validation():
    with pytest.raises(ValueError):
        ptr.UniformGrid1D(1.0, -1.0, 64)
    with pytest.raises(ValueError):
        ptr.UniformGrid1D(-1.0, 1.0, 4)
    with pytest.raises(ValueError):
        ptr.gaussian(-1.0)


def test_zero_pointer_rejected():
    grid = ptr.default_grid(1.0)
    zeros = ptr.SampledPointer(grid, np.zeros(grid.n))
    with pytest.raises(ZeroStateError):
        ptr.centroid(zeros)


def test_overlap_properties_random():
    rng = np.random.default_rng(21)
    grid = ptr.default_grid(1.0)
    for _ in range(10):
        w1, w2 = rng.uniform(0.5, 2.0, size=2)
        c1, c2 = rng.uniform(-1.0, 1.0, size=2)
        p = ptr.gaussian(w1, c1, complex(rng.normal(), rng.normal()))
        q = ptr.gaussian(w2, c2, complex(rng.normal(), rng.normal()))
        closed = ptr.overlap(p, q)
        quad = ptr.overlap(ptr.sample(p, grid), ptr.sample(q, grid))
        assert abs(closed - quad) < 1e-8
        assert abs(ptr.overlap(q, p) - np.conj(closed)) < 1e-12
