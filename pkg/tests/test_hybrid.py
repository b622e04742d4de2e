"""Hybrid photon pipeline: preselect, couple pointers, post-select."""
from __future__ import annotations

import math

import numpy as np
import pytest

from cheshire import hybrid
from cheshire import pointer as ptr
from cheshire.errors import NullStateError, RegimeError
from cheshire.states import Internal, Path, basis_ket, inner

SQRT_HALF = 2.0 ** -0.5


def canonical_joint(delta: float, width: float = 1.0) -> hybrid.PointerJointState:
    spec = hybrid.InteractionSpec(delta_x=delta, delta_y=delta, width=width)
    pre = hybrid.preselect_photon(spec)
    return hybrid.postselect(hybrid.interact(pre, spec), hybrid.photon_postselection())


def gamma(delta: float, width: float = 1.0) -> float:
    return math.exp(-delta ** 2 / (2.0 * width ** 2))


def test_preselected_hybrid_is_normalized():
    spec = hybrid.InteractionSpec(delta_x=0.1, delta_y=0.1, width=1.0)
    state = hybrid.preselect_photon(spec)
    assert abs(state.norm2() - 1.0) < 1e-12
    coupled = hybrid.interact(state, spec)
    assert abs(coupled.norm2() - 1.0) < 1e-12


def test_marginal_matches_preselection():
    spec = hybrid.InteractionSpec(delta_x=0.1, delta_y=0.1, width=1.0)
    marginal = hybrid.preselect_photon(spec).discrete_marginal()
    target = hybrid.photon_preselection()
    for label in target.labels():
        assert abs(marginal.amplitude(label) - target.amplitude(label)) < 1e-12


def test_postselected_coefficient_ratios():
    joint = canonical_joint(0.1)
    assert len(joint.terms) == 3
    by_center = {round(ptr.centroid(t.p1), 9): t.coeff for t in joint.terms}
    ref = by_center[0.1]
    assert abs(by_center[0.0] / ref - 2.0) < 1e-12
    assert abs(by_center[-0.1] / ref + 1.0) < 1e-12
    # undisplaced term rides on pointer 2, displaced pair on pointer 1
    centers2 = {round(ptr.centroid(t.p2), 9) for t in joint.terms}
    assert centers2 == {0.0, 0.1}


def test_postselection_probability_limits():
    # gamma -> 1: (6 - 2 gamma^4)/16 -> 1/4; gamma -> 0: 3/8
    assert abs(canonical_joint(1e-9).norm2() - 0.25) < 1e-12
    g4 = gamma(5.0) ** 4
    assert abs(canonical_joint(5.0).norm2() - (6.0 - 2.0 * g4) / 16.0) < 1e-12
    assert abs(canonical_joint(5.0).norm2() - 0.375) < 1e-10


def test_centroid_closed_form():
    for delta in (0.02, 0.1, 0.5, 1.5):
        cx, cy = hybrid.centroid2d(canonical_joint(delta))
        g = gamma(delta)
        denom = 3.0 - g ** 4
        assert abs(cx - 2.0 * delta * g * g / denom) < 1e-12
        assert abs(cy - 2.0 * delta / denom) < 1e-12


def test_weak_centroid_approaches_displacements():
    delta = 1e-3
    cx, cy = hybrid.centroid2d(canonical_joint(delta))
    assert math.hypot(cx - delta, cy - delta) / math.hypot(delta, delta) < 1e-4


def test_joint_density_normalized_and_nonnegative():
    joint = canonical_joint(0.1)
    grid = ptr.default_grid(1.0)
    dens = hybrid.joint_density(joint, grid, grid)
    assert dens.shape == (grid.n, grid.n)
    assert dens.min() >= 0.0
    xs = grid.points()
    total = np.trapezoid(np.trapezoid(dens, xs, axis=1), xs)
    assert abs(total - 1.0) < 1e-9


def test_weak_density_peak_sits_in_positive_quadrant():
    joint = canonical_joint(0.1)
    grid = ptr.default_grid(1.0)
    dens = hybrid.joint_density(joint, grid, grid)
    iy, ix = np.unravel_index(dens.argmax(), dens.shape)
    xs = grid.points()
    assert xs[ix] > 0.0 and xs[iy] > 0.0
    # depleted left half-plane
    assert dens[:, xs < 0].sum() < dens[:, xs > 0].sum()


def test_strong_lobe_weights():
    joint = canonical_joint(5.0)
    lobes = hybrid.strong_lobe_weights(joint)
    assert len(lobes) == 3
    found = {(round(l.x, 6), round(l.y, 6)): l.weight for l in lobes}
    assert abs(found[(0.0, 5.0)] - 2.0 / 3.0) < 1e-3
    assert abs(found[(5.0, 0.0)] - 1.0 / 6.0) < 1e-3
    assert abs(found[(-5.0, 0.0)] - 1.0 / 6.0) < 1e-3
    assert abs(sum(found.values()) - 1.0) < 1e-3


def test_lobe_weights_refuse_overlapping_regime():
    with pytest.raises(RegimeError):
        hybrid.strong_lobe_weights(canonical_joint(0.5))


def test_entanglement_weak_and_strong():
    assert hybrid.pointer_entanglement(canonical_joint(1e-3)) > 0.999999
    assert abs(hybrid.pointer_entanglement(canonical_joint(5.0)) - 5.0 / 9.0) < 1e-6


def test_entanglement_against_grid_partial_trace():
    # independent oracle: build the joint field on a dense grid, trace out y
    joint = canonical_joint(1.0)
    grid = ptr.default_grid(1.0, n=256)
    xs = grid.points()
    coeffs = np.array([t.coeff for t in joint.terms])
    v1 = np.array([ptr.values_on(t.p1, grid) for t in joint.terms])
    v2 = np.array([ptr.values_on(t.p2, grid) for t in joint.terms])
    field = np.einsum("k,ky,kx->yx", coeffs, v2, v1)
    dx = grid.spacing
    rho1 = field.conj().T @ field * dx  # (x, x') up to normalization
    purity_grid = np.trace(rho1 @ rho1).real * dx * dx / (np.trace(rho1).real * dx) ** 2
    assert abs(hybrid.pointer_entanglement(joint) - purity_grid) < 1e-6


def test_null_postselection_is_signaled():
    spec = hybrid.InteractionSpec(delta_x=0.1, delta_y=0.1, width=1.0)
    state = hybrid.preselect_photon(spec)
    # (|I> - i|II>)|H> / sqrt(2) is orthogonal to the prepared state
    null_post = (basis_ket(Path.I, Internal.H) * SQRT_HALF
                 - basis_ket(Path.II, Internal.H) * (1j * SQRT_HALF))
    joint = hybrid.postselect(state, null_post)
    assert joint.is_null
    with pytest.raises(NullStateError):
        hybrid.joint_density(joint)
    with pytest.raises(NullStateError):
        hybrid.centroid2d(joint)
    # the coupling leaks a little amplitude into that port, so after
    # interaction the same selection is small but live
    leaked = hybrid.postselect(hybrid.interact(state, spec), null_post)
    assert not leaked.is_null
    assert leaked.norm2() < 0.01


def test_orthogonal_postselection_is_not_null():
    # orthogonal to the standard post-selection yet not to the prepared state
    post = hybrid.orthogonal_postselection()
    assert abs(inner(post, hybrid.photon_postselection())) < 1e-14
    ov = inner(post, hybrid.photon_preselection())
    assert abs(ov + 0.5j) < 1e-14
    spec = hybrid.InteractionSpec(delta_x=0.1, delta_y=0.1, width=1.0)
    joint = hybrid.postselect(hybrid.interact(hybrid.preselect_photon(spec), spec), post)
    assert not joint.is_null


def test_interaction_spec_validation():
    with pytest.raises(ValueError):
        hybrid.InteractionSpec(delta_x=0.1, delta_y=0.1, width=0.0)
    with pytest.raises(ValueError):
        hybrid.InteractionSpec(delta_x=math.nan, delta_y=0.1, width=1.0)


def test_density_grid_override():
    joint = canonical_joint(0.1)
    gx = ptr.UniformGrid1D(-4.0, 4.0, 128)
    gy = ptr.UniformGrid1D(-6.0, 6.0, 64)
    dens = hybrid.joint_density(joint, gx, gy)
    assert dens.shape == (64, 128)
