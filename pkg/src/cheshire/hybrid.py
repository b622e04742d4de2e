"""Photon pipeline: pre-selection, pointer couplings, post-selection.

The run couples two pointers to one photon crossing a two-arm interferometer:
pointer 1 reads the circular polarization in arm I (displacement +/- delta_x
by the |+> / |-> component) and pointer 2 reads the presence in arm II
(displacement +delta_y).  Post-selecting the photon leaves an entangled state
of the two pointers whose joint position density carries the interference
pattern of interest.

Pointer factors are kept factored per term, p1(x) * p2(y); densities are
assembled on demand and moments reduce to pairwise one-dimensional integrals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import pointer as ptr
from .errors import NullStateError, RegimeError
from .states import (SQRT_HALF, BasisLabel, DiscreteKet, Family, Internal,
                     Path, basis_ket, inner)

NULL_RELATIVE_TOLERANCE = 1e-24
LOBE_OVERLAP_LIMIT = 1e-6
DEFAULT_LOBE_RADIUS_WIDTHS = 2.5


def photon_preselection() -> DiscreteKet:
    """(|I> + i|II>)|H> / sqrt(2): equal-arm split, horizontal polarization."""
    return basis_ket(Path.I, Internal.H, SQRT_HALF) + basis_ket(Path.II, Internal.H, 1j * SQRT_HALF)


def photon_postselection() -> DiscreteKet:
    """(|I>|V> + |II>|H>) / sqrt(2): the Cheshire-cat post-selection."""
    return basis_ket(Path.I, Internal.V, SQRT_HALF) + basis_ket(Path.II, Internal.H, SQRT_HALF)


def orthogonal_postselection() -> DiscreteKet:
    """(|I>|V> - |II>|H>) / sqrt(2), orthogonal to photon_postselection()."""
    return basis_ket(Path.I, Internal.V, SQRT_HALF) - basis_ket(Path.II, Internal.H, SQRT_HALF)


@dataclass(frozen=True)
class InteractionSpec:
    """Pointer coupling strengths and the common pointer width."""

    delta_x: float
    delta_y: float
    width: float

    def __post_init__(self) -> None:
        for name in ("delta_x", "delta_y", "width"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not self.width > 0:
            raise ValueError("pointer width must be positive")
        if self.delta_x < 0 or self.delta_y < 0:
            raise ValueError("displacements must be non-negative")


@dataclass(frozen=True)
class HybridBranch:
    label: BasisLabel
    coeff: complex
    p1: ptr.Pointer
    p2: ptr.Pointer


@dataclass(frozen=True)
class HybridState:
    """Sum of branches |label> * coeff * p1(x) * p2(y).

    Branch labels may sit in different internal families (arm I is naturally
    expressed circularly after the coupling, arm II stays linear).
    """

    branches: tuple[HybridBranch, ...]

    def norm2(self) -> float:
        total = 0j
        for b in self.branches:
            for c in self.branches:
                lab = inner(basis_ket(b.label.path, b.label.internal),
                            basis_ket(c.label.path, c.label.internal))
                if lab == 0:
                    continue
                total += (b.coeff.conjugate() * c.coeff * lab
                          * ptr.overlap(b.p1, c.p1) * ptr.overlap(b.p2, c.p2))
        return total.real

    def discrete_marginal(self) -> DiscreteKet:
        """Coefficient-weighted discrete ket; meaningful while the pointer
        factors are branch independent (before any coupling)."""
        out = DiscreteKet({})
        for b in self.branches:
            out = out + basis_ket(b.label.path, b.label.internal, b.coeff).to_family(Family.LINEAR)
        return out

    def to_family(self, family: Family) -> "HybridState":
        branches: list[HybridBranch] = []
        for b in self.branches:
            expanded = basis_ket(b.label.path, b.label.internal, b.coeff).to_family(family)
            for lab, amp in expanded.items():
                branches.append(HybridBranch(label=lab, coeff=amp, p1=b.p1, p2=b.p2))
        return HybridState(branches=tuple(branches))

    def merged(self) -> "HybridState":
        """Combine branches that share label and pointer factors exactly."""
        acc: dict[tuple, HybridBranch] = {}
        for b in self.branches:
            key = (b.label, b.p1, b.p2)
            if key in acc:
                prev = acc[key]
                acc[key] = HybridBranch(label=b.label, coeff=prev.coeff + b.coeff,
                                        p1=b.p1, p2=b.p2)
            else:
                acc[key] = b
        kept = tuple(sorted((b for b in acc.values() if b.coeff != 0),
                            key=lambda b: (b.label.path.value, b.label.internal.value)))
        return HybridState(branches=kept)


@dataclass(frozen=True)
class JointTerm:
    coeff: complex
    p1: ptr.Pointer
    p2: ptr.Pointer


@dataclass(frozen=True)
class PointerJointState:
    """Post-selected two-pointer state: sum of coeff * p1(x) * p2(y) terms."""

    terms: tuple[JointTerm, ...]

    def _grams(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        k = len(self.terms)
        coeffs = np.array([t.coeff for t in self.terms], dtype=complex)
        gram1 = np.empty((k, k), dtype=complex)
        gram2 = np.empty((k, k), dtype=complex)
        for i, ti in enumerate(self.terms):
            for j, tj in enumerate(self.terms):
                gram1[i, j] = ptr.overlap(ti.p1, tj.p1)
                gram2[i, j] = ptr.overlap(ti.p2, tj.p2)
        return coeffs, gram1, gram2

    def norm2(self) -> float:
        if not self.terms:
            return 0.0
        coeffs, gram1, gram2 = self._grams()
        return (coeffs.conjugate() @ (gram1 * gram2) @ coeffs).real

    @property
    def is_null(self) -> bool:
        if not self.terms:
            return True
        scale = sum(abs(t.coeff) ** 2 * ptr.norm2(t.p1) * ptr.norm2(t.p2)
                    for t in self.terms)
        return self.norm2() <= NULL_RELATIVE_TOLERANCE * scale

    def _require_live(self) -> None:
        if self.is_null:
            raise NullStateError("post-selection produced a null pointer state")


def hybrid_from_discrete(ket: DiscreteKet, spec: InteractionSpec) -> HybridState:
    """Attach rest pointers (unit-norm Gaussians at the origin) to a discrete ket."""
    rest = ptr.unit_norm_gaussian(spec.width)
    return HybridState(branches=tuple(
        HybridBranch(label=lab, coeff=amp, p1=rest, p2=rest) for lab, amp in ket.items()))


def preselect_photon(spec: InteractionSpec) -> HybridState:
    return hybrid_from_discrete(photon_preselection(), spec)


def interact(state: HybridState, spec: InteractionSpec) -> HybridState:
    """Apply both pointer couplings.

    Arm I branches are re-expressed in the circular family; the |+> component
    displaces pointer 1 by +delta_x and the |-> component by -delta_x.  Arm II
    branches displace pointer 2 by +delta_y and keep their internal label.
    """
    branches: list[HybridBranch] = []
    for b in state.branches:
        if b.label.path is Path.II:
            branches.append(HybridBranch(label=b.label, coeff=b.coeff,
                                         p1=b.p1, p2=ptr.displace(b.p2, spec.delta_y)))
            continue
        circular = basis_ket(b.label.path, b.label.internal, b.coeff).to_family(Family.CIRCULAR)
        for lab, amp in circular.items():
            sign = 1.0 if lab.internal is Internal.PLUS else -1.0
            branches.append(HybridBranch(label=lab, coeff=amp,
                                         p1=ptr.displace(b.p1, sign * spec.delta_x), p2=b.p2))
    return HybridState(branches=tuple(branches))


def postselect(state: HybridState, post: DiscreteKet) -> PointerJointState:
    """Contract the discrete sector against <post|.

    A null outcome is signaled through PointerJointState.is_null rather than
    raised; downstream density and moment operations refuse null states.
    """
    terms = tuple(
        JointTerm(coeff=b.coeff * inner(post, basis_ket(b.label.path, b.label.internal)),
                  p1=b.p1, p2=b.p2)
        for b in state.branches)
    return PointerJointState(terms=terms)


def joint_density(joint: PointerJointState,
                  grid_x: ptr.UniformGrid1D | None = None,
                  grid_y: ptr.UniformGrid1D | None = None) -> np.ndarray:
    """|F(x, y)|^2 normalized to unit integral, as an array indexed [iy, ix].

    Normalization uses the exact factored norm, so integrating the returned
    array over the grid is a genuine quadrature consistency check.
    """
    joint._require_live()
    grid_x = grid_x or _default_grid_for(joint, axis=1)
    grid_y = grid_y or _default_grid_for(joint, axis=2)
    coeffs = np.array([t.coeff for t in joint.terms], dtype=complex)
    vals1 = np.array([ptr.values_on(t.p1, grid_x) for t in joint.terms])
    vals2 = np.array([ptr.values_on(t.p2, grid_y) for t in joint.terms])
    field = np.einsum("k,ky,kx->yx", coeffs, vals2, vals1)
    return (np.abs(field) ** 2) / joint.norm2()


def centroid2d(joint: PointerJointState) -> tuple[float, float]:
    """Mean position (<x>, <y>) of the normalized joint density."""
    joint._require_live()
    coeffs, gram1, gram2 = joint._grams()
    k = len(joint.terms)
    mom1 = np.empty((k, k), dtype=complex)
    mom2 = np.empty((k, k), dtype=complex)
    for i, ti in enumerate(joint.terms):
        for j, tj in enumerate(joint.terms):
            mom1[i, j] = ptr.moment1(ti.p1, tj.p1)
            mom2[i, j] = ptr.moment1(ti.p2, tj.p2)
    norm = (coeffs.conjugate() @ (gram1 * gram2) @ coeffs).real
    x = (coeffs.conjugate() @ (mom1 * gram2) @ coeffs).real / norm
    y = (coeffs.conjugate() @ (gram1 * mom2) @ coeffs).real / norm
    return x, y


@dataclass(frozen=True)
class LobeWeight:
    x: float
    y: float
    weight: float


def strong_lobe_weights(joint: PointerJointState,
                        lobe_radius: float | None = None) -> tuple[LobeWeight, ...]:
    """Integrated probability in a disk around each term's pointer centroid.

    Valid only when the terms are pairwise disjoint in the plane; overlapping
    terms (normalized pairwise overlap above 1e-6) raise RegimeError.
    """
    joint._require_live()
    coeffs, gram1, gram2 = joint._grams()
    k = len(joint.terms)
    norms = np.sqrt(np.abs(np.diag(gram1) * np.diag(gram2)).real)
    for i in range(k):
        for j in range(i + 1, k):
            pair = abs(gram1[i, j] * gram2[i, j]) / (norms[i] * norms[j])
            if pair > LOBE_OVERLAP_LIMIT:
                raise RegimeError(
                    f"terms {i} and {j} overlap (normalized {pair:.3g}); "
                    "lobe weights need displacements well above the width")
    centers = [(ptr.centroid(t.p1), ptr.centroid(t.p2)) for t in joint.terms]
    widths = [2.0 * np.sqrt(max(ptr.variance(t.p1), ptr.variance(t.p2)))
              for t in joint.terms]
    wmax = max(widths)
    radius = DEFAULT_LOBE_RADIUS_WIDTHS * wmax if lobe_radius is None else lobe_radius
    if radius <= 0:
        raise ValueError("lobe radius must be positive")

    margin = ptr.DEFAULT_SPAN_WIDTHS * wmax
    grid_x = ptr.UniformGrid1D(min(c[0] for c in centers) - margin,
                               max(c[0] for c in centers) + margin, ptr.DEFAULT_GRID_POINTS)
    grid_y = ptr.UniformGrid1D(min(c[1] for c in centers) - margin,
                               max(c[1] for c in centers) + margin, ptr.DEFAULT_GRID_POINTS)
    density = joint_density(joint, grid_x, grid_y)
    xs, ys = grid_x.points(), grid_y.points()
    out = []
    for (cx, cy) in centers:
        mask = ((xs[None, :] - cx) ** 2 + (ys[:, None] - cy) ** 2) <= radius ** 2
        w = np.trapezoid(np.trapezoid(density * mask, xs, axis=1), ys)
        out.append(LobeWeight(x=cx, y=cy, weight=float(w)))
    return tuple(out)


def pointer_entanglement(joint: PointerJointState) -> float:
    """Purity Tr(rho_1^2) of the reduced pointer-1 state; 1 means product.

    Computed from the Gram matrices of the pointer factors: with
    M[l, k] = c_l conj(c_k) <b_k|b_l> and A the pointer-1 Gram matrix,
    purity = Tr((M A)^2) / Tr(M A)^2.
    """
    joint._require_live()
    coeffs, gram1, gram2 = joint._grams()
    m = np.outer(coeffs, coeffs.conjugate()) * gram2.T
    ma = m @ gram1
    return float((np.trace(ma @ ma) / np.trace(ma) ** 2).real)


def _default_grid_for(joint: PointerJointState, axis: int) -> ptr.UniformGrid1D:
    widths = []
    for t in joint.terms:
        p = t.p1 if axis == 1 else t.p2
        if not isinstance(p, ptr.GaussianPointer):
            raise ValueError("sampled pointer factors need explicit grids")
        widths.append(p.width)
    return ptr.default_grid(max(widths))
