"""Weak values, pointer-shift predictions, and disturbance ensembles."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import pointer as ptr
from .errors import NullStateError, UndefinedWeakValueError, ZeroStateError
from .hybrid import InteractionSpec, hybrid_from_discrete, interact, \
    photon_postselection, photon_preselection, postselect
from .states import (BasisLabel, DiscreteKet, DiscreteOperator, Internal,
                     Path, apply, basis_ket, circular_spin, inner,
                     path_projector)

ORTHOGONALITY_TOLERANCE = 1e-12
DISTURBANCE_KINDS = ("phase-noise-pre", "phase-noise-post", "amplitude-noise")


def weak_value(pre: DiscreteKet, post: DiscreteKet, op: DiscreteOperator) -> complex:
    """<post|op|pre> / <post|pre>."""
    scale = math.sqrt(pre.norm2() * post.norm2())
    if scale == 0.0:
        raise ZeroStateError("weak value needs nonzero pre and post states")
    denom = inner(post, pre)
    if abs(denom) <= ORTHOGONALITY_TOLERANCE * scale:
        raise UndefinedWeakValueError("pre and post states are orthogonal")
    return inner(post, apply(op, pre)) / denom


def predict_pointer_shift(value: complex, delta: float) -> float:
    """First-order pointer displacement delta * Re(weak value)."""
    return delta * value.real


def _labels_of(family) -> list[BasisLabel]:
    from .states import Family
    internals = (Internal.H, Internal.V) if family is Family.LINEAR \
        else (Internal.PLUS, Internal.MINUS)
    return sorted(BasisLabel(p, s) for p in Path for s in internals)


def simulated_pointer_shift(pre: DiscreteKet, post: DiscreteKet,
                            op: DiscreteOperator, delta: float, width: float) -> float:
    """Centroid of a single pointer weakly coupled to `op`, post-selected.

    The pointer is displaced by delta times the operator eigenvalue on each
    eigenbranch; the post-selected pointer state is the eigenbranch-weighted
    superposition of displaced Gaussians.  This is an independent route to the
    shift, exact in delta, against which the first-order weak-value
    prediction can be compared.
    """
    labels = _labels_of(op.family)
    index = {lab: k for k, lab in enumerate(labels)}
    mat = np.zeros((len(labels), len(labels)), dtype=complex)
    for (row, col), v in op.items():
        mat[index[row], index[col]] = v
    if not np.allclose(mat, mat.conj().T, atol=1e-12):
        raise ValueError("pointer coupling needs a Hermitian operator")
    evals, evecs = np.linalg.eigh(mat)

    pre_f = pre.to_family(op.family)
    post_f = post.to_family(op.family)
    pre_vec = np.array([pre_f.amplitude(lab) for lab in labels])
    post_vec = np.array([post_f.amplitude(lab) for lab in labels])
    weights = (post_vec.conj() @ evecs) * (evecs.conj().T @ pre_vec)

    pointers = [ptr.unit_norm_gaussian(width, center=float(ev) * delta) for ev in evals]
    norm = 0j
    mom = 0j
    for i, ti in enumerate(weights):
        for j, tj in enumerate(weights):
            pair = ti.conjugate() * tj
            if pair == 0:
                continue
            norm += pair * ptr.overlap(pointers[i], pointers[j])
            mom += pair * ptr.moment1(pointers[i], pointers[j])
    if abs(norm) <= 1e-24 * float(np.sum(np.abs(weights) ** 2)):
        raise NullStateError("post-selection removed all pointer amplitude")
    return (mom / norm).real


@dataclass(frozen=True)
class WeakValueReport:
    operator: str
    value: complex
    predicted_shift: float
    simulated_shift: float
    discrepancy: float


def weak_value_report(spec: InteractionSpec,
                      pre: DiscreteKet | None = None,
                      post: DiscreteKet | None = None) -> tuple[WeakValueReport, ...]:
    """Weak values of the four arm observables with predicted and simulated shifts.

    Presence projectors probe with the arm-II displacement delta_y, spin
    observables with the arm-I displacement delta_x.
    """
    pre = photon_preselection() if pre is None else pre
    post = photon_postselection() if post is None else post
    sigma = circular_spin()
    rows = (
        ("presence_I", path_projector(Path.I), spec.delta_y),
        ("presence_II", path_projector(Path.II), spec.delta_y),
        ("spin_I", sigma @ path_projector(Path.I), spec.delta_x),
        ("spin_II", sigma @ path_projector(Path.II), spec.delta_x),
    )
    out = []
    for name, op, delta in rows:
        value = weak_value(pre, post, op)
        predicted = predict_pointer_shift(value, delta)
        simulated = simulated_pointer_shift(pre, post, op, delta, spec.width)
        out.append(WeakValueReport(operator=name, value=value,
                                   predicted_shift=predicted,
                                   simulated_shift=simulated,
                                   discrepancy=abs(predicted - simulated)))
    return tuple(out)


@dataclass(frozen=True)
class DisturbanceModel:
    """Per-run random perturbation of one declared branch amplitude.

    kind selects the target and the draw: "phase-noise-pre" and
    "phase-noise-post" multiply the branch amplitude by exp(i phi) with
    phi ~ U[0, strength); "amplitude-noise" scales the pre-selection branch
    by (1 + eps) with eps ~ U[-strength, strength).
    """

    kind: str
    strength: float
    samples: int
    seed: int
    branch: BasisLabel | None = None

    def __post_init__(self) -> None:
        if self.kind not in DISTURBANCE_KINDS:
            raise ValueError(f"unknown disturbance kind {self.kind!r}")
        if self.strength < 0:
            raise ValueError("strength must be non-negative")
        if self.samples < 2:
            raise ValueError("need at least 2 samples")

    def target_branch(self) -> BasisLabel:
        if self.branch is not None:
            return self.branch
        if self.kind == "phase-noise-post":
            return BasisLabel(Path.I, Internal.V)
        return BasisLabel(Path.I, Internal.H)


@dataclass(frozen=True)
class EnsembleStats:
    mean_centroid: tuple[float, float]
    centroid_stderr: tuple[float, float]
    purity: float
    density: np.ndarray
    grid_x: ptr.UniformGrid1D
    grid_y: ptr.UniformGrid1D
    samples: int


def disturbance_ensemble(spec: InteractionSpec, model: DisturbanceModel,
                         grid_x: ptr.UniformGrid1D | None = None,
                         grid_y: ptr.UniformGrid1D | None = None) -> EnsembleStats:
    """Monte Carlo ensemble of disturbed runs.

    Every sample perturbs one amplitude, runs the full pipeline, and is
    post-selected; per-sample pointer centroids give the mean and standard
    error, and the sample-averaged pointer density matrix gives the ensemble
    purity (1 exactly only without noise) and the averaged joint density.
    """
    pre0 = photon_preselection()
    post0 = photon_postselection()
    target_pre = model.kind in ("phase-noise-pre", "amplitude-noise")
    branch = model.target_branch()
    base = pre0 if target_pre else post0
    if base.amplitude(branch) == 0:
        raise ValueError("declared branch has zero amplitude in the target state")

    children = np.random.SeedSequence(model.seed).spawn(model.samples)
    rows: list[list[complex]] = []
    factors: list[tuple[ptr.Pointer, ptr.Pointer]] | None = None
    for child in children:
        rng = np.random.default_rng(child)
        if model.kind == "amplitude-noise":
            factor = 1.0 + rng.uniform(-model.strength, model.strength)
        else:
            factor = np.exp(1j * rng.uniform(0.0, model.strength))
        perturbed = DiscreteKet({lab: amp * factor if lab == branch else amp
                                 for lab, amp in base.items()})
        pre = perturbed if target_pre else pre0
        post = post0 if target_pre else perturbed
        joint = postselect(interact(hybrid_from_discrete(pre, spec), spec), post)
        if factors is None:
            factors = [(t.p1, t.p2) for t in joint.terms]
        elif len(joint.terms) != len(factors):
            raise RuntimeError("disturbance changed the branch structure")
        rows.append([t.coeff for t in joint.terms])

    assert factors is not None
    k = len(factors)
    gram1 = np.empty((k, k), dtype=complex)
    gram2 = np.empty((k, k), dtype=complex)
    mom1 = np.empty((k, k), dtype=complex)
    mom2 = np.empty((k, k), dtype=complex)
    for i, (a_i, b_i) in enumerate(factors):
        for j, (a_j, b_j) in enumerate(factors):
            gram1[i, j] = ptr.overlap(a_i, a_j)
            gram2[i, j] = ptr.overlap(b_i, b_j)
            mom1[i, j] = ptr.moment1(a_i, a_j)
            mom2[i, j] = ptr.moment1(b_i, b_j)
    kernel = gram1 * gram2

    coeffs = np.array(rows)
    norms = np.einsum("sk,kl,sl->s", coeffs.conj(), kernel, coeffs).real
    if np.any(norms <= 0):
        raise NullStateError("a disturbed sample was fully rejected by post-selection")
    xs = np.einsum("sk,kl,sl->s", coeffs.conj(), mom1 * gram2, coeffs).real / norms
    ys = np.einsum("sk,kl,sl->s", coeffs.conj(), gram1 * mom2, coeffs).real / norms
    n = model.samples
    mean = (float(xs.mean()), float(ys.mean()))
    stderr = (float(xs.std(ddof=1) / math.sqrt(n)), float(ys.std(ddof=1) / math.sqrt(n)))

    normalized = coeffs / np.sqrt(norms)[:, None]
    rho = np.einsum("sl,sk->lk", normalized, normalized.conj()) / n
    purity = float(np.trace(kernel @ rho @ kernel @ rho).real)

    grid_x = grid_x or ptr.default_grid(spec.width)
    grid_y = grid_y or ptr.default_grid(spec.width)
    vals1 = np.array([ptr.values_on(a, grid_x) for a, _ in factors])
    vals2 = np.array([ptr.values_on(b, grid_y) for _, b in factors])
    density = np.einsum("lk,lx,kx,ly,ky->yx", rho, vals1, vals1.conj(),
                        vals2, vals2.conj()).real
    return EnsembleStats(mean_centroid=mean, centroid_stderr=stderr, purity=purity,
                         density=density, grid_x=grid_x, grid_y=grid_y, samples=n)
