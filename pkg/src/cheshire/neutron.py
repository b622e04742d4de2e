"""Neutron interferometer runs with spin post-selection at the exit ports.

The beam is prepared as (|I,+> + |II,->)/sqrt(2).  A relative phase chi
between the arms sets the exit-port interference; detector D1 sits behind a
spin analyzer that passes |-> only, detector D2 accepts both spins.  A probe
is at most one of: a spin rotation in one arm, or a partially transmitting
absorber in one arm.  Absorption damps amplitudes by sqrt(T) without
renormalizing, so the lost probability is tracked explicitly; the spin
analyzer's discarded |+> component is tracked as the rejected channel.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .states import SQRT_HALF, DiscreteKet, Family, Internal, Path, basis_ket, inner

UNITARITY_TOLERANCE = 1e-12


def preselect_neutron() -> DiscreteKet:
    """(|I,+> + |II,->)/sqrt(2)."""
    return (basis_ket(Path.I, Internal.PLUS, SQRT_HALF)
            + basis_ket(Path.II, Internal.MINUS, SQRT_HALF))


@dataclass(frozen=True)
class SpinRotation:
    """Unitary spin map: |+> -> a|+> + b|->,  |-> -> c|-> + d|+>."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self) -> None:
        col1 = abs(self.a) ** 2 + abs(self.b) ** 2
        col2 = abs(self.c) ** 2 + abs(self.d) ** 2
        cross = self.a.conjugate() * self.d + self.b.conjugate() * self.c
        if (abs(col1 - 1) > UNITARITY_TOLERANCE or abs(col2 - 1) > UNITARITY_TOLERANCE
                or abs(cross) > UNITARITY_TOLERANCE):
            raise ValueError("spin rotation is not unitary")


def field_rotation(alpha: float) -> SpinRotation:
    """Magnetic-field rotation by angle alpha: a = c = cos(alpha/2), b = d = i sin(alpha/2)."""
    return SpinRotation(a=math.cos(alpha / 2), b=1j * math.sin(alpha / 2),
                        c=math.cos(alpha / 2), d=1j * math.sin(alpha / 2))


@dataclass(frozen=True)
class Absorber:
    path: Path
    transmissivity: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.transmissivity <= 1.0:
            raise ValueError("transmissivity must lie in [0, 1]")


@dataclass(frozen=True)
class NeutronScenario:
    """One run configuration: arm phase chi plus at most one probe."""

    chi: float
    rotation: SpinRotation | None = None
    rotation_path: Path | None = None
    absorber: Absorber | None = None

    def __post_init__(self) -> None:
        if (self.rotation is None) != (self.rotation_path is None):
            raise ValueError("rotation and rotation_path must be given together")
        if self.rotation is not None and self.absorber is not None:
            raise ValueError("at most one probe per scenario")


def apply_rotation(state: DiscreteKet, rotation: SpinRotation, path: Path) -> DiscreteKet:
    """Rotate the spin of the `path` component; the other arm is untouched."""
    state = state.to_family(Family.CIRCULAR)
    out: dict = {}

    def add(lab, amp):
        out[lab] = out.get(lab, 0j) + amp

    for lab, amp in state.items():
        if lab.path is not path:
            add(lab, amp)
        elif lab.internal is Internal.PLUS:
            add(lab, amp * rotation.a)
            add(replace(lab, internal=Internal.MINUS), amp * rotation.b)
        else:
            add(lab, amp * rotation.c)
            add(replace(lab, internal=Internal.PLUS), amp * rotation.d)
    return DiscreteKet(out)


def apply_absorber(state: DiscreteKet, absorber: Absorber) -> DiscreteKet:
    """Damp the absorber arm by sqrt(T).  The result is left unnormalized;
    the missing squared norm is the absorption probability."""
    root_t = math.sqrt(absorber.transmissivity)
    return DiscreteKet({lab: amp * root_t if lab.path is absorber.path else amp
                        for lab, amp in state.items()})


def exit_port_states(chi: float) -> dict[str, DiscreteKet]:
    """Orthonormal exit-port states for phase chi.

    d1 is the D1 port with the spin analyzer passing |->; rejected is the same
    port's discarded |+> component; d2_plus / d2_minus span the D2 port.
    """
    phase = cmath.exp(1j * chi)
    port = {}
    for name, sign, spin in (("d1", 1.0, Internal.MINUS),
                             ("rejected", 1.0, Internal.PLUS),
                             ("d2_minus", -1.0, Internal.MINUS),
                             ("d2_plus", -1.0, Internal.PLUS)):
        port[name] = (basis_ket(Path.I, spin, SQRT_HALF)
                      + basis_ket(Path.II, spin, sign * phase * SQRT_HALF))
    return port


@dataclass(frozen=True)
class DetectorProbabilities:
    p_d1: float
    p_d2: float
    p_absorbed: float
    p_rejected: float

    def total(self) -> float:
        return self.p_d1 + self.p_d2 + self.p_absorbed + self.p_rejected

    def as_dict(self) -> dict[str, float]:
        return {"p_d1": self.p_d1, "p_d2": self.p_d2,
                "p_absorbed": self.p_absorbed, "p_rejected": self.p_rejected}


def evolve(scenario: NeutronScenario) -> DiscreteKet:
    """State reaching the exit beam splitter, unnormalized if absorbing."""
    state = preselect_neutron()
    if scenario.rotation is not None:
        state = apply_rotation(state, scenario.rotation, scenario.rotation_path)
    if scenario.absorber is not None:
        state = apply_absorber(state, scenario.absorber)
    return state


def detector_probabilities(scenario: NeutronScenario) -> DetectorProbabilities:
    state = evolve(scenario)
    ports = exit_port_states(scenario.chi)
    p_d1 = abs(inner(ports["d1"], state)) ** 2
    p_rej = abs(inner(ports["rejected"], state)) ** 2
    p_d2 = (abs(inner(ports["d2_plus"], state)) ** 2
            + abs(inner(ports["d2_minus"], state)) ** 2)
    # 1 - norm2 can land a few ulp below zero for unitary probes.
    p_abs = max(0.0, 1.0 - state.norm2())
    return DetectorProbabilities(p_d1=p_d1, p_d2=p_d2, p_absorbed=p_abs, p_rejected=p_rej)


@dataclass(frozen=True)
class SweepTable:
    chi: np.ndarray
    p_d1: np.ndarray
    p_d2: np.ndarray
    p_absorbed: np.ndarray
    p_rejected: np.ndarray

    def visibility(self, detector: str) -> float:
        curve = {"d1": self.p_d1, "d2": self.p_d2}[detector]
        hi, lo = float(curve.max()), float(curve.min())
        return (hi - lo) / (hi + lo)

    def rows(self):
        for k in range(len(self.chi)):
            yield (float(self.chi[k]), float(self.p_d1[k]), float(self.p_d2[k]),
                   float(self.p_absorbed[k]), float(self.p_rejected[k]))


def chi_sweep(base: NeutronScenario, steps: int = 100) -> SweepTable:
    """Detector probabilities on `steps` evenly spaced phases over [0, 2*pi).

    Multiples of pi/2 land exactly on the grid whenever 4 divides `steps`, so
    extremal visibilities of the standard probes are sampled exactly.
    """
    if steps < 2:
        raise ValueError("sweep needs at least 2 steps")
    chis = np.arange(steps) * (2.0 * math.pi / steps)
    cols = {"p_d1": [], "p_d2": [], "p_absorbed": [], "p_rejected": []}
    for chi in chis:
        probs = detector_probabilities(replace(base, chi=float(chi)))
        for key, value in probs.as_dict().items():
            cols[key].append(value)
    return SweepTable(chi=chis, **{k: np.array(v) for k, v in cols.items()})


@dataclass(frozen=True)
class CountSample:
    d1: int
    d2: int
    absorbed: int
    rejected: int


def sample_counts(probs: DetectorProbabilities, shots: int,
                  seed: int | np.random.Generator) -> CountSample:
    """Multinomial draw over the four outcome channels; deterministic per seed."""
    if shots < 0:
        raise ValueError("shots must be non-negative")
    p = np.array([probs.p_d1, probs.p_d2, probs.p_absorbed, probs.p_rejected])
    p = np.clip(p, 0.0, None)
    total = p.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"outcome probabilities sum to {total:.12g}, not 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    counts = rng.multinomial(shots, p / total)
    return CountSample(d1=int(counts[0]), d2=int(counts[1]),
                       absorbed=int(counts[2]), rejected=int(counts[3]))
