"""Interference simulator for interferometers whose which-path and spin
signatures show up on different pointers.

The photon side builds a hybrid path/polarization state, couples weak pointer
probes to arm presence and to circular spin in one arm, post-selects, and
reports joint pointer densities, centroids, lobe weights, and entanglement.
The neutron side sweeps a relative path phase through absorber and spin
rotation probes and reports detector probabilities and visibilities.
"""
from __future__ import annotations

from .analysis import (
    DisturbanceModel,
    EnsembleStats,
    WeakValueReport,
    disturbance_ensemble,
    predict_pointer_shift,
    simulated_pointer_shift,
    weak_value,
    weak_value_report,
)
from .errors import (
    BasisMismatchError,
    DisplacementError,
    GridMismatchError,
    NullStateError,
    RegimeError,
    SimulationError,
    UndefinedWeakValueError,
    ZeroStateError,
)
from .hybrid import (
    HybridState,
    InteractionSpec,
    LobeWeight,
    PointerJointState,
    centroid2d,
    hybrid_from_discrete,
    interact,
    joint_density,
    orthogonal_postselection,
    photon_postselection,
    photon_preselection,
    pointer_entanglement,
    postselect,
    preselect_photon,
    strong_lobe_weights,
)
from .neutron import (
    Absorber,
    CountSample,
    DetectorProbabilities,
    NeutronScenario,
    SpinRotation,
    SweepTable,
    chi_sweep,
    detector_probabilities,
    evolve,
    exit_port_states,
    field_rotation,
    preselect_neutron,
    sample_counts,
)
from .pointer import (
    GaussianPointer,
    SampledPointer,
    UniformGrid1D,
    centroid,
    default_grid,
    displace,
    gaussian,
    overlap,
    sample,
    unit_norm_gaussian,
)
from .states import (
    BasisLabel,
    DiscreteKet,
    DiscreteOperator,
    Family,
    Internal,
    Path,
    basis_ket,
    circular_spin,
    detection_probability,
    inner,
    path_projector,
    projector,
)

__version__ = "0.1.0"

__all__ = [
    "Absorber",
    "BasisLabel",
    "BasisMismatchError",
    "CountSample",
    "DetectorProbabilities",
    "DiscreteKet",
    "DiscreteOperator",
    "DisplacementError",
    "DisturbanceModel",
    "EnsembleStats",
    "Family",
    "GaussianPointer",
    "GridMismatchError",
    "HybridState",
    "InteractionSpec",
    "Internal",
    "LobeWeight",
    "NeutronScenario",
    "NullStateError",
    "Path",
    "PointerJointState",
    "RegimeError",
    "SampledPointer",
    "SimulationError",
    "SpinRotation",
    "SweepTable",
    "UndefinedWeakValueError",
    "UniformGrid1D",
    "WeakValueReport",
    "ZeroStateError",
    "basis_ket",
    "centroid",
    "centroid2d",
    "chi_sweep",
    "circular_spin",
    "default_grid",
    "detection_probability",
    "detector_probabilities",
    "displace",
    "disturbance_ensemble",
    "evolve",
    "exit_port_states",
    "field_rotation",
    "gaussian",
    "hybrid_from_discrete",
    "inner",
    "interact",
    "joint_density",
    "orthogonal_postselection",
    "overlap",
    "path_projector",
    "photon_postselection",
    "photon_preselection",
    "pointer_entanglement",
    "postselect",
    "predict_pointer_shift",
    "preselect_photon",
    "preselect_neutron",
    "projector",
    "sample",
    "sample_counts",
    "simulated_pointer_shift",
    "strong_lobe_weights",
    "unit_norm_gaussian",
    "weak_value",
    "weak_value_report",
    "__version__",
]
