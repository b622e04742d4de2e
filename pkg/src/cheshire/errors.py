"""Exception types shared across the simulator."""


class SimulationError(Exception):
    """Base class for physics or numerics errors raised by this package."""


class BasisMismatchError(SimulationError):
    """Label sets mix internal basis families in a way that cannot be converted."""


class ZeroStateError(SimulationError):
    """An operation that needs a nonzero state received a zero one."""


class GridMismatchError(SimulationError):
    """Sampled-profile operation across incompatible grids."""


class DisplacementError(SimulationError):
    """Requested displacement too large for the sampled grid."""


class RegimeError(SimulationError):
    """Inputs violate the regime an operation assumes (e.g. overlapping lobes)."""


class NullStateError(SimulationError):
    """Post-selection produced a null state; the requested quantity is undefined."""


class UndefinedWeakValueError(SimulationError):
    """Weak value requested for (numerically) orthogonal pre and post states."""
