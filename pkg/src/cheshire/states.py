"""Discrete state algebra for a two-path interferometer with a two-level internal degree.

A basis label combines the path (arm I or II) with an internal state drawn from
one of two families: the linear family {H, V} or the circular family {+, -}.
The families are related by the unitary change of basis

    |+> = (|H> + i|V>) / sqrt(2),      |-> = (|H> - i|V>) / sqrt(2),

so |H> = (|+> + |->)/sqrt(2) and |V> = -i(|+> - |->)/sqrt(2).  The circular
family doubles as the spin basis in the neutron scenarios.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Mapping

from .errors import BasisMismatchError, ZeroStateError

SQRT_HALF = 2.0 ** -0.5


class Path(str, Enum):
    I = "I"
    II = "II"


class Family(str, Enum):
    LINEAR = "linear"
    CIRCULAR = "circular"


class Internal(str, Enum):
    H = "H"
    V = "V"
    PLUS = "+"
    MINUS = "-"

    @property
    def family(self) -> Family:
        return Family.LINEAR if self in (Internal.H, Internal.V) else Family.CIRCULAR


@dataclass(frozen=True, order=True)
class BasisLabel:
    path: Path
    internal: Internal


# Expansion coefficients of each internal basis state in the other family.
_EXPANSION: dict[Internal, tuple[tuple[Internal, complex], ...]] = {
    Internal.H: ((Internal.PLUS, SQRT_HALF + 0j), (Internal.MINUS, SQRT_HALF + 0j)),
    Internal.V: ((Internal.PLUS, -1j * SQRT_HALF), (Internal.MINUS, 1j * SQRT_HALF)),
    Internal.PLUS: ((Internal.H, SQRT_HALF + 0j), (Internal.V, 1j * SQRT_HALF)),
    Internal.MINUS: ((Internal.H, SQRT_HALF + 0j), (Internal.V, -1j * SQRT_HALF)),
}


def _family_of_labels(labels) -> Family | None:
    families = {lab.internal.family for lab in labels}
    if len(families) > 1:
        raise BasisMismatchError("labels mix linear and circular internal states")
    return families.pop() if families else None


class DiscreteKet:
    """Finite superposition over basis labels, all in one internal family."""

    __slots__ = ("_amp", "_family")

    def __init__(self, amplitudes: Mapping[BasisLabel, complex]):
        amp = {lab: complex(v) for lab, v in sorted(amplitudes.items()) if v != 0}
        self._amp = amp
        self._family = _family_of_labels(amp) or Family.LINEAR

    @property
    def family(self) -> Family:
        return self._family

    def labels(self) -> tuple[BasisLabel, ...]:
        return tuple(self._amp)

    def items(self) -> Iterator[tuple[BasisLabel, complex]]:
        return iter(self._amp.items())

    def amplitude(self, label: BasisLabel) -> complex:
        return self._amp.get(label, 0j)

    def norm2(self) -> float:
        return sum(abs(v) ** 2 for v in self._amp.values())

    def normalized(self) -> "DiscreteKet":
        n2 = self.norm2()
        if n2 == 0.0:
            raise ZeroStateError("cannot normalize the zero ket")
        return self * (n2 ** -0.5)

    def to_family(self, family: Family) -> "DiscreteKet":
        if self._family is family or not self._amp:
            return self
        out: dict[BasisLabel, complex] = {}
        for lab, v in self._amp.items():
            for internal, coeff in _EXPANSION[lab.internal]:
                key = BasisLabel(lab.path, internal)
                out[key] = out.get(key, 0j) + v * coeff
        return DiscreteKet(out)

    def __add__(self, other: "DiscreteKet") -> "DiscreteKet":
        if not isinstance(other, DiscreteKet):
            return NotImplemented
        if self._amp and other._amp and self._family is not other._family:
            other = other.to_family(self._family)
        out = dict(self._amp)
        for lab, v in other.items():
            out[lab] = out.get(lab, 0j) + v
        return DiscreteKet(out)

    def __sub__(self, other: "DiscreteKet") -> "DiscreteKet":
        return self + (other * -1.0)

    def __mul__(self, scalar: complex) -> "DiscreteKet":
        return DiscreteKet({lab: v * scalar for lab, v in self._amp.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "DiscreteKet":
        return self * (1.0 / scalar)

    def __neg__(self) -> "DiscreteKet":
        return self * -1.0

    def __repr__(self) -> str:
        terms = ", ".join(f"({lab.path.value},{lab.internal.value}): {v:.6g}"
                          for lab, v in self._amp.items())
        return f"DiscreteKet({{{terms}}})"


class DiscreteOperator:
    """Sparse operator over basis labels; all labels share one internal family."""

    __slots__ = ("_entries", "_family")

    def __init__(self, entries: Mapping[tuple[BasisLabel, BasisLabel], complex]):
        ent = {key: complex(v) for key, v in sorted(entries.items()) if v != 0}
        labels = [r for r, _ in ent] + [c for _, c in ent]
        self._entries = ent
        self._family = _family_of_labels(labels) or Family.LINEAR

    @property
    def family(self) -> Family:
        return self._family

    def items(self) -> Iterator[tuple[tuple[BasisLabel, BasisLabel], complex]]:
        return iter(self._entries.items())

    def entry(self, row: BasisLabel, col: BasisLabel) -> complex:
        return self._entries.get((row, col), 0j)

    def to_family(self, family: Family) -> "DiscreteOperator":
        if self._family is family or not self._entries:
            return self
        out: dict[tuple[BasisLabel, BasisLabel], complex] = {}
        for (row, col), v in self._entries.items():
            for r_int, rc in _EXPANSION[row.internal]:
                for c_int, cc in _EXPANSION[col.internal]:
                    key = (BasisLabel(row.path, r_int), BasisLabel(col.path, c_int))
                    out[key] = out.get(key, 0j) + v * rc * cc.conjugate()
        return DiscreteOperator(out)

    def adjoint(self) -> "DiscreteOperator":
        return DiscreteOperator({(c, r): v.conjugate() for (r, c), v in self._entries.items()})

    def __add__(self, other: "DiscreteOperator") -> "DiscreteOperator":
        if not isinstance(other, DiscreteOperator):
            return NotImplemented
        if self._entries and other._entries and self._family is not other._family:
            other = other.to_family(self._family)
        out = dict(self._entries)
        for key, v in other.items():
            out[key] = out.get(key, 0j) + v
        return DiscreteOperator(out)

    def __sub__(self, other: "DiscreteOperator") -> "DiscreteOperator":
        return self + (other * -1.0)

    def __mul__(self, scalar: complex) -> "DiscreteOperator":
        return DiscreteOperator({key: v * scalar for key, v in self._entries.items()})

    __rmul__ = __mul__

    def __matmul__(self, other: "DiscreteOperator") -> "DiscreteOperator":
        if not isinstance(other, DiscreteOperator):
            return NotImplemented
        other = other.to_family(self._family)
        out: dict[tuple[BasisLabel, BasisLabel], complex] = {}
        for (row, mid), v in self._entries.items():
            for (mid2, col), w in other.items():
                if mid == mid2:
                    key = (row, col)
                    out[key] = out.get(key, 0j) + v * w
        return DiscreteOperator(out)


def basis_ket(path: Path, internal: Internal, amplitude: complex = 1.0) -> DiscreteKet:
    """Single basis ket |path, internal> scaled by `amplitude`."""
    return DiscreteKet({BasisLabel(path, internal): amplitude})


def inner(bra: DiscreteKet, ket: DiscreteKet) -> complex:
    """<bra|ket>, conjugate linear in the first argument.

    Kets in different internal families are compared after converting the
    second argument with the fixed linear/circular unitary.
    """
    ket = ket.to_family(bra.family)
    total = 0j
    for lab, v in bra.items():
        total += v.conjugate() * ket.amplitude(lab)
    return total


def apply(op: DiscreteOperator, ket: DiscreteKet) -> DiscreteKet:
    """op|ket>, returned in the operator's internal family."""
    ket = ket.to_family(op.family)
    out: dict[BasisLabel, complex] = {}
    for (row, col), v in op.items():
        amp = ket.amplitude(col)
        if amp != 0:
            out[row] = out.get(row, 0j) + v * amp
    return DiscreteKet(out)


def outer(ket: DiscreteKet, bra: DiscreteKet) -> DiscreteOperator:
    """|ket><bra| as a DiscreteOperator in the ket's family."""
    bra = bra.to_family(ket.family)
    entries: dict[tuple[BasisLabel, BasisLabel], complex] = {}
    for r, kv in ket.items():
        for c, bv in bra.items():
            entries[(r, c)] = kv * bv.conjugate()
    return DiscreteOperator(entries)


def projector(ket: DiscreteKet) -> DiscreteOperator:
    """Rank-one projector onto `ket` (normalized internally)."""
    n2 = ket.norm2()
    if n2 == 0.0:
        raise ZeroStateError("projector of the zero ket is undefined")
    return outer(ket, ket) * (1.0 / n2)


def identity(family: Family = Family.LINEAR) -> DiscreteOperator:
    internals = (Internal.H, Internal.V) if family is Family.LINEAR else (Internal.PLUS, Internal.MINUS)
    return DiscreteOperator({(BasisLabel(p, s), BasisLabel(p, s)): 1.0
                             for p in Path for s in internals})


def path_projector(path: Path, family: Family = Family.LINEAR) -> DiscreteOperator:
    """Projector onto one interferometer arm, identity on the internal state."""
    internals = (Internal.H, Internal.V) if family is Family.LINEAR else (Internal.PLUS, Internal.MINUS)
    return DiscreteOperator({(BasisLabel(path, s), BasisLabel(path, s)): 1.0 for s in internals})


def circular_spin() -> DiscreteOperator:
    """|+><+| - |-><-| on the internal state, identity on the path.

    In the linear family this sends |H> to i|V> and |V> to -i|H>.
    """
    entries = {}
    for p in Path:
        entries[(BasisLabel(p, Internal.PLUS), BasisLabel(p, Internal.PLUS))] = 1.0
        entries[(BasisLabel(p, Internal.MINUS), BasisLabel(p, Internal.MINUS))] = -1.0
    return DiscreteOperator(entries)


def detection_probability(state: DiscreteKet, post: DiscreteKet) -> float:
    """|<post|state>|^2 with `post` normalized first."""
    return abs(inner(post.normalized(), state)) ** 2
