"""Finite-dimensional complex state vectors.

Covers the algebra the chronology layer needs: qubits, tensor products with a
hard dimension cap, the triplet state assembled at each detection (time label,
energy pulse, induced system state), and the destructive readout that trades
the non-label factors for a classical time value plus an information-loss
tally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import CapacityError, InvalidStateError

DIM_CAP = 2 ** 20  # default ceiling on realized product dimensions
QUBIT_NORM_TOL = 1e-9


def _as_amplitudes(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim != 1 or arr.size < 1:
        raise InvalidStateError("amplitudes must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(arr)):
        raise InvalidStateError("amplitudes must be finite")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """Dense complex state. The amplitude array is copied and frozen."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "amplitudes", _as_amplitudes(self.amplitudes))
        if not math.isfinite(self.norm()):
            raise InvalidStateError("state norm overflows")

    @property
    def dim(self) -> int:
        return int(self.amplitudes.size)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @classmethod
    def basis(cls, dim: int, index: int = 0) -> "StateVector":
        if dim < 1:
            raise InvalidStateError(f"dimension must be >= 1, got {dim}")
        if not 0 <= index < dim:
            raise InvalidStateError(f"basis index {index} out of range for dim {dim}")
        amps = np.zeros(dim, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps)


def tensor_product(a: StateVector, b: StateVector, max_dim: int = DIM_CAP) -> StateVector:
    """Kronecker product; amplitude (i*b.dim + j) is a[i]*b[j]."""
    if a.dim * b.dim > max_dim:
        raise CapacityError(
            f"tensor product dimension {a.dim * b.dim} exceeds cap {max_dim}"
        )
    return StateVector(np.kron(a.amplitudes, b.amplitudes))


@dataclass(frozen=True)
class Qubit:
    """Two-level amplitude pair; must be normalized on construction."""

    alpha1: complex
    alpha2: complex

    def __post_init__(self) -> None:
        a1, a2 = complex(self.alpha1), complex(self.alpha2)
        for a in (a1, a2):
            if not (math.isfinite(a.real) and math.isfinite(a.imag)):
                raise InvalidStateError("qubit amplitudes must be finite")
        object.__setattr__(self, "alpha1", a1)
        object.__setattr__(self, "alpha2", a2)
        total = abs(a1) ** 2 + abs(a2) ** 2
        if abs(total - 1.0) > QUBIT_NORM_TOL:
            raise InvalidStateError(
                f"qubit probabilities sum to {total!r}, not 1 within {QUBIT_NORM_TOL}"
            )

    def to_state(self) -> StateVector:
        return StateVector(np.array([self.alpha1, self.alpha2], dtype=np.complex128))


def make_qubit(alpha1: complex, alpha2: complex) -> Qubit:
    return Qubit(complex(alpha1), complex(alpha2))


# energy pulse as it arrives at a detector: excitation present with certainty
ON_PULSE = Qubit(0j, 1 + 0j)


@dataclass(frozen=True)
class TimeLabelState:
    """Classical tick count carried as a 1-dimensional label factor."""

    t_j: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.t_j):
            raise InvalidStateError(f"time label must be finite, got {self.t_j!r}")


def compose_induced(phi: StateVector, ce: StateVector, max_dim: int = DIM_CAP) -> StateVector:
    """State induced on the absorber joined with its local environment."""
    return tensor_product(phi, ce, max_dim)


@dataclass(frozen=True, eq=False)
class TripletState:
    """Post-detection composite: label (x) pulse qubit (x) induced state.

    The label is classical, so the realized vector is the pulse/induced
    product tagged with the label factor rather than a 3-way kron.
    """

    label: TimeLabelState
    pulse: Qubit
    induced: StateVector
    product: StateVector


def make_triplet(
    label: TimeLabelState,
    pulse: Qubit,
    induced: StateVector,
    max_dim: int = DIM_CAP,
) -> TripletState:
    product = tensor_product(pulse.to_state(), induced, max_dim)
    return TripletState(label, pulse, induced, product)


@dataclass(frozen=True)
class DisentanglementRecord:
    """What the destructive time readout threw away."""

    discarded_dim: int
    information_loss_bits: float


def disentangle(t: TripletState) -> tuple[float, DisentanglementRecord]:
    """Read the time label out of a triplet, discarding the quantum factors.

    Returns the label value exactly as stored, plus a record of the discarded
    pulse-and-induced dimension (2 * induced dim) and its log2 in bits.
    """
    discarded = 2 * t.induced.dim
    return t.label.t_j, DisentanglementRecord(discarded, math.log2(discarded))
