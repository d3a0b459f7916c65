"""Physical constants, unit systems, and the reciprocal lifetime law.

Every lifetime in the simulator comes from one rule: a system that stores
energy ``gamma`` in its clock degree of freedom reconfigures on the scale
``hbar / gamma``.  This module owns the constants, the unit conventions
(natural vs SI), and the scalar validation used everywhere else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

HBAR_SI = 1.054571817e-34  # J*s
C_SI = 2.99792458e8  # m/s

# Root-node preset lifetime in seconds.  Kept at the rounded legacy value;
# CODATA 2018 puts the Planck time at 5.391247e-44 s.
PLANCK_TIME_S = 5.39056e-44


class FcsimError(ValueError):
    """Base class for every error this package raises on bad input."""


class InvalidParameterError(FcsimError):
    """A scalar argument violates its domain (non-positive, NaN, ...)."""


class InvalidStateError(FcsimError):
    """A state vector or qubit constraint is violated."""


class CapacityError(FcsimError):
    """A tensor product would exceed the configured dimension cap."""


class TopologyError(FcsimError):
    """A node, channel, or path reference does not resolve."""


class CausalityError(FcsimError):
    """An event was scheduled before the current simulation time."""


class IntegrityError(FcsimError):
    """An event log is internally inconsistent."""


class InsufficientDataError(FcsimError):
    """An estimator was asked for more than the log contains."""


class InteractionKind(str, Enum):
    STRONG = "strong"
    EM = "em"
    WEAK = "weak"
    GRAV = "grav"


@dataclass(frozen=True)
class UnitSystem:
    """Unit convention for a run: natural (hbar = c = 1) or SI."""

    mode: str
    hbar: float
    c: float

    def __post_init__(self) -> None:
        if self.mode not in ("natural", "si"):
            raise InvalidParameterError(f"unknown unit mode {self.mode!r}")
        if not (math.isfinite(self.hbar) and self.hbar > 0):
            raise InvalidParameterError("hbar must be positive and finite")
        if not (math.isfinite(self.c) and self.c > 0):
            raise InvalidParameterError("c must be positive and finite")
        # natural mode pins both constants to exactly 1.0 so that lifetimes
        # and energies come out as plain reciprocals
        if self.mode == "natural" and (self.hbar != 1.0 or self.c != 1.0):
            raise InvalidParameterError("natural units require hbar = c = 1")

    @classmethod
    def natural(cls) -> "UnitSystem":
        return cls("natural", 1.0, 1.0)

    @classmethod
    def si(cls) -> "UnitSystem":
        return cls("si", HBAR_SI, C_SI)

    @classmethod
    def from_mode(cls, mode: str) -> "UnitSystem":
        if mode == "natural":
            return cls.natural()
        if mode == "si":
            return cls.si()
        raise InvalidParameterError(f"unknown unit mode {mode!r}")


def validate_gamma(gamma: float) -> float:
    """Check a reconfiguration energy. Zero is rejected: a system that stores
    no energy in its clock degree of freedom never ticks."""
    gamma = float(gamma)
    if not (math.isfinite(gamma) and gamma > 0):
        raise InvalidParameterError(f"gamma must be positive and finite, got {gamma!r}")
    return gamma


def validate_lifetime(tau: float) -> float:
    tau = float(tau)
    if not (math.isfinite(tau) and tau > 0):
        raise InvalidParameterError(f"lifetime must be positive and finite, got {tau!r}")
    return tau


def lifetime_from_gamma(gamma: float, units: UnitSystem) -> float:
    """Intrinsic lifetime of a clock: hbar over its reconfiguration energy."""
    gamma = validate_gamma(gamma)
    return units.hbar / gamma


def format_float(x: float) -> str:
    """17 significant digits: enough to round-trip any double exactly, so
    exported logs are byte-stable across runs."""
    return f"{x:.17g}"
