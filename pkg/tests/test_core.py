import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fcsim.core import (
    C_SI,
    HBAR_SI,
    PLANCK_TIME_S,
    InvalidParameterError,
    InteractionKind,
    UnitSystem,
    format_float,
    lifetime_from_gamma,
    validate_gamma,
    validate_lifetime,
)


def test_constants():
    assert HBAR_SI == 1.054571817e-34
    assert C_SI == 2.99792458e8
    assert PLANCK_TIME_S == 5.39056e-44


def test_unit_systems():
    nat = UnitSystem.natural()
    assert (nat.hbar, nat.c) == (1.0, 1.0)
    si = UnitSystem.si()
    assert (si.hbar, si.c) == (HBAR_SI, C_SI)
    assert UnitSystem.from_mode("natural") == nat
    assert UnitSystem.from_mode("si") == si
    with pytest.raises(InvalidParameterError):
        UnitSystem.from_mode("cgs")
    with pytest.raises(InvalidParameterError):
        UnitSystem("natural", 2.0, 1.0)
    with pytest.raises(InvalidParameterError):
        UnitSystem("si", -1.0, C_SI)


def test_lifetime_simple_reciprocal():
    nat = UnitSystem.natural()
    assert lifetime_from_gamma(1.0, nat) == 1.0
    assert lifetime_from_gamma(2.0, nat) == 0.5
    assert lifetime_from_gamma(0.5, nat) == 2.0


def test_lifetime_si_example():
    # hand-derived: 1.054571817e-34 / 1.9561e9 = 5.391195833546342e-44,
    # within 0.1% of the primordial preset
    tau = lifetime_from_gamma(1.9561e9, UnitSystem.si())
    assert tau == 5.391195833546342e-44
    assert f"{tau:.4g}" == "5.391e-44"
    assert abs(tau - PLANCK_TIME_S) / PLANCK_TIME_S < 1e-3


def test_gamma_validation():
    for bad in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(InvalidParameterError):
            validate_gamma(bad)
    assert validate_gamma(3) == 3.0
    for bad in (0.0, -2.0, math.inf, math.nan):
        with pytest.raises(InvalidParameterError):
            validate_lifetime(bad)


def test_interaction_kinds():
    assert [k.value for k in InteractionKind] == ["strong", "em", "weak", "grav"]
    assert InteractionKind("em") is InteractionKind.EM


@given(st.floats(min_value=1e-3, max_value=1e3, allow_nan=False))
def test_lifetime_inverts_gamma(gamma):
    tau = lifetime_from_gamma(gamma, UnitSystem.natural())
    assert abs(tau * gamma - 1.0) <= 1e-12


@given(st.floats(min_value=-1e300, max_value=1e300, allow_nan=False))
def test_format_float_round_trips(x):
    assert float(format_float(x)) == x
