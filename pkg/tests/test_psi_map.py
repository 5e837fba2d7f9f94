import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psispec import psi_map
from psispec.errors import DomainError, ParameterError
from psispec.psi_map import PsiMap


def test_endpoints_map_to_reference_ends(any_map):
    assert any_map.to_reference(any_map.a) == pytest.approx(-1.0, abs=1e-15)
    assert any_map.to_reference(any_map.b) == pytest.approx(1.0, abs=1e-14)
    assert any_map.from_reference(-1.0) == pytest.approx(any_map.a, abs=1e-14)
    assert any_map.from_reference(1.0) == pytest.approx(any_map.b, abs=1e-12)


def test_log_midpoint(log_map):
    assert log_map.kappa == pytest.approx(2.0)
    assert log_map.to_reference(math.sqrt(math.e)) == pytest.approx(0.0, abs=1e-15)


def test_power_inverse_at_zero():
    p = psi_map.power(0.0, 1.0)
    assert p.from_reference(0.0) == pytest.approx(0.5 ** (1 / 2.3), rel=1e-13)


def test_round_trip_and_monotone(any_map):
    x = np.linspace(any_map.a, any_map.b, 100)
    s = any_map.to_reference(x)
    assert np.all(np.diff(s) > 0)
    assert np.max(np.abs(any_map.from_reference(s) - x)) <= 1e-11 * (any_map.b - any_map.a)


def test_out_of_domain(log_map):
    with pytest.raises(DomainError):
        log_map.to_reference(0.5)
    with pytest.raises(DomainError):
        log_map.from_reference(1.5)


def test_non_monotone_map_rejected():
    with pytest.raises(ParameterError):
        PsiMap("cos", 0.0, 3.0, np.cos, lambda x: -np.sin(x))


def test_bisection_inverse_fallback():
    p = PsiMap("cubic", 0.5, 2.0, lambda x: x**3 + x, lambda x: 3 * x**2 + 1)
    x = np.linspace(0.5, 2.0, 17)
    assert np.allclose(p.inv(p.psi(x)), x, atol=1e-13)


def test_delta_psi_examples(any_map, log_map):
    assert psi_map.identity(0, 2).delta_psi(lambda x: x * x, 1.0, 1) == pytest.approx(2.0, rel=1e-9)
    xm = 0.5 * (any_map.a + any_map.b)
    assert any_map.delta_psi(lambda x: float(any_map.psi(x)), xm, 1) == pytest.approx(1.0, rel=1e-9)
    assert log_map.delta_psi(lambda x: math.log(x) ** 3, 2.0, 2) == pytest.approx(6 * math.log(2.0), rel=1e-7)


@settings(max_examples=25, deadline=None)
@given(c=st.floats(-5, 5), frac=st.floats(0.05, 0.95))
def test_delta_psi_linear(c, frac):
    p = psi_map.sin()
    x = p.a + frac * (p.b - p.a)
    f, g = (lambda z: math.exp(z)), (lambda z: z**3)
    lhs = p.delta_psi(lambda z: c * f(z) + g(z), x, 1)
    rhs = c * p.delta_psi(f, x, 1) + p.delta_psi(g, x, 1)
    assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-8)


@settings(max_examples=50, deadline=None)
@given(frac=st.floats(0.0, 1.0))
def test_round_trip_property(frac):
    for name in ("quadratic", "tan", "power"):
        p = psi_map.make_map(name)
        x = p.a + frac * (p.b - p.a)
        # rounding in s costs eps / (kappa psi'(x)) in x; unbounded where psi' vanishes (power at 0)
        d = p.kappa * float(p.dpsi(np.array(x)))
        cond = 4e-16 / d if d > 0 else math.inf
        assert abs(float(p.from_reference(p.to_reference(x))) - x) <= 1e-11 * (p.b - p.a) + cond


def test_make_map_parsing():
    assert psi_map.make_map("power:1.5").psi(np.array(4.0)) == pytest.approx(8.0)
    assert psi_map.make_map("quadratic", 1.0, 4.0).b == 4.0
    with pytest.raises(ParameterError):
        psi_map.make_map("nope")
    with pytest.raises(ParameterError):
        psi_map.make_map("log:3")
