import math

import pytest
from hypothesis import given, strategies as st

from cliquewitness.params import WitnessParams, derive_alphas


def test_derived_alpha_values():
    p = derive_alphas(0.01, 0.5)
    assert p.alpha1 == 0.01
    assert p.alpha2 == 2 * 0.01**2 / 0.5
    assert p.alpha3 == 0.01**3 / 0.5**3
    assert p.alpha4 == 8 * 0.01**4 / 0.5**6
    assert p.kappa == 0.01
    assert p.p == 0.5


def test_alpha_of_size_and_by_union_size():
    p = derive_alphas(0.02, 0.3)
    assert p.alpha_of_size(0) == 1.0
    for s in range(1, 5):
        assert p.alpha_of_size(s) == p.alpha[s - 1]
    with pytest.raises(ValueError):
        p.alpha_of_size(5)
    by = p.by_union_size()
    assert by.shape == (5,)
    assert by[0] == 1.0
    assert tuple(by[1:]) == p.alpha


def test_singleton_alpha_equals_kappa_exactly():
    # the leading coefficient is the density itself, no rounding applied
    for kappa in (1e-6, 1 / 3, 0.249999):
        assert derive_alphas(kappa, 0.5).alpha1 == kappa


def test_range_feasible():
    assert derive_alphas(0.01, 0.5).range_feasible
    big = WitnessParams(kappa=None, p=0.5, alpha=(0.5, 1.5, 0.1, 0.1))
    assert not big.range_feasible
    with pytest.raises(ValueError):
        WitnessParams(kappa=None, p=0.5, alpha=(0.5, -0.1, 0.1, 0.1))


def test_parameter_validation():
    with pytest.raises(ValueError):
        derive_alphas(0.0, 0.5)
    with pytest.raises(ValueError):
        derive_alphas(0.01, 0.0)
    with pytest.raises(ValueError):
        derive_alphas(0.01, 1.5)
    with pytest.raises(ValueError):
        WitnessParams(kappa=0.1, p=0.5, alpha=(0.1, 0.1, 0.1))


@given(
    kappa=st.floats(min_value=1e-6, max_value=0.2),
    p=st.floats(min_value=0.05, max_value=0.99),
)
def test_alpha_monotone_decreasing(kappa, p):
    # small densities give a strictly decreasing coefficient ladder whenever
    # kappa < p^3 / 8, which holds across this strategy except tiny-p corners
    pr = derive_alphas(kappa, p)
    if kappa <= p**3 / 8:
        assert pr.alpha1 >= pr.alpha2 >= pr.alpha3 >= pr.alpha4
        assert pr.range_feasible


@given(st.integers(min_value=5, max_value=40))
def test_window_shape_value(n):
    # at the top of the density window the admissibility score collapses to a
    # constant: (kappa log n)^(1/4) n^(1/6) == c0^(1/4) when
    # kappa = c0 n^(-2/3) / log n
    c0 = 0.25
    kappa = c0 * n ** (-2 / 3) / math.log(n)
    score = (kappa * math.log(n)) ** 0.25 * n ** (1 / 6)
    assert abs(score - c0**0.25) <= 1e-12
