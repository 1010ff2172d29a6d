import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import poisson

from chsh_coherent import fock
from chsh_coherent.errors import (
    DegenerateStateError,
    DimensionMismatchError,
    InvalidArgumentError,
)


def direct_coherent(alpha, cutoff):
    """Factorial-based evaluation, the independent route for the recurrence."""
    return np.array(
        [math.exp(-alpha * alpha / 2) * alpha**n / math.sqrt(math.factorial(n))
         for n in range(cutoff)]
    )


def test_vacuum():
    v = fock.coherent_amplitudes(0.0, 4)
    assert np.array_equal(v.amplitudes, np.array([1, 0, 0, 0], dtype=complex))


def test_two_leading_terms_alpha_one():
    v = fock.coherent_amplitudes(1.0, 2)
    expected = math.exp(-0.5)
    assert v.amplitudes[0].real == pytest.approx(expected, abs=1e-15)
    assert v.amplitudes[1].real == pytest.approx(expected, abs=1e-15)


def test_norm_alpha_half():
    v = fock.coherent_amplitudes(0.5, 40)
    # oracle: direct summation of e^{-a^2} a^{2n}/n!
    direct = sum(math.exp(-0.25) * 0.25**n / math.factorial(n) for n in range(40))
    assert abs(v.norm_sq() - 1.0) < 1e-14
    assert v.norm_sq() == pytest.approx(direct, abs=1e-15)


@pytest.mark.parametrize("alpha", [round(0.1 * k, 1) for k in range(21)])
def test_normalization_grid(alpha):
    n = max(40, math.ceil(alpha**2 + 10 * alpha + 20))
    v = fock.coherent_amplitudes(alpha, n)
    assert abs(v.norm_sq() - 1.0) <= 1e-12


@pytest.mark.parametrize("alpha", [0.0, 0.3, 0.7, 1.1, 1.6, 2.0])
def test_truncated_eigenstate_property(alpha):
    n = max(40, math.ceil(alpha**2 + 10 * alpha + 20))
    v = fock.coherent_amplitudes(alpha, n)
    resid = fock.annihilation_matrix(n) @ v.amplitudes - alpha * v.amplitudes
    assert np.linalg.norm(resid[: n - 1]) <= 1e-10


def test_recurrence_matches_factorial():
    for alpha in (0.3, 1.0, 2.0):
        v = fock.coherent_amplitudes(alpha, 31)
        assert np.max(np.abs(v.amplitudes.real - direct_coherent(alpha, 31))) < 1e-13


def test_cat_parity_support():
    even = fock.cat_amplitudes(0.5, "even", 40)
    odd = fock.cat_amplitudes(0.5, "odd", 40)
    assert np.all(even.amplitudes[1::2] == 0)
    assert np.all(odd.amplitudes[0::2] == 0)
    assert even.amplitudes[1] == 0 and even.amplitudes[3] == 0


def test_odd_cat_matches_renormalized_difference():
    # oracle: normalize |a> - |-a> numerically, compare componentwise
    n = 40
    plus = fock.coherent_amplitudes(0.5, n).amplitudes
    minus = fock.coherent_amplitudes(-0.5, n).amplitudes
    raw = plus - minus
    raw = raw / np.linalg.norm(raw)
    odd = fock.cat_amplitudes(0.5, "odd", n)
    assert abs(odd.norm_sq() - 1.0) < 1e-12
    assert np.max(np.abs(odd.amplitudes - raw)) < 1e-12


def test_even_cat_matches_renormalized_sum():
    n = 40
    plus = fock.coherent_amplitudes(0.5, n).amplitudes
    minus = fock.coherent_amplitudes(-0.5, n).amplitudes
    raw = plus + minus
    raw = raw / np.linalg.norm(raw)
    even = fock.cat_amplitudes(0.5, "even", n)
    assert np.max(np.abs(even.amplitudes - raw)) < 1e-12


def test_even_cat_small_alpha_limit_is_vacuum():
    v = fock.cat_amplitudes(1e-8, "even", 4)
    assert abs(v.amplitudes[0] - 1.0) < 1e-12
    assert np.all(np.abs(v.amplitudes[1:]) < 1e-12)


def test_overlap_self():
    v = fock.coherent_amplitudes(0.3, 40)
    assert abs(fock.overlap(v, v) - 1.0) < 1e-12


def test_overlap_closed_form():
    u = fock.coherent_amplitudes(0.1, 40)
    v = fock.coherent_amplitudes(0.2, 40)
    # <a|b> = exp(-(a-b)^2/2) for real displacements
    assert abs(fock.overlap(u, v) - 0.99501247919268231) < 1e-10


def test_overlap_parity_orthogonality():
    even = fock.cat_amplitudes(0.5, "even", 40)
    odd = fock.cat_amplitudes(0.5, "odd", 40)
    assert fock.overlap(even, odd) == 0


def test_overlap_dimension_mismatch():
    u = fock.coherent_amplitudes(0.1, 10)
    v = fock.coherent_amplitudes(0.1, 12)
    with pytest.raises(DimensionMismatchError):
        fock.overlap(u, v)


def test_truncation_error_zero_alpha():
    assert fock.truncation_error(0.0, 7) == 0.0


def test_truncation_error_frozen_values():
    # frozen from 40-digit tail summation
    assert fock.truncation_error(1.0, 20) < 1e-18
    assert fock.truncation_error(1.0, 20) == pytest.approx(1.587527601073263e-19, rel=1e-10)
    assert fock.truncation_error(2.0, 8) == pytest.approx(0.051133615792847339, abs=1e-14)


def test_truncation_error_matches_scipy_tail():
    for alpha, n in [(0.7, 5), (1.5, 12), (2.0, 8), (3.0, 25)]:
        assert fock.truncation_error(alpha, n) == pytest.approx(
            float(poisson.sf(n - 1, alpha * alpha)), rel=1e-10
        )


def test_truncation_error_monotone_in_cutoff():
    vals = [fock.truncation_error(1.3, n) for n in range(1, 30)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    assert all(0.0 <= v <= 1.0 for v in vals)


@given(st.floats(min_value=0.0, max_value=3.0), st.integers(min_value=1, max_value=60))
def test_truncation_error_in_unit_interval(alpha, cutoff):
    v = fock.truncation_error(alpha, cutoff)
    assert 0.0 <= v <= 1.0


@given(st.floats(min_value=-2.0, max_value=2.0), st.floats(min_value=-2.0, max_value=2.0))
def test_overlap_conjugate_symmetry(a, b):
    u = fock.coherent_amplitudes(a, 40)
    v = fock.coherent_amplitudes(b, 40)
    assert fock.overlap(u, v) == pytest.approx(np.conj(fock.overlap(v, u)), abs=1e-14)


def test_invalid_arguments():
    with pytest.raises(InvalidArgumentError):
        fock.coherent_amplitudes(0.5, 0)
    with pytest.raises(InvalidArgumentError):
        fock.coherent_amplitudes(float("nan"), 10)
    with pytest.raises(InvalidArgumentError):
        fock.coherent_amplitudes(10.5, 10)
    with pytest.raises(InvalidArgumentError):
        fock.cat_amplitudes(0.5, "even", 1)
    with pytest.raises(InvalidArgumentError):
        fock.cat_amplitudes(0.5, "sideways", 10)
    with pytest.raises(DegenerateStateError):
        fock.cat_amplitudes(0.0, "odd", 10)
    with pytest.raises(InvalidArgumentError):
        fock.truncation_error(1.0, 0)


def test_default_cutoff_rule():
    assert fock.default_cutoff(1.0) == 40
    assert fock.default_cutoff(5.0) == 95
    assert fock.truncation_error(5.0, 96) < 1e-12


def test_fock_vector_immutable():
    v = fock.coherent_amplitudes(0.5, 10)
    with pytest.raises(ValueError):
        v.amplitudes[0] = 0.0
