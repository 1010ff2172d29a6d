import math

import numpy as np
import pytest

from chsh_coherent._kernels import TSIRELSON
from chsh_coherent.analytic import (
    CANONICAL_ANGLES,
    ChshAngles,
    ab_asymmetric_setup2,
    ab_symmetric_setup1,
    chsh,
    chsh_value,
)
from chsh_coherent.bell import BellSetup
from chsh_coherent.errors import IncompatibleSetupError
from chsh_coherent.oracle import (
    chsh_expectation,
    expectation_ab,
    expectation_chsh,
    resolve_cutoff,
)
from chsh_coherent.states import Family, StateSpec, build_asymmetric, build_cat, build_state

PI = math.pi


def test_vacuum_single_pair_expectation_vanishes():
    state = build_asymmetric(0.0, 0.0, 0.0, 60)
    report = expectation_ab(state, BellSetup.SINGLE_PAIR, 0.3, -0.8)
    assert report.value == pytest.approx(0.0, abs=1e-15)
    assert report.imaginary_residue < 1e-10
    assert report.cutoff == 60


def test_oracle_matches_symmetric_setup1_correlator():
    state = build_state(StateSpec(Family.SYMMETRIC, 0.1, 0.2, PI), 60)
    for a, b in [(0.0, PI / 4), (PI / 2, -PI / 4), (0.9, 0.3)]:
        num = expectation_ab(state, BellSetup.SINGLE_PAIR, a, b).value
        assert num == pytest.approx(ab_symmetric_setup1(0.1, 0.2, PI, a, b), abs=1e-8)


def test_oracle_matches_asymmetric_setup2_correlator():
    state = build_state(StateSpec(Family.ASYMMETRIC, 0.1, 0.1, PI), 60)
    for a, b in [(0.0, PI / 4), (PI / 2, -PI / 4)]:
        num = expectation_ab(state, BellSetup.ALL_PAIRS, a, b).value
        assert num == pytest.approx(ab_asymmetric_setup2(0.1, 0.1, PI, a, b), abs=1e-8)


def test_chsh_expectation_matches_assembly():
    state = build_cat("even", 0.1, 0.2, PI, 60)
    report = expectation_chsh(state, BellSetup.CAT_EVEN_PAIR, CANONICAL_ANGLES)
    assert abs(report.value) == pytest.approx(2.8278, abs=5e-4)
    parts = [
        expectation_ab(state, BellSetup.CAT_EVEN_PAIR, a, b).value
        for a, b in [
            (CANONICAL_ANGLES.a, CANONICAL_ANGLES.b),
            (CANONICAL_ANGLES.a_prime, CANONICAL_ANGLES.b),
            (CANONICAL_ANGLES.a, CANONICAL_ANGLES.b_prime),
            (CANONICAL_ANGLES.a_prime, CANONICAL_ANGLES.b_prime),
        ]
    ]
    assert report.value == pytest.approx(parts[0] + parts[1] + parts[2] - parts[3], abs=1e-14)


def test_saturation_rows_at_default_cutoff():
    rows = [
        (Family.SYMMETRIC, BellSetup.SINGLE_PAIR, 0.001, 0.002),
        (Family.SYMMETRIC, BellSetup.ALL_PAIRS, 0.001, 0.002),
        (Family.ASYMMETRIC, BellSetup.SINGLE_PAIR, 0.06, 0.06),
        (Family.ASYMMETRIC, BellSetup.ALL_PAIRS, 0.1, 0.1),
        (Family.CAT_EVEN, BellSetup.CAT_EVEN_PAIR, 0.07, 0.08),
        (Family.CAT_ODD, BellSetup.CAT_ODD_PAIR, 0.08, 0.09),
    ]
    for family, setup, alpha, beta in rows:
        report = chsh_expectation(family, setup, alpha, beta, PI, CANONICAL_ANGLES, cutoff=60)
        assert abs(report.value) == pytest.approx(2.8284, abs=5e-4)


def test_collapsed_angles_local_bound():
    angles = ChshAngles(0.7, 0.7, -0.2, -0.2)
    for family, setup in [
        (Family.SYMMETRIC, BellSetup.SINGLE_PAIR),
        (Family.ASYMMETRIC, BellSetup.ALL_PAIRS),
        (Family.CAT_EVEN, BellSetup.CAT_EVEN_PAIR),
    ]:
        report = chsh_expectation(family, setup, 0.2, 0.5, PI, angles, cutoff=60)
        assert abs(report.value) <= 2.0 + 1e-9


def test_cutoff_convergence():
    for family, setup, a, b, phi in [
        (Family.SYMMETRIC, BellSetup.SINGLE_PAIR, 0.4, 0.9, PI),
        (Family.ASYMMETRIC, BellSetup.ALL_PAIRS, 1.2, 1.5, 2.1),
        (Family.CAT_ODD, BellSetup.CAT_ODD_PAIR, 0.7, 1.4, PI),
    ]:
        v60 = chsh_expectation(family, setup, a, b, phi, CANONICAL_ANGLES, cutoff=60).value
        v80 = chsh_expectation(family, setup, a, b, phi, CANONICAL_ANGLES, cutoff=80).value
        assert abs(v60 - v80) < 1e-10


def test_parity_mismatch_rejected():
    even = build_cat("even", 0.1, 0.2, PI, 60)
    with pytest.raises(IncompatibleSetupError):
        expectation_ab(even, BellSetup.CAT_ODD_PAIR, 0.0, 0.0)
    with pytest.raises(IncompatibleSetupError):
        expectation_ab(even, BellSetup.ALL_PAIRS, 0.0, 0.0)
    sym = build_state(StateSpec(Family.SYMMETRIC, 0.1, 0.2, PI), 60)
    with pytest.raises(IncompatibleSetupError):
        expectation_chsh(sym, BellSetup.CAT_EVEN_PAIR, CANONICAL_ANGLES)


def test_resolve_cutoff_auto_raises_for_large_displacement():
    assert resolve_cutoff(0.5, 1.2) == 60
    big = resolve_cutoff(5.0, 5.0)
    assert big > 60 and big % 2 == 0
    assert big == 96  # rule: max(40, ceil(25 + 50 + 20)) rounded up to even


def test_auto_raised_cutoff_reproduces_large_displacement_value():
    report = chsh_expectation(Family.ASYMMETRIC, BellSetup.ALL_PAIRS, 5.0, 5.0, PI, CANONICAL_ANGLES)
    assert report.cutoff == 96
    assert report.truncation_bound < 1e-12
    assert report.value == pytest.approx(2.7997, abs=5e-4)
    assert report.value == pytest.approx(
        chsh(ab_asymmetric_setup2, 5.0, 5.0, PI, CANONICAL_ANGLES), abs=1e-10
    )


def test_truncation_bound_reported_for_forced_cutoff():
    report = chsh_expectation(Family.ASYMMETRIC, BellSetup.SINGLE_PAIR, 2.0, 2.0, PI,
                              CANONICAL_ANGLES, cutoff=20)
    assert report.truncation_bound > 1e-12


def test_ceiling_over_random_tuples():
    rng = np.random.default_rng(7)
    for _ in range(25):
        a, b = rng.uniform(0.05, 1.4, size=2)
        phi = rng.uniform(0.0, 2 * PI)
        angles = ChshAngles(*rng.uniform(-PI, PI, size=4))
        for family, setup in [
            (Family.SYMMETRIC, BellSetup.ALL_PAIRS),
            (Family.ASYMMETRIC, BellSetup.SINGLE_PAIR),
            (Family.CAT_EVEN, BellSetup.CAT_EVEN_PAIR),
        ]:
            report = chsh_expectation(family, setup, a, b, phi, angles, cutoff=60)
            assert abs(report.value) <= TSIRELSON + 1e-9
            assert report.imaginary_residue < 1e-10


def test_oracle_agrees_with_analytic_near_diagonal_line():
    # beta = alpha + 0.001 stresses the closed forms; the oracle absorbs it
    for alpha in (0.05, 0.4, 1.0):
        ana = chsh_value(Family.SYMMETRIC, BellSetup.SINGLE_PAIR, alpha, alpha + 0.001, PI)
        num = chsh_expectation(Family.SYMMETRIC, BellSetup.SINGLE_PAIR, alpha, alpha + 0.001,
                               PI, CANONICAL_ANGLES, cutoff=60).value
        assert ana == pytest.approx(num, abs=1e-6)
