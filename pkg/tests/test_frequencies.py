# -*- coding: utf-8 -*-

# Copyright (C) 2021  Joe Pearson
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.

"""Tests of the frequencies and the small divisors."""

from fractions import Fraction
import itertools
import math

from hypothesis import given, strategies as st
import numpy as np
import pytest

from beamnf.core import MassError, NotAdmissibleError
from beamnf.frequencies import (Divisor, DivisorKind, DivisorTable,
                                check_mass, derivative_determinant,
                                derivative_matrix, divisor_eval,
                                eigenfrequency, exclusion_masses,
                                formal_sum, freq_derivatives,
                                mass_exclusion_estimate, min_divisor_scan,
                                min_frequency_gap, upsilon,
                                vandermonde_factorization,
                                within_frequency_bounds)

A1 = [[1], [2]]
A2 = [[0, 1], [1, -1]]

masses = st.floats(1.0, 2.0)


def test_eigenfrequency():
    assert eigenfrequency([1, 1], 1.5) == pytest.approx(math.sqrt(5.5))
    assert eigenfrequency(0, 2.0) == pytest.approx(math.sqrt(2))

    with pytest.raises(MassError):
        eigenfrequency(1, 0.5)
    with pytest.raises(MassError):
        eigenfrequency(1, 2.5)


def test_exceptional_mass_warns(caplog):
    eigenfrequency(1, 4 / 3)
    assert 'exceptional mass' in caplog.text


@given(st.integers(0, 900), masses)
def test_frequency_bounds(n2, m):
    assert within_frequency_bounds(n2, m)


@pytest.mark.parametrize('m', [1, 1.25, 1.5, 1.75, 2])
@pytest.mark.parametrize('d', [1, 2, 3])
def test_small_divisor_floor(d, m):
    assert min_frequency_gap(d, 30, m) >= 0.25


def test_small_divisor_floor_exhaustive():
    norms = np.arange(0, 901, dtype=float)
    for m in (1, 1.25, 1.5, 1.75, 2):
        lam = np.sqrt(norms ** 2 + m)
        gaps = np.abs(lam[:, None] - lam[None, :])
        gaps[np.diag_indices_from(gaps)] = np.inf
        assert gaps.min() >= 0.25


def test_upsilon():
    assert upsilon(0) == 1
    assert upsilon(1) == Fraction(-1, 2)
    assert upsilon(2) == Fraction(-1, 4)
    assert upsilon(3) == Fraction(-3, 8)


@given(st.integers(0, 100), st.floats(1.1, 1.9))
def test_derivatives_match_finite_differences(n2, m):
    h = 1e-4

    def derivative(j, mass):
        if j == 0:
            return eigenfrequency(n2, mass)
        return freq_derivatives(n2, mass, j)[-1]

    analytic = freq_derivatives(n2, m, 3)
    for j in (1, 2, 3):
        numeric = (derivative(j - 1, m + h) - derivative(j - 1, m - h)) / 2 / h
        assert numeric == pytest.approx(analytic[j - 1], rel=1e-6)


@pytest.mark.parametrize('norms', [[0, 1], [1, 2, 4], [0, 1, 2, 4],
                                   [1, 2, 5, 8]])
@pytest.mark.parametrize('m', [1.0, 1.5, 2.0])
def test_determinant_factorization(norms, m):
    assert derivative_determinant(norms, m) == pytest.approx(
        vandermonde_factorization(norms, m), rel=1e-9)


def test_divisor_validation():
    with pytest.raises(ValueError):
        Divisor(DivisorKind.D0, [0, 0])
    with pytest.raises(ValueError):
        Divisor(DivisorKind.D1, [1, 0])
    with pytest.raises(ValueError):
        Divisor(DivisorKind.D2PLUS, [1, 0], a=[3])


def test_trivial_resonances():
    # lambda_{-1} - lambda_{(1)} vanishes formally
    divisor = Divisor(DivisorKind.D1, [-1, 0], a=[-1])
    assert formal_sum(divisor, A1) == {}
    assert divisor_eval(divisor, A1, 1.5) == (0, True)

    divisor = Divisor(DivisorKind.D2MINUS, [0, 0], a=[3], b=[-3])
    assert divisor_eval(divisor, A1, 1.2).trivial_resonance

    divisor = Divisor(DivisorKind.D0, [1, -1])
    value = divisor_eval(divisor, A1, 1.5)
    assert not value.trivial_resonance
    assert value.value == pytest.approx(math.sqrt(2.5) - math.sqrt(17.5))


def test_formal_sum_needs_one_entry_per_mode():
    with pytest.raises(ValueError):
        formal_sum(Divisor(DivisorKind.D0, [1]), A1)


def test_divisor_table():
    table = DivisorTable(A2, 2, 2)
    values = table.values(1.5)
    assert len(values) == len(table)

    for i in np.flatnonzero(table.trivial):
        assert abs(values[i]) < 1e-12

    i = 7
    divisor = table.divisor(i)
    assert divisor_eval(divisor, A2, 1.5).value == pytest.approx(values[i])

    with pytest.raises(NotAdmissibleError):
        DivisorTable([[1, 0], [0, 1]], 2, 2)
    with pytest.raises(ValueError):
        DivisorTable(A2, 0, 2)


ORACLE_MASSES = (1.1, 1.45, 1.9)


def _vanishes(values):
    return all(abs(value) < 1e-9 for value in values)


@pytest.mark.parametrize('A, K, N', [(A1, 3, 3), (A2, 2, 2), (A2, 3, 3)])
def test_table_flags_match_vanishing_divisors(A, K, N):
    table = DivisorTable(A, K, N)
    values = np.array([table.values(m) for m in ORACLE_MASSES])
    vanishing = np.all(np.abs(values) < 1e-9, axis=0)
    np.testing.assert_array_equal(table.trivial, vanishing)


@pytest.mark.parametrize('A', [A1, A2])
def test_trivial_flags_on_all_points(A):
    d, K, N = len(A[0]), 2, 2
    ball = [x for x in itertools.product(range(-N, N + 1), repeat=d)
            if sum(t * t for t in x) <= N * N]
    ks = [k for k in itertools.product(range(-K, K + 1), repeat=len(A))
          if sum(map(abs, k)) <= K]

    divisors = [Divisor(DivisorKind.D0, k) for k in ks if any(k)]
    divisors += [Divisor(DivisorKind.D1, k, a) for k in ks for a in ball]
    divisors += [Divisor(kind, k, a, b)
                 for kind in (DivisorKind.D2PLUS, DivisorKind.D2MINUS)
                 for k in ks for a in ball for b in ball]

    for divisor in divisors:
        flag = divisor_eval(divisor, A, 1.5).trivial_resonance
        values = [divisor_eval(divisor, A, m).value for m in ORACLE_MASSES]
        assert flag == _vanishes(values), divisor


@given(masses)
def test_min_divisor_scan_skips_trivial_resonances(m):
    result = min_divisor_scan(A2, m, 2, 2)
    assert result.min_abs > 0
    assert result.argmin is not None

    value = divisor_eval(result.argmin, A2, m)
    assert not value.trivial_resonance
    assert abs(value.value) == pytest.approx(result.min_abs)

    table = DivisorTable(A2, 2, 2)
    values = np.abs(table.values(m))[~table.trivial]
    assert result.min_abs == pytest.approx(values.min())


def test_exclusion_masses():
    masses = exclusion_masses(64, seed=1)
    assert np.all((masses >= 1) & (masses <= 2))
    np.testing.assert_array_equal(masses, exclusion_masses(64, seed=1))

    with pytest.raises(ValueError):
        exclusion_masses(0, seed=1)


def test_mass_exclusion_estimate_is_monotone():
    estimates = [mass_exclusion_estimate(A1, kappa, 2, 3, 64, seed=2)
                 for kappa in (0.0, 1e-3, 1e-2, 1e-1, 1.0)]
    assert estimates[0] == 0
    assert estimates == sorted(estimates)
    assert all(0 <= e <= 1 for e in estimates)


@pytest.mark.parametrize('m', [0.99, 2.01, -1.0])
def test_check_mass_range(m):
    with pytest.raises(MassError):
        check_mass(m)


def test_check_mass_warns_near_exceptional_masses(caplog):
    assert check_mass(1.5) == 1.5
    assert 'exceptional' not in caplog.text

    check_mass(4 / 3)
    assert 'exceptional' in caplog.text


def test_derivative_matrix_columns():
    points = [[1], [2], [3]]
    matrix = derivative_matrix(points, 1.3)

    assert matrix.shape == (3, 3)
    for column, a in enumerate(points):
        np.testing.assert_allclose(matrix[:, column],
                                   freq_derivatives(a, 1.3, 3))
