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

"""Tests of the normal form data."""

import math

from hypothesis import given, strategies as st
import numpy as np
import pytest

from beamnf.core import MassError, NotAdmissibleError
from beamnf.frequencies import eigenfrequency
from beamnf.lattice import LatticeVector, resonance_geometry
from beamnf.normalform import (assemble_K, assemble_lambda, assemble_omega,
                               c_star, mu, normal_form)

A1 = [[1], [2]]
A2 = [[0, 1], [1, -1]]
A3 = [[0, 1, 0], [1, -1, 0]]


def test_c_star():
    assert c_star(1) == pytest.approx(3 / (2 * math.pi))
    assert c_star(2) == pytest.approx(3 / (2 * math.pi) ** 2)


def test_omega():
    m, rho, nu = 1.5, [0.2, 0.7], 0.01
    data = assemble_omega(A2, m, rho, nu)
    lam = [eigenfrequency(1, m), eigenfrequency(2, m)]
    c = (2 * math.pi) ** -2

    assert data.M[0, 0] == pytest.approx(3 * c / lam[0] ** 2)
    assert data.M[0, 1] == pytest.approx(12 * c / (lam[0] * lam[1]))
    assert np.array_equal(data.M, data.M.T)
    assert data.detM == pytest.approx(np.linalg.det(data.M))
    assert data.omega == pytest.approx(np.array(lam)
                                       + nu * data.M @ np.array(rho))


def test_omega_without_amplitude():
    data = assemble_omega(A1, 1.2, [0.5, 0.5], 0.0)
    assert data.omega.tolist() == [eigenfrequency(1, 1.2),
                                   eigenfrequency(4, 1.2)]


def test_lambda():
    m, rho = 1.5, [0.4, 0.1]
    shift = 0.4 / eigenfrequency(1, m) + 0.1 / eigenfrequency(2, m)
    expected = (eigenfrequency(4, m) + 6 * 0.01 * (2 * math.pi) ** -2
                * shift / eigenfrequency(4, m))

    assert assemble_lambda(A2, m, rho, 0.01, [2, 0]) == \
        pytest.approx(expected)
    assert assemble_lambda(A2, m, rho, 0.0, [2, 0]) == eigenfrequency(4, m)


@pytest.mark.parametrize('a', [[0, 1], [1, 0], [-1, -1]])
def test_lambda_inside_the_resonant_set(a):
    with pytest.raises(ValueError):
        assemble_lambda(A2, 1.5, [0.5, 0.5], 0.01, a)


def test_mu_depends_on_the_norm():
    geometry = resonance_geometry(A2)
    rho = [0.3, 0.8]
    assert mu([1, 0], geometry, 1.5, rho) == mu([-1, 0], geometry, 1.5, rho)
    assert mu([1, 1], geometry, 1.5, rho) == mu([-1, 1], geometry, 1.5, rho)


@pytest.mark.parametrize('A', [A1, A2, A3])
def test_K_is_real_symmetric(A):
    K = assemble_K(A, 1.5, [0.5, 0.5])
    assert K.K.dtype == float
    assert np.array_equal(K.K, K.K.T)
    assert K.K.shape == (2 * K.size, 2 * K.size)


def test_K_blocks():
    m, rho = 1.5, [0.5, 0.5]
    K = assemble_K(A2, m, rho)
    a, b = LatticeVector([0, -1]), LatticeVector([1, 1])
    assert K.geometry.is_plus(a, b)

    coupling = c_star(2) * 0.5 / (eigenfrequency(1, m)
                                  * eigenfrequency(2, m))
    anti = np.array([[0, 1], [1, 0]])
    assert K.block(a, b) == pytest.approx(coupling * np.eye(2))
    assert K.block(a, a) == pytest.approx(mu(a, K.geometry, m, rho) * anti)
    assert not K.block([1, 0], [-1, 0]).any()


def test_real_form():
    m, rho = 1.5, [0.5, 0.5]
    K = assemble_K(A2, m, rho)
    real = K.real_form()
    a, b = [0, -1], [1, 1]
    coupling = K.block(a, b)[0, 0]

    assert np.allclose(real, real.T)
    assert real[K.site(a), K.site(a)] == pytest.approx(
        mu(a, K.geometry, m, rho) * np.eye(2))
    assert real[K.site(a), K.site(b)] == pytest.approx(
        coupling * np.diag([1, -1]))


@given(st.lists(st.floats(-1, 1), min_size=12, max_size=12),
       st.floats(0, 1), st.floats(0, 1))
def test_quadratic_form_in_real_coordinates(pq, r1, r2):
    K = assemble_K(A2, 1.5, [r1, r2])
    pq = np.array(pq)
    p, q = pq[0::2], pq[1::2]
    zeta = np.empty(12, dtype=complex)
    zeta[0::2] = (p - 1j * q) / math.sqrt(2)
    zeta[1::2] = (p + 1j * q) / math.sqrt(2)

    value = K.quadratic_form(zeta)
    assert value.imag == pytest.approx(0, abs=1e-12)
    assert value.real == pytest.approx(pq @ K.real_form() @ pq, abs=1e-12)


def test_identical_blocks_in_three_dimensions():
    K = assemble_K(A3, 1.5, [0.5, 0.5])
    blocks = [idx for idx in K.class_indices() if len(idx) > 2]

    assert len(blocks) == 3
    first = K.K[np.ix_(blocks[0], blocks[0])]
    for idx in blocks[1:]:
        assert np.array_equal(K.K[np.ix_(idx, idx)], first)


def test_K_needs_an_admissible_set():
    with pytest.raises(NotAdmissibleError):
        assemble_K([[1, 0], [0, 1]], 1.5, [0.5, 0.5])


@pytest.mark.parametrize('rho', [[0.5], [0.5, 1.5], [-0.1, 0.5]])
def test_invalid_actions(rho):
    with pytest.raises(ValueError):
        assemble_K(A2, 1.5, rho)


@pytest.mark.parametrize('m', [0.5, 2.5])
def test_invalid_mass(m):
    with pytest.raises(MassError):
        assemble_omega(A2, m, [0.5, 0.5], 0.01)


def test_normal_form():
    data = normal_form(A2, 1.5, [0.5, 0.5], 0.01, 2)
    assert set(data.big_lambda) == {LatticeVector([0, 0]),
                                    LatticeVector([2, 0]),
                                    LatticeVector([-2, 0]),
                                    LatticeVector([0, 2]),
                                    LatticeVector([0, -2])}

    report = data.to_json()
    assert set(report) == {'params', 'omega', 'M', 'detM', 'bigLambda', 'K',
                           'geometry'}
    assert report['params'] == {'m': 1.5, 'rho': [0.5, 0.5], 'nu': 0.01,
                                'radius': 2}
    assert len(report['K']['coordinates']) == 12
    assert report['geometry']['m'] == 5


def test_normal_form_needs_a_non_negative_amplitude():
    with pytest.raises(ValueError):
        normal_form(A2, 1.5, [0.5, 0.5], -1.0, 2)
