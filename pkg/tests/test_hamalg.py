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

"""Tests of the Hamiltonian algebra and the Birkhoff normal form."""

import math

from hypothesis import given, settings, strategies as st
import pytest
import sympy

from beamnf.frequencies import eigenfrequency
from beamnf.hamalg import (ExactField, FloatField, Monomial, PolyHamiltonian,
                           build_chi4, build_h2, build_h4, in_j2,
                           is_integrable, make_field, poisson_bracket,
                           torus_quadratic_part, truncation_universe,
                           verify_normal_form, z4_minus2_closed_form,
                           z4_plus_closed_form)
from beamnf.lattice import LatticeVector, resonance_geometry
from beamnf.normalform import assemble_K, assemble_lambda

A1 = [[1], [2]]
A2 = [[0, 1], [1, -1]]


def v(*coords):
    return LatticeVector(coords)


def single(field, monomial, coefficient=1):
    return PolyHamiltonian(field, {monomial: coefficient})


def test_monomial():
    a, b = v(1, 0), v(0, 1)
    monomial = Monomial.of([a, a], [b])

    assert monomial.degree == 3
    assert monomial.powers == {a: (2, 0), b: (0, 1)}
    assert monomial.momentum == (2, -1)
    assert not monomial.has_zero_momentum
    assert monomial.conjugate() == Monomial.of([b], [a, a])
    assert Monomial.of([a, b], [a]).arrangements == 2
    assert Monomial.of([a, a], [a, b]).arrangements == 2
    assert monomial == Monomial([(b, 1), (a, 0), (a, 0)])
    assert monomial.to_json() == [[[0, 1], 'eta'], [[1, 0], 'xi'],
                                  [[1, 0], 'xi']]


def test_bracket_of_coordinates():
    field = FloatField(1, 1.5)
    a = v(1)
    bracket = poisson_bracket(single(field, Monomial.of([a])),
                              single(field, Monomial.of(eta=[a])))
    assert bracket.coefficient(Monomial([])) == -1j


def test_bracket_with_h2_multiplies_by_the_divisor():
    universe = truncation_universe(1, 2)
    h2 = build_h2(universe, 1.5)
    a, b = v(1), v(-2)
    monomial = Monomial.of([a, a], [b])
    F = PolyHamiltonian(h2.field, {monomial: 1.0}, universe)

    bracket = poisson_bracket(F, h2)
    divisor = 2 * eigenfrequency(a, 1.5) - eigenfrequency(b, 1.5)
    assert bracket.coefficient(monomial) == pytest.approx(-1j * divisor)
    assert len(bracket) == 1


@given(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2))
def test_bracket_is_antisymmetric(i, j, k):
    field = FloatField(1, 1.2)
    F = PolyHamiltonian(field, {Monomial.of([v(i), v(j)], [v(k)]): 1.5,
                                Monomial.of([v(k)], [v(i)]): 2j})
    G = PolyHamiltonian(field, {Monomial.of([v(j)], [v(i), v(k)]): -0.5,
                                Monomial.of([v(i)], [v(j)]): 1.0})
    total = (poisson_bracket(F, G) + poisson_bracket(G, F)).simplified()
    assert total.max_abs() < 1e-12


def test_bracket_needs_the_same_field():
    F = single(FloatField(1, 1.2), Monomial.of([v(1)]))
    G = single(FloatField(1, 1.5), Monomial.of([v(1)]))
    with pytest.raises(ValueError):
        poisson_bracket(F, G)


EXACT = ExactField(1, 1.5)

rationals = st.builds(sympy.Rational, st.integers(-5, 5), st.integers(1, 4))
exact_monomials = st.builds(
    Monomial.of,
    st.lists(st.integers(-1, 1).map(v), max_size=2),
    st.lists(st.integers(-1, 1).map(v), max_size=2))
exact_polynomials = st.dictionaries(
    exact_monomials, st.builds(lambda re, im: re + sympy.I * im, rationals,
                               rationals),
    min_size=1, max_size=3).map(lambda terms: PolyHamiltonian(EXACT, terms))


@settings(max_examples=30)
@given(exact_polynomials, exact_polynomials, exact_polynomials)
def test_bracket_is_a_derivation(F, G, H):
    left = poisson_bracket(F, G * H)
    right = poisson_bracket(F, G) * H + G * poisson_bracket(F, H)
    assert len((left - right).simplified()) == 0


@settings(max_examples=30)
@given(exact_polynomials, exact_polynomials, exact_polynomials)
def test_jacobi_identity(F, G, H):
    total = (poisson_bracket(F, poisson_bracket(G, H))
             + poisson_bracket(G, poisson_bracket(H, F))
             + poisson_bracket(H, poisson_bracket(F, G)))
    assert len(total.simplified()) == 0


def test_product_of_hamiltonians():
    a, b = v(1), v(-1)
    F = single(EXACT, Monomial.of([a]), 2)
    G = single(EXACT, Monomial.of(eta=[b]), sympy.I)
    product = F * G
    assert product[Monomial.of([a], [b])] == 2 * sympy.I
    assert (3 * F)[Monomial.of([a])] == 6
    with pytest.raises(ValueError):
        F * single(FloatField(1, 1.5), Monomial.of([a]))


def test_truncation_universe():
    assert len(truncation_universe(1, 2)) == 5
    assert len(truncation_universe(2, 2)) == 13
    assert truncation_universe(2, 1) == sorted(truncation_universe(2, 1))


def test_quartic_part_is_real():
    universe = truncation_universe(1, 2)
    parts = build_h4(universe, 1.5)
    assert parts.total().is_real
    assert parts.total().degrees == {4}
    for monomial in parts.total():
        assert monomial.has_zero_momentum

    h40 = parts.h40.coefficient(Monomial.of([v(1), v(1), v(-1), v(-1)]))
    lam = eigenfrequency(1, 1.5)
    assert h40 == pytest.approx(6 / 4 / (2 * math.pi) / lam ** 2)


def test_chi4_is_real():
    universe = truncation_universe(1, 2)
    chi = build_chi4(universe, 1.5, A1)
    assert len(chi) > 0
    assert chi.is_real


def test_in_j2_counts_multiplicity():
    a, x, y = v(0, 1), v(2, 0), v(1, 1)
    A = resonance_geometry(A2).modes
    assert in_j2(Monomial.of([a, a], [x, y]), A)
    assert not in_j2(Monomial.of([a, x], [y, y]), A)
    assert is_integrable(Monomial.of([a, x], [x, a]))
    assert not is_integrable(Monomial.of([a, x], [y, a]))


@pytest.mark.parametrize('d, A', [(1, A1), (2, A2)])
def test_normal_form_is_exact(d, A):
    universe = truncation_universe(d, 2)
    check = verify_normal_form(universe, 1.5, A, exact=True)

    assert len(check.residual) == 0
    assert check.residual_norm == 0

    closed = z4_plus_closed_form(universe, 1.5, A, exact=True)
    assert len((check.z4_plus - closed).simplified()) == 0
    assert len(check.z4_plus) > 0


@pytest.mark.parametrize('m', [1.1, 1.5, 1.9])
def test_normal_form_in_floats(m):
    universe = truncation_universe(2, 2)
    check = verify_normal_form(universe, m, A2)

    assert check.residual_norm < 1e-12
    closed = z4_minus2_closed_form(universe, m, A2)
    assert (check.z4_minus2 - closed).max_abs() < 1e-12
    assert check.chi4.is_real
    assert check.q4.is_real


def test_exact_and_float_coefficients_agree():
    universe = truncation_universe(1, 2)
    exact = build_chi4(universe, 1.5, A1, exact=True).evaluate()
    floats = build_chi4(universe, 1.5, A1)
    assert (exact - floats).max_abs() < 1e-12


def test_make_field():
    assert make_field(1, 1.5).exact is False
    assert make_field(1, 1.5, exact=True).exact is True


def test_z4_plus_gives_the_normal_frequencies():
    m, rho = 1.5, [0.3, 0.6]
    universe = truncation_universe(2, 2)
    quadratic = torus_quadratic_part(z4_plus_closed_form(universe, m, A2),
                                     A2, rho)

    resonant = {1, 2}
    for a in universe:
        if a.norm2 in resonant:
            continue
        shift = assemble_lambda(A2, m, rho, 1.0, a) - eigenfrequency(a, m)
        assert quadratic.coefficient(Monomial.of([a], [a])).real == \
            pytest.approx(shift)


def test_z4_minus2_gives_the_coupling_matrix():
    m, rho = 1.5, [0.5, 0.5]
    universe = truncation_universe(2, 2)
    quadratic = torus_quadratic_part(z4_minus2_closed_form(universe, m, A2),
                                     A2, rho)
    K = assemble_K(A2, m, rho)

    for a, b in K.geometry.plus_pairs:
        block = K.block(a, b)
        assert quadratic.coefficient(Monomial.of([a, b])).real == \
            pytest.approx(2 * block[0, 0])
        assert quadratic.coefficient(Monomial.of(eta=[a, b])).real == \
            pytest.approx(2 * block[1, 1])


def test_torus_quadratic_part_checks_the_actions():
    universe = truncation_universe(1, 2)
    with pytest.raises(ValueError):
        torus_quadratic_part(build_h2(universe, 1.5), A1, [0.5])
