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

"""Tests of the lattice geometry."""

from collections import Counter
import itertools
import math

from hypothesis import given, strategies as st
import pytest

from beamnf.core import DimensionError, NotAdmissibleError
from beamnf.lattice import (Admissibility, LatticeVector, ModeSet,
                            angle_check, block_of, classify_set,
                            max_block_diameter, pseudo_dist, pseudo_dist2,
                            resonance_geometry, sample_typicality,
                            sphere_count, sphere_partition, sphere_points,
                            strongly_angled)

A2 = [[0, 1], [1, -1]]
A3 = [[0, 1, 0], [1, -1, 0]]

points = st.lists(st.integers(-6, 6), min_size=2, max_size=2).map(
    LatticeVector)


@pytest.mark.parametrize('d, n2, count', [
    (1, 0, 1), (1, 4, 2), (1, 3, 0),
    (2, 1, 4), (2, 2, 4), (2, 3, 0), (2, 5, 8), (2, 25, 12),
    (3, 1, 6), (3, 2, 12), (3, 3, 8), (3, 7, 0)
])
def test_sphere_count(d, n2, count):
    assert sphere_count(d, n2) == count
    assert len(sphere_points(d, n2)) == count


def test_sphere_count_in_the_plane():
    counts = Counter(x * x + y * y
                     for x, y in itertools.product(range(-32, 33), repeat=2))
    for n2 in range(1, 1001):
        assert sphere_count(2, n2) == counts[n2]


@given(st.integers(1, 3), st.integers(0, 60))
def test_sphere_points_are_sorted_and_on_the_sphere(d, n2):
    sphere = sphere_points(d, n2)
    assert all(x.norm2 == n2 and x.d == d for x in sphere)
    assert sphere == sorted(set(sphere))


def test_sphere_points_reject_invalid_arguments():
    with pytest.raises(DimensionError):
        sphere_points(0, 1)
    with pytest.raises(ValueError):
        sphere_points(2, -1)


def test_vector_arithmetic():
    a, b = LatticeVector([1, 2]), LatticeVector([3, -1])
    assert (a + b).coords == (4, 1)
    assert (a - b).coords == (-2, 3)
    assert (-a).coords == (-1, -2)
    assert a.dot(b) == 1
    assert a.norm2 == 5
    assert LatticeVector([0, 0]).bracket == 1.0

    with pytest.raises(DimensionError):
        a + LatticeVector([1, 2, 3])


@given(points, points)
def test_pseudo_distance_identifies_antipodes(a, b):
    assert pseudo_dist2(a, b) == pseudo_dist2(b, a)
    assert pseudo_dist2(a, b) == pseudo_dist2(a, -b)
    assert pseudo_dist(a, b) ** 2 == pytest.approx(pseudo_dist2(a, b))
    assert pseudo_dist2(a, -a) == 0


@given(points, points, points)
def test_pseudo_distance_triangle_inequality(a, b, c):
    assert pseudo_dist(a, c) <= pseudo_dist(a, b) + pseudo_dist(b, c) + 1e-9


def test_mode_set_validation():
    with pytest.raises(NotAdmissibleError):
        ModeSet([[1, 0], [1, 0]])
    with pytest.raises(DimensionError):
        ModeSet([[1, 0], [1]])
    with pytest.raises(ValueError):
        ModeSet([])


def test_classify_set():
    assert classify_set([[1, 0], [0, 1]]) is Admissibility.NOT_ADMISSIBLE
    assert classify_set([[1], [2]]) is Admissibility.STRONGLY_ADMISSIBLE
    assert classify_set(A3) is Admissibility.ADMISSIBLE


def _classify_by_enumeration(A):
    norms = [sum(x * x for x in a) for a in A]
    if len(set(norms)) < len(norms):
        return Admissibility.NOT_ADMISSIBLE

    d = len(A[0])
    for a, b in itertools.permutations(A, 2):
        r = math.isqrt(sum(x * x for x in a))
        c = [x + y for x, y in zip(a, b)]
        radius2 = sum(x * x for x in b)
        hits = sum(1 for x in itertools.product(range(-r, r + 1), repeat=d)
                   if sum(t * t for t in x) == sum(t * t for t in a)
                   and sum((s - t) ** 2 for s, t in zip(x, c)) == radius2)
        if hits > 2:
            return Admissibility.ADMISSIBLE

    return Admissibility.STRONGLY_ADMISSIBLE


@st.composite
def small_sets(draw):
    d = draw(st.integers(1, 3))
    return draw(st.lists(st.tuples(*[st.integers(-5, 5)] * d),
                         min_size=2, max_size=4, unique=True))


@given(small_sets())
def test_classify_set_by_enumeration(A):
    label = classify_set(A)
    assert label is _classify_by_enumeration(A)
    if len(A[0]) <= 2:
        assert label is not Admissibility.ADMISSIBLE


def test_angle_check_on_the_line():
    # on the line a sphere holds at most two points
    assert angle_check(LatticeVector([3]), LatticeVector([5]))


@given(points, points)
def test_strongly_angled_checks_the_sum(a, b):
    assert strongly_angled(a, b) == angle_check(a, a + b)


def test_strongly_angled_neighbours():
    assert strongly_angled(LatticeVector([1, 0]), LatticeVector([0, 1]))


def test_resonance_geometry_2d():
    geometry = resonance_geometry(A2)

    assert sorted(b.coords for b in geometry.lambda_f) == [
        (-1, -1), (-1, 0), (-1, 1), (0, -1), (1, 0), (1, 1)]
    assert sorted((a.coords, b.coords) for a, b in geometry.plus_pairs) == [
        ((0, -1), (1, 1)), ((1, 1), (0, -1))]
    assert geometry.minus_pairs == []
    assert geometry.m == 5
    assert geometry.m0 == 4

    pair = geometry.classes[-1]
    assert [b.coords for b in pair] == [(0, -1), (1, 1)]
    assert geometry.ell_index(pair[0]) == 0
    assert geometry.ell_index(pair[1]) == 1
    assert geometry.is_plus(*pair)
    assert not geometry.is_minus(*pair)


def test_resonance_geometry_3d():
    geometry = resonance_geometry(A3)

    assert len(geometry.lambda_f) == 16
    assert len(geometry.plus_pairs) == 6
    assert geometry.minus_pairs == []
    assert geometry.m == 13
    assert geometry.m0 == 10
    assert [len(members) for members in geometry.classes].count(2) == 3


def test_resonance_geometry_in_one_dimension():
    geometry = resonance_geometry([[1], [2]])
    assert [b.coords for b in geometry.lambda_f] == [(-1,), (-2,)]
    assert geometry.m == geometry.m0 == 2


def test_resonance_geometry_rejects_non_admissible_sets():
    with pytest.raises(NotAdmissibleError):
        resonance_geometry([[1, 0], [0, 1]])


def test_geometry_json():
    result = resonance_geometry(A2).to_json()
    assert result['m'] == 5 and result['m0'] == 4
    assert result['modes'] == A2
    assert result['plusPairs'] == [[[0, -1], [1, 1]], [[1, 1], [0, -1]]]


def test_sphere_partition_pairs_antipodes():
    blocks = sphere_partition(2, 1, 0.5)
    assert [[x.coords for x in block.members] for block in blocks] == [
        [(-1, 0), (1, 0)], [(0, -1), (0, 1)]]
    assert all(block.diameter == 0 for block in blocks)


@given(st.integers(1, 50), st.floats(0.5, 12))
def test_sphere_partition_covers_the_sphere(n2, delta):
    blocks = sphere_partition(2, n2, delta)
    members = list(itertools.chain.from_iterable(b.members for b in blocks))
    assert sorted(members) == sphere_points(2, n2)
    for block in blocks:
        assert block_of(block.members[0], delta, n2).members == block.members


def test_block_of_with_infinite_delta_is_the_sphere():
    block = block_of(LatticeVector([3, 4]), float('inf'), 5)
    assert block.members == sphere_points(2, 25)

    with pytest.raises(ValueError):
        block_of(LatticeVector([3, 4]), 1.0, 4)
    with pytest.raises(ValueError):
        block_of(LatticeVector([3, 4]), 0.0, 5)


def test_max_block_diameter_grows_with_delta():
    small = max_block_diameter(2, 1.0, 6)
    large = max_block_diameter(2, 5.0, 6)
    assert 0 <= small <= large


def test_sample_typicality_does_not_depend_on_threads():
    single = sample_typicality(2, 2, 5, 2500, seed=3, threads=1,
                               partition_size=400)
    multi = sample_typicality(2, 2, 5, 2500, seed=3, threads=4,
                              partition_size=400)
    assert single == multi
    assert single.trials == 2500
    assert 0 <= single.frac_strongly_admissible <= single.frac_admissible <= 1


def test_sample_typicality_needs_enough_points():
    with pytest.raises(ValueError):
        sample_typicality(1, 4, 1, 10, seed=0)


@pytest.mark.parametrize('d', [2, 3])
def test_typicality_trend(d):
    slack = 2e-3
    results = [sample_typicality(d, 2, R, 10000, seed=0, threads=2)
               for R in (5, 10, 20, 40)]
    for small, large in zip(results, results[1:]):
        assert large.frac_admissible >= small.frac_admissible - slack
        assert (large.frac_strongly_admissible
                >= small.frac_strongly_admissible - slack)
