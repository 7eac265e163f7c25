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

"""
Lattice geometry (:mod:`beamnf.lattice`)
========================================

.. currentmodule:: beamnf.lattice

Exact integer geometry of :math:`\\mathbb{Z}^d`. All norm comparisons are
done on exact integer squared norms.

.. autosummary::
   :toctree: generated/

   LatticeVector
   ModeSet
   Admissibility
   ResonanceGeometry
   Block
   pseudo_dist
   pseudo_dist2
   sphere_points
   sphere_count
   angle_check
   classify_set
   resonance_geometry
   block_of
   sphere_partition
   max_block_diameter
   sample_typicality
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, NamedTuple, Sequence, Tuple
import enum
import functools
import itertools
import logging
import math

import numpy as np

from .core.errors import DimensionError, NotAdmissibleError


@functools.total_ordering
class LatticeVector():
    """An immutable integer point of :math:`\\mathbb{Z}^d`."""

    __slots__ = ('coords', '_hash')

    def __init__(self, coords: Iterable[int]) -> None:
        self.coords = tuple(int(c) for c in coords)
        if len(self.coords) < 1:
            raise DimensionError('A lattice vector needs at least one '
                                 'coordinate.')
        self._hash = hash(self.coords)

    @property
    def d(self) -> int:
        """The dimension."""
        return len(self.coords)

    @property
    def norm2(self) -> int:
        """The exact squared norm :math:`|a|^2`."""
        return sum(c * c for c in self.coords)

    @property
    def norm(self) -> float:
        return math.sqrt(self.norm2)

    @property
    def bracket(self) -> float:
        """The weight :math:`\\langle a \\rangle = \\max(1, |a|)`."""
        return max(1.0, self.norm)

    def dot(self, other: 'LatticeVector') -> int:
        self._check(other)
        return sum(x * y for x, y in zip(self.coords, other.coords))

    def _check(self, other: 'LatticeVector') -> None:
        if self.d != other.d:
            raise DimensionError('Dimension mismatch: {} and {}'
                                 .format(self, other))

    def __add__(self, other: 'LatticeVector') -> 'LatticeVector':
        self._check(other)
        return LatticeVector(x + y for x, y in zip(self.coords, other.coords))

    def __sub__(self, other: 'LatticeVector') -> 'LatticeVector':
        self._check(other)
        return LatticeVector(x - y for x, y in zip(self.coords, other.coords))

    def __neg__(self) -> 'LatticeVector':
        return LatticeVector(-x for x in self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> int:
        return self.coords[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, LatticeVector):
            return NotImplemented
        return self.coords == other.coords

    def __lt__(self, other: 'LatticeVector') -> bool:
        self._check(other)
        return self.coords < other.coords

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return 'LatticeVector(%s)' % (self.coords,)

    def to_json(self) -> List[int]:
        return list(self.coords)


def as_vector(a) -> LatticeVector:
    """Return *a* as :class:`LatticeVector`."""
    return a if isinstance(a, LatticeVector) else LatticeVector(a)


class ModeSet():
    """The ordered set :math:`A = \\{a_1, \\dots, a_n\\}` of excited modes.

    The order of the points is fixed at construction and duplicates are
    rejected.
    """

    def __init__(self, points: Iterable) -> None:
        self.points = tuple(as_vector(p) for p in points)
        """The points of the set in their fixed order."""

        if len(self.points) < 1:
            raise ValueError('A mode set needs at least one point.')

        if len({p.d for p in self.points}) != 1:
            raise DimensionError('All modes must share one dimension: {}'
                                 .format(self.points))

        if len(set(self.points)) != len(self.points):
            raise NotAdmissibleError('The mode set contains duplicate '
                                     'points: {}'.format(self.points))

        self.__index = {p: i for i, p in enumerate(self.points)}

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def d(self) -> int:
        return self.points[0].d

    def index(self, a: LatticeVector) -> int:
        """Return the position of *a* in the set."""
        return self.__index[a]

    def __contains__(self, a) -> bool:
        return a in self.__index

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i: int) -> LatticeVector:
        return self.points[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, ModeSet) and self.points == other.points

    def __hash__(self) -> int:
        return hash(self.points)

    def __repr__(self) -> str:
        return 'ModeSet(%s)' % [p.coords for p in self.points]

    def to_json(self) -> List[List[int]]:
        return [p.to_json() for p in self.points]


def as_mode_set(A) -> ModeSet:
    """Return *A* as :class:`ModeSet`."""
    return A if isinstance(A, ModeSet) else ModeSet(A)


def pseudo_dist2(a: LatticeVector, b: LatticeVector) -> int:
    """Return the exact squared pseudo-distance
    :math:`\\min(|a-b|^2, |a+b|^2)`."""
    return min((a - b).norm2, (a + b).norm2)


def pseudo_dist(a: LatticeVector, b: LatticeVector) -> float:
    """Return the pseudo-distance :math:`[a-b] = \\min(|a-b|, |a+b|)`."""
    return math.sqrt(pseudo_dist2(a, b))


def _representations(d: int, n2: int) -> Iterable[Tuple[int, ...]]:
    # box scan with pruning; the last coordinate is solved directly
    if d == 1:
        r = math.isqrt(n2)
        if r * r == n2:
            yield from ((-r,), (r,)) if r > 0 else ((0,),)
        return

    r = math.isqrt(n2)
    for x in range(-r, r + 1):
        for rest in _representations(d - 1, n2 - x * x):
            yield (x,) + rest


@functools.lru_cache(maxsize=None)
def _sphere(d: int, n2: int) -> Tuple[LatticeVector, ...]:
    return tuple(LatticeVector(x) for x in _representations(d, n2))


@functools.lru_cache(maxsize=None)
def _sphere_array(d: int, n2: int) -> np.ndarray:
    points = list(_representations(d, n2))
    return np.array(points, dtype=np.int64).reshape(len(points), d)


def sphere_points(d: int, n2: int) -> List[LatticeVector]:
    """Return all :math:`x \\in \\mathbb{Z}^d` with :math:`|x|^2 = n_2` in
    lexicographic order."""
    if d < 1:
        raise DimensionError('The dimension must be positive.')
    if n2 < 0:
        raise ValueError('The squared radius must not be negative.')

    return list(_sphere(d, int(n2)))


def sphere_count(d: int, n2: int) -> int:
    """Return the number of representations of *n2* as sum of *d*
    squares."""
    return len(_sphere_array(d, int(n2)))


def angle_check(a: LatticeVector, b: LatticeVector) -> bool:
    """Return whether :math:`a \\angle b`.

    That is, at most two integer points lie on the sphere :math:`|x| = |a|`
    and on the sphere around *b* with radius :math:`|a - b|`.
    """
    a._check(b)
    points = _sphere_array(a.d, a.norm2)
    target = (a - b).norm2
    hits = np.count_nonzero(((points - np.array(b.coords)) ** 2).sum(axis=1)
                            == target)
    return hits <= 2


def strongly_angled(a: LatticeVector, b: LatticeVector) -> bool:
    """Return whether :math:`a \\angle (a + b)`."""
    return angle_check(a, a + b)


class Admissibility(enum.Enum):
    """Classification of a mode set."""

    NOT_ADMISSIBLE = 'not_admissible'
    ADMISSIBLE = 'admissible'
    STRONGLY_ADMISSIBLE = 'strongly_admissible'


def classify_set(A) -> Admissibility:
    """Classify the mode set *A*.

    A set is admissible if all points have distinct norms and strongly
    admissible if in addition :math:`a \\angle (a + b)` for all ordered
    pairs of distinct points.
    """
    points = list(A.points if isinstance(A, ModeSet) else map(as_vector, A))
    if len(points) < 1:
        raise ValueError('Can\'t classify an empty set.')

    norms = [p.norm2 for p in points]
    if len(set(norms)) != len(norms):
        return Admissibility.NOT_ADMISSIBLE

    for a, b in itertools.permutations(points, 2):
        if not strongly_angled(a, b):
            return Admissibility.ADMISSIBLE

    return Admissibility.STRONGLY_ADMISSIBLE


class ResonanceGeometry():
    """The finite resonant set of an admissible mode set.

    The attributes hold the set :math:`\\Lambda_f` of points outside *A*
    which share a norm with a point of *A*, the map :math:`\\ell`, the
    coupling pairs and the equivalence classes generated by them.
    """

    def __init__(self, modes: ModeSet, lambda_f: List[LatticeVector],
                 ell: Dict[LatticeVector, LatticeVector],
                 plus_pairs: List[Tuple[LatticeVector, LatticeVector]],
                 minus_pairs: List[Tuple[LatticeVector, LatticeVector]],
                 classes: List[List[LatticeVector]]) -> None:
        self.modes = modes
        """The mode set *A*."""

        self.lambda_f = lambda_f
        """The points of :math:`\\Lambda_f`, grouped by the order of *A* and
        lexicographic within a sphere."""

        self.ell = ell
        """The map :math:`\\ell: \\Lambda_f \\to A`."""

        self.plus_pairs = plus_pairs
        """Ordered pairs with :math:`\\ell(a) + \\ell(b) = a + b`."""

        self.minus_pairs = minus_pairs
        """Ordered pairs with :math:`a \\neq b` and
        :math:`\\ell(a) - \\ell(b) = a - b`."""

        self.classes = classes
        """The equivalence classes, singletons first and then ordered by their
        lexicographically minimal member. Members are ordered by the position
        of their image under :math:`\\ell` in *A*."""

        self.__index = {b: i for i, b in enumerate(lambda_f)}
        self.__class_of = {b: j for j, members in enumerate(classes)
                           for b in members}
        self.__plus = set(plus_pairs)
        self.__minus = set(minus_pairs)

        self.__check()

    @property
    def m0(self) -> int:
        """The number of singleton classes."""
        return sum(1 for members in self.classes if len(members) == 1)

    @property
    def m(self) -> int:
        """The number of classes."""
        return len(self.classes)

    def index(self, b: LatticeVector) -> int:
        """Return the position of *b* in :attr:`lambda_f`."""
        return self.__index[b]

    def class_of(self, b: LatticeVector) -> int:
        """Return the index of the class containing *b*."""
        return self.__class_of[b]

    def ell_index(self, b: LatticeVector) -> int:
        """Return the position of :math:`\\ell(b)` in *A*."""
        return self.modes.index(self.ell[b])

    def is_plus(self, a: LatticeVector, b: LatticeVector) -> bool:
        return (a, b) in self.__plus

    def is_minus(self, a: LatticeVector, b: LatticeVector) -> bool:
        return (a, b) in self.__minus

    def __check(self) -> None:
        for b in self.lambda_f:
            assert b not in self.modes
            assert b.norm2 == self.ell[b].norm2
        assert not self.__plus & self.__minus
        for a, b in itertools.chain(self.plus_pairs, self.minus_pairs):
            assert a.norm2 != b.norm2
        for members in self.classes:
            assert len(members) <= self.modes.n
            assert len({b.norm2 for b in members}) == len(members)

    def to_json(self) -> dict:
        def pairs(p):
            return sorted([a.to_json(), b.to_json()] for a, b in p)

        return {
            'modes': self.modes.to_json(),
            'admissibility': classify_set(self.modes).value,
            'lambdaF': sorted(b.to_json() for b in self.lambda_f),
            'ell': sorted([b.to_json(), a.to_json()]
                          for b, a in self.ell.items()),
            'plusPairs': pairs(self.plus_pairs),
            'minusPairs': pairs(self.minus_pairs),
            'classes': [[b.to_json() for b in members]
                        for members in self.classes],
            'm': self.m,
            'm0': self.m0
        }


def resonance_geometry(A) -> ResonanceGeometry:
    """Return the :class:`ResonanceGeometry` of the admissible set *A*.

    :raises NotAdmissibleError: If two points of *A* share a norm.
    """
    modes = as_mode_set(A)
    if classify_set(modes) is Admissibility.NOT_ADMISSIBLE:
        raise NotAdmissibleError('The mode set is not admissible: {}'
                                 .format(modes))

    lambda_f, ell = list(), dict()
    for a in modes:
        for b in sphere_points(modes.d, a.norm2):
            if b != a:
                lambda_f.append(b)
                ell[b] = a

    plus, minus = list(), list()
    for a, b in itertools.product(lambda_f, repeat=2):
        if ell[a] + ell[b] == a + b:
            plus.append((a, b))
        elif a != b and ell[a] - ell[b] == a - b:
            minus.append((a, b))

    # union-find over the coupling pairs
    parent = {b: b for b in lambda_f}

    def find(b):
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        return b

    for a, b in itertools.chain(plus, minus):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    groups = dict()
    for b in lambda_f:
        groups.setdefault(find(b), list()).append(b)

    classes = [sorted(members, key=lambda b: (modes.index(ell[b]), b))
               for members in groups.values()]
    classes.sort(key=lambda members: (len(members) > 1, min(members)))

    logging.debug('Resonance geometry of %s: |Lambda_f|=%d, M=%d'
                  % (modes, len(lambda_f), len(classes)))

    return ResonanceGeometry(modes, lambda_f, ell, plus, minus, classes)


class Block(NamedTuple):
    """A block :math:`[a]_\\Delta` of a sphere partition."""

    members: List[LatticeVector]
    delta: float
    diameter: float


def block_of(a: LatticeVector, delta: float,
             universe_bound: float) -> Block:
    """Return the block :math:`[a]_\\Delta` containing *a*.

    The block is the closure of *a* within its sphere under the relation
    :math:`[x - y] \\leq \\Delta`. An infinite *delta* gives the whole
    sphere.
    """
    a = as_vector(a)
    if a.norm > universe_bound:
        raise ValueError('The point {} lies outside the universe of radius {}'
                         .format(a, universe_bound))
    if delta <= 0:
        raise ValueError('The partition parameter must be positive.')

    sphere = sphere_points(a.d, a.norm2)
    members, todo = {a}, [a]
    while todo:
        x = todo.pop()
        for y in sphere:
            if y not in members and pseudo_dist2(x, y) <= delta * delta:
                members.add(y)
                todo.append(y)

    members = sorted(members)
    diameter = max(pseudo_dist(x, y)
                   for x, y in itertools.product(members, repeat=2))

    return Block(members, delta, diameter)


def sphere_partition(d: int, n2: int, delta: float) -> List[Block]:
    """Partition the sphere :math:`|x|^2 = n_2` into blocks."""
    sphere = sphere_points(d, n2)
    bound = math.sqrt(n2)
    blocks, seen = list(), set()
    for x in sphere:
        if x not in seen:
            block = block_of(x, delta, bound)
            seen.update(block.members)
            blocks.append(block)

    return blocks


def max_block_diameter(d: int, delta: float, radius: float) -> float:
    """Return the largest block diameter over all spheres within
    *radius*."""
    largest = 0.0
    for n2 in range(int(radius * radius) + 1):
        if sphere_count(d, n2) > 0:
            largest = max([largest] + [block.diameter for block
                                       in sphere_partition(d, n2, delta)])

    return largest


def ball_points(d: int, R: float) -> np.ndarray:
    """Return all integer points of the closed ball of radius *R*."""
    r = int(math.floor(R))
    axis = np.arange(-r, r + 1)
    grid = np.stack(np.meshgrid(*([axis] * d), indexing='ij'),
                    axis=-1).reshape(-1, d)
    return grid[(grid ** 2).sum(axis=1) <= R * R]


class TypicalityResult(NamedTuple):
    frac_admissible: float
    frac_strongly_admissible: float
    trials: int


def _typicality_partition(ball: np.ndarray, n: int, trials: int,
                          seed: np.random.SeedSequence) -> Tuple[int, int]:
    rng = np.random.default_rng(seed)
    admissible = strong = 0
    for _ in range(trials):
        while True:
            index = rng.integers(len(ball), size=n)
            if len(set(index.tolist())) == n:
                break

        label = classify_set([ball[i] for i in index])
        admissible += label is not Admissibility.NOT_ADMISSIBLE
        strong += label is Admissibility.STRONGLY_ADMISSIBLE

    return admissible, strong


def sample_typicality(d: int, n: int, R: float, trials: int, seed: int,
                      threads: int = 1,
                      partition_size: int = 1000) -> TypicalityResult:
    """Estimate how typical (strongly) admissible sets are.

    *trials* sets of *n* distinct points are drawn uniformly from the
    integer points of the ball of radius *R*. The points are drawn with
    replacement and draws with duplicates are rejected. The trials are split
    into partitions of fixed size with independent sub-seeds, so the result
    does not depend on the number of *threads*.

    :raises ValueError: If the ball holds less than *n* points.
    """
    if trials < 1:
        raise ValueError('At least one trial is required.')

    ball = ball_points(d, R)
    if len(ball) < n:
        raise ValueError('The ball of radius {} holds only {} points, {} are '
                         'required.'.format(R, len(ball), n))

    sizes = [partition_size] * (trials // partition_size)
    if trials % partition_size:
        sizes.append(trials % partition_size)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))

    logging.debug('Sample %d sets of %d points in B(%s) with %d partitions'
                  % (trials, n, R, len(sizes)))

    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        counts = list(executor.map(
            lambda job: _typicality_partition(ball, n, *job),
            zip(sizes, seeds)))

    admissible = sum(c[0] for c in counts)
    strong = sum(c[1] for c in counts)

    return TypicalityResult(admissible / trials, strong / trials, trials)
