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
Frequencies and small divisors (:mod:`beamnf.frequencies`)
==========================================================

.. currentmodule:: beamnf.frequencies

The linear frequencies :math:`\\lambda_a = \\sqrt{|a|^4 + m}` of the beam
equation, their derivatives with respect to the mass and the divisors
built from them.

Whether a divisor is a trivial resonance is decided on the formal sum over
squared norms, that is after the substitution
:math:`\\lambda_a \\mapsto x_{|a|^2}`, in exact integer arithmetic.

.. autosummary::
   :toctree: generated/

   Divisor
   DivisorKind
   DivisorTable
   check_mass
   eigenfrequency
   freq_derivatives
   upsilon
   derivative_determinant
   vandermonde_factorization
   divisor_eval
   formal_sum
   min_divisor_scan
   min_frequency_gap
   mass_exclusion_estimate
"""

from collections import Counter
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union
import enum
import functools
import itertools
import logging
import math

import numpy as np
from scipy.stats import qmc

from .core.errors import MassError, NotAdmissibleError
from .lattice import (Admissibility, LatticeVector, ModeSet, as_mode_set,
                      as_vector, classify_set, sphere_count, sphere_points)

EXCEPTIONAL_MASSES = (Fraction(4, 3), Fraction(5, 3))
"""Masses for which the normal form has additional resonances."""

EXCEPTIONAL_DISTANCE = 1e-6


def check_mass(m: float) -> float:
    """Return *m* if it is in ``[1, 2]``.

    A warning is logged if *m* is close to one of the
    :data:`EXCEPTIONAL_MASSES`.

    :raises MassError: If *m* is outside of ``[1, 2]``.
    """
    if not 1 <= m <= 2:
        raise MassError('The mass must be in [1, 2], got {}'.format(m))

    for exceptional in EXCEPTIONAL_MASSES:
        if abs(m - float(exceptional)) < EXCEPTIONAL_DISTANCE:
            logging.warning('The mass %s is close to the exceptional mass %s.'
                            % (m, exceptional))

    return m


def _norm2(a: Union[LatticeVector, Sequence[int], int]) -> int:
    if isinstance(a, (int, np.integer)):
        return int(a)
    return as_vector(a).norm2


def eigenfrequency(a: Union[LatticeVector, int], m: float) -> float:
    """Return :math:`\\lambda_a = \\sqrt{|a|^4 + m}`.

    *a* is either a lattice point or its squared norm.
    """
    check_mass(m)
    n2 = _norm2(a)
    return math.sqrt(n2 * n2 + m)


def within_frequency_bounds(a: Union[LatticeVector, int], m: float) -> bool:
    """Check :math:`\\langle a\\rangle^2 \\leq \\lambda_a <
    \\langle a\\rangle^2 + m / (2\\langle a\\rangle^2)`.

    The lower bound is attained for :math:`a = 0` and :math:`m = 1`.
    """
    n2 = _norm2(a)
    bracket2 = max(1, n2)
    lam = eigenfrequency(n2, m)
    return bracket2 <= lam < bracket2 + m / (2 * bracket2)


@functools.lru_cache(maxsize=None)
def upsilon(j: int) -> Fraction:
    """Return :math:`\\Upsilon_j = \\prod_{l=0}^{j-1} (2l - 1) / 2`."""
    return math.prod((Fraction(2 * l - 1, 2) for l in range(j)),
                     start=Fraction(1))


def freq_derivatives(a: Union[LatticeVector, int], m: float,
                     j_max: int) -> List[float]:
    """Return :math:`d^j\\lambda_a/dm^j` for :math:`j = 1, \\dots, j_{max}`.

    The derivatives are
    :math:`(-1)^j \\Upsilon_j (|a|^4 + m)^{1/2 - j}`.
    """
    check_mass(m)
    n2 = _norm2(a)
    base = n2 * n2 + m
    return [(-1) ** j * float(upsilon(j)) * base ** (0.5 - j)
            for j in range(1, j_max + 1)]


def derivative_matrix(points: Sequence, m: float) -> np.ndarray:
    """Return the matrix :math:`(d^j\\omega_l/dm^j)` with rows
    :math:`j = 1, \\dots, p` and one column per point."""
    p = len(points)
    return np.array([freq_derivatives(a, m, p) for a in points]).T


def derivative_determinant(points: Sequence, m: float) -> float:
    """Return the determinant of :func:`derivative_matrix`."""
    return float(np.linalg.det(derivative_matrix(points, m)))


def vandermonde_factorization(points: Sequence, m: float) -> float:
    """Return the determinant of :func:`derivative_matrix` through its
    factorization.

    With :math:`x_l = \\omega_l^{-2}` the determinant equals
    :math:`\\prod_j (-1)^j\\Upsilon_j \\prod_l \\omega_l^{-1}
    \\prod_{l<k} (x_k - x_l)`.
    """
    omega = np.array([eigenfrequency(a, m) for a in points])
    x = omega ** -2
    p = len(points)

    constants = math.prod(float((-1) ** j * upsilon(j))
                          for j in range(1, p + 1))
    vandermonde = math.prod(x[k] - x[l]
                            for l, k in itertools.combinations(range(p), 2))

    return constants * float(np.prod(1 / omega)) * vandermonde


def min_frequency_gap(d: int, radius: float, m: float) -> float:
    """Return the smallest :math:`|\\lambda_a - \\lambda_b|` over points of
    different norms within *radius*.

    :math:`\\lambda` is increasing in the squared norm, so the minimum is
    attained for consecutive representable squared norms.
    """
    norms = [n2 for n2 in range(int(radius * radius) + 1)
             if sphere_count(d, n2) > 0]
    lam = np.sqrt(np.array(norms, dtype=float) ** 2 + check_mass(m))
    return float(np.min(np.diff(lam))) if len(lam) > 1 else math.inf


class DivisorKind(enum.Enum):
    """The four types of divisors."""

    D0 = 'D0'
    D1 = 'D1'
    D2PLUS = 'D2plus'
    D2MINUS = 'D2minus'


class Divisor():
    """A divisor :math:`\\langle\\omega, k\\rangle (+\\lambda_a)
    (\\pm\\lambda_b)`."""

    def __init__(self, kind: DivisorKind, k: Sequence[int],
                 a: Optional[LatticeVector] = None,
                 b: Optional[LatticeVector] = None) -> None:
        self.kind = DivisorKind(kind)
        """The type of the divisor."""

        self.k = tuple(int(x) for x in k)
        """The integer vector indexed by *A*."""

        self.a = None if a is None else as_vector(a)
        self.b = None if b is None else as_vector(b)

        if self.kind is DivisorKind.D0:
            if not any(self.k) or self.a is not None or self.b is not None:
                raise ValueError('A D0 divisor needs k != 0 and no points.')
        elif self.kind is DivisorKind.D1:
            if self.a is None or self.b is not None:
                raise ValueError('A D1 divisor carries exactly one point.')
        elif self.a is None or self.b is None:
            raise ValueError('A D2 divisor carries two points.')

    @property
    def sign(self) -> int:
        """The sign in front of :math:`\\lambda_b`."""
        return -1 if self.kind is DivisorKind.D2MINUS else 1

    def __repr__(self) -> str:
        return 'Divisor(%s, k=%s, a=%s, b=%s)' % (
            self.kind.value, self.k,
            self.a.coords if self.a else None,
            self.b.coords if self.b else None)

    def to_row(self) -> List[str]:
        def point(p):
            return ' '.join(map(str, p.coords)) if p is not None else ''

        return [self.kind.value, ' '.join(map(str, self.k)),
                point(self.a), point(self.b)]


class DivisorValue(NamedTuple):
    value: float
    trivial_resonance: bool


def formal_sum(dv: Divisor, A) -> Counter:
    """Return the divisor after the substitution
    :math:`\\lambda_a \\mapsto x_{|a|^2}` as map of squared norms to integer
    coefficients. Zero coefficients are dropped."""
    modes = as_mode_set(A)
    if len(dv.k) != modes.n:
        raise ValueError('The vector k must have one entry per mode.')

    terms = Counter()
    for ki, a in zip(dv.k, modes):
        terms[a.norm2] += ki
    if dv.a is not None:
        terms[dv.a.norm2] += 1
    if dv.b is not None:
        terms[dv.b.norm2] += dv.sign

    return Counter({n2: c for n2, c in terms.items() if c != 0})


def divisor_eval(dv: Divisor, A, m: float) -> DivisorValue:
    """Evaluate the divisor *dv* at the mass *m*."""
    modes = as_mode_set(A)
    formal = formal_sum(dv, modes)
    value = sum(c * eigenfrequency(n2, m) for n2, c in formal.items())
    return DivisorValue(value, len(formal) == 0)


def _k_vectors(n: int, K: int) -> List[Tuple[int, ...]]:
    return [k for k in itertools.product(range(-K, K + 1), repeat=n)
            if sum(map(abs, k)) <= K]


class ScanResult(NamedTuple):
    min_abs: float
    argmin: Optional[Divisor]


class DivisorTable():
    """All divisors with :math:`|k|_1 \\leq K` and :math:`|a|, |b| \\leq N`.

    Value and trivial flag of a divisor depend on the points only through
    their squared norms, so each squared norm is represented by its
    lexicographically first point outside of *A*. The trivial flags are
    computed once and the table is evaluated for many masses.
    """

    def __init__(self, A, K: int, N: int) -> None:
        self.modes = as_mode_set(A)
        """The mode set *A*."""

        if K < 1 or N < 1:
            raise ValueError('The scan bounds must be positive.')
        if classify_set(self.modes) is Admissibility.NOT_ADMISSIBLE:
            raise NotAdmissibleError('Divisor scans need an admissible set: '
                                     '{}'.format(self.modes))

        self.K = K
        self.N = N

        d = self.modes.d
        self.representatives = dict()
        """Map of squared norms to the point representing them."""
        for n2 in range(N * N + 1):
            outside = [x for x in sphere_points(d, n2) if x not in self.modes]
            if outside:
                self.representatives[n2] = outside[0]

        ks = _k_vectors(self.modes.n, K)
        norms = sorted(self.representatives)
        rows = list()
        rows += [(DivisorKind.D0, k, None, None) for k in ks if any(k)]
        rows += [(DivisorKind.D1, k, ra, None)
                 for k in ks for ra in norms]
        rows += [(DivisorKind.D2PLUS, k, ra, rb)
                 for k in ks for ra, rb in
                 itertools.combinations_with_replacement(norms, 2)]
        rows += [(DivisorKind.D2MINUS, k, ra, rb)
                 for k in ks for ra in norms for rb in norms]

        self.kinds = [row[0] for row in rows]
        self.k = np.array([row[1] for row in rows], dtype=np.int64)
        self.a = np.array([-1 if row[2] is None else row[2] for row in rows])
        self.b = np.array([-1 if row[3] is None else row[3] for row in rows])
        self.sign = np.array([-1 if kind is DivisorKind.D2MINUS else 1
                              for kind in self.kinds])

        self.trivial = np.array([len(formal_sum(self.divisor(i), self.modes))
                                 == 0 for i in range(len(rows))])
        """The exact trivial resonance flags."""

        logging.debug('Divisor table for %s with K=%d, N=%d: %d divisors, '
                      '%d trivial' % (self.modes, K, N, len(rows),
                                      np.count_nonzero(self.trivial)))

    def __len__(self) -> int:
        return len(self.kinds)

    def divisor(self, i: int) -> Divisor:
        """Return the :class:`Divisor` of row *i*."""
        a = self.representatives[self.a[i]] if self.a[i] >= 0 else None
        b = self.representatives[self.b[i]] if self.b[i] >= 0 else None
        return Divisor(self.kinds[i], self.k[i], a, b)

    def values(self, m: float) -> np.ndarray:
        """Return the values of all divisors at the mass *m*."""
        check_mass(m)
        omega = np.array([math.sqrt(a.norm2 ** 2 + m) for a in self.modes])

        def lam(n2):
            return np.where(n2 >= 0, np.sqrt(np.maximum(n2, 0) ** 2.0 + m), 0)

        return self.k @ omega + lam(self.a) + self.sign * lam(self.b)

    def scan(self, m: float) -> ScanResult:
        """Return the smallest absolute value of all divisors which are no
        trivial resonance."""
        values = np.abs(self.values(m))
        values[self.trivial] = np.inf
        i = int(np.argmin(values))
        if not np.isfinite(values[i]):
            return ScanResult(math.inf, None)

        return ScanResult(float(values[i]), self.divisor(i))


@functools.lru_cache(maxsize=32)
def divisor_table(A: ModeSet, K: int, N: int) -> DivisorTable:
    """Return a cached :class:`DivisorTable`."""
    return DivisorTable(A, K, N)


def min_divisor_scan(A, m: float, K: int, N: int) -> ScanResult:
    """Return the smallest divisor which is no trivial resonance.

    The scan is exhaustive over :math:`|k|_1 \\leq K` and
    :math:`|a|, |b| \\leq N`. Ties are broken by the order (kind, k, a, b).
    """
    return divisor_table(as_mode_set(A), K, N).scan(m)


def exclusion_masses(samples: int, seed: int) -> np.ndarray:
    """Return *samples* scrambled Halton points in ``[1, 2]``."""
    if samples < 1:
        raise ValueError('At least one sample is required.')
    sampler = qmc.Halton(d=1, scramble=True, seed=seed)
    return 1 + sampler.random(samples)[:, 0]


def mass_exclusion_estimate(A, kappa: float, K: int, N: int, samples: int,
                            seed: int) -> float:
    """Estimate the measure of masses whose smallest divisor is below
    *kappa*.

    The masses are drawn from a low-discrepancy sequence, so the estimate
    is nondecreasing in *kappa* for a fixed *seed*.
    """
    table = divisor_table(as_mode_set(A), K, N)
    masses = exclusion_masses(samples, seed)
    excluded = sum(1 for m in masses if table.scan(float(m)).min_abs < kappa)
    return excluded / samples
