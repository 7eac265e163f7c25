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
Hamiltonian algebra (:mod:`beamnf.hamalg`)
==========================================

.. currentmodule:: beamnf.hamalg

Polynomial Hamiltonians in the complex variables
:math:`(\\xi_a, \\eta_a)` on a truncated universe of modes. The quartic
part of the beam Hamiltonian is normalized by the time one flow of
:math:`\\chi_4`, that is

.. math::

   h_4 + \\{\\chi_4, h_2\\} = z_4 + q_4^3

where :math:`z_4` is the resonant part with at least two modes in *A* and
:math:`q_4^3` collects the monomials with at most one mode in *A*.

The Poisson bracket is
:math:`\\{F, G\\} = i \\sum_a (\\partial_{\\eta_a} F \\partial_{\\xi_a} G
- \\partial_{\\xi_a} F \\partial_{\\eta_a} G)`.

Coefficients live in a field. The :class:`ExactField` keeps
:math:`\\sqrt{\\lambda_a}` as positive symbol per squared norm and
:math:`(2\\pi)^{-d}` as symbolic power, so identities are verified
independent of the mass. The :class:`FloatField` collapses everything to
complex floats.

Both :math:`h_4` and :math:`\\chi_4` are built over index tuples inside
the universe. Since :math:`h_2` is diagonal, the bracket with it is exact
on the universe.

The monomials :math:`\\xi_i\\xi_j\\xi_k\\eta_l` use the momentum relation
:math:`i + j + k = l`, in :math:`h_{4,1}` as well as in :math:`\\chi_4`.

.. autosummary::
   :toctree: generated/

   Monomial
   PolyHamiltonian
   ExactField
   FloatField
   build_h2
   build_h4
   build_chi4
   poisson_bracket
   verify_normal_form
   z4_plus_closed_form
   z4_minus2_closed_form
   torus_quadratic_part
"""

from collections import Counter, defaultdict
from typing import Callable, Dict, Iterable, List, NamedTuple, Sequence, Tuple
import functools
import itertools
import logging
import math

import numpy as np
import sympy

from .core.errors import VanishingDenominatorError
from .frequencies import check_mass
from .lattice import (LatticeVector, ModeSet, as_mode_set, as_vector,
                      resonance_geometry, sphere_points)

XI = 0
"""Code of the variable :math:`\\xi`."""

ETA = 1
"""Code of the variable :math:`\\eta`."""

SIGMA = {XI: 1, ETA: -1}
NAMES = {XI: 'xi', ETA: 'eta'}

DENOMINATOR_TOL = 1e-12


class Monomial():
    """A product of the variables :math:`\\xi_a` and :math:`\\eta_a`.

    The factors are kept as sorted tuple of ``(mode, sign)`` pairs with sign
    :data:`XI` or :data:`ETA`.
    """

    __slots__ = ('factors', '_hash', '_powers')

    def __init__(self, factors: Iterable[Tuple[LatticeVector, int]]) -> None:
        self.factors = tuple(sorted((as_vector(mode), int(sign))
                                    for mode, sign in factors))
        self._hash = hash(self.factors)
        self._powers = None

    @classmethod
    def of(cls, xi: Iterable = (), eta: Iterable = ()) -> 'Monomial':
        """Return the product of :math:`\\xi` over *xi* and :math:`\\eta` over
        *eta*."""
        return cls([(a, XI) for a in xi] + [(a, ETA) for a in eta])

    @property
    def powers(self) -> Dict[LatticeVector, Tuple[int, int]]:
        """Map of modes to the exponents :math:`(p, q)` of
        :math:`\\xi^p \\eta^q`."""
        if self._powers is None:
            powers = defaultdict(lambda: [0, 0])
            for mode, sign in self.factors:
                powers[mode][sign] += 1
            self._powers = {mode: tuple(pq) for mode, pq in powers.items()}
        return self._powers

    @property
    def degree(self) -> int:
        return len(self.factors)

    @property
    def xi_modes(self) -> List[LatticeVector]:
        return [mode for mode, sign in self.factors if sign == XI]

    @property
    def eta_modes(self) -> List[LatticeVector]:
        return [mode for mode, sign in self.factors if sign == ETA]

    @property
    def momentum(self) -> Tuple[int, ...]:
        """:math:`\\sum \\sigma \\cdot a` with :math:`\\sigma(\\xi) = 1` and
        :math:`\\sigma(\\eta) = -1`."""
        d = self.factors[0][0].d if self.factors else 0
        return tuple(sum(SIGMA[sign] * mode[i] for mode, sign in self.factors)
                     for i in range(d))

    @property
    def has_zero_momentum(self) -> bool:
        return not any(self.momentum)

    @property
    def arrangements(self) -> int:
        """The number of ordered index tuples, with all :math:`\\xi` first,
        which give this monomial."""
        def orderings(modes):
            count = math.factorial(len(modes))
            for multiplicity in Counter(modes).values():
                count //= math.factorial(multiplicity)
            return count

        return orderings(self.xi_modes) * orderings(self.eta_modes)

    def conjugate(self) -> 'Monomial':
        """Return the monomial with :math:`\\xi` and :math:`\\eta`
        swapped."""
        return Monomial((mode, 1 - sign) for mode, sign in self.factors)

    def bracket_product(self, other: 'Monomial',
                        mode: LatticeVector) -> 'Monomial':
        """Return the product with *other* divided by
        :math:`\\xi_a \\eta_a` for the *mode* a."""
        factors = list(self.factors + other.factors)
        factors.remove((mode, XI))
        factors.remove((mode, ETA))
        return Monomial(factors)

    def __eq__(self, other) -> bool:
        return isinstance(other, Monomial) and self.factors == other.factors

    def __lt__(self, other: 'Monomial') -> bool:
        return self.factors < other.factors

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return ' '.join('%s%s' % (NAMES[sign], mode.coords)
                        for mode, sign in self.factors) or '1'

    def to_json(self) -> List:
        return [[mode.to_json(), NAMES[sign]] for mode, sign in self.factors]


class FloatField():
    """Complex float coefficients at a fixed mass."""

    exact = False

    def __init__(self, d: int, m: float) -> None:
        self.d = d
        self.m = check_mass(m)
        self.c = (2 * math.pi) ** -d
        """The constant :math:`(2\\pi)^{-d}`."""
        self.I = 1j
        self.zero = 0j

    def lam(self, n2: int) -> float:
        return math.sqrt(n2 * n2 + self.m)

    def sqrt_lam(self, n2: int) -> float:
        return math.sqrt(self.lam(n2))

    def number(self, p: int, q: int = 1) -> float:
        return p / q

    def simplify(self, x):
        return x

    def is_zero(self, x) -> bool:
        return abs(x) <= DENOMINATOR_TOL

    def conjugate(self, x) -> complex:
        return complex(x).conjugate()

    def to_complex(self, x) -> complex:
        return complex(x)

    def same(self, other) -> bool:
        return (not other.exact and self.d == other.d
                and self.m == other.m)


class ExactField():
    """Exact coefficients.

    :math:`\\sqrt{\\lambda_a}` is the positive symbol ``s<n>`` of the
    squared norm *n* and :math:`(2\\pi)^{-d}` stays a symbolic power. The
    mass is only used by :meth:`to_complex`.
    """

    exact = True

    def __init__(self, d: int, m: float) -> None:
        self.d = d
        self.m = check_mass(m)
        self.c = (2 * sympy.pi) ** -d
        """The constant :math:`(2\\pi)^{-d}`."""
        self.I = sympy.I
        self.zero = sympy.Integer(0)

    def sqrt_lam(self, n2: int) -> sympy.Symbol:
        return _sqrt_symbol(n2)

    def lam(self, n2: int):
        return self.sqrt_lam(n2) ** 2

    def number(self, p: int, q: int = 1) -> sympy.Rational:
        return sympy.Rational(p, q)

    def simplify(self, x):
        return sympy.cancel(x)

    def is_zero(self, x) -> bool:
        return sympy.cancel(x) == 0

    def conjugate(self, x):
        return sympy.conjugate(x)

    def to_complex(self, x) -> complex:
        x = sympy.sympify(x)
        values = {s: sympy.Float((_SQUARED_NORMS[s] ** 2 + self.m) ** 0.25,
                                 30)
                  for s in x.free_symbols}
        return complex(sympy.N(x.xreplace(values), 30))

    def same(self, other) -> bool:
        return other.exact and self.d == other.d and self.m == other.m


_SQUARED_NORMS = dict()


@functools.lru_cache(maxsize=None)
def _sqrt_symbol(n2: int) -> sympy.Symbol:
    symbol = sympy.Symbol('s%d' % n2, positive=True)
    _SQUARED_NORMS[symbol] = n2
    return symbol


def make_field(d: int, m: float, exact: bool = False):
    """Return an :class:`ExactField` or a :class:`FloatField`."""
    return ExactField(d, m) if exact else FloatField(d, m)


class PolyHamiltonian():
    """A finite sum of monomials with coefficients in a field.

    Zero coefficients are not stored. Exact coefficients are only reduced by
    :meth:`simplified`.
    """

    def __init__(self, field, terms: Dict[Monomial, object] = None,
                 universe: Sequence[LatticeVector] = None) -> None:
        self.field = field
        """The coefficient field."""

        self.universe = tuple(universe) if universe is not None else None
        """The truncation universe."""

        self.terms = dict()
        """Map of :class:`Monomial` to coefficient."""

        for monomial, coefficient in (terms or dict()).items():
            self.add_term(monomial, coefficient)

    def add_term(self, monomial: Monomial, coefficient) -> None:
        """Add *coefficient* times *monomial*."""
        total = self.terms.get(monomial, 0) + coefficient
        if total == 0:
            self.terms.pop(monomial, None)
        else:
            self.terms[monomial] = total

    def _new(self, terms=None) -> 'PolyHamiltonian':
        return PolyHamiltonian(self.field, terms, self.universe)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms))

    def __contains__(self, monomial: Monomial) -> bool:
        return monomial in self.terms

    def __getitem__(self, monomial: Monomial):
        return self.terms.get(monomial, self.field.zero)

    def items(self):
        return self.terms.items()

    def __add__(self, other: 'PolyHamiltonian') -> 'PolyHamiltonian':
        result = self._new(self.terms)
        for monomial, coefficient in other.terms.items():
            result.add_term(monomial, coefficient)
        return result

    def __neg__(self) -> 'PolyHamiltonian':
        return self._new({mon: -c for mon, c in self.terms.items()})

    def __sub__(self, other: 'PolyHamiltonian') -> 'PolyHamiltonian':
        return self + (-other)

    def __mul__(self, other) -> 'PolyHamiltonian':
        """Return the product with a Hamiltonian or a scalar."""
        if not isinstance(other, PolyHamiltonian):
            return self.scaled(other)
        if not self.field.same(other.field):
            raise ValueError('Both Hamiltonians need the same coefficient '
                             'field.')

        result = self._new()
        for mon1, c1 in self.terms.items():
            for mon2, c2 in other.terms.items():
                result.add_term(Monomial(mon1.factors + mon2.factors),
                                c1 * c2)
        return result

    def __rmul__(self, factor) -> 'PolyHamiltonian':
        return self.scaled(factor)

    def scaled(self, factor) -> 'PolyHamiltonian':
        return self._new({mon: factor * c for mon, c in self.terms.items()})

    def select(self, predicate: Callable[[Monomial], bool]
               ) -> 'PolyHamiltonian':
        """Return the terms whose monomial satisfies *predicate*."""
        return self._new({mon: c for mon, c in self.terms.items()
                          if predicate(mon)})

    def simplified(self) -> 'PolyHamiltonian':
        """Return a copy with simplified coefficients and without zeros."""
        terms = dict()
        for monomial, coefficient in self.terms.items():
            coefficient = self.field.simplify(coefficient)
            if coefficient != 0:
                terms[monomial] = coefficient
        return self._new(terms)

    @property
    def is_real(self) -> bool:
        """Whether conjugating the variables and the coefficients leaves the
        Hamiltonian unchanged."""
        for monomial, coefficient in self.terms.items():
            partner = self[monomial.conjugate()]
            if not self.field.is_zero(self.field.conjugate(coefficient)
                                      - partner):
                return False
        return True

    @property
    def degrees(self) -> set:
        return {monomial.degree for monomial in self.terms}

    def coefficient(self, monomial: Monomial) -> complex:
        """Return the coefficient of *monomial* as complex number."""
        return self.field.to_complex(self[monomial])

    def max_abs(self) -> float:
        """Return the largest absolute value of all coefficients."""
        return max((abs(self.field.to_complex(c))
                    for c in self.terms.values()), default=0.0)

    def evaluate(self) -> 'PolyHamiltonian':
        """Return the Hamiltonian with complex float coefficients."""
        field = FloatField(self.field.d, self.field.m)
        return PolyHamiltonian(field, {mon: self.field.to_complex(c)
                                       for mon, c in self.terms.items()},
                               self.universe)

    def to_json(self) -> List[dict]:
        rows = list()
        for monomial in self:
            value = self.field.to_complex(self.terms[monomial])
            row = {'monomial': monomial.to_json(),
                   're': value.real, 'im': value.imag}
            if self.field.exact:
                row['exact'] = str(self.terms[monomial])
            rows.append(row)
        return rows


def poisson_bracket(F: PolyHamiltonian, G: PolyHamiltonian
                    ) -> PolyHamiltonian:
    """Return the Poisson bracket :math:`\\{F, G\\}`.

    For monomials with the exponents :math:`(p_1, q_1)` and
    :math:`(p_2, q_2)` in the mode *a*, the contribution of *a* is
    :math:`i (q_1 p_2 - p_1 q_2) c_1 c_2\\, m_1 m_2 / (\\xi_a \\eta_a)`.
    """
    if not F.field.same(G.field):
        raise ValueError('Both Hamiltonians need the same coefficient field.')
    if (F.universe is not None and G.universe is not None
            and set(F.universe) != set(G.universe)):
        raise ValueError('Both Hamiltonians need the same universe.')

    index = defaultdict(list)
    for monomial, coefficient in G.terms.items():
        for mode in monomial.powers:
            index[mode].append((monomial, coefficient))

    I = F.field.I
    result = PolyHamiltonian(F.field, universe=F.universe or G.universe)
    for mon1, c1 in F.terms.items():
        for mode, (p1, q1) in mon1.powers.items():
            for mon2, c2 in index.get(mode, ()):
                p2, q2 = mon2.powers[mode]
                weight = q1 * p2 - p1 * q2
                if weight:
                    result.add_term(mon1.bracket_product(mon2, mode),
                                    I * weight * c1 * c2)

    return result


def truncation_universe(d: int, cutoff: int) -> List[LatticeVector]:
    """Return all points with :math:`|a| \\leq` *cutoff* in lexicographic
    order."""
    return sorted(itertools.chain.from_iterable(
        sphere_points(d, n2) for n2 in range(cutoff * cutoff + 1)))


def _dimension(universe: Sequence[LatticeVector]) -> int:
    if not universe:
        raise ValueError('The universe must not be empty.')
    return as_vector(universe[0]).d


def build_h2(universe: Sequence[LatticeVector], m: float,
             exact: bool = False) -> PolyHamiltonian:
    """Return :math:`h_2 = \\sum_a \\lambda_a \\xi_a \\eta_a`."""
    universe = [as_vector(a) for a in universe]
    field = make_field(_dimension(universe), m, exact)
    return _h2(universe, field)


def _h2(universe, field) -> PolyHamiltonian:
    return PolyHamiltonian(field, {Monomial.of([a], [a]): field.lam(a.norm2)
                                   for a in universe}, universe)


class QuarticParts(NamedTuple):
    """The decomposition :math:`h_4 = h_{4,0} + h_{4,1} + h_{4,2}`."""

    h40: PolyHamiltonian
    h41: PolyHamiltonian
    h42: PolyHamiltonian

    def total(self) -> PolyHamiltonian:
        return self.h40 + self.h41 + self.h42


@functools.lru_cache(maxsize=8)
def _quartic_counts(universe: Tuple[LatticeVector, ...]
                    ) -> Tuple[Counter, Counter, Counter]:
    members = set(universe)
    h40, h41, h42 = Counter(), Counter(), Counter()
    for i, j, k in itertools.product(universe, repeat=3):
        s = i + j + k
        if -s in members:
            h40[Monomial.of([i, j, k, -s])] += 1
            h40[Monomial.of(eta=[i, j, k, -s])] += 1
        if s in members:
            h41[Monomial.of([i, j, k], [s])] += 1
            h41[Monomial.of([s], [i, j, k])] += 1
        l = i + j - k
        if l in members:
            h42[Monomial.of([i, j], [k, l])] += 1

    logging.debug('Quartic index sets of %d modes: %d, %d and %d monomials'
                  % (len(universe), len(h40), len(h41), len(h42)))

    return h40, h41, h42


def _inverse_sqrt(monomial: Monomial, field):
    denominator = 1
    for mode, _ in monomial.factors:
        denominator = denominator * field.sqrt_lam(mode.norm2)
    return 1 / denominator


def _h4(universe, field) -> QuarticParts:
    counts = _quartic_counts(tuple(sorted(universe)))
    prefactors = (field.number(1, 4), field.number(1), field.number(3, 2))

    parts = list()
    for counter, prefactor in zip(counts, prefactors):
        terms = dict()
        for monomial, count in counter.items():
            assert monomial.has_zero_momentum
            terms[monomial] = (count * prefactor * field.c
                               * _inverse_sqrt(monomial, field))
        parts.append(PolyHamiltonian(field, terms, universe))

    return QuarticParts(*parts)


def build_h4(universe: Sequence[LatticeVector], m: float,
             exact: bool = False) -> QuarticParts:
    """Return the quartic part of the Hamiltonian.

    With :math:`c = (2\\pi)^{-d}` and the sums over ordered index tuples in
    the universe

    * :math:`h_{4,0} = \\frac{c}{4}\\sum_{i+j+k+l=0}
      (\\xi_i\\xi_j\\xi_k\\xi_l + \\eta_i\\eta_j\\eta_k\\eta_l) /
      \\sqrt{\\lambda_i\\lambda_j\\lambda_k\\lambda_l}`,
    * :math:`h_{4,1} = c\\sum_{i+j+k=l}
      (\\xi_i\\xi_j\\xi_k\\eta_l + \\eta_i\\eta_j\\eta_k\\xi_l)
      / \\sqrt{\\dots}`,
    * :math:`h_{4,2} = \\frac{3c}{2}\\sum_{i+j=k+l}
      \\xi_i\\xi_j\\eta_k\\eta_l / \\sqrt{\\dots}`.

    The coefficient of a monomial is its number of
    :attr:`~Monomial.arrangements` times the value of one index tuple.
    """
    universe = [as_vector(a) for a in universe]
    field = make_field(_dimension(universe), m, exact)
    return _h4(universe, field)


def in_j2(monomial: Monomial, A: ModeSet) -> bool:
    """Whether at least two factors, counted with multiplicity, are modes of
    *A*."""
    return sum(1 for mode, _ in monomial.factors if mode in A) >= 2


def formal_divisor(monomial: Monomial) -> Counter:
    """Return :math:`\\sum_\\xi \\lambda - \\sum_\\eta \\lambda` after the
    substitution :math:`\\lambda_a \\mapsto x_{|a|^2}`."""
    terms = Counter()
    for mode, sign in monomial.factors:
        terms[mode.norm2] += SIGMA[sign]
    return Counter({n2: c for n2, c in terms.items() if c != 0})


def is_integrable(monomial: Monomial) -> bool:
    """Whether the monomial is a product of actions
    :math:`\\xi_a\\eta_a`."""
    return all(p == q for p, q in monomial.powers.values())


def _divisor(monomial: Monomial, field):
    total = 0
    for mode, sign in monomial.factors:
        total = total + SIGMA[sign] * field.lam(mode.norm2)
    return total


def _divisor_value(monomial: Monomial, m: float) -> float:
    return sum(SIGMA[sign] * math.sqrt(mode.norm2 ** 2 + m)
               for mode, sign in monomial.factors)


def _homological(monomial: Monomial, coefficient, field):
    # {F, h2} = -i D F for the divisor D of the monomial F
    value = _divisor_value(monomial, field.m)
    if abs(value) < DENOMINATOR_TOL or not formal_divisor(monomial):
        raise VanishingDenominatorError(
            [(mode.coords, NAMES[sign]) for mode, sign in monomial.factors],
            value)
    return -field.I * coefficient / _divisor(monomial, field)


def _chi4(universe, field, A: ModeSet, parts: QuarticParts
          ) -> PolyHamiltonian:
    chi = PolyHamiltonian(field, universe=universe)
    for monomial, coefficient in parts.h40.items():
        chi.add_term(monomial, _homological(monomial, coefficient, field))
    for monomial, coefficient in parts.h41.items():
        if in_j2(monomial, A):
            chi.add_term(monomial, _homological(monomial, coefficient, field))
    for monomial, coefficient in parts.h42.items():
        if in_j2(monomial, A) and formal_divisor(monomial):
            chi.add_term(monomial, _homological(monomial, coefficient, field))

    return chi


def build_chi4(universe: Sequence[LatticeVector], m: float, A,
               exact: bool = False) -> PolyHamiltonian:
    """Return the generating Hamiltonian :math:`\\chi_4`.

    With :math:`D` the divisor of a monomial,

    * the pure :math:`\\xi^4` and :math:`\\eta^4` terms are
      :math:`\\mp\\frac{i c}{4}/(D\\sqrt{\\dots})` over all tuples,
    * the :math:`\\xi\\xi\\xi\\eta` and :math:`\\eta\\eta\\eta\\xi` terms are
      :math:`\\mp i c/(D\\sqrt{\\dots})` over tuples with at least two
      modes in *A*,
    * the :math:`\\xi_i\\xi_j\\eta_k\\eta_l` terms are
      :math:`-\\frac{3ic}{2}/(D\\sqrt{\\dots})` over tuples with at least
      two modes in *A* and :math:`\\{|i|,|j|\\} \\neq \\{|k|,|l|\\}`,

    each multiplied by the number of arrangements of the monomial.

    :raises VanishingDenominatorError: If a divisor vanishes at the mass.
    """
    universe = [as_vector(a) for a in universe]
    field = make_field(_dimension(universe), m, exact)
    return _chi4(universe, field, as_mode_set(A), _h4(universe, field))


def _z4_plus(universe, field, A: ModeSet) -> PolyHamiltonian:
    z4 = PolyHamiltonian(field, universe=universe)
    for x, y in itertools.combinations_with_replacement(universe, 2):
        if x in A or y in A:
            factor = field.number(3, 2) * (1 if x == y else 4)
            z4.add_term(Monomial.of([x, y], [x, y]),
                        factor * field.c / (field.lam(x.norm2)
                                            * field.lam(y.norm2)))
    return z4


def z4_plus_closed_form(universe: Sequence[LatticeVector], m: float, A,
                        exact: bool = False) -> PolyHamiltonian:
    """Return the integrable part
    :math:`\\frac{3c}{2}(4 - 3\\delta_{xy}) I_x I_y / (\\lambda_x\\lambda_y)`
    of :math:`z_4`, summed over pairs with a mode in *A*."""
    universe = sorted(as_vector(a) for a in universe)
    field = make_field(_dimension(universe), m, exact)
    return _z4_plus(universe, field, as_mode_set(A))


def _z4_minus2(universe, field, A: ModeSet) -> PolyHamiltonian:
    geometry = resonance_geometry(A)
    ell = geometry.ell
    members = set(universe)
    z4 = PolyHamiltonian(field, universe=universe)

    def coefficient(a, b, factor):
        return (field.number(factor) * field.c
                / (field.lam(a.norm2) * field.lam(b.norm2)))

    for a, b in geometry.plus_pairs:
        if {a, b, ell[a], ell[b]} <= members:
            z4.add_term(Monomial.of([ell[a], ell[b]], [a, b]),
                        coefficient(a, b, 3))
            z4.add_term(Monomial.of([a, b], [ell[a], ell[b]]),
                        coefficient(a, b, 3))
    for a, b in geometry.minus_pairs:
        if {a, b, ell[a], ell[b]} <= members:
            z4.add_term(Monomial.of([a, ell[b]], [ell[a], b]),
                        coefficient(a, b, 6))

    return z4


def z4_minus2_closed_form(universe: Sequence[LatticeVector], m: float, A,
                          exact: bool = False) -> PolyHamiltonian:
    """Return the part of :math:`z_4` which couples the resonant modes.

    It is :math:`3c\\sum_{(a,b)\\in +} (\\xi_{\\ell(a)}\\xi_{\\ell(b)}
    \\eta_a\\eta_b + \\xi_a\\xi_b\\eta_{\\ell(a)}\\eta_{\\ell(b)})
    / (\\lambda_a\\lambda_b) + 6c\\sum_{(a,b)\\in -}
    \\xi_a\\xi_{\\ell(b)}\\eta_{\\ell(a)}\\eta_b / (\\lambda_a\\lambda_b)`,
    restricted to the universe.
    """
    universe = sorted(as_vector(a) for a in universe)
    field = make_field(_dimension(universe), m, exact)
    return _z4_minus2(universe, field, as_mode_set(A))


class NormalFormCheck(NamedTuple):
    residual_norm: float
    residual: PolyHamiltonian
    chi4: PolyHamiltonian
    z4_plus: PolyHamiltonian
    z4_minus2: PolyHamiltonian
    q4: PolyHamiltonian


def verify_normal_form(universe: Sequence[LatticeVector], m: float, A,
                       exact: bool = False) -> NormalFormCheck:
    """Verify :math:`h_4 + \\{\\chi_4, h_2\\} = z_4 + q_4^3`.

    :math:`z_4^+`, :math:`z_4^{-2}` and :math:`q_4^3` are read off the left
    hand side. The residual is taken against the closed forms of
    :math:`z_4^+` and :math:`z_4^{-2}` and the part of
    :math:`h_{4,1} + h_{4,2}` with at most one mode in *A*.
    """
    universe = sorted(as_vector(a) for a in universe)
    A = as_mode_set(A)
    field = make_field(_dimension(universe), m, exact)

    h2 = _h2(universe, field)
    parts = _h4(universe, field)
    chi = _chi4(universe, field, A, parts)

    transformed = (parts.total() + poisson_bracket(chi, h2)).simplified()

    def j2(monomial):
        return in_j2(monomial, A)

    z4 = transformed.select(j2)
    q4 = transformed.select(lambda mon: not j2(mon))
    z4_plus = z4.select(is_integrable)
    z4_minus2 = z4.select(lambda mon: not is_integrable(mon))

    closed = (_z4_plus(universe, field, A) + _z4_minus2(universe, field, A)
              + (parts.h41 + parts.h42).select(lambda mon: not j2(mon)))
    residual = (transformed - closed).simplified()

    logging.debug('Normal form of %d modes: %d terms in z4, %d in q4, '
                  '%d residual terms' % (len(universe), len(z4), len(q4),
                                         len(residual)))

    return NormalFormCheck(residual.max_abs(), residual, chi, z4_plus,
                           z4_minus2, q4)


def torus_quadratic_part(H: PolyHamiltonian, A, rho: Sequence[float]
                         ) -> PolyHamiltonian:
    """Return the quadratic part of *H* in the modes outside of *A* on the
    torus :math:`\\xi_l = \\eta_l = \\sqrt{\\rho_l}` for :math:`l \\in A`.
    """
    A = as_mode_set(A)
    if len(rho) != A.n:
        raise ValueError('Expected {} actions, got {}'.format(A.n, len(rho)))

    roots = {a: math.sqrt(r) for a, r in zip(A, rho)}
    quadratic = PolyHamiltonian(FloatField(H.field.d, H.field.m),
                                universe=H.universe)
    for monomial, coefficient in H.items():
        inside = [mode for mode, _ in monomial.factors if mode in A]
        outside = [(mode, sign) for mode, sign in monomial.factors
                   if mode not in A]
        if len(outside) == 2:
            value = H.field.to_complex(coefficient)
            quadratic.add_term(Monomial(outside),
                               value * float(np.prod([roots[a]
                                                      for a in inside])))

    return quadratic
