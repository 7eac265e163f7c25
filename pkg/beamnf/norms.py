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
Weighted norms (:mod:`beamnf.norms`)
====================================

.. currentmodule:: beamnf.norms

Weighted norms of sequences and block matrices over a truncated universe
of :math:`\\mathbb{Z}^d`. Every site carries a 2-vector and every pair of
sites a 2x2 block. The weight of a pair is

.. math::

   e_{\\gamma,\\kappa}(a, b) = C e^{\\gamma_1 [a - b]}
   \\max([a - b], 1)^{\\gamma_2} \\min(\\langle a\\rangle,
   \\langle b\\rangle)^\\kappa

and the matrix norm is the larger of the weighted row and column sums of
the block operator norms. The inequalities between the norms hold on a
finite universe once *C* is large enough, see
:func:`minimal_weight_constant`.

.. autosummary::
   :toctree: generated/

   WeightedVector
   BlockMatrix
   NormCheck
   truncated_universe
   weight
   vector_norm
   matrix_norm
   operator_norm
   b_matrix_norm
   minimal_weight_constant
   minimal_ideal_constant
   check_norm_properties
"""

from typing import List, NamedTuple, Sequence, Tuple
import logging

import numpy as np

from .lattice import LatticeVector, as_vector, ball_points, pseudo_dist

Gamma = Tuple[float, float]

RELATIVE_SLACK = 1e-10


def truncated_universe(d: int, radius: float) -> List[LatticeVector]:
    """Return the integer points with :math:`|a| \\leq` *radius* in
    lexicographic order."""
    if d < 1:
        raise ValueError('The dimension must be positive.')
    return sorted(LatticeVector(p) for p in ball_points(d, radius))


def _check_gamma(gamma: Gamma, kappa: float = 0.0) -> Gamma:
    gamma = tuple(float(g) for g in gamma)
    if len(gamma) != 2 or gamma[0] < 0:
        raise ValueError('Expected two weights with gamma_1 >= 0, got {}'
                         .format(gamma))
    if kappa < 0:
        raise ValueError('The weight kappa must not be negative.')
    return gamma


def weight(a, b, gamma: Gamma, kappa: float, C: float = 1.0) -> float:
    """Return :math:`e_{\\gamma,\\kappa}(a, b)`."""
    a, b = as_vector(a), as_vector(b)
    g1, g2 = _check_gamma(gamma, kappa)
    distance = pseudo_dist(a, b)
    return (C * np.exp(g1 * distance) * max(distance, 1.0) ** g2
            * min(a.bracket, b.bracket) ** kappa)


class _Geometry():
    # pairwise quantities of a universe

    def __init__(self, universe: Sequence[LatticeVector]) -> None:
        points = np.array([as_vector(a).coords for a in universe], dtype=float)
        minus = points[:, None, :] - points[None, :, :]
        plus = points[:, None, :] + points[None, :, :]
        self.pseudo = np.sqrt(np.minimum((minus ** 2).sum(axis=-1),
                                         (plus ** 2).sum(axis=-1)))
        self.norms = np.sqrt((points ** 2).sum(axis=-1))
        self.brackets = np.maximum(1.0, self.norms)

    def weights(self, gamma: Gamma, kappa: float, C: float) -> np.ndarray:
        g1, g2 = _check_gamma(gamma, kappa)
        smaller = np.minimum(self.brackets[:, None], self.brackets[None, :])
        return (C * np.exp(g1 * self.pseudo)
                * np.maximum(self.pseudo, 1.0) ** g2 * smaller ** kappa)

    def site_weights(self, gamma: Sequence[float]) -> np.ndarray:
        # gamma may be negative here
        return np.exp(gamma[0] * self.norms) * self.brackets ** gamma[1]


class WeightedVector():
    """A sequence :math:`\\zeta_a \\in \\mathbb{C}^2` over a universe with
    the weights :math:`\\gamma`."""

    def __init__(self, universe: Sequence[LatticeVector], entries: np.ndarray,
                 gamma: Sequence[float]) -> None:
        self.universe = [as_vector(a) for a in universe]
        self.entries = np.asarray(entries, dtype=complex)
        if self.entries.shape != (len(self.universe), 2):
            raise ValueError('Expected entries of shape {}, got {}'
                             .format((len(self.universe), 2),
                                     self.entries.shape))
        self.gamma = tuple(gamma)


class BlockMatrix():
    """A matrix of 2x2 blocks :math:`A_a^b` over a universe."""

    def __init__(self, universe: Sequence[LatticeVector],
                 blocks: np.ndarray) -> None:
        self.universe = [as_vector(a) for a in universe]
        self.blocks = np.asarray(blocks, dtype=complex)
        n = len(self.universe)
        if self.blocks.shape != (n, n, 2, 2):
            raise ValueError('Expected blocks of shape {}, got {}'
                             .format((n, n, 2, 2), self.blocks.shape))

    @classmethod
    def identity(cls, universe: Sequence[LatticeVector]) -> 'BlockMatrix':
        n = len(universe)
        blocks = np.zeros((n, n, 2, 2))
        blocks[np.arange(n), np.arange(n)] = np.eye(2)
        return cls(universe, blocks)

    def block_norms(self) -> np.ndarray:
        """Return the operator norms :math:`\\|A_a^b\\|`."""
        return np.linalg.norm(self.blocks, ord=2, axis=(2, 3))

    def dense(self) -> np.ndarray:
        n = len(self.universe)
        return self.blocks.transpose(0, 2, 1, 3).reshape(2 * n, 2 * n)

    def apply(self, v: WeightedVector) -> WeightedVector:
        return WeightedVector(self.universe,
                              np.einsum('abij,bj->ai', self.blocks,
                                        v.entries), v.gamma)

    def __matmul__(self, other: 'BlockMatrix') -> 'BlockMatrix':
        return BlockMatrix(self.universe, np.einsum('acij,cbjk->abik',
                                                    self.blocks,
                                                    other.blocks))


def vector_norm(v: WeightedVector) -> float:
    """Return :math:`(\\sum_a |\\zeta_a|^2 e^{2\\gamma_1 |a|}
    \\langle a\\rangle^{2\\gamma_2})^{1/2}`."""
    w = _Geometry(v.universe).site_weights(v.gamma)
    return float(np.sqrt(np.sum(np.abs(v.entries) ** 2 * w[:, None] ** 2)))


def matrix_norm(A: BlockMatrix, gamma: Gamma, kappa: float,
                C: float = 1.0) -> float:
    """Return :math:`|A|_{\\gamma,\\kappa}`, the larger of
    :math:`\\sup_a \\sum_b \\|A_a^b\\| e_{\\gamma,\\kappa}(a, b)` and
    :math:`\\sup_b \\sum_a \\|A_a^b\\| e_{\\gamma,\\kappa}(a, b)`."""
    weighted = A.block_norms() * _Geometry(A.universe).weights(gamma, kappa,
                                                               C)
    if not weighted.size:
        return 0.0
    return float(max(weighted.sum(axis=1).max(), weighted.sum(axis=0).max()))


def operator_norm(A: BlockMatrix, gamma: Sequence[float]) -> float:
    """Return the norm of *A* as operator on the sequences with weights
    *gamma*."""
    w = np.repeat(_Geometry(A.universe).site_weights(gamma), 2)
    if not w.size:
        return 0.0
    return float(np.linalg.norm(w[:, None] * A.dense() / w[None, :], 2))


def b_matrix_norm(A: BlockMatrix, gamma: Gamma, kappa: float,
                  m_star: float, C: float = 1.0) -> float:
    """Return the operator norm plus
    :math:`|A|_{(\\gamma_1, \\gamma_2 - m_*), \\kappa}`."""
    shifted = (gamma[0], gamma[1] - m_star)
    return operator_norm(A, gamma) + matrix_norm(A, shifted, kappa, C)


def minimal_weight_constant(universe: Sequence[LatticeVector], gamma: Gamma,
                            kappa: float) -> float:
    """Return the smallest *C* with
    :math:`e_{\\gamma,\\kappa}(a, b) \\leq e_{\\gamma,0}(a, c)
    e_{\\gamma,\\kappa}(c, b)` for all triples of the universe."""
    geometry = _Geometry(universe)
    wk = geometry.weights(gamma, kappa, 1.0)
    w0 = geometry.weights(gamma, 0.0, 1.0)
    ratio = wk[:, None, :] / (w0[:, :, None] * wk[None, :, :])
    return float(max(1.0, ratio.max(initial=0.0)))


def minimal_ideal_constant(universe: Sequence[LatticeVector], gamma: Gamma,
                           gamma_tilde: Sequence[float]) -> float:
    """Return the smallest *C* with :math:`w_a / w_b \\leq
    e_{\\gamma,0}(a, b)` for the site weights *w* of *gamma_tilde*.

    It bounds the weighted operator norm for
    :math:`-\\gamma \\leq \\tilde\\gamma \\leq \\gamma` by the matrix
    norm.
    """
    geometry = _Geometry(universe)
    w = geometry.site_weights(gamma_tilde)
    ratio = (w[:, None] / w[None, :]) / geometry.weights(gamma, 0.0, 1.0)
    return float(max(1.0, ratio.max(initial=0.0)))


class NormCheck(NamedTuple):
    """Violations of the norm inequalities on random instances."""

    trials: int
    constant: float
    product_violations: int
    operator_violations: int

    def to_json(self) -> dict:
        return {
            'trials': self.trials,
            'constant': self.constant,
            'productViolations': self.product_violations,
            'operatorViolations': self.operator_violations
        }


def random_block_matrix(universe: Sequence[LatticeVector],
                        rng: np.random.Generator,
                        density: float = 0.5) -> BlockMatrix:
    """Return a random complex block matrix with the given share of nonzero
    blocks."""
    n = len(universe)
    blocks = (rng.standard_normal((n, n, 2, 2))
              + 1j * rng.standard_normal((n, n, 2, 2)))
    blocks *= (rng.random((n, n)) < density)[:, :, None, None]
    return BlockMatrix(universe, blocks)


def check_norm_properties(universe: Sequence[LatticeVector], gamma: Gamma,
                          kappa: float, trials: int, seed: int,
                          C: float = None) -> NormCheck:
    """Count the violations of
    :math:`|AB|_{\\gamma,\\kappa} \\leq |A|_{\\gamma,0}|B|_{\\gamma,\\kappa}`
    and :math:`\\|A\\zeta\\|_{\\tilde\\gamma} \\leq |A|_{\\gamma,\\kappa}
    \\|\\zeta\\|_{\\tilde\\gamma}` on random instances.

    :math:`\\tilde\\gamma` is drawn from :math:`[-\\gamma, \\gamma]`. The
    default *C* is the larger of the minimal weight constant and the
    minimal ideal constants of the corners :math:`\\pm\\gamma`.
    """
    gamma = _check_gamma(gamma, kappa)
    if C is None:
        corners = [(s1 * gamma[0], s2 * gamma[1]) for s1 in (-1, 1)
                   for s2 in (-1, 1)]
        C = max([minimal_weight_constant(universe, gamma, kappa)]
                + [minimal_ideal_constant(universe, gamma, g)
                   for g in corners])

    rng = np.random.default_rng(seed)
    product = operator = 0
    for _ in range(trials):
        A = random_block_matrix(universe, rng)
        B = random_block_matrix(universe, rng)
        left = matrix_norm(A @ B, gamma, kappa, C)
        right = matrix_norm(A, gamma, 0.0, C) * matrix_norm(B, gamma, kappa,
                                                            C)
        product += left > right * (1 + RELATIVE_SLACK)

        gamma_tilde = tuple(rng.uniform(-g, g) if g else 0.0 for g in gamma)
        zeta = WeightedVector(universe,
                              rng.standard_normal((len(universe), 2))
                              + 1j * rng.standard_normal((len(universe), 2)),
                              gamma_tilde)
        left = vector_norm(A.apply(zeta))
        right = matrix_norm(A, gamma, kappa, C) * vector_norm(zeta)
        operator += left > right * (1 + RELATIVE_SLACK)

    if product or operator:
        logging.warning('Norm inequalities violated on %d product and %d '
                        'operator instances' % (product, operator))

    return NormCheck(trials, C, int(product), int(operator))
