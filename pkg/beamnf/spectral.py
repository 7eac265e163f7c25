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
Spectral analysis (:mod:`beamnf.spectral`)
==========================================

.. currentmodule:: beamnf.spectral

The Hamiltonian operator :math:`H = iJK` of the coupling matrix splits into
blocks along the equivalence classes of :math:`\\Lambda_f`. The eigenvalues
of *H* are :math:`\\pm i\\Lambda` with :math:`\\Lambda` the eigenvalues of
:math:`JK`. A real :math:`\\Lambda` is elliptic, a purely imaginary one
gives a real pair of eigenvalues of *H* and any other value comes in a
quadruple :math:`\\{\\pm\\Lambda, \\pm\\bar\\Lambda\\}`.

One representative of every :math:`\\pm` pair is reported: the Krein
positive eigenvalue of a real pair (for a singleton this is
:math:`\\mu(b, \\rho)`) and otherwise the value with positive real part, or
positive imaginary part if it is purely imaginary.

The involution :math:`I(\\xi, \\eta) = (\\bar\\eta, \\bar\\xi)` fixes the
real subspace. The columns of :attr:`SymplecticDiagonalization.real_U` are
fixed by it.

.. autosummary::
   :toctree: generated/

   HamiltonianOperator
   BlockSpectrum
   SpectrumReport
   SymplecticDiagonalization
   PerturbationCoefficients
   build_H
   classify_spectrum
   symplectic_diagonalize
   eigenvalue_gap
   rho_star_spectrum
   eigen_perturbation
   tracked_eigenvalue
   pair_discriminant
"""

from typing import Dict, List, NamedTuple, Sequence, Tuple, Union
import logging
import math

import numpy as np
import scipy.linalg

from .core.errors import (DegenerateSpectrumError, NotAdmissibleError,
                          SpectralError, VanishingDenominatorError)
from .frequencies import eigenfrequency
from .lattice import (LatticeVector, ResonanceGeometry, as_mode_set,
                      as_vector, resonance_geometry)
from .normalform import CouplingMatrix, assemble_K, c_star, mu

ELLIPTIC = 'elliptic'
HYPERBOLIC = 'hyperbolic_real_pair'
QUADRUPLE = 'complex_quadruple'
DEGENERATE = 'degenerate'

PAIRING_FACTOR = 1e3


def symplectic_matrix(n: int) -> np.ndarray:
    """Return :math:`J` with the block :math:`[[0, 1], [-1, 0]]` for each of
    *n* sites."""
    return np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def involution(z: np.ndarray) -> np.ndarray:
    """Return :math:`I(z)` with :math:`I(\\xi, \\eta) = (\\bar\\eta,
    \\bar\\xi)` per site."""
    z = np.asarray(z)
    return np.conj(z.reshape(-1, 2)[:, ::-1]).reshape(z.shape)


def _omega(z1: np.ndarray, z2: np.ndarray) -> complex:
    # tz1 (iJ) z2 with J per site
    x, y = z1.reshape(-1, 2), z2.reshape(-1, 2)
    return 1j * np.sum(x[:, 0] * y[:, 1] - x[:, 1] * y[:, 0])


def _krein(z: np.ndarray) -> float:
    x = z.reshape(-1, 2)
    return float(np.sum(np.abs(x[:, 0]) ** 2 - np.abs(x[:, 1]) ** 2))


def _site_components(K: np.ndarray) -> List[np.ndarray]:
    n = K.shape[0] // 2
    coupled = np.abs(K.reshape(n, 2, n, 2)).sum(axis=(1, 3)) > 0
    seen, blocks = set(), list()
    for start in range(n):
        if start in seen:
            continue
        members, todo = {start}, [start]
        while todo:
            i = todo.pop()
            for j in np.flatnonzero(coupled[i] | coupled[:, i]):
                if j not in members:
                    members.add(int(j))
                    todo.append(int(j))
        seen |= members
        sites = sorted(members)
        blocks.append(np.array([2 * i + k for i in sites for k in (0, 1)]))
    return blocks


class HamiltonianOperator():
    """The Hamiltonian operator :math:`H = iJK` split into blocks."""

    def __init__(self, matrix: np.ndarray, K: np.ndarray,
                 blocks: List[np.ndarray], labels: List = None) -> None:
        self.matrix = matrix
        """The complex matrix *H* with purely imaginary entries."""

        self.K = K
        """The real symmetric matrix *K*."""

        self.blocks = blocks
        """The coordinate indices of each invariant block."""

        self.labels = labels
        """The site of every coordinate pair, if known."""

    @property
    def scale(self) -> float:
        """:math:`\\max(1, \\|K\\|_2)`."""
        if not self.K.size:
            return 1.0
        return max(1.0, float(np.linalg.norm(self.K, 2)))

    def block(self, j: int) -> np.ndarray:
        """Return the block *j* of *H*."""
        idx = self.blocks[j]
        return self.matrix[np.ix_(idx, idx)]

    def generator(self, j: int) -> np.ndarray:
        """Return the block *j* of the real matrix :math:`JK = -iH`."""
        idx = self.blocks[j]
        return symplectic_matrix(len(idx) // 2) @ self.K[np.ix_(idx, idx)]

    def members(self, j: int) -> list:
        sites = self.blocks[j][::2] // 2
        if self.labels is None:
            return sites.tolist()
        return [self.labels[i] for i in sites]


def build_H(K: Union[CouplingMatrix, np.ndarray]) -> HamiltonianOperator:
    """Return the operator :math:`H = iJK`.

    The blocks are the equivalence classes of a :class:`CouplingMatrix` or
    the connected components of the site coupling of a plain matrix.

    :raises ValueError: If *K* is not real symmetric.
    """
    if isinstance(K, CouplingMatrix):
        matrix, blocks, labels = K.K, K.class_indices(), K.labels
    else:
        matrix = np.asarray(K)
        blocks, labels = None, None

    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] \
            or matrix.shape[0] % 2:
        raise ValueError('K must be a square matrix of even size, got {}'
                         .format(matrix.shape))
    if np.iscomplexobj(matrix):
        if np.any(matrix.imag != 0):
            raise ValueError('K must be real.')
        matrix = matrix.real
    if not np.array_equal(matrix, matrix.T):
        raise ValueError('K must be symmetric.')

    if blocks is None:
        blocks = _site_components(matrix)

    H = 1j * symplectic_matrix(matrix.shape[0] // 2) @ matrix

    mask = np.zeros(H.shape, dtype=bool)
    for idx in blocks:
        mask[np.ix_(idx, idx)] = True
    if np.any(H[~mask] != 0):
        raise SpectralError('H does not leave the class subspaces invariant.')

    return HamiltonianOperator(H, matrix, blocks, labels)


class BlockSpectrum(NamedTuple):
    """The spectrum of one block."""

    index: int
    members: list
    eigenvalues: np.ndarray
    classes: List[str]
    classification: str

    def to_json(self) -> dict:
        return {
            'index': self.index,
            'members': [b.to_json() if isinstance(b, LatticeVector) else b
                        for b in self.members],
            'eigenvalues': [{'re': float(v.real), 'im': float(v.imag),
                             'class': c}
                            for v, c in zip(self.eigenvalues, self.classes)],
            'classification': self.classification
        }


class SpectrumReport(NamedTuple):
    """The spectra of all blocks and the stability verdict."""

    blocks: List[BlockSpectrum]
    stable: bool
    tol: float

    @property
    def verdict(self) -> str:
        return 'stable' if self.stable else 'unstable'

    @property
    def max_real_part(self) -> float:
        """The largest real part of the eigenvalues :math:`\\pm i\\Lambda` of
        *H*."""
        return max((float(np.abs(b.eigenvalues.imag).max(initial=0.0))
                    for b in self.blocks), default=0.0)

    def rows(self) -> List[list]:
        """Rows ``block, re, im, class`` of the eigenvalue table."""
        return [[b.index, v.real, v.imag, c] for b in self.blocks
                for v, c in zip(b.eigenvalues, b.classes)]

    def to_json(self) -> dict:
        return {
            'verdict': self.verdict,
            'stable': self.stable,
            'tol': self.tol,
            'maxRealPart': self.max_real_part,
            'blocks': [b.to_json() for b in self.blocks]
        }


def _classify(value: complex, tol: float) -> str:
    bound = tol * (1 + abs(value))
    if abs(value) <= tol:
        return DEGENERATE
    if abs(value.imag) <= bound:
        return ELLIPTIC
    if abs(value.real) <= bound:
        return HYPERBOLIC
    return QUADRUPLE


def _pair(values: np.ndarray, tol: float) -> List[Tuple[int, int]]:
    # greedy matching of the values with their negatives
    unused = list(range(len(values)))
    pairs = list()
    while unused:
        i = unused.pop(0)
        distances = [abs(values[i] + values[j]) for j in unused]
        if not distances:
            raise SpectralError('The eigenvalue {} has no partner.'
                                .format(values[i]))
        k = int(np.argmin(distances))
        if distances[k] > PAIRING_FACTOR * tol * (1 + abs(values[i])):
            raise SpectralError('Can\'t pair the eigenvalue {} with its '
                                'negative.'.format(values[i]))
        pairs.append((i, unused.pop(k)))
    return pairs


def _representatives(JK: np.ndarray, tol: float
                     ) -> List[Tuple[complex, np.ndarray, np.ndarray, str]]:
    values, vectors = scipy.linalg.eig(JK)
    if not np.all(np.isfinite(values)):
        raise SpectralError('The eigensolver returned non-finite values.')

    result = list()
    for i, j in _pair(values, tol):
        kind = _classify(values[i], tol)
        if kind in (ELLIPTIC, DEGENERATE):
            keep = _krein(vectors[:, i]) >= _krein(vectors[:, j])
        elif kind == HYPERBOLIC:
            keep = values[i].imag > 0
        else:
            keep = values[i].real > 0
        if not keep:
            i, j = j, i
        value = values[i]
        if kind in (ELLIPTIC, DEGENERATE):
            value = complex(value.real, 0.0)
        result.append((value, vectors[:, i], vectors[:, j], kind))

    return result


def classify_spectrum(H: HamiltonianOperator,
                      tol: float = 1e-9) -> SpectrumReport:
    """Classify the spectrum of every block of *H*.

    A block is a ``complex_quadruple`` if it contains a quadruple,
    ``hyperbolic_real_pair`` if it contains a real pair of eigenvalues of
    *H*, ``degenerate`` if it contains a vanishing eigenvalue and
    ``elliptic`` otherwise. The tolerance is scaled by
    :math:`\\max(1, \\|K\\|)`. The verdict is stable if and only if every
    :math:`\\Lambda` is real within the tolerance.

    :raises SpectralError: If the eigenvalues can't be paired.
    """
    if tol <= 0:
        raise ValueError('The tolerance must be positive.')

    tol_eff = tol * H.scale
    blocks, stable = list(), True
    for j in range(len(H.blocks)):
        reps = _representatives(H.generator(j), tol_eff)
        order = sorted(range(len(reps)),
                       key=lambda k: (-reps[k][0].real, -reps[k][0].imag))
        values = np.array([reps[k][0] for k in order], dtype=complex)
        classes = [reps[k][3] for k in order]

        if QUADRUPLE in classes:
            classification = QUADRUPLE
        elif HYPERBOLIC in classes:
            classification = HYPERBOLIC
        elif DEGENERATE in classes:
            classification = DEGENERATE
            logging.warning('Block %d of H has a vanishing eigenvalue.' % j)
        else:
            classification = ELLIPTIC

        stable &= all(abs(v.imag) <= tol_eff * (1 + abs(v)) for v in values)
        blocks.append(BlockSpectrum(j, H.members(j), values, classes,
                                    classification))

    return SpectrumReport(blocks, bool(stable), tol)


class SymplecticDiagonalization():
    """A symplectic matrix diagonalizing *H*.

    :math:`U^{-1} H U = i\\,\\mathrm{diag}(\\Lambda_1, -\\Lambda_1, \\dots)`
    and :math:`{}^tU (iJ) U = J`.
    """

    def __init__(self, U: np.ndarray, diag: np.ndarray, real_U: np.ndarray,
                 unit_U: np.ndarray, pairings: np.ndarray) -> None:
        self.U = U
        """The complex diagonalizing matrix."""

        self.diag = diag
        """The values :math:`\\pm\\Lambda` in the column order of *U*."""

        self.real_U = real_U
        """A symplectic matrix with columns fixed by the involution."""

        self.unit_U = unit_U
        """The eigenvectors with unit norm in the column order of *U*."""

        self.pairings = pairings
        """The pairing :math:`{}^tz (iJ) z'` of the unit eigenvectors of
        each pair."""

    def residuals(self, H: HamiltonianOperator) -> Dict[str, float]:
        """Return the largest entries of :math:`U^{-1}HU - i\\,\\mathrm{diag}`
        and of the symplectic defects of *U* and the real matrix."""
        n = self.U.shape[0] // 2
        J = symplectic_matrix(n)
        iJ = 1j * J
        conjugated = np.linalg.solve(self.U, H.matrix @ self.U)
        return {
            'diagonal': float(np.abs(conjugated
                                     - 1j * np.diag(self.diag)).max()),
            'symplectic': float(np.abs(self.U.T @ iJ @ self.U - J).max()),
            'real': float(np.abs(self.real_U.T @ iJ @ self.real_U
                                 - J).max())
        }


def _phase_fixed(z: np.ndarray) -> np.ndarray:
    # scale z by a phase such that I(z) = z
    k = int(np.argmax(np.abs(z)))
    ratio = involution(z)[k] / z[k]
    return z * np.exp(0.5j * np.angle(ratio))


def eigenvalue_gap(values: np.ndarray) -> float:
    """Return the smallest distance between two of the *values*, or
    ``inf`` for less than two values."""
    values = np.asarray(values)
    if len(values) < 2:
        return math.inf
    distances = np.abs(values[:, None] - values[None, :])
    np.fill_diagonal(distances, np.inf)
    return float(distances.min())


def symplectic_diagonalize(H: HamiltonianOperator,
                           tol: float = 1e-9) -> SymplecticDiagonalization:
    """Return a symplectic diagonalization of *H*.

    Per :math:`\\pm` pair with eigenvectors :math:`z_1` of
    :math:`i\\Lambda` and :math:`z_2` of :math:`-i\\Lambda`:

    * real :math:`\\Lambda`: :math:`z_1` is the Krein positive vector scaled
      to :math:`\\|\\xi\\|^2 - \\|\\eta\\|^2 = 1` and :math:`z_2 = -iI(z_1)`,
    * imaginary :math:`\\Lambda`: :math:`z_1 = I(z_1)`, :math:`z_2 = I(z_2)`
      and :math:`z_2` scaled such that :math:`{}^tz_1(iJ)z_2 = 1`,
    * quadruple: :math:`z_3 = I(z_1)` and :math:`z_4 = I(z_2)` complete the
      pair of :math:`\\bar\\Lambda`.

    :raises DegenerateSpectrumError: If two eigenvalues of a block are
        closer than the tolerance.
    """
    size = H.matrix.shape[0]
    tol_eff = tol * H.scale
    U = np.zeros((size, size), dtype=complex)
    unit_U = np.zeros((size, size), dtype=complex)
    real_U = np.zeros((size, size), dtype=complex)
    diag = np.zeros(size, dtype=complex)
    pairings = list()

    column = 0

    def place(idx, vectors, values):
        nonlocal column
        for z, value in zip(vectors, values):
            U[idx, column] = z
            diag[column] = value
            column += 1

    for j, idx in enumerate(H.blocks):
        JK = H.generator(j)
        values = scipy.linalg.eigvals(JK)
        gap = eigenvalue_gap(values)
        if gap <= tol_eff:
            raise DegenerateSpectrumError(
                'Block {} has a multiple eigenvalue, the smallest gap is {}'
                .format(j, gap))

        done = set()
        for value, z1, z2, kind in _representatives(JK, tol_eff):
            if kind == QUADRUPLE:
                if any(abs(np.conj(value) - v) <= PAIRING_FACTOR * tol_eff
                       for v in done):
                    continue
                done.add(value)

            start = column
            if kind == ELLIPTIC or kind == DEGENERATE:
                krein = _krein(z1)
                if krein <= tol_eff:
                    raise SpectralError('The eigenvector of {} has no Krein '
                                        'signature.'.format(value))
                z1 = z1 / math.sqrt(krein)
                z2 = -1j * involution(z1)
                place(idx, (z1, z2), (value, -value))
                p = (z1 + 1j * z2) / math.sqrt(2)
                q = 1j * (z1 - 1j * z2) / math.sqrt(2)
                real_U[idx, start] = p
                real_U[idx, start + 1] = q
            elif kind == HYPERBOLIC:
                z1, z2 = _phase_fixed(z1), _phase_fixed(z2)
                z2 = z2 / _omega(z1, z2).real
                place(idx, (z1, z2), (value, -value))
                real_U[idx, start] = z1
                real_U[idx, start + 1] = z2
            else:
                z2 = z2 / _omega(z1, z2)
                z3, z4 = involution(z1), involution(z2)
                place(idx, (z1, z2, z4, -z3),
                      (value, -value, np.conj(value), -np.conj(value)))
                u1 = (z1 + z3) / math.sqrt(2)
                u2 = 1j * (z1 - z3) / math.sqrt(2)
                v1 = (z2 + z4) / math.sqrt(2)
                v2 = 1j * (z2 - z4) / math.sqrt(2)
                for k, w in enumerate((u1, v1, u2, -v2)):
                    real_U[idx, start + k] = w

    if column != size:
        raise SpectralError('Found {} eigenvectors for {} coordinates.'
                            .format(column, size))

    for k in range(size):
        unit_U[:, k] = U[:, k] / np.linalg.norm(U[:, k])
    for k in range(0, size, 2):
        pairings.append(_omega(unit_U[:, k], unit_U[:, k + 1]))

    logging.debug('Symplectic diagonalization of %d blocks, |det U| = %s'
                  % (len(H.blocks), abs(np.linalg.det(U))))

    return SymplecticDiagonalization(U, diag, real_U, unit_U,
                                     np.array(pairings))


def rho_star_spectrum(geometry: ResonanceGeometry, m: float,
                      j_star: int) -> Dict[LatticeVector, float]:
    """Return :math:`\\mu(b, \\rho^*)` for all :math:`b \\in \\Lambda_f` at
    the unit action vector :math:`\\rho^* = e_{j^*}`."""
    rho = np.zeros(geometry.modes.n)
    rho[j_star] = 1.0
    return {b: mu(b, geometry, m, rho) for b in geometry.lambda_f}


class PerturbationCoefficients(NamedTuple):
    """:math:`\\Lambda(\\epsilon) = \\Lambda_0 + \\frac{1}{2}\\epsilon^2
    (k_1 + k_2) + O(\\epsilon^3)`."""

    k1: float
    k2: float
    lambda0: float
    first_derivative: float


def _perturbation_setup(A, j_star: int, x: Sequence[float]):
    A = as_mode_set(A)
    x = np.asarray(x, dtype=float)
    if x.shape != (A.n,):
        raise ValueError('Expected a direction of {} entries, got {}'
                         .format(A.n, x.shape))
    if not 0 <= j_star < A.n:
        raise ValueError('The index {} is not a mode of {}'.format(j_star, A))
    if x[j_star] != 0:
        raise ValueError('The direction must vanish at the index {}'
                         .format(j_star))
    return A, x


def eigen_perturbation(A, m: float, j_star: int, x: Sequence[float],
                       block: int, tracked=None) -> PerturbationCoefficients:
    """Return the second order coefficients of the eigenvalue of the
    *tracked* site of a block along :math:`\\rho(\\epsilon) = e_{j^*} +
    \\epsilon^2 x^2`.

    With :math:`a_1` the tracked site, :math:`\\mu` evaluated at
    :math:`e_{j^*}` and :math:`j^\\#` the index of :math:`\\ell(a_1)`,

    .. math::

       k_1 = \\frac{C_*}{\\lambda_{a_1}} \\left(\\frac{3 x_{j^\\#}^2}
       {\\lambda_{a_1}} - 2 \\sum_j \\frac{x_j^2}{\\lambda_{a_j}}\\right),
       \\quad
       k_2 = 2 \\sum_j s_j^2 \\left(\\frac{\\chi^-_j}{\\mu_1 - \\mu_j}
       - \\frac{\\chi^+_j}{\\mu_1 + \\mu_j}\\right)

    where :math:`s_j = C_* \\phi_j / (\\lambda_{a_1}\\lambda_{a_j})` is the
    first order coupling of the sites. The first derivative vanishes.

    :raises VanishingDenominatorError: If :math:`\\mu_1 \\pm \\mu_j = 0`.
    """
    A, x = _perturbation_setup(A, j_star, x)
    geometry = resonance_geometry(A)
    if not 0 <= block < geometry.m:
        raise ValueError('The geometry has no block {}'.format(block))

    members = geometry.classes[block]
    a1 = members[0] if tracked is None else as_vector(tracked)
    if a1 not in members:
        raise ValueError('The site {} is not in block {}'.format(a1, block))

    cs = c_star(A.d)
    lam1 = eigenfrequency(a1, m)
    mus = rho_star_spectrum(geometry, m, j_star)
    mu1 = mus[a1]
    j_sharp = geometry.ell_index(a1)

    k1 = cs / lam1 * (3 * x[j_sharp] ** 2 / lam1
                      - 2 * sum(xj ** 2 / eigenfrequency(a, m)
                                for xj, a in zip(x, A)))

    k2 = 0.0
    for aj in members:
        if aj == a1:
            continue
        jj = geometry.ell_index(aj)
        phi = (x[j_sharp] * (jj == j_star)) + ((j_sharp == j_star) * x[jj])
        s = cs * phi / (lam1 * eigenfrequency(aj, m))
        if geometry.is_minus(a1, aj):
            denominator = mu1 - mus[aj]
        elif geometry.is_plus(a1, aj):
            denominator = -(mu1 + mus[aj])
        else:
            continue
        if s == 0:
            continue
        if abs(denominator) < 1e-14:
            raise VanishingDenominatorError([a1.coords, aj.coords],
                                            denominator)
        k2 += 2 * s * s / denominator

    return PerturbationCoefficients(float(k1), float(k2), float(mu1), 0.0)


def tracked_eigenvalue(A, m: float, rho: Sequence[float], block: int,
                       reference: complex) -> complex:
    """Return the eigenvalue of the block of :math:`JK(\\rho)` closest to
    *reference*."""
    K = assemble_K(A, m, rho)
    if not 0 <= block < K.geometry.m:
        raise ValueError('The geometry has no block {}'.format(block))
    H = build_H(K)
    values = scipy.linalg.eigvals(H.generator(block))
    return complex(values[int(np.argmin(np.abs(values - reference)))])


def pair_discriminant(geometry: ResonanceGeometry, m: float,
                      rho: Sequence[float], a, b) -> float:
    """Return the discriminant of a two member class :math:`\\{a, b\\}`.

    With :math:`\\beta = 2\\mu_a`, :math:`\\gamma = 2\\mu_b` and
    :math:`\\alpha` twice the coupling it is
    :math:`(\\beta + \\gamma)^2 - 4\\alpha^2` for a (+) pair and
    :math:`(\\beta - \\gamma)^2 + 4\\alpha^2` for a (-) pair. The block is
    elliptic if and only if the discriminant is positive.
    """
    a, b = as_vector(a), as_vector(b)
    if geometry.class_of(a) != geometry.class_of(b) or \
            len(geometry.classes[geometry.class_of(a)]) != 2:
        raise NotAdmissibleError('{} and {} do not form a two member class'
                                 .format(a, b))

    beta = 2 * mu(a, geometry, m, rho)
    gamma = 2 * mu(b, geometry, m, rho)
    rho = np.asarray(rho, dtype=float)
    alpha = 2 * (c_star(geometry.modes.d)
                 * math.sqrt(rho[geometry.ell_index(a)]
                             * rho[geometry.ell_index(b)])
                 / (eigenfrequency(a, m) * eigenfrequency(b, m)))

    if geometry.is_plus(a, b):
        return (beta + gamma) ** 2 - 4 * alpha ** 2
    return (beta - gamma) ** 2 + 4 * alpha ** 2
