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
Normal form data (:mod:`beamnf.normalform`)
===========================================

.. currentmodule:: beamnf.normalform

The frequencies :math:`\\Omega(\\rho)` of the excited modes, the normal
frequencies :math:`\\Lambda_a(\\rho)` outside the resonant set and the
coupling matrix :math:`K(\\rho)` on :math:`\\Lambda_f`.

The coupling matrix is laid out in the complex coordinates: every site
:math:`a \\in \\Lambda_f` contributes the pair :math:`(\\xi_a, \\eta_a)`, the
diagonal blocks are :math:`[[0, \\mu], [\\mu, 0]]`, the blocks of
:math:`(+)` pairs are multiples of the identity and the blocks of
:math:`(-)` pairs are multiples of :math:`[[0, 1], [1, 0]]`. All entries
are real. :meth:`CouplingMatrix.real_form` gives the same quadratic form
in the coordinates :math:`(p_a, q_a)`. The matrix does not carry the
amplitude :math:`\\nu`.

.. autosummary::
   :toctree: generated/

   CouplingMatrix
   NormalFormData
   OmegaData
   assemble_omega
   assemble_lambda
   assemble_K
   mu
   normal_form
"""

from typing import Dict, List, NamedTuple, Sequence
import itertools
import logging
import math

import numpy as np

from .core.errors import SingularMatrixError
from .frequencies import check_mass, eigenfrequency
from .hamalg import truncation_universe
from .lattice import (LatticeVector, ResonanceGeometry, as_mode_set,
                      as_vector, resonance_geometry)


def c_star(d: int) -> float:
    """Return :math:`C_* = 3 (2\\pi)^{-d}`."""
    return 3 * (2 * math.pi) ** -d


def _check_rho(rho: Sequence[float], n: int) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    if rho.shape != (n,):
        raise ValueError('Expected {} actions, got {}'.format(n, rho.shape))
    if np.any(rho < 0) or np.any(rho > 1):
        raise ValueError('The actions must be in [0, 1], got {}'
                         .format(rho.tolist()))
    return rho


class OmegaData(NamedTuple):
    omega: np.ndarray
    M: np.ndarray
    detM: float


def assemble_omega(A, m: float, rho: Sequence[float],
                   nu: float) -> OmegaData:
    """Return the shifted frequencies of the excited modes.

    :math:`\\Omega_k = \\lambda_{a_k} + \\nu \\sum_l M^l_k \\rho_l` with
    :math:`M^l_k = 3 (4 - 3\\delta_{lk}) / ((2\\pi)^d \\lambda_k
    \\lambda_l)`.

    :raises SingularMatrixError: If :math:`\\det M = 0`.
    """
    A = as_mode_set(A)
    m = check_mass(m)
    rho = _check_rho(rho, A.n)

    lam = np.array([eigenfrequency(a, m) for a in A])
    factor = 4 - 3 * np.eye(A.n)
    M = 3 * factor / ((2 * math.pi) ** A.d * np.outer(lam, lam))
    detM = float(np.linalg.det(M))
    if detM == 0:
        raise SingularMatrixError('The matrix M of {} is singular.'.format(A))

    return OmegaData(lam + nu * M @ rho, M, detM)


def assemble_lambda(A, m: float, rho: Sequence[float], nu: float,
                    a) -> float:
    """Return the normal frequency
    :math:`\\Lambda_a = \\lambda_a + 6 \\nu (2\\pi)^{-d}
    \\sum_l \\rho_l / (\\lambda_l \\lambda_a)`.

    :raises ValueError: If *a* is an excited mode or lies in
        :math:`\\Lambda_f`.
    """
    A = as_mode_set(A)
    a = as_vector(a)
    m = check_mass(m)
    rho = _check_rho(rho, A.n)

    if a in A or a.norm2 in {b.norm2 for b in A}:
        raise ValueError('The mode {} is not outside the resonant set.'
                         .format(a.coords))

    lam_a = eigenfrequency(a, m)
    shift = sum(r / eigenfrequency(l, m) for l, r in zip(A, rho))
    return lam_a + 6 * nu * (2 * math.pi) ** -A.d * shift / lam_a


def mu(a, geometry: ResonanceGeometry, m: float,
       rho: Sequence[float]) -> float:
    """Return the diagonal coefficient
    :math:`\\mu(a, \\rho) = C_* (\\frac{3}{2} \\rho_{\\ell(a)} \\lambda_a^{-2}
    - \\lambda_a^{-1} \\sum_l \\rho_l \\lambda_l^{-1})`.

    It depends on *a* only through :math:`|a|`.
    """
    a = as_vector(a)
    A = geometry.modes
    rho = _check_rho(rho, A.n)
    lam_a = eigenfrequency(a, m)
    total = sum(r / eigenfrequency(l, m) for l, r in zip(A, rho))

    return c_star(A.d) * (1.5 * rho[geometry.ell_index(a)] / lam_a ** 2
                          - total / lam_a)


def _coupling(a: LatticeVector, b: LatticeVector,
              geometry: ResonanceGeometry, m: float,
              rho: np.ndarray) -> float:
    root = math.sqrt(rho[geometry.ell_index(a)] * rho[geometry.ell_index(b)])
    return (c_star(geometry.modes.d) * root
            / (eigenfrequency(a, m) * eigenfrequency(b, m)))


class CouplingMatrix():
    """The coupling matrix :math:`K(\\rho)` on :math:`\\Lambda_f`.

    The quadratic form :math:`\\langle K\\zeta, \\zeta\\rangle` counts every
    cross term twice, so the :math:`\\xi_a\\eta_a` coefficient of a site is
    :math:`2\\mu(a, \\rho)`.
    """

    def __init__(self, K: np.ndarray, geometry: ResonanceGeometry,
                 rho: np.ndarray, m: float) -> None:
        self.K = K
        """The real symmetric matrix in the complex layout."""

        self.geometry = geometry
        """The :class:`~beamnf.lattice.ResonanceGeometry` of the sites."""

        self.labels = list(geometry.lambda_f)
        """The site of every coordinate pair."""

        self.rho = rho
        self.m = m

    @property
    def size(self) -> int:
        return len(self.labels)

    def site(self, a) -> slice:
        """Return the coordinates of the site *a*."""
        i = self.geometry.index(as_vector(a))
        return slice(2 * i, 2 * i + 2)

    def block(self, a, b) -> np.ndarray:
        """Return the 2x2 block of the sites *a* and *b*."""
        return self.K[self.site(a), self.site(b)]

    def class_indices(self) -> List[np.ndarray]:
        """Return the coordinate indices of every equivalence class."""
        indices = list()
        for members in self.geometry.classes:
            sites = [self.geometry.index(b) for b in members]
            indices.append(np.array([2 * i + k for i in sites
                                     for k in (0, 1)], dtype=int))
        return indices

    def real_form(self) -> np.ndarray:
        """Return the matrix in the coordinates :math:`(p_a, q_a)` with
        :math:`\\xi = (p - iq)/\\sqrt{2}` and
        :math:`\\eta = (p + iq)/\\sqrt{2}`.

        Diagonal blocks become :math:`\\mu I`, (+) blocks
        :math:`\\mathrm{diag}(1, -1)` and (-) blocks the identity, times the
        coupling.
        """
        T = np.kron(np.eye(self.size), np.array([[1, -1j], [1, 1j]])
                    / math.sqrt(2))
        real = T.T @ self.K @ T
        assert np.allclose(real.imag, 0, atol=1e-14 * (1 + np.abs(self.K)
                                                       .max(initial=0)))
        return real.real

    def quadratic_form(self, zeta: np.ndarray) -> complex:
        """Return :math:`\\langle K\\zeta, \\zeta\\rangle = {}^t\\zeta K
        \\zeta`."""
        zeta = np.asarray(zeta)
        return zeta @ self.K @ zeta

    def to_json(self) -> dict:
        return {
            'labels': [b.to_json() for b in self.labels],
            'coordinates': [[b.to_json(), name] for b in self.labels
                            for name in ('xi', 'eta')],
            'classes': [idx.tolist() for idx in self.class_indices()],
            'K': self.K.tolist()
        }


def assemble_K(A, m: float, rho: Sequence[float]) -> CouplingMatrix:
    """Return the coupling matrix :math:`K(\\rho)`.

    :raises NotAdmissibleError: If *A* is not admissible.
    """
    A = as_mode_set(A)
    m = check_mass(m)
    rho = _check_rho(rho, A.n)
    geometry = resonance_geometry(A)

    n = len(geometry.lambda_f)
    K = np.zeros((2 * n, 2 * n))
    anti = np.array([[0.0, 1.0], [1.0, 0.0]])
    for i, a in enumerate(geometry.lambda_f):
        K[2 * i:2 * i + 2, 2 * i:2 * i + 2] = mu(a, geometry, m, rho) * anti

    for (a, b), block in itertools.chain(
            ((pair, np.eye(2)) for pair in geometry.plus_pairs),
            ((pair, anti) for pair in geometry.minus_pairs)):
        i, j = geometry.index(a), geometry.index(b)
        K[2 * i:2 * i + 2, 2 * j:2 * j + 2] = (
            _coupling(a, b, geometry, m, rho) * block)

    logging.debug('Coupling matrix of %s at m=%s: %d sites, %d plus and %d '
                  'minus pairs' % (A, m, n, len(geometry.plus_pairs),
                                   len(geometry.minus_pairs)))

    return CouplingMatrix(K, geometry, rho, m)


class NormalFormData():
    """The normal form data at fixed parameters."""

    def __init__(self, omega: OmegaData, big_lambda: Dict, K: CouplingMatrix,
                 params: dict) -> None:
        self.omega = omega.omega
        """The frequencies :math:`\\Omega` of the excited modes."""

        self.M = omega.M
        self.detM = omega.detM

        self.big_lambda = big_lambda
        """Map of the modes outside :math:`A \\cup \\Lambda_f` to
        :math:`\\Lambda_a`."""

        self.K = K
        """The :class:`CouplingMatrix`."""

        self.params = params
        """The parameters *m*, *rho*, *nu* and *radius*."""

    def to_json(self) -> dict:
        return {
            'params': self.params,
            'omega': self.omega.tolist(),
            'M': self.M.tolist(),
            'detM': self.detM,
            'bigLambda': [{'a': a.to_json(), 'value': value}
                          for a, value in sorted(self.big_lambda.items())],
            'K': self.K.to_json(),
            'geometry': self.K.geometry.to_json()
        }


def normal_form(A, m: float, rho: Sequence[float], nu: float,
                radius: int) -> NormalFormData:
    """Assemble :math:`\\Omega`, :math:`M`, :math:`K` and
    :math:`\\Lambda_a` for all modes outside the resonant set within
    *radius*."""
    A = as_mode_set(A)
    if nu < 0:
        raise ValueError('The amplitude must not be negative.')

    omega = assemble_omega(A, m, rho, nu)
    K = assemble_K(A, m, rho)

    resonant = {b.norm2 for b in A}
    big_lambda = {a: assemble_lambda(A, m, rho, nu, a)
                  for a in truncation_universe(A.d, radius)
                  if a.norm2 not in resonant}

    params = {'m': m, 'rho': list(map(float, rho)), 'nu': nu,
              'radius': radius}

    return NormalFormData(omega, big_lambda, K, params)
