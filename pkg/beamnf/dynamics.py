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
Dynamics (:mod:`beamnf.dynamics`)
=================================

.. currentmodule:: beamnf.dynamics

Numerical flows. The linear flow :math:`\\dot z = JKz` of the coupling
matrix in the coordinates :math:`(p, q)` and a symplectic integrator for the
Fourier truncation of

.. math::

   u_{tt} + \\Delta^2 u + mu + 4u^3 = 0

on the torus :math:`[0, 2\\pi]^d`.

The truncated field is :math:`u = \\sum_{|a| \\leq N} \\hat u_a e^{ia\\cdot
x}` and the complex coordinates are
:math:`\\xi_a = (\\lambda_a \\hat u_a + i \\hat v_a) / (\\kappa
\\sqrt{2\\lambda_a})` with :math:`\\kappa = (2\\pi)^{-d/2}` and
:math:`v = u_t`.

.. autosummary::
   :toctree: generated/

   TruncatedState
   TrajectorySummary
   linear_growth_rate
   monodromy
   simulate_truncated_beam
"""

from typing import List, NamedTuple, Sequence, Union
import logging
import math

import numpy as np
import scipy.linalg
import scipy.signal

from .core.errors import IntegrationError
from .frequencies import check_mass
from .lattice import as_mode_set, resonance_geometry
from .normalform import CouplingMatrix
from .spectral import symplectic_matrix

MAX_ENERGY_DRIFT = 0.1


def _real_matrix(K: Union[CouplingMatrix, np.ndarray]) -> np.ndarray:
    K = K.real_form() if isinstance(K, CouplingMatrix) else np.asarray(K)
    if K.ndim != 2 or K.shape[0] != K.shape[1] or K.shape[0] % 2:
        raise ValueError('K must be a square matrix of even size, got {}'
                         .format(K.shape))
    return K


def monodromy(K: Union[CouplingMatrix, np.ndarray], T: float) -> np.ndarray:
    """Return :math:`\\Phi = \\exp(JKT)` for *K* in the coordinates
    :math:`(p, q)`."""
    K = _real_matrix(K)
    return scipy.linalg.expm(symplectic_matrix(K.shape[0] // 2) @ K * T)


def linear_growth_rate(K: Union[CouplingMatrix, np.ndarray], T: float,
                       dt: float, seed: int = 0) -> float:
    """Return the exponential growth rate of :math:`\\dot z = JKz`.

    The flow starts from random unit data and is propagated by
    :math:`\\exp(JK\\,dt)`. The state is renormalized after every step and
    the rate is the least squares slope of :math:`\\log\\|z(t)\\|` over
    :math:`[T/2, T]`.
    """
    K = _real_matrix(K)
    if T <= 0 or dt <= 0:
        raise ValueError('The horizon and the step must be positive.')

    steps = int(round(T / dt))
    if steps < 4:
        raise ValueError('The horizon must span at least four steps.')

    propagator = monodromy(K, dt)
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(K.shape[0])
    z /= np.linalg.norm(z)

    times = dt * np.arange(1, steps + 1)
    log_norms = np.empty(steps)
    total = 0.0
    for k in range(steps):
        z = propagator @ z
        norm = np.linalg.norm(z)
        total += math.log(norm)
        z /= norm
        log_norms[k] = total

    window = times >= T / 2
    slope, _ = np.polyfit(times[window], log_norms[window], 1)

    logging.debug('Linear growth rate %s over T=%s with %d steps'
                  % (slope, T, steps))

    return float(slope)


class TruncatedState():
    """The state of the truncated beam in the coordinates
    :math:`(p_a, q_a)`."""

    def __init__(self, modes: np.ndarray, p: np.ndarray, q: np.ndarray,
                 time: float) -> None:
        self.modes = modes
        """The integer points of the truncation, one per row."""

        self.p = p
        self.q = q
        self.time = time

    def actions(self) -> np.ndarray:
        """Return :math:`(p_a^2 + q_a^2) / 2 = |\\xi_a|^2`."""
        return (self.p ** 2 + self.q ** 2) / 2


class TrajectorySummary(NamedTuple):
    energy_drift: float
    action_drift: float
    transverse_growth: float
    resonant_growth: float
    times: np.ndarray
    energies: np.ndarray
    transverse_norms: np.ndarray
    final: TruncatedState

    def rows(self) -> List[list]:
        """Rows ``t, energy, transverse_norm``."""
        return [[t, e, n] for t, e, n in zip(self.times, self.energies,
                                              self.transverse_norms)]

    def to_json(self) -> dict:
        return {
            'energyDrift': self.energy_drift,
            'actionDrift': self.action_drift,
            'transverseGrowth': self.transverse_growth,
            'resonantGrowth': self.resonant_growth,
            'finalTime': self.final.time,
            'finalActions': [{'a': a.tolist(), 'action': float(i)}
                             for a, i in zip(self.final.modes,
                                             self.final.actions())]
        }


class _Galerkin():
    # coefficient arrays over [-N..N]^d masked to the ball |a| <= N

    def __init__(self, d: int, N: int, m: float) -> None:
        self.d, self.N = d, N
        axis = np.arange(-N, N + 1)
        grid = np.stack(np.meshgrid(*([axis] * d), indexing='ij'), axis=-1)
        n2 = (grid ** 2).sum(axis=-1)
        self.grid = grid
        self.mask = n2 <= N * N
        self.lam = np.sqrt(n2.astype(float) ** 2 + m)
        self.kappa = (2 * math.pi) ** (-d / 2)
        self.center = tuple(slice(2 * N, 4 * N + 1) for _ in range(d))

    def index(self, a) -> tuple:
        return tuple(int(c) + self.N for c in a)

    def cube(self, u: np.ndarray) -> np.ndarray:
        full = scipy.signal.convolve(
            scipy.signal.convolve(u, u, method='direct'), u, method='direct')
        return full[self.center] * self.mask

    def energy(self, u: np.ndarray, v: np.ndarray, nonlinear: bool) -> float:
        quadratic = 0.5 * np.sum(np.abs(v) ** 2 + self.lam ** 2
                                 * np.abs(u) ** 2)
        quartic = np.sum(np.conj(self.cube(u)) * u).real if nonlinear else 0
        return float((2 * math.pi) ** self.d * (quadratic + quartic))

    def to_fields(self, xi: np.ndarray):
        partner = np.conj(np.flip(xi))
        u = self.kappa * (xi + partner) / np.sqrt(2 * self.lam)
        v = -1j * self.kappa * np.sqrt(self.lam / 2) * (xi - partner)
        return u * self.mask, v * self.mask

    def to_xi(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return ((self.lam * u + 1j * v)
                / (self.kappa * np.sqrt(2 * self.lam)) * self.mask)

    def rotate(self, u: np.ndarray, v: np.ndarray, h: float):
        c, s = np.cos(self.lam * h), np.sin(self.lam * h)
        return c * u + s / self.lam * v, -self.lam * s * u + c * v


def simulate_truncated_beam(A, m: float, cutoff: int, I_A: Sequence[float],
                            T: float, dt: float, nonlinear: bool = True,
                            perturbation: float = 1e-6, seed: int = 0,
                            record_every: int = 100) -> TrajectorySummary:
    """Integrate the truncated beam equation from a perturbed torus.

    The modes of *A* start with the actions *I_A* and angle zero, all other
    modes with amplitude *perturbation* and a random phase. A step is the
    Strang splitting of the exact rotation of every mode with its frequency
    :math:`\\lambda_a` and the kick by the projected cubic term
    :math:`v \\mathrel{-}= dt \\cdot 4 P(u^3)`.

    The transverse norm is :math:`\\sum_{a \\notin A} (p_a^2 + q_a^2)` and the
    growths are the largest ratios of the transverse and of the
    :math:`\\Lambda_f` norm to their initial values.

    :raises IntegrationError: If the relative energy drift exceeds 10%.
    """
    A = as_mode_set(A)
    m = check_mass(m)
    if cutoff < 1:
        raise ValueError('The cutoff must be positive.')
    if record_every < 1:
        raise ValueError('At least every step must be recorded.')
    if T <= 0 or dt <= 0:
        raise ValueError('The horizon and the step must be positive.')
    if len(I_A) != A.n or any(i < 0 for i in I_A):
        raise ValueError('Expected {} non-negative actions, got {}'
                         .format(A.n, I_A))
    if any(a.norm2 > cutoff * cutoff for a in A):
        raise ValueError('The modes {} exceed the cutoff {}'.format(A, cutoff))

    system = _Galerkin(A.d, cutoff, m)
    rng = np.random.default_rng(seed)

    excited = np.zeros(system.mask.shape, dtype=bool)
    for a in A:
        excited[system.index(a)] = True
    resonant = np.zeros(system.mask.shape, dtype=bool)
    for b in resonance_geometry(A).lambda_f:
        if b.norm2 <= cutoff * cutoff:
            resonant[system.index(b)] = True
    transverse = system.mask & ~excited

    xi = perturbation * np.exp(2j * math.pi
                               * rng.random(system.mask.shape))
    xi = xi * transverse
    for a, action in zip(A, I_A):
        xi[system.index(a)] = math.sqrt(action)

    u, v = system.to_fields(xi)

    def norms(xi):
        square = 2 * np.abs(xi) ** 2
        return square[transverse].sum(), square[resonant].sum()

    def actions(xi):
        return np.array([abs(xi[system.index(a)]) ** 2 for a in A])

    energy0 = system.energy(u, v, nonlinear)
    scale = abs(energy0) or 1.0
    actions0 = actions(xi)
    transverse0, resonant0 = norms(xi)

    times, energies, transverse_norms = [0.0], [energy0], [transverse0]
    energy_drift = action_drift = 0.0
    transverse_growth = resonant_growth = 1.0

    steps = int(round(T / dt))
    for step in range(1, steps + 1):
        u, v = system.rotate(u, v, dt / 2)
        if nonlinear:
            v = v - dt * 4 * system.cube(u)
        u, v = system.rotate(u, v, dt / 2)

        if step % record_every and step != steps:
            continue

        xi = system.to_xi(u, v)
        energy = system.energy(u, v, nonlinear)
        transverse_norm, resonant_norm = norms(xi)

        drift = abs(energy - energy0) / scale
        energy_drift = max(energy_drift,
                           drift if math.isfinite(drift) else math.inf)
        action_drift = max(action_drift,
                           float(np.abs(actions(xi) - actions0).max()))
        if transverse0 > 0:
            transverse_growth = max(transverse_growth,
                                    transverse_norm / transverse0)
        if resonant0 > 0:
            resonant_growth = max(resonant_growth, resonant_norm / resonant0)

        times.append(step * dt)
        energies.append(energy)
        transverse_norms.append(transverse_norm)

        if energy_drift > MAX_ENERGY_DRIFT:
            logging.error('The energy drifted by %s at t=%s, the step %s is '
                          'unstable' % (energy_drift, step * dt, dt))
            raise IntegrationError('Energy drift {} above {} at t={}'
                                   .format(energy_drift, MAX_ENERGY_DRIFT,
                                           step * dt))

    xi = system.to_xi(u, v)
    modes = system.grid[system.mask]
    final = TruncatedState(modes, math.sqrt(2) * xi[system.mask].real,
                           -math.sqrt(2) * xi[system.mask].imag, steps * dt)

    logging.debug('Simulated %d steps of the beam on %d modes: energy drift '
                  '%s, transverse growth %s' % (steps, len(modes),
                                                energy_drift,
                                                transverse_growth))

    return TrajectorySummary(energy_drift, action_drift, transverse_growth,
                             resonant_growth, np.array(times),
                             np.array(energies), np.array(transverse_norms),
                             final)
