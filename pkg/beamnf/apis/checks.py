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

from typing import Tuple
import logging

import numpy as np

from beamnf.apis.reportapi import ReportAPI
from beamnf.core import AnalysisConfig, BeamConfig
from beamnf.dynamics import (TrajectorySummary, linear_growth_rate,
                             simulate_truncated_beam)
from beamnf.norms import (b_matrix_norm, check_norm_properties, matrix_norm,
                          minimal_weight_constant, operator_norm,
                          random_block_matrix, truncated_universe)
from beamnf.normalform import assemble_K
from beamnf.spectral import build_H, classify_spectrum

DYNAMICS_HEADER = ['t', 'energy', 'transverse_norm']


def simulate(analysis: AnalysisConfig, settings: dict) -> TrajectorySummary:
    """Run :func:`~beamnf.dynamics.simulate_truncated_beam` with the
    ``simulate`` section *settings* of a configuration."""
    actions = settings['actions']
    actions = analysis.rho if actions is None else actions
    return simulate_truncated_beam(
        analysis.mode_set(), analysis.mass, settings['cutoff'],
        [analysis.nu * r for r in actions], settings['horizon'],
        settings['step'], nonlinear=settings['nonlinear'],
        perturbation=settings['perturbation'], seed=analysis.seed,
        record_every=settings['record_every'])


class Checks(ReportAPI):
    """Cross-check the normal form by direct integration and the norm
    inequalities on random instances.

    A ``SIMULATE_REQUEST`` integrates the truncated beam equation and writes
    the time series ``dynamics.csv`` and the summary ``dynamics.json``. The
    summary also holds the growth rate of the linearized flow of
    :math:`JK(\\rho)` next to the largest real part of its spectrum.

    A ``NORMS_REQUEST`` writes ``norms.json`` with the minimal constants
    and violation counts for every configured :math:`(\\gamma, \\kappa)`.
    """

    apiid = 3

    SIMULATE_REQUEST = 1
    SIMULATE_RESPONSE = 2
    NORMS_REQUEST = 3
    NORMS_RESPONSE = 4

    def __init__(self, config: BeamConfig) -> None:
        super(Checks, self).__init__(config)

        self.supported = {
            Checks.SIMULATE_REQUEST: self.__handle_simulate,
            Checks.NORMS_REQUEST: self.__handle_norms
        }

    def __handle_simulate(self, msg: dict) -> Tuple[int, dict]:
        analysis = self.config.analysis
        settings = self.config.config['simulate']
        directory = self.out_dir(msg)

        summary = simulate(analysis, settings)

        K = assemble_K(analysis.mode_set(), analysis.mass, analysis.rho)
        report = classify_spectrum(build_H(K), analysis.tol)
        growth = linear_growth_rate(K, settings['horizon'],
                                    min(settings['horizon'] / 100, 1.0),
                                    seed=analysis.seed)

        result = summary.to_json()
        result['linear'] = {
            'growthRate': growth,
            'maxRealPart': report.max_real_part
        }

        logging.info('Energy drift {} and transverse growth {}'
                     .format(summary.energy_drift, summary.transverse_growth))

        files = [
            self.write_csv(directory, 'dynamics.csv', DYNAMICS_HEADER,
                           summary.rows()),
            self.write_json(directory, 'dynamics.json', result)
        ]

        return Checks.SIMULATE_RESPONSE, {'files': files,
                                          'energyDrift': summary.energy_drift}

    def __handle_norms(self, msg: dict) -> Tuple[int, dict]:
        analysis = self.config.analysis
        settings = self.config.config['norms']
        directory = self.out_dir(msg)

        universe = truncated_universe(analysis.dimension, settings['radius'])
        rng = np.random.default_rng(analysis.seed)

        checks, violations = list(), 0
        for gamma in settings['gammas']:
            gamma = tuple(gamma)
            for kappa in settings['kappas']:
                check = check_norm_properties(universe, gamma, kappa,
                                              settings['trials'],
                                              analysis.seed)
                sample = random_block_matrix(universe, rng)

                entry = check.to_json()
                entry.update({
                    'gamma': list(gamma),
                    'kappa': kappa,
                    'minimalWeightConstant': minimal_weight_constant(
                        universe, gamma, kappa),
                    'sample': {
                        'matrixNorm': matrix_norm(sample, gamma, kappa,
                                                  check.constant),
                        'operatorNorm': operator_norm(sample, gamma),
                        'bMatrixNorm': b_matrix_norm(
                            sample, gamma, kappa, settings['m_star'],
                            check.constant)
                    }
                })
                checks.append(entry)
                violations += (check.product_violations
                               + check.operator_violations)
                self.push({'gamma': list(gamma), 'kappa': kappa})

        files = [self.write_json(directory, 'norms.json', {
            'dimension': analysis.dimension,
            'radius': settings['radius'],
            'sites': len(universe),
            'checks': checks
        })]

        return Checks.NORMS_RESPONSE, {'files': files,
                                       'violations': violations}
