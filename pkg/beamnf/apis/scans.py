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

from typing import List, Tuple
import logging

import numpy as np

from beamnf.apis.reportapi import ReportAPI
from beamnf.core import BeamConfig
from beamnf.frequencies import divisor_table, mass_exclusion_estimate
from beamnf.lattice import as_mode_set, sample_typicality

DIVISOR_HEADER = ['kind', 'k', 'a', 'b', 'value', 'trivial']

TYPICALITY_HEADER = ['d', 'n', 'R', 'trials', 'frac_admissible',
                     'frac_strongly_admissible']


def smallest_divisors(A, m: float, K: int, N: int, count: int) -> List[list]:
    """Return the *count* divisors with the smallest absolute value as rows
    of :data:`DIVISOR_HEADER`.

    Ties are broken by the order of the divisor table.
    """
    table = divisor_table(as_mode_set(A), K, N)
    values = table.values(m)
    order = np.argsort(np.abs(values), kind='stable')[:count]
    return [table.divisor(i).to_row() + [values[i], bool(table.trivial[i])]
            for i in order]


class Scans(ReportAPI):
    """Scan the small divisors and the typicality of admissible sets.

    A ``DIVISORS_REQUEST`` writes the ``divisors.csv`` table with the
    smallest divisors at the configured mass and the summary
    ``divisors.json`` with the smallest divisor which is no trivial
    resonance and the estimated measure of excluded masses.

    A ``SAMPLE_REQUEST`` writes the table ``typicality.csv`` with the share
    of (strongly) admissible random sets for every configured dimension and
    radius. The request may carry the number of ``'threads'``.
    """

    apiid = 2

    DIVISORS_REQUEST = 1
    DIVISORS_RESPONSE = 2
    SAMPLE_REQUEST = 3
    SAMPLE_RESPONSE = 4

    def __init__(self, config: BeamConfig) -> None:
        super(Scans, self).__init__(config)

        self.supported = {
            Scans.DIVISORS_REQUEST: self.__handle_divisors,
            Scans.SAMPLE_REQUEST: self.__handle_sample
        }

    def __handle_divisors(self, msg: dict) -> Tuple[int, dict]:
        analysis = self.config.analysis
        settings = self.config.config['divisors']
        directory = self.out_dir(msg)

        A = analysis.mode_set()
        K = analysis.cutoffs['scan_k']
        N = analysis.cutoffs['scan_n']

        table = divisor_table(A, K, N)
        minimum = table.scan(analysis.mass)
        estimate = mass_exclusion_estimate(A, settings['kappa'], K, N,
                                           settings['samples'], analysis.seed)

        logging.info('Smallest divisor at m={}: {}'
                     .format(analysis.mass, minimum.min_abs))

        summary = {
            'mass': analysis.mass,
            'K': K,
            'N': N,
            'divisors': len(table),
            'trivial': int(np.count_nonzero(table.trivial)),
            'minimum': {
                'value': minimum.min_abs,
                'divisor': (minimum.argmin.to_row()
                            if minimum.argmin is not None else None)
            },
            'exclusion': {
                'kappa': settings['kappa'],
                'samples': settings['samples'],
                'seed': analysis.seed,
                'estimate': estimate
            }
        }

        files = [
            self.write_csv(directory, 'divisors.csv', DIVISOR_HEADER,
                           smallest_divisors(A, analysis.mass, K, N,
                                             settings['rows'])),
            self.write_json(directory, 'divisors.json', summary)
        ]

        return Scans.DIVISORS_RESPONSE, {'files': files,
                                         'minimum': minimum.min_abs}

    def __handle_sample(self, msg: dict) -> Tuple[int, dict]:
        analysis = self.config.analysis
        settings = self.config.config['sample']
        directory = self.out_dir(msg)
        threads = msg.get('threads', 1)

        dimensions = settings['dimensions'] or [analysis.dimension]
        n = settings['points']

        rows = list()
        for d in dimensions:
            for R in settings['radii']:
                result = sample_typicality(d, n, R, settings['trials'],
                                           analysis.seed, threads=threads)
                rows.append([d, n, R, result.trials, result.frac_admissible,
                             result.frac_strongly_admissible])
                self.push({'d': d, 'R': R,
                           'admissible': result.frac_admissible})

        files = [self.write_csv(directory, 'typicality.csv',
                                TYPICALITY_HEADER, rows)]

        return Scans.SAMPLE_RESPONSE, {'files': files, 'rows': len(rows)}
