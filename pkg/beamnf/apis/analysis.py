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

from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple
import logging
import math

import numpy as np

from beamnf.apis.checks import DYNAMICS_HEADER, simulate
from beamnf.apis.reportapi import ReportAPI
from beamnf.apis.scans import DIVISOR_HEADER, smallest_divisors
from beamnf.core import BeamConfig, BeamUtility
from beamnf.frequencies import divisor_table
from beamnf.lattice import ResonanceGeometry
from beamnf.normalform import assemble_K, normal_form
from beamnf.spectral import build_H, classify_spectrum, pair_discriminant

SPECTRUM_HEADER = ['block', 're', 'im', 'class']

SWEEP_HEADER = ['m', 'rho', 'verdict', 'max_real_part', 'min_divisor',
                'discriminant']


def discriminant(geometry: ResonanceGeometry, m: float,
                 rho: Sequence[float]) -> Optional[float]:
    """Return the discriminant of the first two member class or ``None`` if
    the geometry has no such class."""
    for members in geometry.classes:
        if len(members) == 2:
            return pair_discriminant(geometry, m, rho, *members)
    return None


class Analysis(ReportAPI):
    """Assemble and classify the normal form.

    An ``ANALYZE_REQUEST`` writes the reports of the configured analysis:

    =================== ====================================================
    ``geometry.json``   the resonance geometry and the admissibility of *A*
    ``normalform.json`` :math:`\\Omega`, :math:`M`, :math:`\\Lambda_a` and
                        :math:`K`
    ``spectrum.json``   the block spectra of :math:`H` and the verdict
    ``spectrum.csv``    the eigenvalue table
    ``divisors.csv``    the smallest divisors at the configured mass
    ``dynamics.csv``    the integrated time series if ``simulate.enabled``
    =================== ====================================================

    A ``SWEEP_REQUEST`` evaluates the verdict, the smallest divisor and the
    discriminant on the grid of masses and actions of the ``sweep`` section
    and writes ``sweep.csv``. The cells run on ``'threads'`` threads, the
    rows keep the grid order. An interrupt stops the sweep before the next
    cell.
    """

    apiid = 1

    ANALYZE_REQUEST = 1
    ANALYZE_RESPONSE = 2
    SWEEP_REQUEST = 3
    SWEEP_RESPONSE = 4

    def __init__(self, config: BeamConfig) -> None:
        super(Analysis, self).__init__(config)

        self.supported = {
            Analysis.ANALYZE_REQUEST: self.__handle_analyze,
            Analysis.SWEEP_REQUEST: self.__handle_sweep
        }

    def __handle_analyze(self, msg: dict) -> Tuple[int, dict]:
        analysis = self.config.analysis
        directory = self.out_dir(msg)
        A = analysis.mode_set()

        data = normal_form(A, analysis.mass, analysis.rho, analysis.nu,
                           analysis.cutoffs['universe'])
        geometry = data.K.geometry
        report = classify_spectrum(build_H(data.K), analysis.tol)

        logging.info('The torus of {} at m={} is {}'
                     .format(A, analysis.mass, report.verdict))

        spectrum = report.to_json()
        spectrum['discriminant'] = discriminant(geometry, analysis.mass,
                                                analysis.rho)

        files = [
            self.write_json(directory, 'geometry.json', geometry),
            self.write_json(directory, 'normalform.json', data),
            self.write_json(directory, 'spectrum.json', spectrum),
            self.write_csv(directory, 'spectrum.csv', SPECTRUM_HEADER,
                           report.rows()),
            self.write_csv(directory, 'divisors.csv', DIVISOR_HEADER,
                           smallest_divisors(
                               A, analysis.mass, analysis.cutoffs['scan_k'],
                               analysis.cutoffs['scan_n'],
                               self.config.config['divisors']['rows']))
        ]

        settings = self.config.config['simulate']
        if settings['enabled']:
            files.append(self.write_csv(directory, 'dynamics.csv',
                                        DYNAMICS_HEADER,
                                        simulate(analysis, settings).rows()))

        return Analysis.ANALYZE_RESPONSE, {'files': files,
                                           'verdict': report.verdict}

    def masses(self) -> np.ndarray:
        """Return the masses of the sweep grid."""
        masses = self.config.config['sweep']['masses']
        return np.linspace(masses['start'], masses['stop'], masses['num'])

    def sweep_cell(self, m: float, rho: Sequence[float]) -> list:
        """Return the row of :data:`SWEEP_HEADER` of the cell
        :math:`(m, \\rho)`."""
        analysis = self.config.analysis
        A = analysis.mode_set()

        K = assemble_K(A, m, rho)
        report = classify_spectrum(build_H(K), analysis.tol)
        scan = divisor_table(A, analysis.cutoffs['scan_k'],
                             analysis.cutoffs['scan_n']).scan(m)
        value = discriminant(K.geometry, m, rho)

        logging.debug('Sweep cell m=%s, rho=%s: %s' % (m, rho,
                                                       report.verdict))

        return [float(m), ' '.join('%.17g' % r for r in rho), report.verdict,
                report.max_real_part, scan.min_abs,
                '' if value is None else value]

    def sweep(self, masses: Sequence[float], rhos: Sequence[Sequence[float]],
              threads: int = 1, utility: BeamUtility = None) -> List[list]:
        """Return the rows of the sweep over all *masses* and actions
        *rhos*, the masses varying slowest.

        If the interrupt of *utility* is set, the remaining cells are skipped
        and the rows of the finished leading cells are returned.
        """
        analysis = self.config.analysis
        cells = [(float(m), list(rho)) for m in masses for rho in rhos]

        # the threads share the cached divisor table
        divisor_table(analysis.mode_set(), analysis.cutoffs['scan_k'],
                      analysis.cutoffs['scan_n'])

        def run(cell):
            if utility is not None and utility.interrupt:
                return None
            row = self.sweep_cell(*cell)
            self.push({'m': cell[0], 'rho': cell[1], 'verdict': row[2]})
            return row

        with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
            results = list(executor.map(run, cells))

        rows = list()
        for row in results:
            if row is None:
                logging.warning('Sweep interrupted after {} of {} cells'
                                .format(len(rows), len(cells)))
                break
            rows.append(row)

        return rows

    def __handle_sweep(self, msg: dict) -> Tuple[int, dict]:
        directory = self.out_dir(msg)
        masses = msg.get('masses')
        masses = self.masses() if masses is None else masses
        rhos = msg.get('rhos') or self.config.sweep_rhos()

        utility = BeamUtility() if msg.get('interruptible', True) else None
        try:
            rows = self.sweep(masses, rhos, msg.get('threads', 1), utility)
        finally:
            if utility is not None:
                utility.release()

        files = [self.write_csv(directory, 'sweep.csv', SWEEP_HEADER, rows)]

        finite = [row[3] for row in rows if math.isfinite(row[3])]
        return Analysis.SWEEP_RESPONSE, {
            'files': files,
            'cells': len(rows),
            'maxRealPart': max(finite, default=0.0)
        }
