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

"""Tests of the report APIs."""

from concurrent.futures import ThreadPoolExecutor
from types import SimpleNamespace
import csv
import json
import os
import signal

import pytest

from beamnf.apis import Analysis, Checks, ReportAPI, Scans
from beamnf.core import BeamConfig, BeamUtility

ETC = os.path.join(os.path.dirname(__file__), '..', 'etc')


@pytest.fixture
def config():
    config = BeamConfig(os.path.join(ETC, 'beamnf.yml'))
    config.validate()
    return config


def read_csv(path):
    with open(path, newline='') as f:
        return list(csv.DictReader(f))


def read_json(path):
    with open(path) as f:
        return json.load(f)


@pytest.mark.parametrize('api_class', [Analysis, Checks, Scans])
def test_unsupported_request(api_class, config, caplog):
    api = api_class(config)
    assert api.request_handler(0x42, {}) == (ReportAPI.NULL, {})
    assert 'Unsupported msg_id' in caplog.text
    assert api.request_handler(ReportAPI.NULL, {}) == (ReportAPI.NULL, {})


def test_analyze(config, tmp_path):
    api = Analysis(config)
    pushed = list()
    api.on_push += lambda apiid, msg_id, payload: pushed.append(
        (apiid, msg_id, payload))

    response_id, response = api.request_handler(
        Analysis.ANALYZE_REQUEST, {'outDir': str(tmp_path)})

    assert response_id == Analysis.ANALYZE_RESPONSE
    assert response['verdict'] == 'unstable'
    assert sorted(os.path.basename(f) for f in response['files']) == [
        'divisors.csv', 'geometry.json', 'normalform.json', 'spectrum.csv',
        'spectrum.json']
    assert [p['file'] for _, _, p in pushed] == response['files']
    assert all(apiid == Analysis.apiid and msg_id == ReportAPI.PROGRESS
               for apiid, msg_id, _ in pushed)

    geometry = read_json(str(tmp_path / 'geometry.json'))
    assert geometry['m'] == 5
    assert geometry['m0'] == 4
    assert len(geometry['lambdaF']) == 6

    spectrum = read_json(str(tmp_path / 'spectrum.json'))
    assert spectrum['verdict'] == 'unstable'
    assert spectrum['discriminant'] < 0
    assert len(read_csv(str(tmp_path / 'spectrum.csv'))) == 6
    assert len(read_csv(str(tmp_path / 'divisors.csv'))) == 100


def test_analyze_with_simulation(config, tmp_path):
    config.config['simulate'].update({'enabled': True, 'horizon': 0.1,
                                      'step': 1e-2, 'record_every': 1})
    _, response = Analysis(config).request_handler(
        Analysis.ANALYZE_REQUEST, {'outDir': str(tmp_path)})

    assert str(tmp_path / 'dynamics.csv') in response['files']
    assert len(read_csv(str(tmp_path / 'dynamics.csv'))) == 11


def test_single_cell_sweep_matches_the_analysis(config, tmp_path):
    api = Analysis(config)
    api.request_handler(Analysis.ANALYZE_REQUEST, {'outDir': str(tmp_path)})
    _, response = api.request_handler(Analysis.SWEEP_REQUEST, {
        'outDir': str(tmp_path), 'masses': [1.5], 'rhos': [[0.5, 0.5]]})

    assert response['cells'] == 1
    rows = read_csv(str(tmp_path / 'sweep.csv'))
    spectrum = read_json(str(tmp_path / 'spectrum.json'))

    assert len(rows) == 1
    assert rows[0]['verdict'] == spectrum['verdict']
    assert float(rows[0]['max_real_part']) == spectrum['maxRealPart']
    assert float(rows[0]['discriminant']) == spectrum['discriminant']
    assert rows[0]['rho'] == '0.5 0.5'


def test_sweep_discriminants_are_negative(config, tmp_path):
    _, response = Analysis(config).request_handler(
        Analysis.SWEEP_REQUEST, {'outDir': str(tmp_path), 'threads': 2})

    rows = read_csv(str(tmp_path / 'sweep.csv'))
    assert response['cells'] == 21
    assert [float(row['m']) for row in rows] == pytest.approx(
        [1 + k / 20 for k in range(21)])
    assert all(float(row['discriminant']) < -1e-6 for row in rows)
    assert all(row['verdict'] == 'unstable' for row in rows)
    assert response['maxRealPart'] > 0


def test_sweep_keeps_the_grid_order(config):
    api = Analysis(config)
    masses, rhos = [1.2, 1.8], [[1.0, 1e-3], [1.0, 1.0]]
    rows = api.sweep(masses, rhos, threads=3)

    assert [(row[0], row[1]) for row in rows] == [
        (1.2, '1 0.001'), (1.2, '1 1'), (1.8, '1 0.001'), (1.8, '1 1')]
    assert rows == api.sweep(masses, rhos, threads=1)
    assert [row[2] for row in rows] == ['stable', 'unstable'] * 2


def test_interrupted_sweep(config, caplog):
    rows = Analysis(config).sweep([1.5], [[0.5, 0.5]],
                                  utility=SimpleNamespace(interrupt=True))
    assert rows == []
    assert 'interrupted' in caplog.text


def test_utility_catches_sigint_in_the_main_thread():
    previous = signal.getsignal(signal.SIGINT)
    utility = BeamUtility()
    assert utility.installed
    assert signal.getsignal(signal.SIGINT) == utility.signal_handler

    utility.signal_handler(signal.SIGINT, None)
    assert utility.interrupt

    utility.release()
    assert signal.getsignal(signal.SIGINT) == previous


def test_utility_in_a_worker_thread():
    with ThreadPoolExecutor(max_workers=1) as executor:
        utility = executor.submit(BeamUtility).result()
    assert not utility.installed
    assert not utility.interrupt
    utility.release()


def test_sweep_request_from_a_worker_thread(config, tmp_path):
    api = Analysis(config)
    with ThreadPoolExecutor(max_workers=1) as executor:
        _, response = executor.submit(
            api.request_handler, Analysis.SWEEP_REQUEST,
            {'outDir': str(tmp_path), 'masses': [1.5],
             'rhos': [[0.5, 0.5]]}).result()
    assert response['cells'] == 1


def test_divisors(config, tmp_path):
    config.config['divisors'].update({'rows': 10, 'samples': 20})
    _, response = Scans(config).request_handler(
        Scans.DIVISORS_REQUEST, {'outDir': str(tmp_path)})

    rows = read_csv(str(tmp_path / 'divisors.csv'))
    assert len(rows) == 10
    values = [abs(float(row['value'])) for row in rows]
    assert values == sorted(values)

    summary = read_json(str(tmp_path / 'divisors.json'))
    assert summary['minimum']['value'] == response['minimum']
    assert summary['minimum']['value'] > 0
    assert 0 <= summary['exclusion']['estimate'] <= 1
    assert summary['trivial'] > 0


def test_sample(config, tmp_path):
    config.config['sample'].update({'dimensions': [2], 'radii': [5, 10],
                                    'trials': 100})
    _, response = Scans(config).request_handler(
        Scans.SAMPLE_REQUEST, {'outDir': str(tmp_path)})

    assert response['rows'] == 2
    rows = read_csv(str(tmp_path / 'typicality.csv'))
    assert [row['R'] for row in rows] == ['5', '10']
    for row in rows:
        assert 0 <= float(row['frac_strongly_admissible']) <= \
            float(row['frac_admissible']) <= 1


def test_simulate(config, tmp_path):
    config.config['simulate'].update({'horizon': 1.0, 'step': 1e-2,
                                      'record_every': 10})
    _, response = Checks(config).request_handler(
        Checks.SIMULATE_REQUEST, {'outDir': str(tmp_path)})

    assert response['energyDrift'] < 1e-3
    assert len(read_csv(str(tmp_path / 'dynamics.csv'))) == 11

    summary = read_json(str(tmp_path / 'dynamics.json'))
    assert summary['linear']['maxRealPart'] > 0
    assert summary['finalTime'] == pytest.approx(1.0)


def test_norms(config, tmp_path):
    config.config['norms'].update({'radius': 1, 'trials': 5})
    _, response = Checks(config).request_handler(
        Checks.NORMS_REQUEST, {'outDir': str(tmp_path)})

    assert response['violations'] == 0
    report = read_json(str(tmp_path / 'norms.json'))
    assert report['sites'] == 5
    assert len(report['checks']) == 4
    for check in report['checks']:
        assert check['constant'] >= check['minimalWeightConstant']
        assert check['sample']['bMatrixNorm'] >= \
            check['sample']['operatorNorm']
