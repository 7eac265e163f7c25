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
Command line (:mod:`beamnf.cli`)
================================

.. currentmodule:: beamnf.cli

The entry point of the ``beamnf`` script. The configuration is loaded and
validated before any report is written, then the subcommand is passed as
request to one of the :mod:`~beamnf.apis`.

.. autosummary::
   :toctree: generated/

   main
   load_config
   run
   run_report
   run_sweep
"""

from typing import List, Optional, Sequence
import argparse
import logging
import os

import coloredlogs

from beamnf import __version__
from beamnf.apis import Analysis, Checks, ReportAPI, Scans
from beamnf.core import BeamConfig, BeamError, ConfigError

COMMANDS = {
    'analyze': (Analysis, Analysis.ANALYZE_REQUEST),
    'sweep': (Analysis, Analysis.SWEEP_REQUEST),
    'divisors': (Scans, Scans.DIVISORS_REQUEST),
    'sample': (Scans, Scans.SAMPLE_REQUEST),
    'simulate': (Checks, Checks.SIMULATE_REQUEST),
    'norms-check': (Checks, Checks.NORMS_REQUEST)
}
"""The API class and request of every subcommand."""

LOG_FORMAT = '%(asctime)s %(levelname)s %(message)s'


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog='beamnf',
        description='Birkhoff normal form and torus stability of the beam '
                    'equation.')
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + __version__)
    parser.add_argument('-v', '--verbose', action='store_true',
                        help='set the log level to DEBUG')
    parser.add_argument('-f', '--config', '--file', dest='config',
                        default='/etc/beamnf.yml', metavar='FILE',
                        help='the configuration file')
    parser.add_argument('--out-dir', default=None,
                        help='the directory to which reports are written')
    parser.add_argument('--seed', type=int, default=None,
                        help='override the seed of the configuration')
    parser.add_argument('--threads', type=int, default=1,
                        help='the number of worker threads')
    parser.add_argument('command', choices=list(COMMANDS),
                        help='the report to create')

    return parser.parse_args(argv)


def setup_logging(verbose: bool = False) -> None:
    """Install colored logs with the level ``INFO`` or ``DEBUG`` if
    *verbose*. The environment variable ``BEAMNFDEBUG`` overrides both."""
    level = logging.DEBUG if verbose else logging.INFO

    debug = os.environ.get('BEAMNFDEBUG')
    if debug:
        if debug.isdigit():
            level = int(debug)
        elif isinstance(logging.getLevelName(debug.upper()), int):
            level = logging.getLevelName(debug.upper())
        else:
            logging.warning('Ignore unknown log level BEAMNFDEBUG=%s' % debug)

    coloredlogs.install(level=level, fmt=LOG_FORMAT)


def load_config(file: str, seed: Optional[int] = None,
                out_dir: Optional[str] = None) -> BeamConfig:
    """Load and validate the configuration *file*.

    The output directory is taken from *out_dir*, the environment variable
    ``BEAMNF_OUT_DIR`` or the configuration, in this order.

    :raises ConfigError: If the configuration is invalid.
    """
    config = BeamConfig(file)
    config.validate()

    analysis = config.analysis
    if seed is not None:
        analysis.seed = seed
    analysis.out_dir = (out_dir or os.environ.get('BEAMNF_OUT_DIR')
                        or analysis.out_dir)

    return config


def _log_push(apiid: int, msg_id: int, payload: dict) -> None:
    if 'file' in payload:
        logging.info('Wrote %s' % payload['file'])
    else:
        logging.debug('Progress of API %d: %s' % (apiid, payload))


def run(command: str, config: BeamConfig, threads: int = 1,
        **request) -> dict:
    """Run the subcommand *command* and return the response of its API."""
    api_class, msg_id = COMMANDS[command]
    api = api_class(config)
    api.on_push += _log_push

    request.update({'outDir': config.analysis.out_dir, 'threads': threads})
    response_id, response = api.request_handler(msg_id, request)
    if response_id == ReportAPI.NULL:
        raise BeamError('The command {} returned no response'
                        .format(command))

    return response


def run_report(config: BeamConfig) -> List[str]:
    """Write the analysis reports of *config* and return their paths."""
    return run('analyze', config)['files']


def run_sweep(config: BeamConfig, masses: Sequence[float] = None,
              rhos: Sequence[Sequence[float]] = None,
              threads: int = 1) -> List[str]:
    """Write ``sweep.csv`` for the grid of *masses* and actions *rhos*.

    The grid defaults to the ``sweep`` section of the configuration.
    """
    return run('sweep', config, threads, masses=masses, rhos=rhos)['files']


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line and return the exit code: 0 on success, 2 on an
    invalid configuration and 1 on any other error."""
    args = parse_args(argv)
    setup_logging(args.verbose)

    try:
        config = load_config(args.config, args.seed, args.out_dir)
        response = run(args.command, config, args.threads)
    except ConfigError as e:
        logging.error('Invalid configuration: {}'.format(e))
        return 2
    except (BeamError, ValueError, ArithmeticError, OSError) as e:
        logging.error('The command {} failed: {}'.format(args.command, e))
        return 1

    logging.info('Finished {} with {} reports'
                 .format(args.command, len(response['files'])))
    return 0
