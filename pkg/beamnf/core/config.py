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

from typing import List, Sequence
import copy
import logging
import math

import yaml

from .base import BeamObject
from .errors import ConfigError, NotAdmissibleError, DimensionError


class AnalysisConfig(BeamObject):
    """The parameters of an analysis run.

    An analysis is configured in the ``analysis`` section of the
    configuration file, either as plain mapping or as object:

    .. code-block:: yaml

       analysis:
         !beamobject
           module: beamnf.core.config
           class: AnalysisConfig
           dimension: 2
           modes: [[0, 1], [1, -1]]
           mass: 1.5
           rho: [0.5, 0.5]

    """

    CUTOFFS = {
        'universe': 2,
        'scan_k': 3,
        'scan_n': 3,
        'lattice': 10
    }
    """Default cutoffs of the truncated universe, the divisor scans and the
    lattice radius."""

    def __init__(self, dimension: int = 1, modes: Sequence = None,
                 mass: float = 1.5, rho: Sequence = None, nu: float = 0.01,
                 cutoffs: dict = None, seed: int = 0, tol: float = 1e-9,
                 out_dir: str = 'out') -> None:
        self.dimension = dimension
        """The dimension *d* of the torus."""

        self.modes = [list(p) for p in modes] if modes else [[1], [2]]
        """The excited modes *A* as list of integer vectors."""

        self.mass = mass
        """The mass parameter *m*."""

        self.rho = list(rho) if rho is not None else [0.5] * len(self.modes)
        """The actions of the excited modes."""

        self.nu = nu
        """The amplitude scale of the actions."""

        self.cutoffs = dict(AnalysisConfig.CUTOFFS)
        """The truncation radii, see :attr:`CUTOFFS`."""
        self.cutoffs.update(cutoffs or dict())

        self.seed = seed
        """The seed of all random generators."""

        self.tol = tol
        """The tolerance of the spectral classification."""

        self.out_dir = out_dir
        """The directory to which reports are written."""

    def mode_set(self):
        """Return the :class:`~beamnf.lattice.ModeSet` of the configuration."""
        from beamnf.lattice import ModeSet

        return ModeSet(self.modes)

    def validate(self) -> None:
        """Validate all fields and raise a :class:`ConfigError` if a field
        is invalid."""
        from beamnf.lattice import Admissibility, classify_set

        if not isinstance(self.dimension, int) or self.dimension < 1:
            raise ConfigError('dimension', 'must be a positive integer')

        if len(self.modes) < 1:
            raise ConfigError('modes', 'at least one mode is required')

        for point in self.modes:
            if len(point) != self.dimension:
                raise ConfigError('modes', 'the point {} has not the '
                                  'dimension {}'.format(point, self.dimension))
            if not all(isinstance(c, int) for c in point):
                raise ConfigError('modes', 'the point {} is not an integer '
                                  'vector'.format(point))

        try:
            modes = self.mode_set()
        except (NotAdmissibleError, DimensionError) as e:
            raise ConfigError('modes', str(e))

        if classify_set(modes) is Admissibility.NOT_ADMISSIBLE:
            raise ConfigError('modes', 'the set is not admissible, two '
                              'points have the same norm')

        if not 1 <= self.mass <= 2:
            raise ConfigError('mass', 'must be in [1, 2], got {}'
                              .format(self.mass))

        if len(self.rho) != len(self.modes):
            raise ConfigError('rho', 'expected {} actions, got {}'
                              .format(len(self.modes), len(self.rho)))

        if any(not 0 <= r <= 1 for r in self.rho):
            raise ConfigError('rho', 'all actions must be in [0, 1]')

        if self.nu < 0:
            raise ConfigError('nu', 'must not be negative')

        for key, value in self.cutoffs.items():
            if not isinstance(value, int) or value < 1:
                raise ConfigError('cutoffs.%s' % key,
                                  'must be a positive integer')

        if self.tol <= 0:
            raise ConfigError('tol', 'must be positive')

    def to_json(self) -> dict:
        return {
            'dimension': self.dimension,
            'modes': self.modes,
            'mass': self.mass,
            'rho': self.rho,
            'nu': self.nu,
            'cutoffs': self.cutoffs,
            'seed': self.seed
        }


class BeamConfig(BeamObject):
    """The configuration of a run."""

    config = {
        'analysis': None,
        'sweep': {
            'masses': {'start': 1.0, 'stop': 2.0, 'num': 21},
            'rho': None
        },
        'divisors': {
            'rows': 100,
            'kappa': 1e-3,
            'samples': 200
        },
        'sample': {
            'dimensions': None,
            'points': 2,
            'radii': [5, 10, 20, 40],
            'trials': 10000
        },
        'simulate': {
            'enabled': False,
            'cutoff': 2,
            'actions': None,
            'horizon': 100.0,
            'step': 1e-3,
            'perturbation': 1e-6,
            'nonlinear': True,
            'record_every': 100
        },
        'norms': {
            'radius': 3,
            'gammas': [[0.1, 1.0], [0.0, 2.0]],
            'kappas': [0.0, 1.0],
            'm_star': 1.0,
            'trials': 200
        }
    }
    """The default configuration dictionary."""

    def __init__(self, file: str = '/etc/beamnf.yml') -> None:
        """Load the configuration from a *file*.

        The :attr:`config` dictionary is filled from the configuration file.
        Sections which are missing in the file keep their defaults. If the
        file can't be read, a :meth:`failsafe()` configuration is loaded.

        The ``analysis`` section is either a mapping with the arguments of
        :class:`AnalysisConfig` or an object tagged with ``!beamobject``:

        .. code-block:: yaml

           !beamobject
             module: module
             class: Class
             attribute: value
             ...

        For details about the content of the configuration file, see
        :ref:`config`.
        """
        self.file = file
        self.config = copy.deepcopy(BeamConfig.config)
        self.__load_config_file()

    def __load_config_file(self) -> None:
        """Loads all configurations from a file."""
        try:
            with open(self.file, 'r') as f:
                config = yaml.load(f, Loader=yaml.SafeLoader) or dict()
        except (FileNotFoundError, TypeError) as e:
            logging.error('Failed to load configuration: {}: {}'
                          .format(self.file, e))
            logging.warning('Using fail-safe configuration.')
            self.config = self.failsafe()
            return
        except yaml.YAMLError as e:
            raise ConfigError(self.file, 'invalid YAML: {}'.format(e))

        if not isinstance(config, dict):
            raise ConfigError(self.file, 'expected a mapping of sections')

        for key, item in config.items():
            if key not in self.config:
                logging.warning('Ignore unknown configuration section \'%s\'.'
                                % key)
            elif item is None:
                # a section with all keys commented out
                continue
            elif isinstance(self.config[key], dict):
                if not isinstance(item, dict):
                    raise ConfigError(key, 'expected a mapping, got {!r}'
                                      .format(item))
                self.config[key].update(item)
            else:
                self.config[key] = item

        analysis = self.config['analysis']
        if isinstance(analysis, dict):
            try:
                self.config['analysis'] = AnalysisConfig(**analysis)
            except TypeError as e:
                raise ConfigError('analysis', str(e))
        elif analysis is None:
            self.config['analysis'] = AnalysisConfig()

    @property
    def analysis(self) -> AnalysisConfig:
        """The :class:`AnalysisConfig` of the run."""
        return self.config['analysis']

    def validate(self) -> None:
        """Validate the configuration and raise a :class:`ConfigError` with
        the first invalid field."""
        if not isinstance(self.analysis, AnalysisConfig):
            raise ConfigError('analysis', 'not an analysis configuration')

        self.analysis.validate()

        masses = self.config['sweep']['masses']
        if masses['num'] < 1 or masses['num'] * len(self.sweep_rhos()) > 10**4:
            raise ConfigError('sweep.masses', 'the grid must have between '
                              '1 and 10000 cells')

        for rho in self.sweep_rhos():
            if len(rho) != len(self.analysis.modes):
                raise ConfigError('sweep.rho', 'expected {} actions, got {}'
                                  .format(len(self.analysis.modes), len(rho)))

        if self.config['sample']['trials'] < 1:
            raise ConfigError('sample.trials', 'must be positive')

        simulate = self.config['simulate']
        if simulate['step'] <= 0 or simulate['horizon'] <= 0:
            raise ConfigError('simulate', 'step and horizon must be positive')

        if not math.isfinite(self.config['divisors']['kappa']):
            raise ConfigError('divisors.kappa', 'must be finite')

    def sweep_rhos(self) -> List[list]:
        """Return the action vectors of the sweep grid."""
        rho = self.config['sweep']['rho']
        return [list(r) for r in rho] if rho else [list(self.analysis.rho)]

    def failsafe(self) -> dict:
        """Returns a fail-safe configuration."""
        config = copy.deepcopy(BeamConfig.config)
        config['analysis'] = AnalysisConfig(dimension=1, modes=[[1], [2]],
                                            mass=1.5, rho=[0.5, 0.5])
        return config
