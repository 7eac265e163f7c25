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
Core functionality (:mod:`beamnf.core`)
=======================================

.. currentmodule:: beamnf.core

This module provide the configuration of runs, the errors raised by the
package and the report writers.

.. autosummary::
   :toctree: generated/

   AnalysisConfig
   BeamConfig
   BeamObject
   BeamUtility

The following errors are raised:

.. autosummary::
   :toctree: generated/

   BeamError
   ConfigError
   DegenerateSpectrumError
   DimensionError
   IntegrationError
   MassError
   NotAdmissibleError
   SingularMatrixError
   SpectralError
   VanishingDenominatorError
"""

from .base import BeamObject
from .config import AnalysisConfig, BeamConfig
from .errors import (BeamError, ConfigError, DegenerateSpectrumError,
                     DimensionError, IntegrationError, MassError,
                     NotAdmissibleError, SingularMatrixError, SpectralError,
                     VanishingDenominatorError)
from .utility import BeamUtility
