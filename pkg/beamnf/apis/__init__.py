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
Report APIs (:mod:`beamnf.apis`)
================================

.. currentmodule:: beamnf.apis

This module provide the APIs which run the subcommands of
:mod:`~beamnf.cli`. Each API has a set of requests and call-back functions
assigned to them which write the reports of a configured run.

Each API should subclass the base API :class:`ReportAPI` as this class
implements the call-back functionality using a request handler and pushes
the progress of a run with the event ``on_push``.

.. autosummary::
   :toctree: generated/

   ReportAPI

The following APIs are available:

.. autosummary::
   :toctree: generated/

   Analysis
   Checks
   Scans
"""

from .reportapi import ReportAPI
from .analysis import Analysis
from .checks import Checks
from .scans import Scans
