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
import os

from events import Events

from beamnf.core import BeamConfig
from beamnf.core.report import make_out_dir, write_csv, write_json


class ReportAPI(Events):
    """Provide the base report API.

    .. note:: This class must be subclassed by each subcommand specific API.

    The :meth:`request_handler()` runs a request of one of the supported
    message types. The supported message types with their callback functions
    need to be registered in the :attr:`supported` dictionary.

    Each callback function takes the request dictionary as argument and
    returns a tuple with the response message type and the response
    dictionary. A request contains the key ``'outDir'`` with the directory to
    which the reports are written. The response lists the written reports
    under ``'files'``.

    Every written report is announced by the event ``on_push`` with the
    arguments ``(apiid, msg_id, payload)``::

       >>> api = Analysis(BeamConfig('etc/beamnf.yml'))
       >>> api.on_push += lambda apiid, msg_id, payload: print(payload)
       >>> api.request_handler(Analysis.ANALYZE_REQUEST, {'outDir': 'out'})
    """

    NULL = 0x0000
    """The null message indicates that no further action is going to happen."""

    PROGRESS = 0x0100
    """The message type of pushed progress events."""

    apiid = int()
    """The API identifier."""

    def __init__(self, config: BeamConfig) -> None:
        self.__events__ = ('on_push',)
        super().__init__()

        self.config = config
        """The validated :class:`~beamnf.core.BeamConfig` of the run."""

        self.supported = dict()
        """A dictionary with all supported message types as keys and their
        callback functions as values ``{msg_id: callback}``."""

    def request_handler(self, msg_id: int, msg: dict) -> Tuple[int, dict]:
        """Return the tuple (*response_id*, *response*) upon a request.

        Handle the request *msg* of type *msg_id* and return a corresponding
        *response* of type *response_id*. If either no valid request *msg* was
        passed, or the request does not expect any response, the response
        ``(0x0000, {})`` is returned.

        Errors raised while the request is processed are passed on.
        """
        response_id, response = ReportAPI.NULL, dict()

        if msg_id != ReportAPI.NULL:
            callback = self.supported.get(msg_id)
            if callback is None:
                logging.error('Unsupported msg_id for API \'{}\': {}'
                              .format(self.apiid, msg_id))
            elif not callable(callback):
                logging.error('Invalid callback function for '
                              'msg_id \'{}\' and API \'{}\''
                              .format(msg_id, self.apiid))
            else:
                response_id, response = callback(msg)

        response_id = response_id if len(response) > 0 else ReportAPI.NULL

        return response_id, response

    def out_dir(self, msg: dict) -> str:
        """Return the output directory of the request *msg*."""
        return make_out_dir(msg.get('outDir')
                            or self.config.analysis.out_dir)

    def push(self, payload: dict) -> None:
        """Push a progress *payload*."""
        self.on_push(self.apiid, ReportAPI.PROGRESS, payload)

    def write_json(self, directory: str, name: str, obj) -> str:
        """Write *obj* to the JSON report *name* and announce it."""
        path = write_json(os.path.join(directory, name), obj)
        self.push({'file': path})
        return path

    def write_csv(self, directory: str, name: str, header: List[str],
                  rows) -> str:
        """Write the *rows* to the CSV report *name* and announce it."""
        path = write_csv(os.path.join(directory, name), header, rows)
        self.push({'file': path})
        return path
