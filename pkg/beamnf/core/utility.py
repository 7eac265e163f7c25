"""
Copyright (C) 2021  Joe Pearson

This program is free software: you can redistribute it and/or modify
it under the terms of the GNU General Public License as published by
the Free Software Foundation, either version 3 of the License, or
(at your option) any later version.

This program is distributed in the hope that it will be useful,
but WITHOUT ANY WARRANTY; without even the implied warranty of
MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
GNU General Public License for more details.

You should have received a copy of the GNU General Public License
along with this program.  If not, see <https://www.gnu.org/licenses/>.

"""
import logging
import signal
import threading


class BeamUtility():
    """Catch ``SIGINT`` so that long running sweeps can stop between cells.

    Signal handlers can only be installed from the main thread. Elsewhere
    the utility only holds the :attr:`interrupt` flag.
    """

    def __init__(self):
        self.interrupt = False
        """Set once an interrupt signal was received."""

        self.__previous = None
        self.__installed = False
        if threading.current_thread() is threading.main_thread():
            self.__previous = signal.signal(signal.SIGINT,
                                            self.signal_handler)
            self.__installed = True
        else:
            logging.debug('Not in the main thread, SIGINT is not caught')

    @property
    def installed(self) -> bool:
        """Whether the signal handler is installed."""
        return self.__installed

    def signal_handler(self, sigint: int, frame):
        """Handle a system signal.

        :param sigint: The signal number.
        :param frame: The interrupted stack frame.
        """
        logging.debug('System signal received and interrupt is set')
        self.interrupt = True

    def release(self) -> None:
        """Restore the signal handler which was active before."""
        if self.__installed:
            signal.signal(signal.SIGINT, self.__previous or signal.SIG_DFL)
            self.__installed = False
