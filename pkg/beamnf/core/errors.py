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


class BeamError(Exception):
    """Base class of all errors raised by :mod:`beamnf`."""


class DimensionError(BeamError, ValueError):
    """Lattice vectors of different dimensions were combined."""


class MassError(BeamError, ValueError):
    """The mass parameter is outside of the interval ``[1, 2]``."""


class NotAdmissibleError(BeamError, ValueError):
    """A mode set is not admissible or contains duplicate points."""


class VanishingDenominatorError(BeamError, ArithmeticError):
    """A small divisor vanished.

    The offending index tuple is stored in :attr:`indices`.
    """

    def __init__(self, indices, value: float) -> None:
        self.indices = tuple(indices)
        """The index tuple whose divisor vanished."""

        self.value = value
        """The value of the divisor."""

        super().__init__('Vanishing denominator {} for the index tuple {}'
                         .format(value, self.indices))


class SingularMatrixError(BeamError, ArithmeticError):
    """A matrix which must be invertible is singular."""


class DegenerateSpectrumError(BeamError, ArithmeticError):
    """Two eigenvalues of a block are closer than the tolerance."""


class SpectralError(BeamError, ArithmeticError):
    """The eigensolver returned a spectrum which can't be paired."""


class IntegrationError(BeamError, RuntimeError):
    """A time integration became unstable."""


class ConfigError(BeamError, ValueError):
    """A configuration field is invalid."""

    def __init__(self, field: str, message: str) -> None:
        self.field = field
        """The name of the invalid field."""

        self.message = message
        """What is wrong with the field."""

        super().__init__('{}: {}'.format(field, message))
