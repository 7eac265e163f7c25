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

"""Deterministic JSON and CSV report writers."""

from typing import Iterable, Sequence
import csv
import json
import logging
import os

import numpy as np


def format_float(value: float) -> str:
    """Return *value* with 17 significant digits."""
    return '%.17g' % value


def serializable(obj):
    """Convert *obj* into plain JSON types.

    numpy scalars and arrays are converted into Python numbers and lists,
    complex numbers into ``{'re': ..., 'im': ...}`` and objects with a
    ``to_json()`` method are replaced by its result.
    """
    if hasattr(obj, 'to_json'):
        return serializable(obj.to_json())
    if isinstance(obj, dict):
        return {str(key): serializable(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [serializable(value) for value in obj]
    if isinstance(obj, np.ndarray):
        return serializable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return {'re': float(obj.real), 'im': float(obj.imag)}
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)

    return obj


def write_json(path: str, obj) -> str:
    """Write *obj* as JSON with sorted keys to *path* and return the path."""
    logging.debug('Write JSON report \'%s\'...' % path)
    with open(path, 'w') as f:
        json.dump(serializable(obj), f, indent=2, sort_keys=True)
        f.write('\n')

    return path


def write_csv(path: str, header: Sequence[str], rows: Iterable) -> str:
    """Write the *rows* below the *header* to *path* and return the path.

    Floats are written with 17 significant digits.
    """
    logging.debug('Write CSV report \'%s\'...' % path)
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_float(value)
                             if isinstance(value, (float, np.floating))
                             else value for value in row])

    return path


def make_out_dir(path: str) -> str:
    """Create the output directory *path* if it does not exist."""
    os.makedirs(path, exist_ok=True)
    return path
