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
import importlib
import logging

import yaml


class BeamObject(yaml.YAMLObject):
    """Base class for objects which are constructed from a configuration.

    A mapping tagged with ``!beamobject`` is turned into an instance of the
    class named by the mandatory keys ``module`` and ``class``. All other
    keys are passed as keyword arguments to the class.
    """

    yaml_tag = u'!beamobject'

    def from_yaml(loader, node):
        node_map = loader.construct_mapping(node, deep=True)

        try:
            module = importlib.__import__(node_map['module'],
                                          fromlist=[node_map['class']])
            beam_object = getattr(module, node_map['class'])
        except KeyError as e:
            logging.error('Missing key {} for the tag \'{}\'.'
                          .format(e, BeamObject.yaml_tag))
            return None

        del node_map['module']
        del node_map['class']

        return beam_object(**node_map)

    yaml.add_constructor(yaml_tag, from_yaml, Loader=yaml.SafeLoader)

    def parameters(self) -> dict:
        """Return the public attributes which configure the object."""
        return {key: value for key, value in vars(self).items()
                if not key.startswith('_')}
