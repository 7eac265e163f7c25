# Configuration file for the Sphinx documentation builder.
#
# This file only contains a selection of the most common options. For a full
# list see the documentation:
# https://www.sphinx-doc.org/en/master/usage/configuration.html

# -- Path setup --------------------------------------------------------------

# If extensions (or modules to document with autodoc) are in another directory,
# add these directories to sys.path here. If the directory is relative to the
# documentation root, use os.path.abspath to make it absolute, like shown here.
#
import os
import sys
sys.path.insert(0, os.path.abspath('../../'))

import beamnf  # noqa: ignore=E402

# -- Project information -----------------------------------------------------

project = 'beamnf'
copyright = '2021, Joe Pearson'
author = 'Joe Pearson'

# The full version, including alpha/beta/rc tags
version = beamnf.__version__
release = version

# -- General configuration ---------------------------------------------------

# Add any Sphinx extension module names here, as strings. They can be
# extensions coming with Sphinx (named 'sphinx.ext.*') or your custom
# ones.
extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.autosummary',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'sphinx_copybutton'
]

# Add any paths that contain templates here, relative to this directory.
templates_path = ['_templates']

# List of patterns, relative to source directory, that match files and
# directories to ignore when looking for source files.
# This pattern also affects html_static_path and html_extra_path.
exclude_patterns = []

# The document name of the 'master' document, that is, the document that
# contains the root toctree directive. Default is 'index'.
master_doc = 'index'

needs_sphinx = '3.0.3'

# Strip and configure input prompts for code cells
copybutton_prompt_text = ">>> "

# -- Options for autodoc -----------------------------------------------------

# This value contains a list of modules to be mocked up.
autodoc_mock_imports = [
    'coloredlogs',
    'events',
    'numpy',
    'scipy',
    'sympy',
    'yaml'
]

# Both the class’ and the __init__ method’s docstring are concatenated and
# inserted.
autoclass_content = 'both'

# -- Options for autosummary -------------------------------------------------

autosummary_generate = True
autosummary_imported_members = True

# -- Options for intersphinx -------------------------------------------------

intersphinx_mapping = {'python': ('https://docs.python.org/3', None),
                       'numpy': ('https://numpy.org/doc/stable', None)}

# -- Options for HTML output -------------------------------------------------

# The theme to use for HTML and HTML Help pages.  See the documentation for
# a list of builtin themes.
#
html_theme = 'pydata_sphinx_theme'
