# -*- coding: utf-8 -*-
#
# increlearn documentation build configuration file
#
# Only values deviating from the sphinx defaults are set here.

import sys
import os

sys.path.insert(0, os.path.abspath('../'))

import increlearn

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',    ## API documentation features
    'sphinx.ext.coverage',
    'sphinx.ext.napoleon',   ## pre-process Google-style method docstrings
    'sphinx.ext.viewcode',
    'sphinx.ext.autosummary', ## summary listing of methods and module content
    'sphinx.ext.todo'
]

source_suffix = ['.rst']
master_doc = 'index'

project = 'increlearn'
copyright = '2019 - 2026, increlearn developers'
author = 'increlearn developers'

version = '.'.join(increlearn.__version__.split('.')[:2])
release = increlearn.__version__

exclude_patterns = ['_build']

default_role = 'any'   ## cross-reference by simple class or method name
pygments_style = 'friendly'
todo_include_todos = True

# -- Options for HTML output ----------------------------------------------

html_theme = 'sphinx_rtd_theme'
htmlhelp_basename = 'increlearndoc'

# -- autodoc ----------------------------------------------------------------

autodoc_member_order = 'bysource'
autosummary_generate = True
