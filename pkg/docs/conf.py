# -*- coding: utf-8 -*-
#
# delib_agent documentation build configuration file, created by
# sphinx-quickstart.
#
# Only the values that differ from the Sphinx defaults are set here.

import os
import sys

sys.path.insert(0, os.path.abspath('..'))

# -- General configuration -----------------------------------------------------

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.napoleon']
templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'delib_agent'
version = '0.1'
release = '0.1'

exclude_patterns = ['_build']
pygments_style = 'sphinx'

# Docstrings follow the Google style (Args/Returns/Raises).
napoleon_google_docstring = True
napoleon_numpy_docstring = False

# -- Options for HTML output ---------------------------------------------------

html_theme = 'default'
html_static_path = ['_static']
htmlhelp_basename = 'delib_agentdoc'

# -- Options for LaTeX and manual page output ----------------------------------

latex_documents = [
    ('index',
     'delib_agent.tex',
     u'delib_agent Documentation',
     u"Kostas", 'manual'),
]

man_pages = [
    ('index', 'delib', u'delib_agent Documentation',
     [u"Kostas"], 1)
]
