#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#

import os
import sys

sys.path.insert(0, os.path.abspath(os.path.join('..', 'core', 'engine')))

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.viewcode']
autodoc_member_order = 'bysource'
templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'
project = 'radix'
copyright = '2026, radix contributors'
author = 'radix contributors'
version = release = os.environ.get('VERSION', 'master')
language = 'en'
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'
todo_include_todos = False
html_theme = 'sphinx_rtd_theme'
html_title = 'radix, integral closure of radical towers'
html_static_path = []
htmlhelp_basename = 'radixdoc'

html_sidebars = {
    '**': [
        'relations.html',
        'searchbox.html',
    ]
}

html_context = {
    'conf_py_path': '/docs/'
}
