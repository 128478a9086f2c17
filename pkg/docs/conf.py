# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2026 shapegeo contributors
#
# SPDX-License-Identifier: MIT

import os
import sys

sys.path.insert(0, os.path.abspath(".."))

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
    "sphinx.ext.napoleon",
]

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/", None),
}

# sphinx:param style throughout the package
napoleon_numpy_docstring = False
autodoc_member_order = "bysource"

master_doc = "index"
project = "shapegeo"
copyright = "2026 shapegeo contributors"
author = "shapegeo contributors"
version = "0.0"
release = "0.0"
language = "en"

exclude_patterns = ["_build", ".env", "CODE_OF_CONDUCT.md"]
default_role = "any"
pygments_style = "sphinx"

on_rtd = os.environ.get("READTHEDOCS", None) == "True"

if not on_rtd:
    try:
        import sphinx_rtd_theme

        html_theme = "sphinx_rtd_theme"
        html_theme_path = [sphinx_rtd_theme.get_html_theme_path(), "."]
    except ImportError:
        html_theme = "default"
        html_theme_path = ["."]

htmlhelp_basename = "shapegeodoc"
