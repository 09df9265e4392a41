from __future__ import annotations

import importlib.metadata

project = "jclattice"
copyright = "2024, jclattice developers"
author = "jclattice developers"
version = release = importlib.metadata.version("jclattice")

extensions = [
    "myst_parser",
    "sphinx.ext.autodoc",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
    "sphinx.ext.napoleon",
    "sphinx_autodoc_typehints",
    "sphinx_copybutton",
]

source_suffix = [".rst", ".md"]
exclude_patterns = ["_build", ".venv"]

html_theme = "furo"

myst_enable_extensions = [
    "colon_fence",
    "dollarmath",
]

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/", None),
    "pandas": ("https://pandas.pydata.org/docs/", None),
}

nitpick_ignore = [
    ("py:class", "numpy.typing.NDArray"),
    ("py:class", "NDArray"),
    ("py:class", "pd.DataFrame"),
]

autodoc_member_order = "bysource"
always_document_param_types = True
