from __future__ import annotations

import importlib.metadata

import jclattice as m


def test_version():
    assert importlib.metadata.version("jclattice") == m.__version__
