"""The frozen reference data must match a fresh symbolic recomputation."""

import pytest

from conftest import load_data
from oracles import graph_geometry, revolution


def _assert_close(a, b, path=""):
    if isinstance(a, dict):
        assert set(a) == set(b), path
        for k in a:
            _assert_close(a[k], b[k], f"{path}.{k}")
    elif isinstance(a, list):
        assert len(a) == len(b), path
        for i, (x, y) in enumerate(zip(a, b)):
            _assert_close(x, y, f"{path}[{i}]")
    elif isinstance(a, float):
        assert a == pytest.approx(b, rel=1e-13, abs=1e-15), path
    else:
        assert a == b, path


def test_graph_geometry_data_is_current():
    _assert_close(graph_geometry.compute(), load_data("graph_geometry.json"))


def test_revolution_data_is_current():
    _assert_close(revolution.compute(), load_data("revolution.json"))
