import json

import numpy as np
import pytest

from capwork.cache import (
    cache_dir,
    check_schema_version,
    geometry_cache_key,
    graph_from_bytes,
    graph_to_bytes,
    hypergraph_edges_from_bytes,
    hypergraph_edges_to_bytes,
    load_geometry_descriptor,
    save_geometry_descriptor,
)
from capwork.errors import ParseError


def test_graph_binary_roundtrip(w32_graph):
    blob = graph_to_bytes(w32_graph)
    again = graph_from_bytes(blob)
    assert again.n == w32_graph.n
    assert np.array_equal(again.rows, w32_graph.rows)
    assert again.meta.family == "symplectic"
    assert again.meta.q == 2


def test_graph_bad_magic():
    with pytest.raises(ParseError):
        graph_from_bytes(b"XXXX" + b"\0" * 64)


def test_hypergraph_roundtrip(h23):
    blob = hypergraph_edges_to_bytes(h23)
    r, q, edges = hypergraph_edges_from_bytes(blob)
    assert (r, q) == (2, 3)
    assert np.array_equal(edges, h23.edges)


def test_geometry_descriptor_roundtrip(tmp_path, pg23):
    path = save_geometry_descriptor(pg23.descriptor(), tmp_path)
    assert path.name == geometry_cache_key("pg", 2, 3, 1)
    desc = load_geometry_descriptor(path)
    assert desc["point_count"] == 13


def test_schema_version_rejects_newer(tmp_path):
    path = tmp_path / "pg-r2-p3-e1.json"
    path.write_text(json.dumps({"schema_version": "2.0", "family": "pg"}))
    with pytest.raises(ParseError):
        load_geometry_descriptor(path)
    with pytest.raises(ParseError):
        check_schema_version({})


def test_cache_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("CAPWORK_CACHE_DIR", str(tmp_path / "sub"))
    d = cache_dir()
    assert d.exists() and d.name == "sub"
