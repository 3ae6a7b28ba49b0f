"""Artifact caching: binary graph/hypergraph snapshots and JSON geometry
descriptors.

Graph format: header (magic "CWGR", u32 version, 16-byte family tag,
u32 r, u32 t_times_2, u32 p, u32 e, u32 n, u32 d) followed by n*w
little-endian uint64 adjacency words. Hypergraph format: magic "CWH3",
u32 version, u32 r, u32 q, u64 edge count, then 3 x u32 per triple.
"""

from __future__ import annotations

import json
import os
import struct
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import SCHEMA_VERSION, kernels
from .errors import ParseError
from .graphs import DenseGraph, GraphMeta

GRAPH_MAGIC = b"CWGR"
HYPER_MAGIC = b"CWH3"
VERSION = 1

CACHE_ENV = "CAPWORK_CACHE_DIR"


def cache_dir(override: str | None = None) -> Path:
    path = Path(override or os.environ.get(CACHE_ENV, ".capwork-cache"))
    path.mkdir(parents=True, exist_ok=True)
    return path


def geometry_cache_key(family: str, r: int, p: int, e: int) -> str:
    return f"{family}-r{r}-p{p}-e{e}.json"


def save_geometry_descriptor(desc: dict, directory: Path) -> Path:
    desc = dict(desc)
    desc["schema_version"] = SCHEMA_VERSION
    path = directory / geometry_cache_key(desc["family"], desc["r"], desc["p"], desc["e"])
    path.write_text(json.dumps(desc, indent=2, sort_keys=True) + "\n")
    return path


def load_geometry_descriptor(path: Path) -> dict:
    desc = json.loads(Path(path).read_text())
    check_schema_version(desc)
    return desc


def check_schema_version(obj: dict):
    version = obj.get("schema_version")
    if version is None:
        raise ParseError("artifact has no schema_version")
    major = int(str(version).split(".")[0])
    ours = int(SCHEMA_VERSION.split(".")[0])
    if major > ours:
        raise ParseError(f"artifact schema {version} is newer than supported {SCHEMA_VERSION}")


def graph_to_bytes(g: DenseGraph) -> bytes:
    meta = g.meta
    t2 = int(2 * Fraction(meta.t)) if meta.t is not None else 0xFFFFFFFF
    family = meta.family.encode()[:16].ljust(16, b"\0")
    # p, e are recoverable from q for our supported orders
    p, e = _factor_prime_power(meta.q)
    d = g.degree() if g.is_regular() else 0xFFFFFFFF
    header = GRAPH_MAGIC + struct.pack(
        "<I16sIIIIII", VERSION, family, meta.r, t2, p, e, g.n, d
    )
    return header + g.rows.astype("<u8").tobytes()


def graph_from_bytes(blob: bytes) -> DenseGraph:
    if blob[:4] != GRAPH_MAGIC:
        raise ParseError("bad graph magic")
    header_size = struct.calcsize("<I16sIIIIII")
    version, family, r, t2, p, e, n, _d = struct.unpack("<I16sIIIIII", blob[4 : 4 + header_size])
    if version > VERSION:
        raise ParseError(f"graph cache version {version} unsupported")
    t = None if t2 == 0xFFFFFFFF else Fraction(t2, 2)
    w = kernels.words_for(n)
    rows = np.frombuffer(blob[4 + header_size :], dtype="<u8").reshape(n, w).astype(np.uint64)
    meta = GraphMeta(kind="cached", family=family.rstrip(b"\0").decode(), r=r, t=t, q=p**e)
    return DenseGraph(np.ascontiguousarray(rows), meta)


def hypergraph_edges_to_bytes(h) -> bytes:
    if h.edges is None:
        raise ParseError("hypergraph has no materialized edges")
    header = HYPER_MAGIC + struct.pack("<IIIQ", VERSION, h.r, h.q, h.edge_count)
    return header + h.edges.astype("<u4").tobytes()


def hypergraph_edges_from_bytes(blob: bytes):
    if blob[:4] != HYPER_MAGIC:
        raise ParseError("bad hypergraph magic")
    version, r, q, count = struct.unpack("<IIIQ", blob[4 : 4 + 20])
    if version > VERSION:
        raise ParseError(f"hypergraph cache version {version} unsupported")
    edges = np.frombuffer(blob[24:], dtype="<u4").reshape(int(count), 3).astype(np.int32)
    return r, q, edges


def _factor_prime_power(q: int):
    p = q
    for f in range(2, q + 1):
        if f * f > q:
            break
        if q % f == 0:
            p = f
            break
    e = 0
    while q % p == 0 and q > 1:
        q //= p
        e += 1
    return p, max(e, 1)
