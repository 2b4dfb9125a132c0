"""JSON graph files: ``{"vertices": [{"id", "role"}], "edges": [[u, v, w]]}``.

The ``role`` field is advisory.  Vertices marked ``interior`` form the
domain; the boundary is always recomputed from adjacency.
"""
from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path

from .errors import DomainError
from .graph import Domain, WeightedGraph, build_domain

ROLES = ("interior", "boundary-candidate")


def sha256_of(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def parse_graph(text: str, source: str = "<string>") -> tuple[WeightedGraph, list]:
    """Graph and interior vertex names from JSON text."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"{source}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict) or "vertices" not in doc or "edges" not in doc:
        raise DomainError(f"{source}: expected an object with 'vertices' and 'edges'")
    g = WeightedGraph()
    interior = []
    for k, v in enumerate(doc["vertices"]):
        if not isinstance(v, dict) or "id" not in v:
            raise DomainError(f"{source}: vertices[{k}] needs an 'id'")
        role = v.get("role", "interior")
        if role not in ROLES:
            raise DomainError(f"{source}: vertices[{k}] has unknown role {role!r}")
        name = str(v["id"])
        if name in g:
            raise DomainError(f"{source}: duplicate vertex id {name!r}")
        g.add_vertex(name)
        if role == "interior":
            interior.append(name)
    for k, e in enumerate(doc["edges"]):
        if not isinstance(e, (list, tuple)) or len(e) != 3:
            raise DomainError(f"{source}: edges[{k}] must be [u, v, weight]")
        u, v, w = str(e[0]), str(e[1]), e[2]
        for x in (u, v):
            if x not in g:
                raise DomainError(f"{source}: edges[{k}] references unknown vertex {x!r}")
        if isinstance(w, bool) or not isinstance(w, (int, float)) or not math.isfinite(w):
            raise DomainError(f"{source}: edges[{k}] weight must be a finite number")
        g.add_edge(u, v, float(w))
    return g, interior


def load_graph(path: str | Path) -> tuple[WeightedGraph, list]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None
    return parse_graph(text, str(path))


def load_domain(path: str | Path) -> Domain:
    g, interior = load_graph(path)
    return build_domain(g, interior)


def graph_document(graph: WeightedGraph, interior) -> dict:
    inside = {str(v) for v in interior}
    verts = [{"id": str(n), "role": "interior" if str(n) in inside else "boundary-candidate"} for n in graph.names]
    edges = [[str(graph.name(u)), str(graph.name(v)), w] for u, v, w in graph.edges()]
    return {"vertices": verts, "edges": edges}


def dump_graph(graph: WeightedGraph, interior, path: str | Path, extra: dict | None = None) -> None:
    """Write a graph file; ``extra`` keys (e.g. a window) ride along and are ignored on load."""
    doc = graph_document(graph, interior)
    if extra:
        doc.update(extra)
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")
