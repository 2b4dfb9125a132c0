"""Weighted graphs, domains with vertex boundary, and finite windows.

A :class:`Domain` is an interior vertex set ``Omega`` inside a host graph.
Its vertex boundary ``dOmega`` is derived, edges between two boundary
vertices are pruned, and every vertex of the closure carries the measure
``d``.  A :class:`Window` is a finite subset ``W`` of the closure together
with its outer collar ``dW``; all finite computations run on windows.

Vertex ids are integers.  Finite graphs map arbitrary hashable names to
ids in insertion order; lazily realized families use ids directly.
"""
from __future__ import annotations

from typing import Hashable, Iterable, Iterator, Mapping

import numpy as np
import scipy.sparse as sp

from .errors import DomainError

__all__ = [
    "WeightedGraph",
    "DomainView",
    "Domain",
    "Window",
    "build_domain",
    "make_window",
    "relative_edge_boundary",
]


class WeightedGraph:
    """Undirected, locally finite graph with symmetric positive weights.

    Zero weights are dropped on insertion, negative weights raise.
    Self-loops are allowed.
    """

    def __init__(self):
        self._names: list[Hashable] = []
        self._ids: dict[Hashable, int] = {}
        self._adj: list[dict[int, float]] = []

    @classmethod
    def from_edges(cls, edges: Iterable, vertices: Iterable[Hashable] = ()) -> "WeightedGraph":
        g = cls()
        for v in vertices:
            g.add_vertex(v)
        for u, v, w in edges:
            g.add_edge(u, v, w)
        return g

    def add_vertex(self, name: Hashable) -> int:
        if name in self._ids:
            return self._ids[name]
        vid = len(self._names)
        self._names.append(name)
        self._ids[name] = vid
        self._adj.append({})
        return vid

    def add_edge(self, u: Hashable, v: Hashable, weight: float) -> None:
        weight = float(weight)
        if not np.isfinite(weight) or weight < 0:
            raise DomainError(f"edge {u!r}-{v!r}: weight must be finite and >= 0, got {weight}")
        iu, iv = self.add_vertex(u), self.add_vertex(v)
        if weight == 0.0:
            return
        if iv in self._adj[iu]:
            raise DomainError(f"duplicate edge {u!r}-{v!r}")
        self._adj[iu][iv] = weight
        self._adj[iv][iu] = weight

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, name) -> bool:
        return name in self._ids

    def vertex_id(self, name: Hashable) -> int:
        try:
            return self._ids[name]
        except (KeyError, TypeError):
            raise DomainError(f"unknown vertex {name!r}") from None

    def name(self, vid: int) -> Hashable:
        return self._names[vid]

    @property
    def names(self) -> list:
        return list(self._names)

    def neighbors(self, vid: int) -> Mapping[int, float]:
        return self._adj[vid]

    def weight(self, u: int, v: int) -> float:
        return self._adj[u].get(v, 0.0)

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Each undirected edge once, as ``(u, v, w)`` with ``u <= v``."""
        for u, nbrs in enumerate(self._adj):
            for v, w in nbrs.items():
                if u <= v:
                    yield u, v, w

    def degree(self, vid: int) -> float:
        return sum(self._adj[vid].values())


class DomainView:
    """Interface shared by finite domains and lazily realized families.

    ``neighbors`` is the pruned view: an interior vertex sees all of its
    neighbors (its own loop included), a boundary vertex sees only its
    interior neighbors.
    """

    def is_interior(self, x: int) -> bool:
        raise NotImplementedError

    def is_boundary(self, x: int) -> bool:
        raise NotImplementedError

    def in_closure(self, x: int) -> bool:
        return self.is_interior(x) or self.is_boundary(x)

    def neighbors(self, x: int) -> Iterable[tuple[int, float]]:
        raise NotImplementedError

    def measure(self, x: int) -> float:
        return float(sum(w for _, w in self.neighbors(x)))

    def boundary_vertices(self) -> list[int]:
        raise NotImplementedError

    def resolve(self, name) -> int:
        return name

    def name(self, x: int):
        return x

    # batched forms; families override these with vectorized versions

    def kinds(self, ids: np.ndarray) -> np.ndarray:
        """Per id: 1 for boundary, 0 for interior, -1 outside the closure."""
        return np.array([1 if self.is_boundary(x) else 0 if self.is_interior(x) else -1 for x in ids.tolist()],
                        dtype=np.int8)

    def measures(self, ids: np.ndarray) -> np.ndarray:
        return np.array([self.measure(x) for x in ids.tolist()], dtype=float)

    def neighbor_arrays(self, ids: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(src, nbr, w)``: every neighbor pair of ``ids``, ``src`` indexing into ``ids``."""
        src, nbr, w = [], [], []
        for i, x in enumerate(ids.tolist()):
            for y, mu in self.neighbors(x):
                src.append(i)
                nbr.append(y)
                w.append(mu)
        return np.asarray(src, dtype=np.int64), np.asarray(nbr, dtype=np.int64), np.asarray(w, dtype=float)


class Domain(DomainView):
    """Finite-graph domain: interior set, derived boundary, pruned weights."""

    def __init__(self, graph: WeightedGraph, interior: frozenset[int]):
        self.graph = graph
        self.interior = frozenset(interior)
        boundary = set()
        for x in self.interior:
            for y in graph.neighbors(x):
                if y not in self.interior:
                    boundary.add(y)
        self.boundary = frozenset(boundary)
        self._nbrs: dict[int, tuple[tuple[int, float], ...]] = {}
        for x in self.interior:
            self._nbrs[x] = tuple(sorted(graph.neighbors(x).items()))
        for z in self.boundary:
            self._nbrs[z] = tuple(sorted((y, w) for y, w in graph.neighbors(z).items() if y in self.interior))
        self._measure = {x: float(sum(w for _, w in nb)) for x, nb in self._nbrs.items()}

    def is_interior(self, x: int) -> bool:
        return x in self.interior

    def is_boundary(self, x: int) -> bool:
        return x in self.boundary

    def neighbors(self, x: int):
        return self._nbrs[x]

    def measure(self, x: int) -> float:
        return self._measure[x]

    def measure_of(self, a: Iterable) -> float:
        return float(sum(self._measure[self.resolve(x)] for x in a))

    def boundary_vertices(self) -> list[int]:
        return sorted(self.boundary)

    @property
    def closure(self) -> list[int]:
        return sorted(self.interior | self.boundary)

    def resolve(self, name) -> int:
        return self.graph.vertex_id(name)

    def name(self, x: int):
        return self.graph.name(x)

    def pruned_graph(self) -> WeightedGraph:
        """The closure as a standalone graph, boundary-boundary edges removed."""
        g = WeightedGraph()
        for x in self.closure:
            g.add_vertex(self.name(x))
        for x in self.closure:
            for y, w in self._nbrs[x]:
                if x <= y:
                    g.add_edge(self.name(x), self.name(y), w)
        return g


def build_domain(graph: WeightedGraph, interior: Iterable[Hashable]) -> Domain:
    """Domain with interior ``interior`` (vertex names) inside ``graph``."""
    ids = frozenset(graph.vertex_id(v) for v in interior)
    if not ids:
        raise DomainError("interior set must be nonempty")
    dom = Domain(graph, ids)
    for x in ids:
        if dom.measure(x) <= 0.0:
            raise DomainError(f"interior vertex {graph.name(x)!r} has no neighbors (measure zero)")
    return dom


class Window:
    """Finite probe region ``W`` of a domain closure and its collar ``dW``.

    Local indexing: ``0..n-1`` are the vertices of ``W`` (sorted ids),
    ``n..n+m-1`` the collar.  ``edges`` holds each edge of ``E(W, W-bar)``
    once; loops are kept apart because they never cross a cut.
    """

    def __init__(self, domain: DomainView, vertices, collar, boundary_mask, measure, eu, ev, ew, loops):
        self.domain = domain
        self.vertices = np.asarray(vertices, dtype=np.int64)
        self.collar = np.asarray(collar, dtype=np.int64)
        self.boundary_mask = np.asarray(boundary_mask, dtype=bool)
        self.measure = np.asarray(measure, dtype=float)
        self.eu = np.asarray(eu, dtype=np.int64)
        self.ev = np.asarray(ev, dtype=np.int64)
        self.ew = np.asarray(ew, dtype=float)
        self.loops = np.asarray(loops, dtype=float)
        self.bidx = np.flatnonzero(self.boundary_mask)
        self.iidx = np.flatnonzero(~self.boundary_mask)
        self._index = None
        self._lap = None

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def n_collar(self) -> int:
        return len(self.collar)

    @property
    def n_boundary(self) -> int:
        return len(self.bidx)

    @property
    def index(self) -> dict[int, int]:
        if self._index is None:
            ids = np.concatenate([self.vertices, self.collar]).tolist()
            self._index = {v: i for i, v in enumerate(ids)}
        return self._index

    def local(self, names: Iterable) -> np.ndarray:
        """Local indices of vertices given by name."""
        out = []
        for v in names:
            vid = self.domain.resolve(v)
            i = self.index.get(vid)
            if i is None or i >= self.n:
                raise DomainError(f"vertex {v!r} is not in the window")
            out.append(i)
        return np.asarray(out, dtype=np.int64)

    def names(self, local_idx: Iterable[int]) -> tuple:
        allv = np.concatenate([self.vertices, self.collar])
        return tuple(self.domain.name(int(allv[i])) for i in local_idx)

    def boundary_names(self) -> tuple:
        return self.names(self.bidx)

    def laplacian(self) -> sp.csr_matrix:
        """Unnormalized Laplacian of ``(W-bar, E(W, W-bar))`` (loops excluded)."""
        if self._lap is None:
            size = self.n + self.n_collar
            rows = np.concatenate([self.eu, self.ev, self.eu, self.ev])
            cols = np.concatenate([self.ev, self.eu, self.eu, self.ev])
            vals = np.concatenate([-self.ew, -self.ew, self.ew, self.ew])
            self._lap = sp.csr_matrix((vals, (rows, cols)), shape=(size, size))
        return self._lap

    def dirichlet_laplacian(self) -> sp.csr_matrix:
        """Laplacian on ``W`` with the collar eliminated by deletion."""
        return self.laplacian()[: self.n, : self.n].tocsr()

    def mask(self, a: Iterable) -> np.ndarray:
        """Boolean mask over ``W-bar`` (local order) selecting the named subset of ``W``."""
        m = np.zeros(self.n + self.n_collar, dtype=bool)
        idx = self.local(a)
        m[idx] = True
        return m

    def cut_weight(self, mask: np.ndarray) -> float:
        """Weight of edges of ``E(W, W-bar)`` with exactly one endpoint in ``mask``."""
        if len(mask) == self.n:
            mask = np.concatenate([mask, np.zeros(self.n_collar, dtype=bool)])
        return float(self.ew[mask[self.eu] != mask[self.ev]].sum())

    def degrees(self) -> np.ndarray:
        """Weighted degree inside ``E(W, W-bar)`` for every vertex of ``W-bar``."""
        deg = np.zeros(self.n + self.n_collar)
        np.add.at(deg, self.eu, self.ew)
        np.add.at(deg, self.ev, self.ew)
        return deg

    def __repr__(self) -> str:
        return f"Window(n={self.n}, boundary={self.n_boundary}, collar={self.n_collar})"


def make_window(domain: DomainView, w: Iterable, *, by_id: bool = False) -> Window:
    """Window over the vertex set ``w`` (names, or ids with ``by_id``)."""
    if by_id:
        ids = np.unique(np.fromiter((int(v) for v in w), dtype=np.int64))
    else:
        ids = np.unique(np.fromiter((domain.resolve(v) for v in w), dtype=np.int64))
    if not len(ids):
        raise DomainError("window must be nonempty")
    n = len(ids)
    kind = domain.kinds(ids)
    if np.any(kind < 0):
        bad = int(ids[np.argmax(kind < 0)])
        raise DomainError(f"vertex {domain.name(bad)!r} is not in the domain closure")
    boundary_mask = kind == 1
    measure = domain.measures(ids)
    zero = ~boundary_mask & (measure <= 0.0)
    if np.any(zero):
        bad = int(ids[np.argmax(zero)])
        raise DomainError(f"interior vertex {domain.name(bad)!r} has measure zero")
    src, nbr, wt = domain.neighbor_arrays(ids)
    loop = nbr == ids[src]
    loops = np.bincount(src[loop], weights=wt[loop], minlength=n).astype(float)
    pos = np.searchsorted(ids, nbr)
    inside = (pos < n) & (ids[np.minimum(pos, n - 1)] == nbr)
    internal = inside & (ids[src] < nbr)
    out = ~inside
    collar_ids = np.unique(nbr[out])
    cv = n + np.searchsorted(collar_ids, nbr[out])
    return Window(
        domain,
        ids,
        collar_ids,
        boundary_mask,
        measure,
        np.concatenate([src[internal], src[out]]),
        np.concatenate([pos[internal], cv]),
        np.concatenate([wt[internal], wt[out]]),
        loops,
    )


def relative_edge_boundary(window: Window, a: Iterable) -> float:
    """``mu(d_W A)``: weight of edges of ``E(W, W-bar)`` leaving ``A``."""
    a = list(a)
    if not a:
        raise DomainError("subset must be nonempty")
    return window.cut_weight(window.mask(a))
