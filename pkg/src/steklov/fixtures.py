"""Built-in fixtures and the seeded random window generator."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Domain, WeightedGraph, Window, build_domain, make_window
from .exhaustion import RegularTree


@dataclass
class Instance:
    """A finite domain, the window to probe, and what rebuilds them."""

    name: str
    graph: WeightedGraph | None
    interior: list
    window_names: list
    domain: Domain | None = None
    window: Window | None = None


def half_line_domain(length: int) -> Domain:
    """Path ``0 - 1 - ... - length`` with unit weights and interior ``1..length``."""
    g = WeightedGraph.from_edges((i, i + 1, 1.0) for i in range(length))
    return build_domain(g, range(1, length + 1))


def half_line_window(n: int, length: int | None = None) -> Window:
    """Window ``{0..n-1}`` on a half-line long enough to have collar ``{n}``."""
    dom = half_line_domain(length or n + 1)
    return make_window(dom, range(n))


def star_graph() -> tuple[WeightedGraph, list]:
    """Boundary ``b1, b2`` on a center ``v`` which has one more neighbor ``w``."""
    g = WeightedGraph.from_edges([("b1", "v", 1.0), ("b2", "v", 1.0), ("v", "w", 1.0)])
    return g, ["v", "w"]


def star_window() -> Window:
    g, interior = star_graph()
    return make_window(build_domain(g, interior), ["b1", "b2", "v"])


def tree_window(depth: int = 3, degree: int = 3) -> Window:
    """Ball of radius ``depth`` around the root of :class:`RegularTree`."""
    from .exhaustion import ExhaustionSequence

    seq = ExhaustionSequence(RegularTree(degree), depth_max=depth)
    return make_window(seq.family, seq.ball(depth), by_id=True)


def fixture_instances() -> list[Instance]:
    hl_graph = WeightedGraph.from_edges((i, i + 1, 1.0) for i in range(2))
    g, interior = star_graph()
    out = [
        Instance("half-line", hl_graph, [1, 2], [0, 1]),
        Instance("star", g, interior, ["b1", "b2", "v"]),
        Instance("tree", None, [], []),
    ]
    for inst in out[:2]:
        inst.domain = build_domain(inst.graph, inst.interior)
        inst.window = make_window(inst.domain, inst.window_names)
    out[2].window = tree_window(3)
    out[2].domain = out[2].window.domain
    return out


def random_instance(rng: np.random.Generator, n_min: int = 4, n_max: int = 12, min_boundary: int = 1,
                    max_collar: int = 3, max_weight: int = 5, name: str = "random") -> Instance:
    """Connected random domain with a window of ``n_min..n_max`` vertices.

    The window holds ``p >= min_boundary`` boundary vertices and some
    interior ones; up to ``max_collar`` further interior vertices sit
    outside it.  Extra edges include boundary-boundary pairs (pruned by
    the domain) and self-loops.  Weights are integers in ``1..max_weight``.
    """
    n = int(rng.integers(n_min, n_max + 1))
    p = int(rng.integers(min(min_boundary, n), n + 1))
    ni = n - p
    nc = int(rng.integers(0, max_collar + 1))
    if ni + nc == 0:
        nc = 1
    bnames = [f"b{i}" for i in range(p)]
    inames = [f"v{i}" for i in range(ni)] + [f"c{i}" for i in range(nc)]
    weight = lambda: float(rng.integers(1, max_weight + 1))  # noqa: E731
    edges = {}

    def add(u, v):
        key = (u, v) if u <= v else (v, u)
        if key not in edges:
            edges[key] = weight()

    order = list(rng.permutation(len(inames)))
    for j in range(1, len(order)):
        add(inames[order[j]], inames[order[int(rng.integers(0, j))]])
    for b in bnames:
        add(b, inames[int(rng.integers(0, len(inames)))])
    everyone = bnames + inames
    for _ in range(int(rng.integers(0, len(everyone) + 1))):
        u, v = rng.choice(len(everyone), size=2, replace=False)
        add(everyone[u], everyone[v])
    for v in inames:
        if rng.random() < 0.1:
            add(v, v)
    g = WeightedGraph()
    for v in everyone:
        g.add_vertex(v)
    for (u, v), w in sorted(edges.items()):
        g.add_edge(u, v, w)
    inst = Instance(name, g, inames, bnames + inames[:ni])
    inst.domain = build_domain(g, inames)
    inst.window = make_window(inst.domain, inst.window_names)
    return inst


def random_instances(seed: int, count: int, **kw) -> list[Instance]:
    rng = np.random.default_rng(seed)
    return [random_instance(rng, name=f"seed{seed}-{i}", **kw) for i in range(count)]
