import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from steklov import DomainError, WeightedGraph, build_domain, make_window, relative_edge_boundary
from steklov.fixtures import random_instance
from steklov.io import dump_graph, load_domain, parse_graph


def path3():
    return WeightedGraph.from_edges([(0, 1, 1), (1, 2, 1)])


def test_path_domain_measures():
    dom = build_domain(path3(), [1, 2])
    assert dom.boundary_vertices() == [0]
    assert [dom.measure(x) for x in (0, 1, 2)] == [1.0, 2.0, 1.0]


def test_triangle_prunes_boundary_edge():
    g = WeightedGraph.from_edges([("a", "b", 1), ("b", "c", 1), ("a", "c", 1)])
    dom = build_domain(g, ["a"])
    b, c = dom.resolve("b"), dom.resolve("c")
    assert set(dom.boundary_vertices()) == {b, c}
    assert all(y == dom.resolve("a") for y, _ in dom.neighbors(b))
    assert dom.measure(b) == dom.measure(c) == 1.0
    assert dom.measure(dom.resolve("a")) == 2.0
    assert dom.pruned_graph().weight(g.vertex_id("b"), g.vertex_id("c")) == 0.0


def test_all_interior_has_empty_boundary():
    g = WeightedGraph.from_edges([(0, 1, 2), (1, 2, 3)])
    dom = build_domain(g, [0, 1, 2])
    assert dom.boundary_vertices() == []
    assert dom.measure(1) == 5.0


def test_loops_count_in_measure_but_not_in_cuts():
    g = WeightedGraph.from_edges([(0, 1, 1), (1, 1, 4), (1, 2, 1)])
    dom = build_domain(g, [1, 2])
    assert dom.measure(1) == 6.0
    win = make_window(dom, [0, 1])
    assert win.loops.tolist() == [0.0, 4.0]
    assert relative_edge_boundary(win, [1]) == 2.0


@pytest.mark.parametrize("interior, msg", [([], "nonempty"), (["zz"], "unknown")])
def test_build_domain_errors(interior, msg):
    with pytest.raises(DomainError, match=msg):
        build_domain(path3(), interior)


def test_isolated_interior_vertex_rejected():
    g = path3()
    g.add_vertex(9)
    with pytest.raises(DomainError, match="measure zero"):
        build_domain(g, [1, 9])


def test_weight_validation():
    g = WeightedGraph()
    with pytest.raises(DomainError):
        g.add_edge(0, 1, -1)
    g.add_edge(0, 1, 0)
    assert g.weight(0, 1) == 0.0 and list(g.edges()) == []
    g.add_edge(0, 1, 2)
    with pytest.raises(DomainError, match="duplicate"):
        g.add_edge(1, 0, 2)


def test_half_line_window_partition():
    g = WeightedGraph.from_edges((i, i + 1, 1) for i in range(4))
    win = make_window(build_domain(g, [1, 2, 3, 4]), [0, 1])
    assert win.names(win.bidx) == (0,)
    assert win.names(win.iidx) == (1,)
    assert win.collar.tolist() == [g.vertex_id(2)]
    assert relative_edge_boundary(win, [0]) == 1.0
    assert relative_edge_boundary(win, [0, 1]) == 1.0


def test_closed_window_has_no_collar():
    g = WeightedGraph.from_edges([("b", "v", 1)])
    win = make_window(build_domain(g, ["v"]), ["b", "v"])
    assert win.n_collar == 0
    assert relative_edge_boundary(win, ["b", "v"]) == 0.0


def test_window_errors():
    g = WeightedGraph.from_edges([(0, 1, 1), (1, 2, 1), (2, 3, 1)])
    dom = build_domain(g, [1])
    with pytest.raises(DomainError, match="closure"):
        make_window(dom, [1, 3])
    win = make_window(dom, [0, 1])
    with pytest.raises(DomainError):
        relative_edge_boundary(win, [])
    with pytest.raises(DomainError):
        relative_edge_boundary(win, [2])


def _rand(seed):
    return random_instance(np.random.default_rng(seed))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_handshake_and_additivity(seed):
    inst = _rand(seed)
    win, dom = inst.window, inst.domain
    deg = win.degrees()[: win.n]
    n = win.n
    inner = (win.eu < n) & (win.ev < n)
    assert deg.sum() == pytest.approx(2 * win.ew[inner].sum() + win.ew[~inner].sum(), abs=1e-12)
    names = inst.window_names[: max(1, len(inst.window_names) // 2)]
    assert dom.measure_of(names) == pytest.approx(sum(dom.measure(dom.resolve(v)) for v in names))
    # every edge incident to W appears exactly once
    seen = set()
    allv = np.concatenate([win.vertices, win.collar])
    for a, b in zip(win.eu.tolist(), win.ev.tolist()):
        key = frozenset((int(allv[a]), int(allv[b])))
        assert key not in seen
        seen.add(key)
    incident = {frozenset((x, y)) for x in win.vertices.tolist() for y, _ in dom.neighbors(x) if y != x}
    assert incident == seen


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_pruning_is_idempotent(seed):
    inst = _rand(seed)
    dom = inst.domain
    again = build_domain(dom.pruned_graph(), inst.interior)
    for x in dom.closure:
        name = dom.name(x)
        assert again.measure(again.resolve(name)) == dom.measure(x)
    assert sorted(again.name(z) for z in again.boundary_vertices()) == sorted(dom.name(z) for z in dom.boundary_vertices())


def test_json_roundtrip(tmp_path):
    inst = _rand(3)
    p = tmp_path / "g.json"
    dump_graph(inst.graph, inst.interior, p, {"window": inst.window_names})
    dom = load_domain(p)
    assert sorted(dom.name(x) for x in dom.closure) == sorted(inst.domain.name(x) for x in inst.domain.closure)
    assert dom.measure_of(inst.window_names) == inst.domain.measure_of(inst.window_names)
    assert {dom.name(z) for z in dom.boundary_vertices()} == {inst.domain.name(z) for z in inst.domain.boundary_vertices()}


@pytest.mark.parametrize("text, msg", [
    ('{"vertices": [', "line 1"),
    ('[]', "expected an object"),
    ('{"vertices": [{"id": "a", "role": "x"}], "edges": []}', "unknown role"),
    ('{"vertices": [{"id": "a"}], "edges": [["a", "b", 1]]}', "unknown vertex"),
    ('{"vertices": [{"id": "a"}, {"id": "b"}], "edges": [["a", "b", "1"]]}', "finite number"),
    ('{"vertices": [{"id": "a"}, {"id": "a"}], "edges": []}', "duplicate"),
])
def test_parse_errors(text, msg):
    with pytest.raises(DomainError, match=msg):
        parse_graph(text)
