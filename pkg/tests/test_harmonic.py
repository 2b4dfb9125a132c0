import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from steklov import DomainError, WeightedGraph, build_domain, make_window
from steklov.fixtures import half_line_window, random_instance, tree_window
from steklov.harmonic import (
    boundary_data,
    capacity,
    capacity_by_flux,
    dirichlet_energy,
    green_residual,
    harmonic_extension,
    laplacian,
    normal_derivative,
    normal_derivatives,
)


@pytest.mark.parametrize("n", [1, 2, 5, 17])
def test_half_line_ramp(n):
    win = half_line_window(n)
    u = harmonic_extension(win, [1.0])
    assert np.allclose(u.values, 1 - np.arange(n + 1) / n, atol=1e-14)
    assert normal_derivative(win, u, 0) == pytest.approx(1 / n, abs=1e-14)
    assert capacity(win, [1.0]) == pytest.approx(1 / n, abs=1e-14)


def test_zero_data(star):
    u = harmonic_extension(star, [0.0, 0.0])
    assert not u.values.any()
    assert not normal_derivatives(star, u).any()
    assert capacity(star, {"b1": 0.0}) == 0.0


def test_closed_window_averages():
    g = WeightedGraph.from_edges([("b", "v", 2.5)])
    win = make_window(build_domain(g, ["v"]), ["b", "v"])
    assert harmonic_extension(win, [3.0]).values.tolist() == [3.0, 3.0]


def test_star_normal_derivatives(star):
    u = harmonic_extension(star, {"b1": 1.0})
    assert u.values[star.local(["v"])[0]] == pytest.approx(1 / 3)
    assert normal_derivative(star, u, "b1") == pytest.approx(2 / 3)
    assert normal_derivative(star, u, "b2") == pytest.approx(-1 / 3)


def test_laplacian_values(half01):
    assert laplacian(half01, np.ones(3), 1) == 0.0
    assert laplacian(half01, [1.0, 0.5, 0.0], 1) == 0.0
    assert laplacian(half01, [0.0, 1.0, 0.0], 1) == -1.0
    with pytest.raises(DomainError):
        laplacian(half01, np.ones(3), 0)
    with pytest.raises(DomainError):
        normal_derivative(half01, np.ones(3), 1)


def test_energy_examples(half01, star):
    assert dirichlet_energy(half01, [1.0, 0.5, 0.0]) == 0.5
    assert dirichlet_energy(half01, np.full(3, 7.0)) == 0.0
    with pytest.raises(DomainError):
        dirichlet_energy(half01, [1.0, 0.5])
    for subset in (["b1"], ["v"], ["b1", "v"], ["b1", "b2", "v"]):
        chi = star.mask(subset).astype(float)
        assert dirichlet_energy(star, chi) == star.cut_weight(star.mask(subset))


def test_boundary_data_validation(star):
    with pytest.raises(DomainError):
        boundary_data(star, {"v": 1.0})
    with pytest.raises(DomainError):
        boundary_data(star, [1.0])


def test_green_on_half_line(half01):
    rng = np.random.default_rng(0)
    for _ in range(20):
        u, g = rng.standard_normal(3), rng.standard_normal(3)
        assert green_residual(half01, u, g) <= 1e-12
    assert green_residual(half01, np.ones(3), rng.standard_normal(3)) == 0.0


def _inst(seed):
    return random_instance(np.random.default_rng(seed), n_max=10)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_extension_invariants(seed):
    inst = _inst(seed)
    win = inst.window
    rng = np.random.default_rng(seed)
    f = rng.uniform(-2, 2, win.n_boundary)
    u = harmonic_extension(win, f).values
    scale = max(1.0, np.abs(f).max())
    assert np.allclose(u[win.bidx], f) and not u[win.n:].any()
    for i in win.iidx:
        x = win.vertices[i]
        assert abs(laplacian(win, u, win.domain.name(x))) <= 1e-10 * scale
    assert u.min() >= min(f.min(), 0) - 1e-12 and u.max() <= max(f.max(), 0) + 1e-12
    cap = capacity(win, f)
    assert cap == pytest.approx(capacity_by_flux(win, f), abs=1e-10 * scale**2 * win.ew.sum())
    assert cap <= np.sum(win.measure[win.bidx] * f * f) + 1e-10
    # bilinearity and symmetry
    v = rng.standard_normal(win.n + win.n_collar)
    w = rng.standard_normal(win.n + win.n_collar)
    assert dirichlet_energy(win, v, w) == pytest.approx(dirichlet_energy(win, w, v))
    assert dirichlet_energy(win, 2 * v + w, w) == pytest.approx(2 * dirichlet_energy(win, v, w) + dirichlet_energy(win, w))
    assert green_residual(win, v, w) <= 1e-10 * max(1.0, win.ew.sum()) * np.abs(v).max() * np.abs(w).max()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_extension_minimizes_energy(seed):
    win = _inst(seed).window
    rng = np.random.default_rng(seed)
    f = rng.standard_normal(win.n_boundary)
    u = harmonic_extension(win, f).values
    e0 = dirichlet_energy(win, u)
    for _ in range(200):
        phi = u.copy()
        phi[win.iidx] += rng.standard_normal(len(win.iidx))
        assert e0 <= dirichlet_energy(win, phi) + 1e-10


def test_positive_part_monotone_along_windows():
    # u_{f+}^{W_i} <= u_{f+}^{W_{i+1}} pointwise on W_i-bar
    prev = None
    for depth in range(1, 6):
        win = tree_window(depth)
        u = harmonic_extension(win, [1.0]).values
        ids = np.concatenate([win.vertices, win.collar])
        cur = dict(zip(ids.tolist(), u.tolist()))
        if prev is not None:
            assert all(cur[x] >= v - 1e-14 for x, v in prev.items())
        prev = cur
