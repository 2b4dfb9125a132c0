"""Harmonic extension, Dirichlet energy, normal derivatives and capacities.

Boundary data on a window is a vector aligned with ``window.bidx`` (the
vertices of ``W`` lying in the domain boundary); functions on ``W-bar``
are vectors in the window's local order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import DomainError, NotSPDError
from .graph import Window
from .numerics import solve_spd


@dataclass(frozen=True)
class Extension:
    """Harmonic extension: values on ``W-bar`` plus the originating data."""

    values: np.ndarray
    data: np.ndarray

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


def boundary_data(window: Window, values: Mapping | np.ndarray) -> np.ndarray:
    """Boundary vector from a ``{name: value}`` mapping (absent names are 0)."""
    if not isinstance(values, Mapping):
        f = np.asarray(values, dtype=float)
        if f.shape != (window.n_boundary,):
            raise DomainError(f"boundary data must have length {window.n_boundary}")
        return f
    f = np.zeros(window.n_boundary)
    slot = {int(i): k for k, i in enumerate(window.bidx)}
    for name, val in values.items():
        (i,) = window.local([name])
        if int(i) not in slot:
            raise DomainError(f"vertex {name!r} is not a boundary vertex of the window")
        f[slot[int(i)]] = float(val)
    return f


def _values(u) -> np.ndarray:
    return u.values if isinstance(u, Extension) else np.asarray(u, dtype=float)


def _check_total(window: Window, u: np.ndarray) -> None:
    if u.shape != (window.n + window.n_collar,):
        raise DomainError(f"function must be defined on all {window.n + window.n_collar} vertices of W-bar")


def interior_solve(window: Window, rhs: np.ndarray) -> np.ndarray:
    """Solve ``L_ii x = rhs`` on the interior block of the window."""
    lap = window.laplacian()
    ii = window.iidx
    lii = lap[ii][:, ii]
    try:
        return solve_spd(lii if len(ii) > 3000 else lii.toarray(), rhs)
    except NotSPDError:
        raise DomainError("an interior component of the window has no Dirichlet vertex") from None


def harmonic_extension(window: Window, f) -> Extension:
    """Unique ``u`` with ``u = f`` on ``W & dOmega``, ``u = 0`` on ``dW``, harmonic inside."""
    f = boundary_data(window, f)
    u = np.zeros(window.n + window.n_collar)
    u[window.bidx] = f
    if len(window.iidx):
        lap = window.laplacian()
        rhs = -(lap[window.iidx][:, window.bidx] @ f)
        u[window.iidx] = interior_solve(window, rhs)
    return Extension(u, f)


def _apply_lap(window: Window, u: np.ndarray) -> np.ndarray:
    return window.laplacian() @ u


def laplacian(window: Window, u, x) -> float:
    """``(1/d(x)) sum_y mu_xy (u(y) - u(x))`` at an interior vertex ``x``."""
    u = _values(u)
    _check_total(window, u)
    (i,) = window.local([x])
    if window.boundary_mask[i]:
        raise DomainError(f"vertex {x!r} is not interior")
    return float(-_apply_lap(window, u)[i] / window.measure[i])


def normal_derivative(window: Window, u, z) -> float:
    """Outward normal derivative at ``z`` in ``W & dOmega``."""
    u = _values(u)
    _check_total(window, u)
    (i,) = window.local([z])
    if not window.boundary_mask[i]:
        raise DomainError(f"vertex {z!r} is not a boundary vertex")
    return float(_apply_lap(window, u)[i] / window.measure[i])


def normal_derivatives(window: Window, u) -> np.ndarray:
    """Normal derivative at every boundary vertex of the window (``bidx`` order)."""
    u = _values(u)
    _check_total(window, u)
    b = window.bidx
    return _apply_lap(window, u)[b] / window.measure[b]


def dirichlet_energy(window: Window, u, v=None) -> float:
    """``D_W(u, v)`` summed over ``E(W, W-bar)``; ``D_W(u)`` when ``v`` is omitted."""
    u = _values(u)
    _check_total(window, u)
    du = u[window.eu] - u[window.ev]
    if v is None:
        return float(np.sum(window.ew * du * du))
    v = _values(v)
    _check_total(window, v)
    return float(np.sum(window.ew * du * (v[window.eu] - v[window.ev])))


def green_residual(window: Window, u, g) -> float:
    """``|<Lap u, g>_W + D_W(u, g) - <du/dn, g>_dW|``.

    The left side is evaluated vertex by vertex from the domain's neighbor
    lists; the right side from the window's edge arrays.
    """
    u, g = _values(u), _values(g)
    _check_total(window, u)
    _check_total(window, g)
    dom = window.domain
    index = window.index
    lhs = 0.0
    for i, x in enumerate(window.vertices.tolist()):
        s = 0.0
        for y, mu in dom.neighbors(x):
            s += mu * (u[index[y]] - u[i])
        lhs += s * g[i]
    flux = 0.0
    n = window.n
    for a, b, mu in zip(window.eu.tolist(), window.ev.tolist(), window.ew.tolist()):
        if b >= n:
            flux += g[b] * mu * (u[b] - u[a])
    rhs = -dirichlet_energy(window, u, g) + flux
    return abs(lhs - rhs)


def capacity(window: Window, f) -> float:
    """``Cap(f, W)``: Dirichlet energy of the harmonic extension of ``f``."""
    return dirichlet_energy(window, harmonic_extension(window, f))


def capacity_by_flux(window: Window, f) -> float:
    """``<du/dn, f>`` with ``d``-weights; equals :func:`capacity`."""
    ext = harmonic_extension(window, f)
    dn = normal_derivatives(window, ext)
    return float(np.sum(window.measure[window.bidx] * dn * ext.data))
