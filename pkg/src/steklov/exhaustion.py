"""Infinite graph families, ball exhaustions and monotone limits.

Every monitored quantity is non-increasing along an exhaustion; each step
is checked and a violation raises :class:`MonotonicityError`.  Limits are
reported as the last value with the last successive gap as error bar.
This is an estimate, not a certified bound.
"""
from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .cheeger import (
    cheeger_enumerate,
    cheeger_parametric_cut,
    higher_order_constants,
    minmax_tuple_cost,
    HIGHER_BUDGET,
)
from .dtn import dirichlet_laplacian_spectrum, dtn_spectrum
from .errors import DomainError, MonotonicityError
from .graph import Domain, DomainView, Window, make_window
from .harmonic import capacity

MONO_TOL = 1e-12
DEFAULT_TOL = 1e-6
DEFAULT_DEPTH = 64
DEFAULT_BUDGET = 2_000_000
DENSE_SPECTRUM_LIMIT = 3000


def vertex_budget() -> int:
    """Vertex budget, overridable through ``STEKLOV_VERTEX_BUDGET``."""
    raw = os.environ.get("STEKLOV_VERTEX_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


# --------------------------------------------------------------------------
# families


class GraphFamily(DomainView):
    """Lazily realized domain closure with a finite boundary set."""

    tag = "family"

    def params(self) -> dict:
        return {}

    def spec(self) -> dict:
        return {"family": self.tag, **self.params()}

    def __repr__(self):
        return f"{type(self).__name__}({self.params()})"


class RegularTree(GraphFamily):
    """Half of the homogeneous tree of degree ``b``, cut at a single root.

    The root is the only boundary vertex and has ``root_children``
    neighbors (``b - 1`` by default); every interior vertex has degree ``b``.
    Ids follow breadth-first order.
    """

    tag = "regular_tree"

    def __init__(self, degree: int = 3, root_children: int | None = None):
        if degree < 3:
            raise DomainError("regular_tree needs degree >= 3")
        self.b = int(degree)
        self.c = int(root_children if root_children is not None else degree - 1)
        if self.c < 1:
            raise DomainError("root needs at least one child")

    def params(self):
        return {"degree": self.b, "root_children": self.c}

    def is_interior(self, x):
        return x >= 1

    def is_boundary(self, x):
        return x == 0

    def _children(self, v):
        if v == 0:
            return range(1, self.c + 1)
        start = self.c + 1 + (v - 1) * (self.b - 1)
        return range(start, start + self.b - 1)

    def _parent(self, v):
        return 0 if v <= self.c else 1 + (v - self.c - 1) // (self.b - 1)

    def neighbors(self, x):
        out = [(y, 1.0) for y in self._children(x)]
        if x:
            out.append((self._parent(x), 1.0))
        return out

    def measure(self, x):
        return float(self.c if x == 0 else self.b)

    def boundary_vertices(self):
        return [0]

    def kinds(self, ids):
        return np.where(ids == 0, 1, np.where(ids > 0, 0, -1)).astype(np.int8)

    def measures(self, ids):
        return np.where(ids == 0, float(self.c), float(self.b))

    def neighbor_arrays(self, ids):
        k = self.b - 1
        pos = np.arange(len(ids))
        root = pos[ids == 0]
        rest = pos[ids > 0]
        v = ids[rest]
        kids = (self.c + 1 + (v - 1) * k)[:, None] + np.arange(k)
        parent = np.where(v <= self.c, 0, 1 + (v - self.c - 1) // k)
        src = np.concatenate([np.repeat(root, self.c), np.repeat(rest, k), rest])
        nbr = np.concatenate([np.tile(np.arange(1, self.c + 1), len(root)), kids.ravel(), parent])
        return src, nbr, np.ones(len(src))


class HalfLine(GraphFamily):
    """Vertices ``0, 1, 2, ...`` with unit edges ``i ~ i+1``; ``0`` is the boundary."""

    tag = "half_line"

    def is_interior(self, x):
        return x >= 1

    def is_boundary(self, x):
        return x == 0

    def neighbors(self, x):
        return [(1, 1.0)] if x == 0 else [(x - 1, 1.0), (x + 1, 1.0)]

    def measure(self, x):
        return 1.0 if x == 0 else 2.0

    def boundary_vertices(self):
        return [0]

    def kinds(self, ids):
        return np.where(ids == 0, 1, np.where(ids > 0, 0, -1)).astype(np.int8)

    def measures(self, ids):
        return np.where(ids == 0, 1.0, 2.0)

    def neighbor_arrays(self, ids):
        pos = np.arange(len(ids))
        rest = pos[ids > 0]
        src = np.concatenate([pos, rest])
        nbr = np.concatenate([ids + 1, ids[rest] - 1])
        return src, nbr, np.ones(len(src))


class WeightedBinaryTree(GraphFamily):
    """Rooted binary tree; edges between levels ``l`` and ``l+1`` weigh ``base * ratio**l``."""

    tag = "binary_tree_weighted"

    def __init__(self, ratio: float = 1.0, base: float = 1.0):
        if not (ratio > 0 and base > 0):
            raise DomainError("ratio and base must be positive")
        self.ratio = float(ratio)
        self.base = float(base)

    def params(self):
        return {"ratio": self.ratio, "base": self.base}

    @staticmethod
    def _level(v):
        return (v + 1).bit_length() - 1

    def _w(self, level):
        return self.base * self.ratio**level

    def is_interior(self, x):
        return x >= 1

    def is_boundary(self, x):
        return x == 0

    def neighbors(self, x):
        lv = self._level(x)
        out = [(2 * x + 1, self._w(lv)), (2 * x + 2, self._w(lv))]
        if x:
            out.append(((x - 1) // 2, self._w(lv - 1)))
        return out

    def boundary_vertices(self):
        return [0]

    def kinds(self, ids):
        return np.where(ids == 0, 1, np.where(ids > 0, 0, -1)).astype(np.int8)

    def _levels(self, ids):
        return np.frexp((ids + 1).astype(float))[1] - 1

    def measures(self, ids):
        lv = self._levels(ids)
        down = 2 * self.base * self.ratio**lv
        up = np.where(ids > 0, self.base * self.ratio ** (lv - 1.0), 0.0)
        return down + up

    def neighbor_arrays(self, ids):
        pos = np.arange(len(ids))
        lv = self._levels(ids)
        wdown = self.base * self.ratio**lv
        rest = pos[ids > 0]
        src = np.concatenate([pos, pos, rest])
        nbr = np.concatenate([2 * ids + 1, 2 * ids + 2, (ids[rest] - 1) // 2])
        w = np.concatenate([wdown, wdown, self.base * self.ratio ** (lv[rest] - 1.0)])
        return src, nbr, w


class FiniteFamily(GraphFamily):
    """Degenerate family backed by a finite domain; exhaustions stabilize."""

    tag = "finite_file"

    def __init__(self, domain: Domain, path: str | None = None):
        self.domain = domain
        self.path = path

    def params(self):
        return {"path": self.path} if self.path else {}

    def is_interior(self, x):
        return self.domain.is_interior(x)

    def is_boundary(self, x):
        return self.domain.is_boundary(x)

    def neighbors(self, x):
        return self.domain.neighbors(x)

    def measure(self, x):
        return self.domain.measure(x)

    def boundary_vertices(self):
        return self.domain.boundary_vertices()

    def kinds(self, ids):
        return self.domain.kinds(ids)

    def measures(self, ids):
        return self.domain.measures(ids)

    def resolve(self, name):
        return self.domain.resolve(name)

    def name(self, x):
        return self.domain.name(x)


def family_from_spec(spec: dict) -> GraphFamily:
    """Build a family from its JSON description."""
    spec = dict(spec)
    tag = spec.pop("family", None)
    try:
        if tag == "regular_tree":
            return RegularTree(**spec)
        if tag == "half_line":
            return HalfLine(**spec)
        if tag == "binary_tree_weighted":
            return WeightedBinaryTree(**spec)
        if tag == "finite_file":
            from .io import load_domain

            path = spec.pop("path")
            return FiniteFamily(load_domain(path), path)
    except TypeError as exc:
        raise DomainError(f"bad parameters for family {tag!r}: {exc}") from None
    except KeyError as exc:
        raise DomainError(f"family {tag!r} is missing {exc}") from None
    raise DomainError(f"unknown family {tag!r}")


# --------------------------------------------------------------------------
# exhaustion


class ExhaustionSequence:
    """Balls ``W_r`` of combinatorial radius ``r`` around the boundary set.

    Radii run ``step, 2*step, ...`` up to ``depth_max``.  Iteration stops
    early when the next window would exceed the vertex budget.
    """

    def __init__(self, family: DomainView, step: int = 1, depth_max: int = DEFAULT_DEPTH, budget: int | None = None):
        boundary = family.boundary_vertices()
        if boundary is None:
            raise DomainError("family has an infinite boundary set")
        if not boundary:
            raise DomainError("family has an empty boundary set")
        if step < 1:
            raise DomainError("radius step must be >= 1")
        self.family = family
        self.step = step
        self.depth_max = depth_max
        self.budget = budget or vertex_budget()
        self._layers = [np.unique(np.asarray(boundary, dtype=np.int64))]
        self._done = False
        self.truncated = False

    def _grow(self) -> bool:
        if self._done:
            return False
        last = self._layers[-1]
        _, nbr, _ = self.family.neighbor_arrays(last)
        nxt = np.unique(nbr)
        # breadth-first layers: neighbors of layer r lie in layers r-1, r, r+1
        nxt = np.setdiff1d(nxt, last, assume_unique=True)
        if len(self._layers) > 1:
            nxt = np.setdiff1d(nxt, self._layers[-2], assume_unique=True)
        if not len(nxt):
            self._done = True
            return False
        self._layers.append(nxt)
        return True

    def ball(self, radius: int) -> np.ndarray:
        while len(self._layers) <= radius and self._grow():
            pass
        return np.concatenate(self._layers[: radius + 1])

    def ball_size(self, radius: int) -> int:
        while len(self._layers) <= radius and self._grow():
            pass
        return sum(len(layer) for layer in self._layers[: radius + 1])

    def __iter__(self):
        prev = None
        for r in range(self.step, self.depth_max + 1, self.step):
            size = self.ball_size(r)
            if size > self.budget:
                self.truncated = True
                return
            verts = self.ball(r)
            if prev is not None and len(verts) < len(prev):
                raise AssertionError("exhaustion is not nested")
            yield r, make_window(self.family, verts, by_id=True)
            prev = verts

    def stabilized(self, radius: int) -> bool:
        """True once the ball has stopped growing (finite families)."""
        self.ball_size(radius + 1)
        return len(self._layers) <= radius + 1


@dataclass
class ConvergenceTable:
    quantity: str
    columns: list[str]
    rows: list[dict] = field(default_factory=list)
    estimate: dict = field(default_factory=dict)
    error_bar: dict = field(default_factory=dict)
    status: str = "inconclusive"
    verdict: str | None = None
    notes: list[str] = field(default_factory=list)

    def column(self, name: str) -> list:
        return [row.get(name) for row in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_fmt(row.get(c)) for c in self.columns])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "quantity": self.quantity,
            "status": self.status,
            "verdict": self.verdict,
            "estimate": self.estimate,
            "error_bar": self.error_bar,
            "rows": self.rows,
            "notes": self.notes,
        }


def _fmt(v):
    if isinstance(v, float):
        return "%.17g" % v
    return "" if v is None else v


def _check_mono(name: str, prev: float | None, cur: float | None, radius: int) -> None:
    if prev is None or cur is None:
        return
    if math.isinf(prev) and math.isinf(cur):
        return
    if cur > prev + MONO_TOL:
        raise MonotonicityError(f"{name} increased at radius {radius}: {prev!r} -> {cur!r}")


def _finish(table: ConvergenceTable, keys, seq: ExhaustionSequence, converged: bool) -> ConvergenceTable:
    for key in keys:
        vals = [row[key] for row in table.rows if row.get(key) is not None]
        if vals:
            table.estimate[key] = vals[-1]
            table.error_bar[key] = abs(vals[-2] - vals[-1]) if len(vals) > 1 else None
    if converged:
        table.status = "converged"
    elif seq.truncated:
        table.status = "budget"
        table.notes.append(f"vertex budget {seq.budget} reached before tolerance")
    else:
        table.status = "inconclusive"
    return table


def _gap_ok(table: ConvergenceTable, key: str, tol: float) -> bool:
    vals = [row[key] for row in table.rows if row.get(key) is not None]
    if len(vals) < 2:
        return False
    a, b = vals[-2], vals[-1]
    if math.isinf(a) and math.isinf(b):
        return True
    return abs(a - b) < tol


def exhaust_spectrum(family, k: int = 1, depth_max: int = DEFAULT_DEPTH, tol: float = DEFAULT_TOL,
                     step: int = 1, budget: int | None = None) -> ConvergenceTable:
    """``sigma_k(W_r)`` along the ball exhaustion, stopping on a small successive gap."""
    if depth_max < 2:
        raise DomainError("depth_max must be >= 2")
    seq = ExhaustionSequence(family, step, depth_max, budget)
    table = ConvergenceTable("sigma", ["radius", "vertices", "boundary", "sigma"])
    prev = None
    converged = False
    for r, win in seq:
        sig = None
        if win.n_boundary >= k:
            sig = float(dtn_spectrum(win)[k - 1])
        _check_mono(f"sigma_{k}", prev, sig, r)
        table.rows.append({"radius": r, "vertices": win.n, "boundary": win.n_boundary, "sigma": sig})
        prev = sig if sig is not None else prev
        if _gap_ok(table, "sigma", tol) or seq.stabilized(r):
            converged = True
            break
    return _finish(table, ["sigma"], seq, converged)


def exhaust_cheeger(family, depth_max: int = 12, tol: float = DEFAULT_TOL, step: int = 1,
                    budget: int | None = None, method: str = "cut") -> ConvergenceTable:
    """``h(W_r)`` and ``h_J(W_r)`` along the exhaustion."""
    seq = ExhaustionSequence(family, step, depth_max, budget)
    table = ConvergenceTable("cheeger", ["radius", "vertices", "h", "h_J"])
    prev_h = prev_j = None
    converged = False
    for r, win in seq:
        if method == "enum":
            h, hj = cheeger_enumerate(win)
            h, hj = h.value, hj.value
        else:
            h = cheeger_parametric_cut(win, "h").value
            hj = cheeger_parametric_cut(win, "h_J").value
        _check_mono("h", prev_h, h, r)
        _check_mono("h_J", prev_j, hj, r)
        table.rows.append({"radius": r, "vertices": win.n, "h": h, "h_J": hj})
        prev_h, prev_j = h, hj
        if (_gap_ok(table, "h", tol) and _gap_ok(table, "h_J", tol)) or seq.stabilized(r):
            converged = True
            break
    return _finish(table, ["h", "h_J"], seq, converged)


def exhaust_higher(family, k: int = 2, depth_max: int = 4, step: int = 1,
                   budget: int | None = None) -> ConvergenceTable:
    """Exact ``h_k``, ``h_J^k`` and ``sigma_k`` per depth with the upper bound asserted."""
    seq = ExhaustionSequence(family, step, depth_max, budget)
    table = ConvergenceTable("higher", ["radius", "vertices", "sigma", "h_k", "h_J^k", "c_hat"])
    prev_k = prev_j = prev_s = None
    converged = False
    for r, win in seq:
        if win.n < k:
            continue
        if minmax_tuple_cost(win.n, k) > HIGHER_BUDGET or win.n > 22:
            table.notes.append(f"exact budget exceeded at radius {r} ({win.n} vertices); table truncated")
            break
        hk, hjk = higher_order_constants(win, k, mode="exact")
        sig = float(dtn_spectrum(win)[k - 1]) if win.n_boundary >= k else None
        if sig is not None and sig > hjk.value + 1e-10:
            raise AssertionError(f"sigma_{k} = {sig} exceeds h_J^{k} = {hjk.value} at radius {r}")
        _check_mono(f"h_{k}", prev_k, hk.value, r)
        _check_mono(f"h_J^{k}", prev_j, hjk.value, r)
        _check_mono(f"sigma_{k}", prev_s, sig, r)
        c_hat = None
        if sig is not None and math.isfinite(hk.value) and hk.value > 0:
            c_hat = sig * k**6 / hk.value
        table.rows.append({"radius": r, "vertices": win.n, "sigma": sig, "h_k": hk.value,
                           "h_J^k": hjk.value, "c_hat": c_hat})
        prev_k, prev_j = hk.value, hjk.value
        prev_s = sig if sig is not None else prev_s
        if seq.stabilized(r):
            converged = True
            break
    table = _finish(table, ["sigma", "h_k", "h_J^k"], seq, converged)
    chats = [c for c in table.column("c_hat") if c is not None]
    if chats:
        table.estimate["c_hat_min"] = min(chats)
    return table


def graph_eigen_limit(family, k: int = 1, depth_max: int = DEFAULT_DEPTH, tol: float = DEFAULT_TOL,
                      step: int = 1, budget: int | None = None) -> ConvergenceTable:
    """``lambda_{k,D}(W_r)`` next to ``sigma_k(W_r)``; asserts ``sigma_k >= lambda_{k,D}``."""
    seq = ExhaustionSequence(family, step, depth_max, min(budget or vertex_budget(), DENSE_SPECTRUM_LIMIT))
    table = ConvergenceTable("lambda", ["radius", "vertices", "lambda", "sigma"])
    converged = False
    for r, win in seq:
        if win.n < k:
            continue
        lam = float(dirichlet_laplacian_spectrum(win)[k - 1])
        sig = float(dtn_spectrum(win)[k - 1]) if win.n_boundary >= k else None
        if sig is not None and sig < lam - 1e-10:
            raise AssertionError(f"sigma_{k} = {sig} < lambda_{k},D = {lam} at radius {r}")
        table.rows.append({"radius": r, "vertices": win.n, "lambda": lam, "sigma": sig})
        if _gap_ok(table, "lambda", tol) or seq.stabilized(r):
            converged = True
            break
    return _finish(table, ["lambda", "sigma"], seq, converged)


def recurrence_test(family, tol: float = DEFAULT_TOL, depth_max: int = DEFAULT_DEPTH, step: int = 1,
                    budget: int | None = None) -> ConvergenceTable:
    """Capacity of the boundary along the exhaustion and a recurrence verdict.

    ``recurrent`` once the capacity drops below ``tol``; ``transient`` once
    its relative decrease is below ``tol`` while it still exceeds
    ``10 * tol``; otherwise ``inconclusive``.
    """
    seq = ExhaustionSequence(family, step, depth_max, budget)
    table = ConvergenceTable("recurrence", ["radius", "vertices", "capacity"])
    prev = None
    verdict = "inconclusive"
    for r, win in seq:
        cap = capacity(win, np.ones(win.n_boundary))
        _check_mono("capacity", prev, cap, r)
        table.rows.append({"radius": r, "vertices": win.n, "capacity": cap})
        if cap < tol:
            verdict = "recurrent"
            break
        if prev is not None and (prev - cap) / prev < tol and prev > 10 * tol:
            verdict = "transient"
            break
        prev = cap
    table = _finish(table, ["capacity"], seq, verdict != "inconclusive")
    table.verdict = verdict
    return table
