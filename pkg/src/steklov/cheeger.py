"""Cheeger-type constants of windows and the inequalities that tie them to spectra.

Two exact routes compute ``h`` and ``h_J``: bitmask enumeration for small
windows and Dinkelbach iteration over parametric minimum cuts for large
ones.  Higher-order constants and ``Gamma_k`` minimize over disjoint
``k``-tuples with a subset dynamic program.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import BudgetExceeded, ConvergenceError, DomainError
from .graph import Window
from .maxflow import FlowNetwork
from .numerics import batched_min_eigenvalue, eigh_generalized

ENUM_CAP = 22
HIGHER_BUDGET = 10**7
INF = float("inf")


@dataclass(frozen=True)
class CheegerResult:
    value: float
    witness: tuple | None
    method: str  # "enumeration" | "parametric-cut" | "heuristic-upper-bound"
    note: str = ""

    @property
    def exact(self) -> bool:
        return self.method != "heuristic-upper-bound"


# --------------------------------------------------------------------------
# subset tables


def _subset_sums(values: np.ndarray) -> np.ndarray:
    """``out[mask] = sum of values[i] over bits i of mask``."""
    out = np.zeros(1)
    for v in values:
        out = np.concatenate([out, out + v])
    return out


def _cut_table(window: Window) -> np.ndarray:
    """Relative edge boundary weight of every subset of ``W`` (bit i = local vertex i)."""
    n = window.n
    deg = window.degrees()[:n]
    inner = np.zeros((n, n))
    m = window.ev < n
    np.add.at(inner, (window.eu[m], window.ev[m]), window.ew[m])
    inner = inner + inner.T
    cut = np.zeros(1 << n)
    for i in range(n):
        half = 1 << i
        adj = _subset_sums(inner[i, :i])
        cut[half : 2 * half] = cut[:half] + deg[i] - 2.0 * adj
    return cut


def _tables(window: Window):
    n = window.n
    if n > ENUM_CAP:
        raise BudgetExceeded(f"window has {n} vertices; enumeration cap is {ENUM_CAP} (use parametric cut)")
    cut = _cut_table(window)
    den = _subset_sums(window.measure)
    den_j = _subset_sums(np.where(window.boundary_mask, window.measure, 0.0))
    return cut, den, den_j


def _ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    out = np.full(num.shape, INF)
    ok = den > 0
    out[ok] = num[ok] / den[ok]
    out[0] = INF
    return out


def _mask_members(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def _argmin_first(values: np.ndarray) -> int:
    best = float(np.min(values))
    if not np.isfinite(best):
        return int(np.argmin(values))
    tol = 1e-12 * max(1.0, abs(best))
    return int(np.flatnonzero(values <= best + tol)[0])


def _witness(window: Window, mask: int) -> tuple:
    return window.names(_mask_members(mask))


def cheeger_enumerate(window: Window, cap: int = ENUM_CAP) -> tuple[CheegerResult, CheegerResult]:
    """Exact ``(h, h_J)`` by enumerating all nonempty subsets of ``W``."""
    if window.n > cap:
        raise BudgetExceeded(f"window has {window.n} vertices; enumeration cap is {cap} (use parametric cut)")
    cut, den, den_j = _tables(window)
    rh = _ratio(cut, den)
    rj = _ratio(cut, den_j)
    a = _argmin_first(rh)
    h = CheegerResult(float(rh[a]), _witness(window, a), "enumeration")
    if window.n_boundary == 0:
        hj = CheegerResult(INF, None, "enumeration", note="window has no boundary vertex")
    else:
        b = _argmin_first(rj)
        hj = CheegerResult(float(rj[b]), _witness(window, b), "enumeration")
    return h, hj


# --------------------------------------------------------------------------
# Dinkelbach + minimum cut


def _fractional_min(window: Window, nodes: np.ndarray, den: np.ndarray, max_iter: int = 200):
    """Minimize ``cut(B) / den(B)`` over nonempty ``B`` within ``nodes``.

    ``den`` is indexed by local window vertex.  Returns ``(value, B)`` with
    ``B`` a boolean mask over ``W-bar``, or ``(inf, None)`` if ``den`` vanishes
    on ``nodes``.
    """
    size = window.n + window.n_collar
    inside = np.zeros(size, dtype=bool)
    inside[nodes] = True
    pos = -np.ones(size, dtype=np.int64)
    pos[nodes] = np.arange(len(nodes))
    eu, ev, ew = window.eu, window.ev, window.ew
    touch = inside[eu] | inside[ev]
    eu, ev, ew = eu[touch], ev[touch], ew[touch]
    both = inside[eu] & inside[ev]
    ext = np.zeros(size)
    one = ~both
    np.add.at(ext, np.where(inside[eu[one]], eu[one], ev[one]), ew[one])
    dn = den[nodes]
    if not np.any(dn > 0):
        return INF, None
    scale = max(1.0, float(ew.sum()))

    def cut_of(mask):
        return float(ew[mask[eu] != mask[ev]].sum())

    # start from the best of the whole set and the singletons
    best_mask = inside.copy()
    t = cut_of(inside) / float(dn.sum())
    sing_cut = ext[nodes].copy()
    inner_u, inner_v, inner_w = pos[eu[both]], pos[ev[both]], ew[both]
    np.add.at(sing_cut, inner_u, inner_w)
    np.add.at(sing_cut, inner_v, inner_w)
    with np.errstate(divide="ignore", invalid="ignore"):
        sing = np.where(dn > 0, sing_cut / np.where(dn > 0, dn, 1.0), INF)
    j = int(np.argmin(sing))
    if sing[j] < t:
        t = float(sing[j])
        best_mask = np.zeros(size, dtype=bool)
        best_mask[nodes[j]] = True
    m = len(nodes)
    src, snk = m, m + 1
    iu, iv, iw = inner_u.tolist(), inner_v.tolist(), inner_w.tolist()
    extl = ext[nodes].tolist()
    dnl = dn.tolist()
    history = []
    for _ in range(max_iter):
        net = FlowNetwork(m + 2, eps=1e-14 * scale)
        for x in range(m):
            if dnl[x] > 0:
                net.add_edge(src, x, t * dnl[x])
            if extl[x] > 0:
                net.add_edge(x, snk, extl[x])
        for a, b, w in zip(iu, iv, iw):
            net.add_edge(a, b, w, w)
        _, side = net.min_cut(src, snk)
        sel = np.asarray(side[:m], dtype=bool)
        if not sel.any():
            break
        mask = np.zeros(size, dtype=bool)
        mask[nodes[sel]] = True
        c, d = cut_of(mask), float(dn[sel].sum())
        if c - t * d >= -1e-12 * scale or d <= 0:
            break
        t_new = c / d
        history.append(t_new)
        if t_new >= t:
            raise ConvergenceError("Dinkelbach parameter failed to decrease", bracket=(t_new, t))
        t, best_mask = t_new, mask
    else:
        raise ConvergenceError("Dinkelbach iteration limit reached", bracket=(min(history or [t]), t))
    return t, best_mask


def cheeger_parametric_cut(window: Window, which: str = "h") -> CheegerResult:
    """Exact ``h`` or ``h_J`` by Dinkelbach iteration on parametric min cuts."""
    if which not in ("h", "h_J"):
        raise DomainError(f"which must be 'h' or 'h_J', got {which!r}")
    den = window.measure if which == "h" else np.where(window.boundary_mask, window.measure, 0.0)
    value, mask = _fractional_min(window, np.arange(window.n), den)
    if mask is None:
        return CheegerResult(INF, None, "parametric-cut", note="window has no boundary vertex")
    return CheegerResult(value, window.names(np.flatnonzero(mask)), "parametric-cut")


def cheeger_constants(window: Window, method: str = "auto") -> tuple[CheegerResult, CheegerResult]:
    """``(h, h_J)`` by enumeration (``enum``), min cut (``cut``) or size-based choice."""
    if method == "auto":
        method = "enum" if window.n <= 16 else "cut"
    if method == "enum":
        return cheeger_enumerate(window)
    if method == "cut":
        return cheeger_parametric_cut(window, "h"), cheeger_parametric_cut(window, "h_J")
    raise DomainError(f"unknown method {method!r}")


def evaluate_ratio(window: Window, subset, which: str = "h") -> float:
    """Re-evaluate a witness: ``mu(d_W A) / d(A)`` or ``/ d(A & dOmega)``."""
    mask = window.mask(subset)
    cut = window.cut_weight(mask)
    sel = mask[: window.n]
    if which == "h_J":
        sel = sel & window.boundary_mask
    den = float(window.measure[sel].sum())
    return cut / den if den > 0 else INF


# --------------------------------------------------------------------------
# disjoint k-tuples


def _submasks(s: int) -> np.ndarray:
    out = np.zeros(1, dtype=np.int64)
    for i in _mask_members(s):
        out = np.concatenate([out, out | (1 << i)])
    return out[1:]


def _subset_min(values: np.ndarray, n: int):
    """Min over nonempty submasks, with the argmin mask."""
    val = values.copy()
    val[0] = INF
    arg = np.arange(1 << n, dtype=np.int64)
    for i in range(n):
        v = val.reshape(-1, 2, 1 << i)
        a = arg.reshape(-1, 2, 1 << i)
        better = v[:, 0, :] < v[:, 1, :]
        v[:, 1, :] = np.where(better, v[:, 0, :], v[:, 1, :])
        a[:, 1, :] = np.where(better, a[:, 0, :], a[:, 1, :])
    return val, arg


def minmax_tuple_cost(n: int, k: int) -> int:
    """Work estimate of :func:`minmax_tuples` (elementary updates)."""
    base = n * (1 << n)
    return base if k <= 2 else base + (k - 2) * 3**n


def closed_neighborhood_table(window: Window) -> np.ndarray:
    """Per bitmask ``A`` of ``W``: the bitmask of ``A`` together with its neighbors in ``W``."""
    n = window.n
    adj = [1 << i for i in range(n)]
    inner = (window.eu < n) & (window.ev < n)
    for a, b in zip(window.eu[inner].tolist(), window.ev[inner].tolist()):
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    out = np.zeros(1, dtype=np.int64)
    for i in range(n):
        out = np.concatenate([out, out | adj[i]])
    return out


def minmax_tuples(phi: np.ndarray, n: int, k: int, closed_nbhd: np.ndarray | None = None
                  ) -> tuple[float, tuple[int, ...]]:
    """``min over disjoint nonempty (A_1..A_k) of max_l phi(A_l)`` and a witness tuple.

    With ``closed_nbhd`` the parts must also be pairwise non-adjacent.
    """
    full = (1 << n) - 1
    phi = np.asarray(phi, dtype=float).copy()
    phi[0] = INF
    if closed_nbhd is None:
        def rest_of(s, a):
            return s ^ a
    else:
        def rest_of(s, a):
            return s & ~closed_nbhd[a]
    if k == 1:
        a = _argmin_first(phi[1:]) + 1
        return float(phi[a]), (a,)
    m1, arg1 = _subset_min(phi, n)
    levels = [(m1, None)]
    prev = m1
    for _ in range(2, k):
        cur = np.full(1 << n, INF)
        choice = np.zeros(1 << n, dtype=np.int64)
        for s in range(1, full + 1):
            subs = _submasks(s)
            vals = np.maximum(phi[subs], prev[rest_of(s, subs)])
            j = int(np.argmin(vals))
            cur[s] = vals[j]
            choice[s] = subs[j]
        levels.append((cur, choice))
        prev = cur
    subs = np.arange(1, full + 1, dtype=np.int64)
    vals = np.maximum(phi[subs], prev[rest_of(full, subs)])
    j = _argmin_first(vals)
    value = float(vals[j])
    if not np.isfinite(value):
        return INF, ()
    parts = [int(subs[j])]
    rest = int(rest_of(full, parts[0]))
    for cur, choice in reversed(levels[1:]):
        a = int(choice[rest])
        parts.append(a)
        rest = int(rest_of(rest, a))
    parts.append(int(arg1[rest]))
    return value, tuple(parts)


def _phi_tables(window: Window):
    cut, den, den_j = _tables(window)
    rj = _ratio(cut, den_j)
    rh = _ratio(cut, den)
    n = window.n
    gj, _ = _subset_min(rj, n)
    gh, _ = _subset_min(rh, n)
    with np.errstate(invalid="ignore"):
        prod = gj * gh
    prod[~np.isfinite(gj)] = INF
    prod[0] = INF
    return rj, prod


def _heuristic_parts(window: Window, k: int) -> list[np.ndarray]:
    res = eigh_generalized(window.dirichlet_laplacian().toarray(), window.measure)
    f = np.abs(res.vectors[:, :k])
    owner = np.argmax(f, axis=1)
    return [np.flatnonzero(owner == l) for l in range(k)]


def higher_order_constants(window: Window, k: int, mode: str = "auto", separated: bool = False
                           ) -> tuple[CheegerResult, CheegerResult]:
    """``(h_k, h_J^k)``: exact subset DP within budget, eigenvector heuristic otherwise.

    ``separated=True`` restricts to tuples of pairwise non-adjacent parts
    (exact mode only).  For those the indicator functions have no cross
    energy, so the resulting ``h_J^k`` bounds ``sigma_k`` from above.
    """
    n = window.n
    if k < 1:
        raise DomainError("order k must be >= 1")
    if k > n:
        raise DomainError(f"no disjoint {k}-tuple of nonempty subsets in a {n}-vertex window")
    if mode == "auto":
        exact = n <= ENUM_CAP and minmax_tuple_cost(n, k) <= HIGHER_BUDGET
        mode = "exact" if exact else "heuristic"
    if mode == "exact":
        rj, prod = _phi_tables(window)
        nb = closed_neighborhood_table(window) if separated else None
        vk, pk = minmax_tuples(prod, n, k, nb)
        vj, pj = minmax_tuples(rj, n, k, nb)
        wk = tuple(_witness(window, a) for a in pk) or None
        wj = tuple(_witness(window, a) for a in pj) or None
        note = "pairwise non-adjacent tuples" if separated else ""
        return CheegerResult(vk, wk, "enumeration", note), CheegerResult(vj, wj, "enumeration", note)
    if separated:
        raise DomainError("separated tuples are only available in exact mode")
    if mode != "heuristic":
        raise DomainError(f"unknown mode {mode!r}")
    parts = _heuristic_parts(window, k)
    if any(len(p) == 0 for p in parts):
        note = "eigenvector supports produced an empty part"
        return (
            CheegerResult(INF, None, "heuristic-upper-bound", note),
            CheegerResult(INF, None, "heuristic-upper-bound", note),
        )
    den_j = np.where(window.boundary_mask, window.measure, 0.0)
    vals_k, vals_j = [], []
    for p in parts:
        mask = np.zeros(window.n + window.n_collar, dtype=bool)
        mask[p] = True
        dj = float(den_j[p].sum())
        vals_j.append(window.cut_weight(mask) / dj if dj > 0 else INF)
        hj, _ = _fractional_min(window, p, den_j)
        hh, _ = _fractional_min(window, p, window.measure)
        vals_k.append(INF if not np.isfinite(hj) else hj * hh)
    wit = tuple(window.names(p) for p in parts)
    return (
        CheegerResult(max(vals_k), wit, "heuristic-upper-bound"),
        CheegerResult(max(vals_j), wit, "heuristic-upper-bound"),
    )


# --------------------------------------------------------------------------
# Dirichlet eigenvalues with a general measure


def _nu_vector(window: Window, nu) -> np.ndarray:
    if nu is None:
        return window.measure.copy()
    if isinstance(nu, Mapping):
        out = np.empty(window.n)
        for name, val in nu.items():
            (i,) = window.local([name])
            out[i] = float(val)
        if len(nu) != window.n:
            raise DomainError("measure must give a value for every window vertex")
    else:
        out = np.asarray(nu, dtype=float)
    if out.shape != (window.n,) or np.any(~(out > 0)):
        raise DomainError("vertex measure must be positive on every window vertex")
    return out


def first_dirichlet_eigenvalue(window: Window, a, nu=None) -> float:
    """Smallest eigenvalue of the Laplacian pencil on ``a`` (zero outside), masses ``nu``."""
    a = list(a)
    if not a:
        raise DomainError("subset must be nonempty")
    idx = window.local(a)
    nuv = _nu_vector(window, nu)
    lap = window.dirichlet_laplacian().toarray()
    return float(eigh_generalized(lap[np.ix_(idx, idx)], nuv[idx]).values[0])


def first_dirichlet_table(window: Window, nu=None) -> np.ndarray:
    """``lambda_1`` of every nonempty subset of ``W`` (index = bitmask)."""
    n = window.n
    if n > 16:
        raise BudgetExceeded(f"subset eigenvalue table limited to 16 vertices, window has {n}")
    nuv = _nu_vector(window, nu)
    lap = window.dirichlet_laplacian().toarray()
    masks = np.arange(1 << n, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(n)) & 1
    pop = bits.sum(axis=1)
    out = np.full(1 << n, INF)
    for s in range(1, n + 1):
        sel = masks[pop == s]
        idx = np.nonzero(bits[sel])[1].reshape(len(sel), s)
        mats = lap[idx[:, :, None], idx[:, None, :]]
        out[sel] = batched_min_eigenvalue(mats, nuv[idx])
    return out


def gamma_k(window: Window, k: int, nu=None) -> float:
    """``Gamma_k``: min over disjoint k-tuples of the largest first Dirichlet eigenvalue."""
    if k < 1 or k > window.n:
        raise DomainError(f"order k must lie in 1..{window.n}")
    if minmax_tuple_cost(window.n, k) > HIGHER_BUDGET:
        raise BudgetExceeded("Gamma_k enumeration budget exceeded")
    table = first_dirichlet_table(window, nu)
    value, _ = minmax_tuples(table, window.n, k)
    return value


# --------------------------------------------------------------------------
# coarea and level sets


def _level_function(window: Window, f) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape != (window.n + window.n_collar,):
        raise DomainError("f must be defined on all of W-bar")
    if np.any(f < 0):
        raise DomainError("f must be nonnegative")
    if np.any(f[window.n :] != 0):
        raise DomainError("f must vanish on the collar")
    return f * f


def _level_integral(sq: np.ndarray, n: int, measure_of_set) -> float:
    levels = np.unique(sq[:n][sq[:n] > 0])
    total, prev = 0.0, 0.0
    for t in levels:
        total += (t - prev) * measure_of_set(sq >= t)
        prev = t
    return total


def coarea_check(window: Window, f) -> tuple[float, float, float]:
    """``(int_0^inf mu(d_W S_t) dt, sum mu |f^2(x) - f^2(y)|, gap)``."""
    sq = _level_function(window, f)
    lhs = _level_integral(sq, window.n, window.cut_weight)
    rhs = float(np.sum(window.ew * np.abs(sq[window.eu] - sq[window.ev])))
    return lhs, rhs, abs(lhs - rhs)


def level_set_integrals(window: Window, f) -> dict[str, tuple[float, float]]:
    """Integrated measures of the level sets against their closed forms."""
    sq = _level_function(window, f)
    n = window.n
    d = window.measure
    bm = window.boundary_mask
    total = _level_integral(sq, n, lambda s: float(d[s[:n]].sum()))
    bnd = _level_integral(sq, n, lambda s: float(d[s[:n] & bm].sum()))
    return {
        "measure": (total, float(np.sum(sq[:n] * d))),
        "boundary_measure": (bnd, float(np.sum(sq[:n][bm] * d[bm]))),
    }


# --------------------------------------------------------------------------
# inequality report


@dataclass
class Check:
    name: str
    passed: bool | None
    lhs: float
    rhs: float
    note: str = ""

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs


@dataclass
class InequalityReport:
    sigma: np.ndarray
    h: CheegerResult
    h_J: CheegerResult
    checks: list[Check] = field(default_factory=list)
    c_hat: dict[int, float] = field(default_factory=dict)
    c_hat_dirichlet: dict[int, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.checks)


def verify_inequalities(window: Window, k_max: int = 3, tol: float = 1e-10, method: str = "auto") -> InequalityReport:
    """Check the first-eigenvalue sandwich and the higher-order bounds on one window."""
    from .dtn import dirichlet_laplacian_spectrum, dtn_spectrum

    sigma = dtn_spectrum(window)
    h, hj = cheeger_constants(window, method)
    rep = InequalityReport(sigma, h, hj)
    s1 = float(sigma[0])
    rep.checks.append(Check("sandwich-lower", s1 >= h.value * hj.value / 2 - tol, h.value * hj.value / 2, s1))
    rep.checks.append(Check("sandwich-upper", s1 <= hj.value + tol, s1, hj.value))
    rep.checks.append(Check("h_J>=h", hj.value >= h.value - tol, h.value, hj.value))
    lam = dirichlet_laplacian_spectrum(window)
    for k in range(1, min(k_max, len(sigma)) + 1):
        sk = float(sigma[k - 1])
        rep.checks.append(Check(f"sigma_{k}>=lambda_{k},D", sk >= lam[k - 1] - tol, float(lam[k - 1]), sk))
        hk, hjk = higher_order_constants(window, k)
        note = "" if hjk.exact else "upper-bound only (heuristic constants)"
        rep.checks.append(Check(f"sigma_{k}<=h_J^{k}", sk <= hjk.value + tol, sk, hjk.value, note))
        if hk.exact and np.isfinite(hk.value) and hk.value > 0:
            rep.c_hat[k] = sk * k**6 / hk.value
        if window.n <= 14:
            g = gamma_k(window, k)
            if np.isfinite(g) and g > 0:
                rep.c_hat_dirichlet[k] = float(lam[k - 1]) * k**6 / g
    return rep
