"""Independent reference implementations used to produce frozen test values.

Nothing here imports the package.  Linear algebra runs in exact rationals,
min cuts go through networkx.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

import networkx as nx


def closure(edges, interior):
    """Pruned adjacency ``{x: {y: w}}`` of the closure, plus the boundary set."""
    interior = set(interior)
    nb = {}
    for u, v, w in edges:
        nb.setdefault(u, {})[v] = Fraction(w)
        nb.setdefault(v, {})[u] = Fraction(w)
    boundary = {y for x in interior for y in nb.get(x, {}) if y not in interior}
    adj = {}
    for x in interior:
        adj[x] = dict(nb.get(x, {}))
    for z in boundary:
        adj[z] = {y: w for y, w in nb[z].items() if y in interior}
    return adj, boundary


def measure(adj, x):
    return sum(adj[x].values(), Fraction(0))


def window_edges(adj, window):
    """Edges of E(W, W-bar) as (x, y, w), loops dropped, each once."""
    w = set(window)
    seen = set()
    out = []
    for x in window:
        for y, mu in adj[x].items():
            if x == y or frozenset((x, y)) in seen:
                continue
            if y in w:
                seen.add(frozenset((x, y)))
            out.append((x, y, mu))
    return out


def _solve(a, b):
    """Exact Gauss-Jordan solve of ``a x = b`` (lists of Fractions, b a matrix)."""
    n = len(a)
    m = [row[:] + rhs[:] for row, rhs in zip(a, b)]
    for c in range(n):
        p = next(r for r in range(c, n) if m[r][c] != 0)
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [v / piv for v in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [v - f * w for v, w in zip(m[r], m[c])]
    return [row[n:] for row in m]


def dtn_matrix(edges, interior, window):
    """Exact Schur complement form matrix, boundary order and masses."""
    adj, boundary = closure(edges, interior)
    win = list(window)
    bd = [x for x in win if x in boundary]
    it = [x for x in win if x not in boundary]
    coll = sorted({y for x in win for y in adj[x] if y not in win}, key=repr)
    allv = win + coll
    pos = {v: i for i, v in enumerate(allv)}
    n = len(allv)
    lap = [[Fraction(0)] * n for _ in range(n)]
    for a, b, mu in window_edges(adj, win):
        i, j = pos[a], pos[b]
        lap[i][j] -= mu
        lap[j][i] -= mu
        lap[i][i] += mu
        lap[j][j] += mu
    bi = [pos[x] for x in bd]
    ii = [pos[x] for x in it]
    lbb = [[lap[i][j] for j in bi] for i in bi]
    if ii:
        lii = [[lap[i][j] for j in ii] for i in ii]
        lib = [[lap[i][j] for j in bi] for i in ii]
        x = _solve(lii, lib)
        for r in range(len(bi)):
            for c in range(len(bi)):
                lbb[r][c] -= sum(lap[bi[r]][ii[t]] * x[t][c] for t in range(len(ii)))
    return bd, lbb, [measure(adj, z) for z in bd]


def brute_cheeger(edges, interior, window):
    """Exact (h, h_J) as Fractions by subset enumeration (h_J None when infinite)."""
    adj, boundary = closure(edges, interior)
    win = list(window)
    es = window_edges(adj, win)
    best_h = best_j = None
    for r in range(1, len(win) + 1):
        for sub in itertools.combinations(win, r):
            s = set(sub)
            cut = sum((mu for a, b, mu in es if (a in s) != (b in s)), Fraction(0))
            den = sum((measure(adj, x) for x in s), Fraction(0))
            dj = sum((measure(adj, x) for x in s if x in boundary), Fraction(0))
            if den > 0 and (best_h is None or cut / den < best_h):
                best_h = cut / den
            if dj > 0 and (best_j is None or cut / dj < best_j):
                best_j = cut / dj
    return best_h, best_j


def nx_fractional_min(edges, interior, window, which="h"):
    """Dinkelbach iteration with networkx minimum cuts, exact rationals throughout."""
    adj, boundary = closure(edges, interior)
    win = list(window)
    ws = set(win)
    es = window_edges(adj, win)

    def den(x):
        if which == "h_J" and x not in boundary:
            return Fraction(0)
        return measure(adj, x)

    def ratio(s):
        cut = sum((mu for a, b, mu in es if (a in s) != (b in s)), Fraction(0))
        d = sum((den(x) for x in s), Fraction(0))
        return cut / d

    t = ratio(ws)
    best = ws
    while True:
        g = nx.DiGraph()
        g.add_node("s")
        g.add_node("t")
        for x in win:
            if den(x) > 0:
                g.add_edge("s", ("v", x), capacity=t * den(x))
        for a, b, mu in es:
            if b in ws:
                g.add_edge(("v", a), ("v", b), capacity=mu)
                g.add_edge(("v", b), ("v", a), capacity=mu)
            else:
                if g.has_edge(("v", a), "t"):
                    g[("v", a)]["t"]["capacity"] += mu
                else:
                    g.add_edge(("v", a), "t", capacity=mu)
        _, (side, _) = nx.minimum_cut(g, "s", "t")
        s = {node[1] for node in side if node != "s"}
        if not s:
            return t, best
        d = sum((den(x) for x in s), Fraction(0))
        if d == 0:
            return t, best
        r = ratio(s)
        if r >= t:
            return t, best
        t, best = r, s


def brute_tuples(edges, interior, window, k):
    """Exact h_J^k over disjoint k-tuples by assigning each vertex a label in 0..k."""
    adj, boundary = closure(edges, interior)
    win = list(window)
    es = window_edges(adj, win)
    best = None
    for labels in itertools.product(range(k + 1), repeat=len(win)):
        parts = [{x for x, l in zip(win, labels) if l == j + 1} for j in range(k)]
        if any(not p for p in parts):
            continue
        worst = Fraction(0)
        ok = True
        for s in parts:
            dj = sum((measure(adj, x) for x in s if x in boundary), Fraction(0))
            if dj == 0:
                ok = False
                break
            cut = sum((mu for a, b, mu in es if (a in s) != (b in s)), Fraction(0))
            worst = max(worst, cut / dj)
        if ok and (best is None or worst < best):
            best = worst
    return best


def tree_edges(depth, degree=3):
    """Edges of the rooted tree of radius ``depth + 1``; root 0 has ``degree - 1`` children."""
    edges = []
    frontier = [0]
    nxt_id = 1
    for level in range(depth + 1):
        new = []
        for v in frontier:
            for _ in range(degree - 1):
                edges.append((v, nxt_id, 1))
                new.append(nxt_id)
                nxt_id += 1
        frontier = new
    return edges
