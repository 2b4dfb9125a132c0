"""Highest-label push-relabel with gap heuristic and global relabeling.

Only the first (preflow) phase runs: it yields the maximum flow value and
a minimum cut, which is all the parametric Cheeger solver needs.
"""
from __future__ import annotations


class FlowNetwork:
    """Residual network over nodes ``0..n-1`` with paired arcs ``a`` / ``a ^ 1``."""

    def __init__(self, n: int, eps: float = 0.0):
        self.n = n
        self.eps = eps
        self.head: list[int] = []
        self.cap: list[float] = []
        self.adj: list[list[int]] = [[] for _ in range(n)]

    def add_edge(self, u: int, v: int, cap: float, rev_cap: float = 0.0) -> None:
        self.adj[u].append(len(self.head))
        self.head.append(v)
        self.cap.append(float(cap))
        self.adj[v].append(len(self.head))
        self.head.append(u)
        self.cap.append(float(rev_cap))

    def _global_relabel(self, t: int, height: list[int]) -> None:
        n, head, cap, adj, eps = self.n, self.head, self.cap, self.adj, self.eps
        for v in range(n):
            height[v] = n
        height[t] = 0
        frontier = [t]
        while frontier:
            nxt = []
            for v in frontier:
                hv = height[v] + 1
                for a in adj[v]:
                    u = head[a]
                    if height[u] == n and cap[a ^ 1] > eps:
                        height[u] = hv
                        nxt.append(u)
            frontier = nxt

    def min_cut(self, s: int, t: int) -> tuple[float, list[bool]]:
        """Maximum preflow value into ``t`` and the source side of a minimum cut."""
        n, head, cap, adj, eps = self.n, self.head, self.cap, self.adj, self.eps
        height = [0] * n
        excess = [0.0] * n
        self._global_relabel(t, height)
        height[s] = n
        buckets: list[list[int]] = [[] for _ in range(2 * n + 1)]
        count = [0] * (2 * n + 1)
        for v in range(n):
            if height[v] < n:
                count[height[v]] += 1
        for a in adj[s]:
            c = cap[a]
            if c > 0:
                v = head[a]
                cap[a] = 0.0
                cap[a ^ 1] += c
                excess[v] += c
        active = [False] * n
        top = 0
        for v in range(n):
            if v != s and v != t and excess[v] > eps and height[v] < n:
                buckets[height[v]].append(v)
                active[v] = True
                top = max(top, height[v])
        current = [0] * n
        relabels = 0
        relabel_period = 6 * n + 64
        while True:
            while top >= 0 and not buckets[top]:
                top -= 1
            if top < 0:
                break
            u = buckets[top].pop()
            active[u] = False
            if height[u] >= n:
                continue
            arcs = adj[u]
            hu = height[u]
            i = current[u]
            while excess[u] > eps:
                if i == len(arcs):
                    # relabel
                    old = hu
                    best = 2 * n
                    for a in arcs:
                        if cap[a] > eps and height[head[a]] < best:
                            best = height[head[a]]
                    hu = best + 1
                    count[old] -= 1
                    relabels += 1
                    if count[old] == 0 and old < n:
                        # gap: everything above ``old`` is cut off from the sink
                        for v in range(n):
                            if old < height[v] < n:
                                count[height[v]] -= 1
                                height[v] = n
                        hu = n
                    if hu >= n:
                        height[u] = n
                        break
                    height[u] = hu
                    count[hu] += 1
                    i = 0
                    continue
                a = arcs[i]
                v = head[a]
                c = cap[a]
                if c > eps and height[v] == hu - 1:
                    delta = excess[u] if excess[u] < c else c
                    cap[a] = c - delta
                    cap[a ^ 1] += delta
                    excess[u] -= delta
                    excess[v] += delta
                    if v != t and v != s and not active[v] and height[v] < n:
                        buckets[height[v]].append(v)
                        active[v] = True
                        if height[v] > top:
                            top = height[v]
                    if excess[u] <= eps:
                        break
                else:
                    i += 1
            current[u] = i
            if relabels > relabel_period:
                relabels = 0
                self._global_relabel(t, height)
                height[s] = n
                count = [0] * (2 * n + 1)
                for v in range(n):
                    if height[v] < n:
                        count[height[v]] += 1
                buckets = [[] for _ in range(2 * n + 1)]
                active = [False] * n
                current = [0] * n
                top = 0
                for v in range(n):
                    if v != s and v != t and excess[v] > eps and height[v] < n:
                        buckets[height[v]].append(v)
                        active[v] = True
                        top = max(top, height[v])
                continue
            if height[u] < n and excess[u] > eps and not active[u]:
                buckets[height[u]].append(u)
                active[u] = True
                top = max(top, height[u])
        # source side: nodes that cannot reach the sink in the residual graph
        reach = [False] * n
        reach[t] = True
        frontier = [t]
        while frontier:
            nxt = []
            for v in frontier:
                for a in adj[v]:
                    u = head[a]
                    if not reach[u] and cap[a ^ 1] > eps:
                        reach[u] = True
                        nxt.append(u)
            frontier = nxt
        side = [not r for r in reach]
        return excess[t], side
