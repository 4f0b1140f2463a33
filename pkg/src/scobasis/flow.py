"""Integer max-flow and feasible circulation on raw data.

Kept independent of the digraft classes on purpose: several callers run
flows on modified vertex/arc lists (a deleted sink, induced pieces) that
are not valid digrafts themselves.
"""

from __future__ import annotations

from collections import deque


class Dinic:
    def __init__(self, n: int):
        self.n = n
        self.to: list[int] = []
        self.cap: list[int] = []
        self.head: list[list[int]] = [[] for _ in range(n)]

    def add_edge(self, u: int, v: int, cap: int) -> int:
        """Returns the handle of the forward edge."""
        h = len(self.to)
        self.to.append(v)
        self.cap.append(cap)
        self.head[u].append(h)
        self.to.append(u)
        self.cap.append(0)
        self.head[v].append(h + 1)
        return h

    def flow_on(self, handle: int) -> int:
        return self.cap[handle ^ 1]

    def _bfs(self, s: int, t: int) -> list[int] | None:
        level = [-1] * self.n
        level[s] = 0
        q = deque([s])
        while q:
            v = q.popleft()
            for h in self.head[v]:
                w = self.to[h]
                if self.cap[h] > 0 and level[w] < 0:
                    level[w] = level[v] + 1
                    q.append(w)
        return level if level[t] >= 0 else None

    def max_flow(self, s: int, t: int) -> int:
        total = 0
        while True:
            level = self._bfs(s, t)
            if level is None:
                return total
            it = [0] * self.n
            path: list[tuple[int, int]] = []  # (tail vertex, edge handle)
            v = s
            while True:
                if v == t:
                    amount = min(self.cap[h] for _, h in path)
                    for _, h in path:
                        self.cap[h] -= amount
                        self.cap[h ^ 1] += amount
                    total += amount
                    cut = next(
                        i for i, (_, h) in enumerate(path) if self.cap[h] == 0
                    )
                    v = path[cut][0]
                    del path[cut:]
                    continue
                advanced = False
                while it[v] < len(self.head[v]):
                    h = self.head[v][it[v]]
                    w = self.to[h]
                    if self.cap[h] > 0 and level[w] == level[v] + 1:
                        path.append((v, h))
                        v = w
                        advanced = True
                        break
                    it[v] += 1
                if advanced:
                    continue
                level[v] = -1  # dead end for this phase
                if not path:
                    break
                v, _ = path.pop()
                it[v] += 1

    def residual_reachable(self, s: int) -> set[int]:
        seen = {s}
        q = deque([s])
        while q:
            v = q.popleft()
            for h in self.head[v]:
                w = self.to[h]
                if self.cap[h] > 0 and w not in seen:
                    seen.add(w)
                    q.append(w)
        return seen

    def residual_coreachable(self, t: int) -> set[int]:
        """Vertices with a residual path into t. A residual edge w -> v is
        witnessed at v by the twin handle's spare capacity."""
        seen = {t}
        q = deque([t])
        while q:
            v = q.popleft()
            for h in self.head[v]:
                w = self.to[h]
                if self.cap[h ^ 1] > 0 and w not in seen:
                    seen.add(w)
                    q.append(w)
        return seen


def bipartite_b_matching(sources, sinks, arcs, b):
    """Pick one in-arc per sink so source s is picked exactly b[s] times.

    ``arcs`` is a list of (source, sink) pairs; repeats allowed. Success
    needs sum(b) == len(sinks). Returns (True, frozenset(arc ids)) or
    (False, frozenset(X)) where X is the residual-reachable source set,
    which satisfies b(X) > |N(X)| whenever sum(b) == len(sinks).
    """
    sources = list(sources)
    sinks = list(sinks)
    idx = {}
    for v in sources + sinks:
        idx[v] = len(idx)
    ss = len(idx)
    tt = ss + 1
    net = Dinic(tt + 1)
    for s in sources:
        net.add_edge(ss, idx[s], int(b.get(s, 0)))
    handles = []
    for x, y in arcs:
        handles.append(net.add_edge(idx[x], idx[y], 1))
    for t in sinks:
        net.add_edge(idx[t], tt, 1)
    value = net.max_flow(ss, tt)
    if value == len(sinks) and value == sum(int(b.get(s, 0)) for s in sources):
        chosen = frozenset(a for a, h in enumerate(handles) if net.flow_on(h) == 1)
        return True, chosen
    reach = net.residual_reachable(ss)
    bad = frozenset(s for s in sources if idx[s] in reach)
    return False, bad


def feasible_circulation(n: int, edges):
    """Integral circulation meeting [lo, hi] bounds on every edge.

    ``edges`` is a list of (u, v, lo, hi) over vertices 0..n-1. Returns
    (True, flows) with one value per edge, or (False, reachable) where
    ``reachable`` is the residual-reachable vertex set from the surplus
    super node, certifying infeasibility.
    """
    ss = n
    tt = n + 1
    net = Dinic(n + 2)
    excess = [0] * n
    handles = []
    need = 0
    for u, v, lo, hi in edges:
        if lo > hi:
            raise ValueError("lower bound above upper bound")
        excess[v] += lo
        excess[u] -= lo
        handles.append(net.add_edge(u, v, hi - lo))
    for v in range(n):
        if excess[v] > 0:
            net.add_edge(ss, v, excess[v])
            need += excess[v]
        elif excess[v] < 0:
            net.add_edge(v, tt, -excess[v])
    value = net.max_flow(ss, tt)
    if value == need:
        flows = [edges[i][2] + net.flow_on(h) for i, h in enumerate(handles)]
        return True, flows
    reach = net.residual_reachable(ss)
    return False, frozenset(v for v in reach if v < n)
