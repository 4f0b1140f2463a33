"""Core graph value types.

Two families of objects live here:

* ``UndirectedMultigraph`` is the input side: a multigraph whose edges we
  want to orient. Edge k has two candidate orientations, identified by the
  arc ids ``2k`` (as stored) and ``2k + 1`` (reversed).

* ``Digraft`` and ``GeneralDigraft`` are the working representation: a
  bipartite digraph with all arcs running from sources to sinks, together
  with degree-1 constraints. The plain form carries a set of tight sources
  (every sink is implicitly constrained); the general form carries an
  explicit family of dicut shores, each constrained to be crossed exactly
  once.

A shore here is always the tail side of its dicut: a vertex set U with no
arc entering it, so that the arcs leaving U form the cut.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import (
    EmptyRemainder,
    FamilyCrossing,
    Infeasible,
    NonDicutMember,
    NotADicut,
    NotTwoEdgeConnected,
    TrivialDicut,
)


def components(vertices, pairs) -> list[frozenset]:
    """Connected components of an undirected (multi)graph.

    ``pairs`` may contain repeats and loops. Components are sorted by their
    smallest vertex so callers get a deterministic order.
    """
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in pairs:
        if u in parent and v in parent:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
    groups: dict[int, set] = {}
    for v in parent:
        groups.setdefault(find(v), set()).add(v)
    return sorted((frozenset(g) for g in groups.values()), key=min)


def has_bridge(vertices, pairs) -> bool:
    """Whether the undirected multigraph contains a bridge.

    Parallel edges are distinct, so a doubled edge is never a bridge. Runs
    an iterative DFS tracking the edge index used to enter each vertex.
    """
    vs = list(vertices)
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in vs}
    for idx, (u, v) in enumerate(pairs):
        if u == v:
            continue  # loops are never bridges
        adj[u].append((v, idx))
        adj[v].append((u, idx))
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    timer = 0
    for root in vs:
        if root in disc:
            continue
        stack = [(root, -1, iter(adj[root]))]
        disc[root] = low[root] = timer
        timer += 1
        while stack:
            v, in_edge, it = stack[-1]
            advanced = False
            for w, idx in it:
                if idx == in_edge:
                    continue
                if w not in disc:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, idx, iter(adj[w])))
                    advanced = True
                    break
                low[v] = min(low[v], disc[w])
            if not advanced:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[v])
                    if low[v] > disc[p]:
                        return True
    return False


def strongly_connected_components(vertices, arcs) -> list[frozenset]:
    """SCCs of a digraph given as (tail, head) pairs, Tarjan, iterative.

    Returned in reverse topological order of the condensation (a component
    is emitted only after everything it can reach).
    """
    vs = list(vertices)
    out: dict[int, list[int]] = {v: [] for v in vs}
    for u, v in arcs:
        out[u].append(v)
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set = set()
    comp_stack: list = []
    sccs: list[frozenset] = []
    counter = 0
    for root in vs:
        if root in index:
            continue
        work = [(root, iter(out[root]))]
        index[root] = low[root] = counter
        counter += 1
        comp_stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    comp_stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(out[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if not advanced:
                work.pop()
                if work:
                    p = work[-1][0]
                    low[p] = min(low[p], low[v])
                if low[v] == index[v]:
                    comp = set()
                    while True:
                        w = comp_stack.pop()
                        on_stack.discard(w)
                        comp.add(w)
                        if w == v:
                            break
                    sccs.append(frozenset(comp))
    return sccs


def is_strongly_connected(vertices, arcs) -> bool:
    vs = list(vertices)
    if len(vs) <= 1:
        return True
    return len(strongly_connected_components(vs, arcs)) == 1


@dataclass(frozen=True)
class UndirectedMultigraph:
    """Multigraph on vertices 0..n-1 with an ordered edge list.

    Edge k stored as (u, v) yields arc id 2k for the orientation u -> v and
    2k + 1 for v -> u.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "edges", tuple((int(u), int(v)) for u, v in self.edges)
        )
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range for n={self.n}")
            if u == v:
                raise ValueError(f"self-loop ({u},{v}) not allowed")

    @cached_property
    def adjacency(self) -> dict[int, tuple[tuple[int, int], ...]]:
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(self.n)}
        for k, (u, v) in enumerate(self.edges):
            adj[u].append((v, k))
            if u != v:
                adj[v].append((u, k))
        return {v: tuple(lst) for v, lst in adj.items()}

    def degree(self, v: int) -> int:
        return sum(2 if u == w else 1 for u, w in self.edges if v in (u, w))

    def arc_pair(self, k: int) -> tuple[tuple[int, int], tuple[int, int]]:
        u, v = self.edges[k]
        return (u, v), (v, u)

    def oriented(self, arc_id: int) -> tuple[int, int]:
        u, v = self.edges[arc_id // 2]
        return (u, v) if arc_id % 2 == 0 else (v, u)

    def is_connected(self) -> bool:
        if self.n == 0:
            return False
        return len(components(range(self.n), self.edges)) == 1

    def is_two_edge_connected(self) -> bool:
        return self.is_connected() and not has_bridge(range(self.n), self.edges)

    def check_two_edge_connected(self):
        if not self.is_two_edge_connected():
            raise NotTwoEdgeConnected(
                "underlying multigraph must be connected and bridgeless"
            )

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: dict) -> "UndirectedMultigraph":
        return cls(n=int(data["n"]), edges=tuple(tuple(e) for e in data["edges"]))


def _check_bipartite(sources, sinks, arcs):
    src = frozenset(sources)
    snk = frozenset(sinks)
    if src & snk:
        raise ValueError("sources and sinks must be disjoint")
    if not src or not snk:
        raise ValueError("need at least one source and one sink")
    for a, (x, y) in enumerate(arcs):
        if x not in src or y not in snk:
            raise ValueError(f"arc {a}=({x},{y}) must run source -> sink")
    return src, snk


class _BipartiteOps:
    """Shared read-only helpers for the two digraft forms."""

    @cached_property
    def source_set(self) -> frozenset:
        return frozenset(self.sources)

    @cached_property
    def sink_set(self) -> frozenset:
        return frozenset(self.sinks)

    @cached_property
    def vertex_set(self) -> frozenset:
        return self.source_set | self.sink_set

    @cached_property
    def out_arcs(self) -> dict[int, tuple[int, ...]]:
        d: dict[int, list[int]] = {s: [] for s in self.sources}
        for a, (x, _) in enumerate(self.arcs):
            d[x].append(a)
        return {s: tuple(v) for s, v in d.items()}

    @cached_property
    def in_arcs(self) -> dict[int, tuple[int, ...]]:
        d: dict[int, list[int]] = {t: [] for t in self.sinks}
        for a, (_, y) in enumerate(self.arcs):
            d[y].append(a)
        return {t: tuple(v) for t, v in d.items()}

    @cached_property
    def source_neighbors(self) -> dict[int, frozenset]:
        return {
            s: frozenset(self.arcs[a][1] for a in self.out_arcs[s])
            for s in self.sources
        }

    @cached_property
    def sink_neighbors(self) -> dict[int, frozenset]:
        return {
            t: frozenset(self.arcs[a][0] for a in self.in_arcs[t])
            for t in self.sinks
        }

    def neighborhood(self, xs) -> frozenset:
        out = set()
        for x in xs:
            out |= self.source_neighbors[x]
        return frozenset(out)

    def components_after_removal(self, removed) -> list[frozenset]:
        removed = frozenset(removed)
        rest = self.vertex_set - removed
        if not rest:
            raise EmptyRemainder("no vertices left after removal")
        pairs = [
            (x, y) for (x, y) in self.arcs if x not in removed and y not in removed
        ]
        return components(rest, pairs)

    def sigma(self, removed) -> int:
        return len(self.components_after_removal(removed))

    def is_connected(self) -> bool:
        return len(components(self.vertex_set, self.arcs)) == 1

    def check_two_edge_connected(self):
        if not self.is_connected() or has_bridge(self.vertex_set, self.arcs):
            raise NotTwoEdgeConnected(
                "underlying graph must be connected and bridgeless"
            )

    # -- dicut plumbing ----------------------------------------------------

    def shore_dicut(self, shore) -> frozenset:
        """Arc ids leaving the shore; raises NotADicut if invalid."""
        shore = frozenset(shore)
        if not shore or shore == self.vertex_set:
            raise NotADicut("shore must be a nonempty proper vertex subset")
        if not shore <= self.vertex_set:
            raise NotADicut("shore contains unknown vertices")
        cut = []
        for a, (x, y) in enumerate(self.arcs):
            if x not in shore and y in shore:
                raise NotADicut(f"arc {a} enters the shore")
            if x in shore and y not in shore:
                cut.append(a)
        if not cut:
            raise NotADicut("no arcs leave the shore")
        return frozenset(cut)

    def is_shore(self, shore) -> bool:
        try:
            self.shore_dicut(shore)
        except NotADicut:
            return False
        return True

    def is_trivial_shore(self, shore) -> bool:
        shore = frozenset(shore)
        if len(shore) == 1:
            (v,) = shore
            return v in self.source_set
        if len(self.vertex_set - shore) == 1:
            (v,) = self.vertex_set - shore
            return v in self.sink_set
        return False

    def is_dicut(self, arc_ids) -> bool:
        return self.dicut_shore(arc_ids) is not None

    def dicut_shore(self, arc_ids):
        """Recover a tail shore for the given arc set, or None.

        The arc set is a dicut iff after deleting it no weak component
        contains both a tail and a head of a deleted arc. The returned
        shore is the union of tail-side components (the minimal choice).
        """
        cut = frozenset(arc_ids)
        if not cut or not all(0 <= a < len(self.arcs) for a in cut):
            return None
        rest_pairs = [p for a, p in enumerate(self.arcs) if a not in cut]
        comps = components(self.vertex_set, rest_pairs)
        where = {}
        for i, comp in enumerate(comps):
            for v in comp:
                where[v] = i
        tails = {where[self.arcs[a][0]] for a in cut}
        heads = {where[self.arcs[a][1]] for a in cut}
        if tails & heads:
            return None
        shore = frozenset().union(*(comps[i] for i in tails))
        # all cut arcs must leave the shore and nothing else may cross
        try:
            if self.shore_dicut(shore) != cut:
                return None
        except NotADicut:
            return None
        return shore


@dataclass(frozen=True)
class Digraft(_BipartiteOps):
    """Bipartite digraph, arcs source -> sink, with tight sources.

    Solutions are arc sets with exactly one arc at every sink and every
    tight source, at least one at the remaining sources, crossing every
    dicut (and crossing the dicut of each tight source and each sink
    exactly once, which the degree constraints already say).
    """

    sources: tuple[int, ...]
    sinks: tuple[int, ...]
    arcs: tuple[tuple[int, int], ...]
    tight_sources: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "sources", tuple(sorted(set(self.sources))))
        object.__setattr__(self, "sinks", tuple(sorted(set(self.sinks))))
        object.__setattr__(
            self, "arcs", tuple((int(x), int(y)) for x, y in self.arcs)
        )
        object.__setattr__(self, "tight_sources", frozenset(self.tight_sources))
        src, _ = _check_bipartite(self.sources, self.sinks, self.arcs)
        if not self.tight_sources <= src:
            raise ValueError("tight_sources must be sources")
        if len(self.tight_sources) > len(self.sources) - 1:
            raise ValueError("at least one source must stay free")
        if len(self.sources) > len(self.sinks):
            raise ValueError("need |sources| <= |sinks|")

    @cached_property
    def free_sources(self) -> tuple[int, ...]:
        return tuple(s for s in self.sources if s not in self.tight_sources)

    @cached_property
    def tight_vertices(self) -> frozenset:
        return self.tight_sources | self.sink_set

    def degree_sequence(self, arc_ids) -> dict[int, int]:
        deg = {s: 0 for s in self.sources}
        for a in arc_ids:
            deg[self.arcs[a][0]] += 1
        return deg

    def contract(self, shore, side: str) -> tuple["Digraft", tuple[int, ...]]:
        """Contract one side of the dicut at ``shore``.

        side="out" collapses the shore into a new tight source (keeping the
        outside); side="in" collapses the complement into a new sink
        (keeping the shore). The new vertex takes the smallest label of the
        collapsed set. Returns the child and a map from child arc ids to
        parent arc ids.
        """
        shore = frozenset(shore)
        self.shore_dicut(shore)
        if self.is_trivial_shore(shore):
            raise TrivialDicut("refusing to contract a trivial dicut")
        if side == "out":
            collapsed = shore
            star = min(collapsed)
            sources = sorted((self.source_set - shore) | {star})
            sinks = sorted(self.sink_set - shore)
            tight = (self.tight_sources - shore) | {star}
            new_arcs, amap = [], []
            for a, (x, y) in enumerate(self.arcs):
                if y in shore:
                    continue
                new_arcs.append((star if x in shore else x, y))
                amap.append(a)
        elif side == "in":
            collapsed = self.vertex_set - shore
            star = min(collapsed)
            sources = sorted(self.source_set & shore)
            sinks = sorted((self.sink_set & shore) | {star})
            tight = self.tight_sources & shore
            new_arcs, amap = [], []
            for a, (x, y) in enumerate(self.arcs):
                if x not in shore:
                    continue
                new_arcs.append((x, y if y in shore else star))
                amap.append(a)
        else:
            raise ValueError("side must be 'out' or 'in'")
        tight = frozenset(tight)
        if len(tight) == len(sources):
            if len(sources) == len(sinks):
                # every degree is forced to 1, so one tight flag is redundant
                tight = tight - {max(sources)}
            else:
                raise Infeasible(
                    "contraction leaves every source tight with "
                    "fewer sources than sinks",
                    violator={"type": "all_sources_tight"},
                )
        child = Digraft(
            sources=tuple(sources),
            sinks=tuple(sinks),
            arcs=tuple(new_arcs),
            tight_sources=tight,
        )
        return child, tuple(amap)

    def to_json(self) -> dict:
        return {
            "sources": list(self.sources),
            "sinks": list(self.sinks),
            "arcs": [list(a) for a in self.arcs],
            "tight_sources": sorted(self.tight_sources),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Digraft":
        return cls(
            sources=tuple(data["sources"]),
            sinks=tuple(data["sinks"]),
            arcs=tuple(tuple(a) for a in data["arcs"]),
            tight_sources=frozenset(data.get("tight_sources", ())),
        )


def _member_key(member: frozenset) -> tuple:
    return (len(member), tuple(sorted(member)))


@dataclass(frozen=True)
class GeneralDigraft(_BipartiteOps):
    """Digraft with an explicit cut family.

    Every family member is a tail shore of a dicut; solutions must cross
    each member's dicut exactly once. Every sink's trivial shore (the whole
    vertex set minus that sink) is required implicitly; ``normalized``
    adds those members when missing.
    """

    sources: tuple[int, ...]
    sinks: tuple[int, ...]
    arcs: tuple[tuple[int, int], ...]
    family: tuple[frozenset, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "sources", tuple(sorted(set(self.sources))))
        object.__setattr__(self, "sinks", tuple(sorted(set(self.sinks))))
        object.__setattr__(
            self, "arcs", tuple((int(x), int(y)) for x, y in self.arcs)
        )
        object.__setattr__(
            self, "family", tuple(frozenset(m) for m in self.family)
        )
        _check_bipartite(self.sources, self.sinks, self.arcs)
        for m in self.family:
            try:
                self.shore_dicut(m)
            except NotADicut as exc:
                raise NonDicutMember(
                    f"family member {sorted(m)} is not a dicut shore: {exc}"
                ) from exc

    @classmethod
    def normalized(cls, sources, sinks, arcs, family) -> "GeneralDigraft":
        """Add the implicit per-sink members and dedupe."""
        base = cls(
            sources=tuple(sources),
            sinks=tuple(sinks),
            arcs=tuple(tuple(a) for a in arcs),
            family=tuple(frozenset(m) for m in family),
        )
        seen = set(base.family)
        fam = list(base.family)
        for t in base.sinks:
            m = base.vertex_set - {t}
            if m not in seen:
                fam.append(m)
                seen.add(m)
        return cls(base.sources, base.sinks, base.arcs, tuple(fam))

    def trivial_members(self) -> tuple[frozenset, ...]:
        return tuple(m for m in self.family if self.is_trivial_shore(m))

    def nontrivial_members(self) -> tuple[frozenset, ...]:
        return tuple(m for m in self.family if not self.is_trivial_shore(m))

    def contract(self, shore, side: str) -> tuple["GeneralDigraft", tuple[int, ...]]:
        """Contract at a dicut shore, distributing the family.

        The shore itself joins the family before distribution, producing
        the trivial marker on each side. Members crossing the shore raise
        FamilyCrossing (uncross first). Member W goes to a side whole when
        disjoint from the collapsed set, renamed when it contains it, and
        is dropped otherwise (it lives on the other side).
        """
        shore = frozenset(shore)
        self.shore_dicut(shore)
        if self.is_trivial_shore(shore):
            raise TrivialDicut("refusing to contract a trivial dicut")
        full = self.vertex_set
        for w in self.family:
            if (w & shore) and (w | shore) != full and not (
                w <= shore or shore <= w
            ):
                raise FamilyCrossing(
                    f"member {sorted(w)} crosses the contraction shore"
                )
        extended = list(self.family)
        if shore not in extended:
            extended.append(shore)
        if side == "out":
            collapsed = shore
            star = min(collapsed)
            sources = sorted((self.source_set - shore) | {star})
            sinks = sorted(self.sink_set - shore)
            new_arcs, amap = [], []
            for a, (x, y) in enumerate(self.arcs):
                if y in shore:
                    continue
                new_arcs.append((star if x in shore else x, y))
                amap.append(a)
        elif side == "in":
            collapsed = full - shore
            star = min(collapsed)
            sources = sorted(self.source_set & shore)
            sinks = sorted((self.sink_set & shore) | {star})
            new_arcs, amap = [], []
            for a, (x, y) in enumerate(self.arcs):
                if x not in shore:
                    continue
                new_arcs.append((x, y if y in shore else star))
                amap.append(a)
        else:
            raise ValueError("side must be 'out' or 'in'")
        fam = []
        seen = set()
        for w in extended:
            if not w & collapsed:
                img = w
            elif collapsed <= w:
                img = (w - collapsed) | {star}
            else:
                continue
            if img not in seen:
                fam.append(img)
                seen.add(img)
        child = GeneralDigraft(
            sources=tuple(sources),
            sinks=tuple(sinks),
            arcs=tuple(new_arcs),
            family=tuple(fam),
        )
        return child, tuple(amap)

    def to_json(self) -> dict:
        return {
            "sources": list(self.sources),
            "sinks": list(self.sinks),
            "arcs": [list(a) for a in self.arcs],
            "family": [sorted(m) for m in self.family],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GeneralDigraft":
        return cls.normalized(
            sources=tuple(data["sources"]),
            sinks=tuple(data["sinks"]),
            arcs=tuple(tuple(a) for a in data["arcs"]),
            family=tuple(frozenset(m) for m in data.get("family", ())),
        )


def uncross_family(gd: GeneralDigraft) -> GeneralDigraft:
    """Replace crossing member pairs by their intersection and union.

    Two members cross when they overlap, neither contains the other, and
    they do not cover all vertices (complement-style pairs such as two
    per-sink shores are fine and stay). Each replacement preserves the
    solution set: a solution crosses both original dicuts once iff it
    crosses both replacements once. The sum of squared member sizes grows
    on every step, so this terminates.
    """
    full = gd.vertex_set
    fam = list(gd.family)
    while True:
        found = None
        for i in range(len(fam)):
            for j in range(i + 1, len(fam)):
                u, w = fam[i], fam[j]
                if (u & w) and (u | w) != full and not (u <= w or w <= u):
                    found = (i, j)
                    break
            if found:
                break
        if not found:
            break
        i, j = found
        u, w = fam[i], fam[j]
        replacement = [u & w, u | w]
        fam = fam[:i] + fam[i + 1 : j] + fam[j + 1 :]
        for m in replacement:
            if m not in fam:
                fam.append(m)
    # dedupe, keep first occurrence
    seen = set()
    out = []
    for m in fam:
        if m not in seen:
            out.append(m)
            seen.add(m)
    return GeneralDigraft(gd.sources, gd.sinks, gd.arcs, tuple(out))
