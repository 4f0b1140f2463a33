"""Tight strongly connected orientations with a red-arc parity target.

An odd target is solved by scanning a basis: any integral combination
with an odd red count forces some basis element to have one. An even
target reduces to odd by hanging a pendant vertex on two parallel edges
whose forward arcs are red; every orientation spends exactly one of
them, flipping the parity.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import Infeasible
from .graphs import UndirectedMultigraph
from .orient import _check_family, sco_basis


@dataclass(frozen=True)
class ParityQuery:
    """A multigraph with a family, red arc ids, and a parity target."""

    graph: UndirectedMultigraph
    family: tuple[frozenset, ...] = ()
    red: frozenset = frozenset()
    target: str = "odd"

    def __post_init__(self):
        object.__setattr__(
            self, "family", _check_family(self.graph.n, self.family)
        )
        object.__setattr__(
            self, "red", frozenset(int(a) for a in self.red)
        )
        m = len(self.graph.edges)
        for a in self.red:
            if not 0 <= a < 2 * m:
                raise ValueError(f"red arc id {a} out of range")
        if self.target not in ("odd", "even"):
            raise ValueError("target must be 'odd' or 'even'")


def even_to_odd_gadget(q: ParityQuery) -> ParityQuery:
    """An odd query whose solutions are the even solutions of ``q``
    plus one red and one blue gadget arc.

    A new vertex joins the smallest family-unpinned vertex u by two
    parallel edges; their u-to-w arcs are red. Strong connectivity uses
    the edges in opposite directions, so exactly one red gadget arc
    appears in every orientation. Family members containing u absorb
    the new vertex.
    """
    g = q.graph
    # prefer a vertex the family leaves unconstrained, but any anchor
    # works: members absorb w alongside u, so neither gadget arc ever
    # crosses a member boundary and the count still doubles
    u = 0
    for v in range(g.n):
        if frozenset({v}) in q.family:
            continue
        if frozenset(range(g.n)) - {v} in q.family:
            continue
        u = v
        break
    w = g.n
    edges = g.edges + ((u, w), (u, w))
    m = len(g.edges)
    family = tuple(
        memb | {w} if u in memb else memb for memb in q.family
    )
    return ParityQuery(
        graph=UndirectedMultigraph(n=g.n + 1, edges=edges),
        family=family,
        red=q.red | {2 * m, 2 * m + 2},
        target="odd",
    )


def parity_sco(q: ParityQuery):
    """A tight strongly connected orientation with the requested red
    parity, or None when every tight orientation has the other parity.

    Raises Infeasible when no tight orientation exists at all.
    """
    if q.target == "even":
        odd = even_to_odd_gadget(q)
        found = parity_sco(odd)
        if found is None:
            return None
        m = len(q.graph.edges)
        kept = frozenset(a for a in found if a < 2 * m)
        assert len(kept) == m and len(kept & q.red) % 2 == 0
        return kept
    rep = _basis_for(q.graph, q.family)
    if isinstance(rep, Infeasible):
        raise rep
    for o in rep.basis:
        if len(o & q.red) % 2 == 1:
            return o
    return None


@lru_cache(maxsize=None)
def _basis_for(graph, family):
    # repeated queries over one instance differ only in red arcs, so the
    # basis (or its infeasibility) is worth keeping
    try:
        return sco_basis(graph, family)
    except Infeasible as exc:
        return exc
