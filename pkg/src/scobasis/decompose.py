"""Decomposition along tight dicuts and basis gluing across them.

A nontrivial tight dicut splits a digraft into two smaller ones sharing
the cut arcs: the inside keeps the shore and gains a sink, the outside
keeps the rest and gains a tight source. Solutions restrict to solutions
of the pieces and compose back when the pieces agree on the crossing
arc, so a tree of such splits reduces basis construction to its leaves.
Gluing runs the construction upward: per cut arc we fix a representative
solution on each side, extend every inside basis element by the outside
representative through its crossing arc, and pad with enough extended
outside elements to keep the count right.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from . import oracle
from .errors import (
    CrossingNotOne,
    GlueVerificationFailed,
    MismatchedCrossing,
    NotCovered,
)
from .feasibility import HallViolator, find_tight_dijoin, tight_dijoin_through
from .graphs import Digraft, GeneralDigraft, _member_key
from .structure import Barrier, classify, is_basic

# gluing certifies against enumeration up to this many arcs
_VERIFY_ARC_CAP = 20
_ALTS_PER_ARC = 4
_TUPLE_CAP = 64
_ATTEMPT_CAP = 4000

_ENUM_CACHE: dict = {}


def _enumerated(d) -> tuple:
    cached = _ENUM_CACHE.get(d)
    if cached is None:
        cached = tuple(oracle.enumerate_tight_dijoins(d))
        _ENUM_CACHE[d] = cached
    return cached


def split_dijoin(d, shore, j):
    """Restrict a once-crossing solution to the two contractions.

    Returns (inside piece, outside piece) in d's arc ids; the pieces
    overlap exactly on the crossing arc.
    """
    shore = frozenset(shore)
    cut = d.shore_dicut(shore)
    j = frozenset(j)
    crossing = j & cut
    if len(crossing) != 1:
        raise CrossingNotOne(
            f"solution crosses the dicut {len(crossing)} times, need 1"
        )
    inside = frozenset(a for a in j if d.arcs[a][0] in shore)
    return inside, (j - inside) | crossing


def compose_dijoin(d, shore, j1, j2):
    """Union of an inside and an outside piece sharing one crossing arc."""
    shore = frozenset(shore)
    cut = d.shore_dicut(shore)
    j1, j2 = frozenset(j1), frozenset(j2)
    hit1, hit2 = j1 & cut, j2 & cut
    if hit1 != hit2 or len(hit1) != 1:
        raise MismatchedCrossing(
            f"pieces cross at {sorted(hit1)} and {sorted(hit2)}, "
            "need one shared arc"
        )
    if any(d.arcs[a][0] not in shore for a in j1):
        raise ValueError("inside piece has an arc starting off the shore")
    if any(d.arcs[a][1] in shore for a in j2):
        raise ValueError("outside piece has an arc ending on the shore")
    return j1 | j2


def contractions(d, shore):
    """Both children at a dicut shore, inside then outside.

    Each child comes with its arc map (child arc id to parent arc id).
    The inside child keeps the shore and gains a sink; the outside child
    keeps the rest and gains a tight source.
    """
    return d.contract(shore, "in"), d.contract(shore, "out")


@dataclass(frozen=True)
class DecompositionNode:
    """One digraft in a decomposition tree.

    Internal nodes record the contracted dicut shore (in this node's
    vertex labels) and two children, inside first. ``arc_maps`` translate
    child arc ids to this node's. Leaves carry a kind label instead:
    "brick", "brace", or "tight_sources" for a reduction stopped at
    trivial family members.
    """

    digraft: object
    kind: str | None = None
    shore: frozenset | None = None
    children: tuple | None = None
    arc_maps: tuple | None = None

    @property
    def is_leaf(self) -> bool:
        return self.children is None

    def to_json(self) -> dict:
        if self.is_leaf:
            return {"digraft": self.digraft.to_json(), "leaf": self.kind}
        sides = ("in", "out")
        return {
            "digraft": self.digraft.to_json(),
            "shore": sorted(self.shore),
            "children": [
                {"side": side, "arc_map": list(amap), "node": child.to_json()}
                for side, amap, child in zip(
                    sides, self.arc_maps, self.children
                )
            ],
        }


@dataclass(frozen=True)
class DecompositionTree:
    root: DecompositionNode

    def leaves(self) -> list[DecompositionNode]:
        out = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                out.append(node)
            else:
                stack.extend(reversed(node.children))
        return out

    def leaf_maps(self) -> list[tuple[DecompositionNode, tuple[int, ...]]]:
        """Leaves paired with maps from their arc ids to the root's."""
        out = []

        def walk(node, ids):
            if node.is_leaf:
                out.append((node, ids))
                return
            for child, amap in zip(node.children, node.arc_maps):
                walk(child, tuple(ids[a] for a in amap))

        walk(self.root, tuple(range(len(self.root.digraft.arcs))))
        return out

    @property
    def brick_count(self) -> int:
        return sum(1 for leaf in self.leaves() if leaf.kind == "brick")

    def to_json(self) -> dict:
        kinds = [leaf.kind for leaf in self.leaves()]
        return {
            "leaves": len(kinds),
            "bricks": kinds.count("brick"),
            "braces": kinds.count("brace"),
            "root": self.root.to_json(),
        }


def _to_tight_sources(gd: GeneralDigraft) -> Digraft:
    """Turn an all-trivial family into tight source flags (same arcs)."""
    tight = {next(iter(m)) for m in gd.family if len(m) == 1}
    if len(gd.sources) > len(gd.sinks):
        raise NotCovered(
            "more sources than sinks leaves some source empty",
            violator={"type": "source_excess", "sources": list(gd.sources)},
        )
    if len(tight) == len(gd.sources):
        if len(gd.sources) == len(gd.sinks):
            # every degree is forced to 1, so one tight flag is redundant
            tight.discard(max(gd.sources))
        else:
            raise NotCovered(
                "every source is pinned tight with sinks to spare",
                violator={"type": "all_sources_tight"},
            )
    return Digraft(
        sources=gd.sources,
        sinks=gd.sinks,
        arcs=gd.arcs,
        tight_sources=frozenset(tight),
    )


def _witness_shore(verdict) -> frozenset:
    if isinstance(verdict, Barrier):
        return verdict.shore
    return verdict.shores[0]


def _ts_tree(d: Digraft) -> DecompositionNode:
    verdict = is_basic(d)
    if verdict is True:
        return DecompositionNode(digraft=d, kind=classify(d).kind)
    shore = _witness_shore(verdict)
    (inner, imap), (outer, omap) = contractions(d, shore)
    return DecompositionNode(
        digraft=d,
        shore=shore,
        children=(_ts_tree(inner), _ts_tree(outer)),
        arc_maps=(imap, omap),
    )


def _general_tree(gd: GeneralDigraft, leaf) -> DecompositionNode:
    nontrivial = sorted(gd.nontrivial_members(), key=_member_key)
    if not nontrivial:
        return leaf(gd)
    shore = nontrivial[0]
    (inner, imap), (outer, omap) = contractions(gd, shore)
    return DecompositionNode(
        digraft=gd,
        shore=shore,
        children=(_general_tree(inner, leaf), _general_tree(outer, leaf)),
        arc_maps=(imap, omap),
    )


def reduce_to_tight_sources(gd: GeneralDigraft) -> DecompositionTree:
    """Consume the nontrivial family members, smallest member first.

    Leaves hold plain tight-source digrafts (same arcs; singleton family
    members become flags), each checked to have a solution.
    """

    def leaf(sub):
        ts = _to_tight_sources(sub)
        j = find_tight_dijoin(ts)
        if isinstance(j, HallViolator):
            raise NotCovered("piece has no tight dijoin", violator=j)
        return DecompositionNode(digraft=ts, kind="tight_sources")

    return DecompositionTree(root=_general_tree(gd, leaf))


def tight_dicut_decomposition(d) -> DecompositionTree:
    """Full decomposition tree with every leaf a brick or a brace.

    Explicit family members go first (smallest first), then the structure
    module's barrier or 2-separation witnesses until every leaf is basic.
    """
    if isinstance(d, GeneralDigraft):
        root = _general_tree(d, lambda sub: _ts_tree(_to_tight_sources(sub)))
    else:
        root = _ts_tree(d)
    return DecompositionTree(root=root)


def _dijoin_through(d, arc: int) -> frozenset:
    """A solution through the given arc, for either digraft form.

    Nontrivial family members are consumed recursively: the piece owning
    the arc is solved first and its crossing arc pins the other piece.
    """
    if not isinstance(d, GeneralDigraft):
        return tight_dijoin_through(d, arc)
    nontrivial = sorted(d.nontrivial_members(), key=_member_key)
    if not nontrivial:
        return tight_dijoin_through(_to_tight_sources(d), arc)
    shore = nontrivial[0]
    cut = d.shore_dicut(shore)
    (inner, imap), (outer, omap) = contractions(d, shore)
    inner_pos = {p: c for c, p in enumerate(imap)}
    outer_pos = {p: c for c, p in enumerate(omap)}
    if d.arcs[arc][0] in shore:
        j1 = frozenset(imap[a] for a in _dijoin_through(inner, inner_pos[arc]))
        (crossing,) = j1 & cut
        j2 = frozenset(
            omap[a] for a in _dijoin_through(outer, outer_pos[crossing])
        )
    else:
        j2 = frozenset(omap[a] for a in _dijoin_through(outer, outer_pos[arc]))
        (crossing,) = j2 & cut
        j1 = frozenset(
            imap[a] for a in _dijoin_through(inner, inner_pos[crossing])
        )
    return j1 | j2


def _char_row(j, n: int) -> list[int]:
    row = [0] * n
    for a in j:
        row[a] = 1
    return row


def _echelon_insert(echelon, vec) -> bool:
    """Reduce vec against the echelon; install and report True if new."""
    v = [Fraction(x) for x in vec]
    for pivot, row in echelon:
        if v[pivot]:
            f = v[pivot] / row[pivot]
            v = [a - f * b for a, b in zip(v, row)]
    for i, x in enumerate(v):
        if x:
            echelon.append((i, v))
            return True
    return False


def glue_bases(d, shore, b1, b2) -> list[frozenset]:
    """Combine bases of the two contractions at a tight dicut shore.

    All arc sets are in d's arc ids: b1 spans the inside contraction, b2
    the outside. Output size is |b1| + |b2| - |cut|. Small instances are
    certified against enumeration, retrying other selections and other
    outside representatives before giving up.
    """
    shore = frozenset(shore)
    cut = d.shore_dicut(shore)
    b1 = [frozenset(j) for j in b1]
    b2 = [frozenset(j) for j in b2]
    if len(b2) < len(cut):
        raise ValueError("outside basis smaller than the cut")
    for j in b1:
        if any(d.arcs[a][0] not in shore for a in j):
            raise ValueError("inside basis element leaves the shore")
    for j in b2:
        if any(d.arcs[a][1] in shore for a in j):
            raise ValueError("outside basis element enters the shore")
    n = len(d.arcs)
    (inner, imap), (outer, omap) = contractions(d, shore)
    inner_pos = {p: c for c, p in enumerate(imap)}
    outer_pos = {p: c for c, p in enumerate(omap)}

    def crossing_of(j, which):
        hit = j & cut
        if len(hit) != 1:
            raise CrossingNotOne(
                f"{which} basis element crosses the dicut {len(hit)} times"
            )
        return next(iter(hit))

    f1 = [crossing_of(j, "inside") for j in b1]
    f2 = [crossing_of(j, "outside") for j in b2]
    order = sorted(cut)
    need = len(b2) - len(cut)
    reps1 = {
        f: frozenset(imap[a] for a in _dijoin_through(inner, inner_pos[f]))
        for f in order
    }
    canonical = {
        f: frozenset(omap[a] for a in _dijoin_through(outer, outer_pos[f]))
        for f in order
    }

    def build(reps2, selection):
        glued = [j | reps2[f] for j, f in zip(b1, f1)]
        glued.extend(reps1[f2[i]] | b2[i] for i in selection)
        return glued

    def greedy(reps2, start):
        echelon = []
        for j, f in zip(b1, f1):
            _echelon_insert(echelon, _char_row(j | reps2[f], n))
        picked = []
        for i in range(start, start + len(b2)):
            if len(picked) == need:
                break
            i %= len(b2)
            if _echelon_insert(echelon, _char_row(reps1[f2[i]] | b2[i], n)):
                picked.append(i)
        return tuple(sorted(picked)) if len(picked) == need else None

    verify = n <= _VERIFY_ARC_CAP

    def schedules():
        # canonical representatives first, greedy from every start
        seen = set()
        for start in range(max(1, len(b2))):
            sel = greedy(canonical, start)
            if sel is not None and sel not in seen:
                seen.add(sel)
                yield canonical, sel
        if not verify:
            return
        for combo in combinations(range(len(b2)), need):
            if combo not in seen:
                yield canonical, combo
        # then alternate outside representatives from the enumeration
        alts = {}
        for f in order:
            pool = [
                frozenset(omap[a] for a in j)
                for j in _enumerated(outer)
                if outer_pos[f] in j
            ]
            alts[f] = pool[:_ALTS_PER_ARC] or [canonical[f]]
        tuples = 0
        for tup in product(*(alts[f] for f in order)):
            reps2 = dict(zip(order, tup))
            if reps2 == canonical:
                continue
            tuples += 1
            if tuples > _TUPLE_CAP:
                return
            seen = set()
            for start in range(max(1, len(b2))):
                sel = greedy(reps2, start)
                if sel is not None and sel not in seen:
                    seen.add(sel)
                    yield reps2, sel
            for combo in combinations(range(len(b2)), need):
                if combo not in seen:
                    yield reps2, combo

    if verify:
        enumerated = [j for j in _enumerated(d) if len(j & cut) == 1]
    tried = 0
    for reps2, selection in schedules():
        tried += 1
        if tried > _ATTEMPT_CAP:
            break
        glued = build(reps2, selection)
        if not verify:
            return glued
        cert = oracle.verify_integral_basis(glued, enumerated, n)
        if cert.ok:
            return glued
    raise GlueVerificationFailed(
        f"no representative choice glued after {tried} attempts"
    )
