"""Structural recognition: barriers, 2-separations, robustness, bricks.

A digraft decomposes along nontrivial tight dicuts; the two detectable
sources of those are barriers (vertex sets on one tight side whose
removal leaves as many components as the set has elements) and
2-separations (a tight source and a sink that together disconnect the
digraft). A digraft with neither is basic. Robustness is the separate
property that degree-valid covers are automatically dijoins; its failure
is witnessed by a dicut together with a cover avoiding it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotADicut, NotCovered
from .feasibility import (
    _PARTITION_SOURCE_LIMIT,
    HallViolator,
    _best_split_partition,
    _exchange_walk,
    _partition_removed_set,
    _tables,
    edge_cover_raw,
    find_tight_dijoin,
)
from .graphs import components
from .sfm import min_barrier_deficiency, min_neighborhood_surplus


@dataclass(frozen=True)
class Barrier:
    """Tight-side set whose removal shatters the digraft into |X| parts.

    Each part hangs off the barrier through a tight dicut; ``shore`` is
    a nontrivial one and ``dicut`` its arc set.
    """

    side: str
    members: frozenset
    shore: frozenset
    dicut: frozenset

    def to_json(self) -> dict:
        return {
            "kind": "barrier",
            "side": self.side,
            "members": sorted(self.members),
            "shore": sorted(self.shore),
            "dicut": sorted(self.dicut),
        }


@dataclass(frozen=True)
class TwoSeparation:
    """A tight source and a sink that together disconnect the digraft."""

    source: int
    sink: int
    shores: tuple
    dicuts: tuple

    def to_json(self) -> dict:
        return {
            "kind": "two_separation",
            "source": self.source,
            "sink": self.sink,
            "shores": [sorted(s) for s in self.shores],
            "dicuts": [sorted(c) for c in self.dicuts],
        }


@dataclass(frozen=True)
class SeparatingDicut:
    """A dicut some tight edge cover avoids entirely."""

    shore: frozenset
    dicut: frozenset
    source_set: frozenset
    cover: frozenset

    def to_json(self) -> dict:
        return {
            "kind": "separating_dicut",
            "shore": sorted(self.shore),
            "dicut": sorted(self.dicut),
            "source_set": sorted(self.source_set),
            "cover": sorted(self.cover),
        }


@dataclass(frozen=True)
class Classification:
    kind: str
    witness: object = None

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


_CLASSIFY: dict = {}
_BARRIER: dict = {}


def _covered_or_raise(d):
    j = find_tight_dijoin(d)
    if isinstance(j, HallViolator):
        raise NotCovered("digraft has no tight dijoin", violator=j)
    return j


def _sink_barrier_witness(d, x: frozenset) -> Barrier:
    comps = d.components_after_removal(x)
    usable = [c for c in comps if not d.is_trivial_shore(c)]
    shore = min(usable, key=min)
    return Barrier(
        side="T", members=x, shore=shore, dicut=d.shore_dicut(shore)
    )


def _source_barrier_witness(d, y: frozenset) -> Barrier | None:
    comps = d.components_after_removal(y)
    usable = [c for c in comps if len(c) >= 2]
    if not usable:
        return None
    inner = min(usable, key=min)
    shore = d.vertex_set - inner
    return Barrier(
        side="S", members=y, shore=shore, dicut=d.shore_dicut(shore)
    )


def _two_arc_cuts(d):
    """Arc pairs with distinct heads whose removal disconnects."""
    m = len(d.arcs)
    for i in range(m):
        for k in range(i + 1, m):
            if d.arcs[i][1] == d.arcs[k][1]:
                continue
            rest = [p for a, p in enumerate(d.arcs) if a not in (i, k)]
            if len(components(d.vertex_set, rest)) > 1:
                yield i, k


def find_barrier_dicut(d):
    """A nontrivial barrier dicut, or None.

    Sink side first, then tight-source side; candidates in ascending
    member order. The all-sinks set is excluded: its components are
    single sources and so never give a nontrivial dicut.
    """
    cached = _BARRIER.get(d)
    if cached is not None:
        return cached if cached is not False else None
    _covered_or_raise(d)
    result = _find_barrier_dicut(d)
    _BARRIER[d] = result if result is not None else False
    return result


def _find_barrier_dicut(d):
    sinks, t_table, t_auto, sources, s_sigma, _ = _tables(d)
    nt = len(sinks)
    if t_table is not None:
        hits = []
        for mask in range(1, (1 << nt) - 1):
            if mask.bit_count() >= 2 and t_table[mask] == 0:
                hits.append(
                    tuple(sinks[i] for i in range(nt) if mask >> i & 1)
                )
        for members in sorted(hits):
            return _sink_barrier_witness(d, frozenset(members))
    elif t_auto:
        # degree-2 sinks and 2-edge-connectivity bound every removal
        # count by the removed size, so barriers reduce to 2-arc-cuts:
        # a shattered part has exactly two boundary arcs and conversely
        for i, k in _two_arc_cuts(d):
            x = frozenset({d.arcs[i][1], d.arcs[k][1]})
            if len(x) < nt and d.sigma(x) == 2:
                return _sink_barrier_witness(d, x)
    elif len(sources) >= 2 and len(sources) <= _PARTITION_SOURCE_LIMIT:
        # a sink barrier is a source partition whose crossing sinks
        # number exactly its blocks, so the partition optimum finds one
        # whenever the kept count can stay positive at full value
        value, kept, parts, _ = _best_split_partition(d, {})
        assert value <= nt, "covered digrafts have no negative surplus"
        if value == nt and kept >= 1:
            x = _partition_removed_set(d, parts, frozenset())
            return _sink_barrier_witness(d, x)
    elif len(sources) >= 2:
        for p_i in range(nt):
            for q_i in range(p_i + 1, nt):
                for w in sinks:
                    if w in (sinks[p_i], sinks[q_i]):
                        continue
                    x, val = min_barrier_deficiency(
                        d,
                        "sinks",
                        forced_in={sinks[p_i], sinks[q_i]},
                        forced_out={w},
                    )
                    if val == 0:
                        return _sink_barrier_witness(d, x)

    tight = sorted(d.tight_sources)
    if len(tight) >= 2:
        if s_sigma is not None:
            src_pos = {s: i for i, s in enumerate(sources)}
            hits = []
            for mask in range(1, 1 << len(tight)):
                if mask.bit_count() < 2:
                    continue
                chosen = [
                    tight[i] for i in range(len(tight)) if mask >> i & 1
                ]
                smask = 0
                for u in chosen:
                    smask |= 1 << src_pos[u]
                if len(chosen) == s_sigma[smask]:
                    hits.append(tuple(chosen))
            for members in sorted(hits):
                w = _source_barrier_witness(d, frozenset(members))
                if w is not None:
                    return w
        else:
            for p_i in range(len(tight)):
                for q_i in range(p_i + 1, len(tight)):
                    y, val = min_barrier_deficiency(
                        d,
                        "tight_sources",
                        forced_in={tight[p_i], tight[q_i]},
                    )
                    if val == 0:
                        w = _source_barrier_witness(d, y)
                        if w is not None:
                            return w
    return None


def find_two_separation(d):
    """First tight source and sink (in id order) forming a 2-cut."""
    for u in sorted(d.tight_sources):
        for v in d.sinks:
            removed = frozenset({u, v})
            rest = d.vertex_set - removed
            pairs = [
                (x, y)
                for x, y in d.arcs
                if x not in removed and y not in removed
            ]
            comps = components(rest, pairs)
            if len(comps) < 2:
                continue
            first = min(comps, key=min)
            other = rest - first
            shores = (first | {u}, other | {u})
            return TwoSeparation(
                source=u,
                sink=v,
                shores=shores,
                dicuts=tuple(d.shore_dicut(s) for s in shores),
            )
    return None


def is_basic(d):
    """True when no nontrivial barrier dicut or 2-separation exists;
    otherwise the witness (itself a nontrivial tight dicut)."""
    _covered_or_raise(d)
    barrier = find_barrier_dicut(d)
    if barrier is not None:
        return barrier
    sep = find_two_separation(d)
    if sep is not None:
        return sep
    return True


def is_tight_dicut(d, cut) -> bool:
    """Does every tight dijoin cross this dicut exactly once?

    The crossing count equals the sinks outside the shore minus the
    degree sum outside, so it is 1 with no slack exactly when no single
    exchange step can move that degree sum.
    """
    shore = d.dicut_shore(frozenset(cut))
    if shore is None:
        raise NotADicut("arc set is not a dicut")
    j0 = _covered_or_raise(d)
    b0 = d.degree_sequence(j0)
    z = d.source_set - shore
    out_sinks = len(d.sink_set - shore)
    bz = sum(b0[s] for s in z)
    if out_sinks - bz != 1:
        return False
    up = _exchange_walk(d, dict(b0), z, raise_z=True, stop_at=bz + 1)
    if sum(up[s] for s in z) != bz:
        return False
    down = _exchange_walk(d, dict(b0), z, raise_z=False, stop_at=bz - 1)
    return sum(down[s] for s in z) == bz


def robustness(d):
    """None when every tight edge cover is a tight dijoin; otherwise a
    SeparatingDicut witness.

    The test minimizes |N(X)| - |X| over source sets X that are proper,
    nonempty, and contain a free source; any value below the sink
    surplus plus one yields a dicut avoided by the cover glued from the
    two induced pieces.
    """
    _covered_or_raise(d)
    ns, nt = len(d.sources), len(d.sinks)
    if ns == nt:
        # every proper source set has strict surplus in a covered
        # digraft, which meets the square threshold of 1
        return None
    if ns == 1:
        # no proper nonempty source set exists; every dicut keeps the
        # source on its shore, so every cover crosses every dicut
        return None
    threshold = nt - ns + 1
    best = None
    for u in d.free_sources:
        x, val = min_neighborhood_surplus(d, forced_in={u})
        if best is None or val < best[1]:
            best = (x, val)
    x, val = best
    if val >= threshold:
        return None
    nx = d.neighborhood(x)
    inside = [(a, (s, t)) for a, (s, t) in enumerate(d.arcs) if s in x]
    outside = [
        (a, (s, t))
        for a, (s, t) in enumerate(d.arcs)
        if s not in x and t not in nx
    ]
    ok1, j1 = edge_cover_raw(
        sorted(x), sorted(nx), [p for _, p in inside],
        d.tight_sources & x,
    )
    ok2, j2 = edge_cover_raw(
        sorted(d.source_set - x),
        sorted(d.sink_set - nx),
        [p for _, p in outside],
        d.tight_sources - x,
    )
    if not ok1 or not ok2:
        raise AssertionError("induced covers must exist below threshold")
    cover = frozenset(inside[i][0] for i in j1) | frozenset(
        outside[i][0] for i in j2
    )
    shore = d.vertex_set - x - nx
    dicut = d.shore_dicut(shore)
    if dicut & cover:
        raise AssertionError("glued cover must avoid the dicut")
    return SeparatingDicut(
        shore=shore, dicut=dicut, source_set=x, cover=cover
    )


def classify(d) -> Classification:
    """Brick, brace, or non-basic with the witness dicut."""
    cached = _CLASSIFY.get(d)
    if cached is not None:
        return cached
    verdict = is_basic(d)
    if verdict is True:
        kind = "brick" if len(d.sources) < len(d.sinks) else "brace"
        result = Classification(kind)
    else:
        result = Classification("non_basic", verdict)
    _CLASSIFY[d] = result
    return result
