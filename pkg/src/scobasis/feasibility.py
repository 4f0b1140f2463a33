"""Degree-sequence feasibility, tight dijoins, and crossing control.

The attainable degree sequences of tight dijoins form the integer points
of a polymatroid face, so everything here reduces to three primitives: an
exact feasibility test for partially pinned degrees (component-counting
conditions, evaluated on bitmask tables), a single max-flow to realize a
full degree sequence plus a flip-connectivity check that certifies the
result crosses every dicut, and one-unit exchange steps that move a
realized sequence around the face without ever jumping a crossing value.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import Infeasible, OutOfRange
from .flow import bipartite_b_matching, feasible_circulation
from .graphs import strongly_connected_components
from .sfm import SubmodularOracle, minimize

_T_TABLE_LIMIT = 12
_S_TABLE_LIMIT = 18
_PARTITION_SOURCE_LIMIT = 12


@dataclass(frozen=True)
class HallViolator:
    """A vertex set certifying infeasibility, tagged by the failed check.

    Tags: "total" (degree sum is not the sink count), "hall" (demand
    b(X) > |N(X)|), "dicut" (b(X) = |N(X)|, so some dicut goes uncrossed),
    "sigma" (removing X leaves more components than |X| allows, counting
    pinned multiplicities), "cover" (sink demand exceeds forced supply).
    """

    side: str
    vertices: frozenset
    tag: str

    def to_json(self) -> dict:
        return {
            "type": "hall_violator",
            "side": self.side,
            "set": sorted(self.vertices),
            "tag": self.tag,
        }


_TABLES: dict = {}
_PROFILES: dict = {}
_BASE: dict = {}
_TIGHT: dict = {}


def _tables(d):
    cached = _TABLES.get(d)
    if cached is not None:
        return cached
    sinks = list(d.sinks)
    t_table = None
    if len(sinks) <= _T_TABLE_LIMIT:
        t_table = [0] * (1 << len(sinks))
        for mask in range(1, 1 << len(sinks)):
            x = [sinks[i] for i in range(len(sinks)) if mask >> i & 1]
            t_table[mask] = mask.bit_count() - d.sigma(x)
    deg2 = all(len(d.in_arcs[t]) == 2 for t in sinks)
    t_auto = deg2 and _is_two_edge_connected(d)
    sources = list(d.sources)
    s_sigma = None
    if len(sources) <= _S_TABLE_LIMIT:
        s_sigma = [0] * (1 << len(sources))
        for mask in range(1, 1 << len(sources)):
            y = [sources[i] for i in range(len(sources)) if mask >> i & 1]
            s_sigma[mask] = d.sigma(y)
    n_mask = {}
    for s in sources:
        m = 0
        for t in d.source_neighbors[s]:
            m |= 1 << sinks.index(t)
        n_mask[s] = m
    entry = (sinks, t_table, t_auto, sources, s_sigma, n_mask)
    _TABLES[d] = entry
    return entry


def _is_two_edge_connected(d) -> bool:
    try:
        d.check_two_edge_connected()
        return True
    except Exception:
        return False


def _partition_profile(d):
    """Sink-neighborhood types as source bitmasks, plus the subset sums.

    inside[mask] counts sinks whose whole neighborhood sits inside the
    source set encoded by mask. Removing a sink set X leaves components
    that group the sources, so every sigma question over sinks is really
    a question about partitions of the (few) sources; these tables let
    the partition optimum be taken by subset DP instead of submodular
    minimization over the (many) sinks.
    """
    cached = _PROFILES.get(d)
    if cached is not None:
        return cached
    sources = list(d.sources)
    pos = {s: i for i, s in enumerate(sources)}
    type_sinks: dict[int, list] = {}
    for t in d.sinks:
        m = 0
        for s in d.sink_neighbors[t]:
            m |= 1 << pos[s]
        type_sinks.setdefault(m, []).append(t)
    ns = len(sources)
    inside = [0] * (1 << ns)
    for m, ts in type_sinks.items():
        inside[m] = len(ts)
    for i in range(ns):
        bit = 1 << i
        for mask in range(bit, 1 << ns):
            if mask & bit:
                inside[mask] += inside[mask ^ bit]
    entry = (pos, inside, type_sinks)
    _PROFILES[d] = entry
    return entry


def _best_split_partition(d, singleton_extra: dict):
    """Maximize kept sinks plus block count over source partitions with
    at least two blocks; ties prefer keeping more sinks.

    A heavy singleton block {u} may instead claim its pin bonus, which
    forces the sinks parallel to u out of the kept set. Returns
    (value, kept, parts, claimed_blocks).
    """
    pos, inside, type_sinks = _partition_profile(d)
    ns = len(pos)
    assert ns >= 2, "partitions need at least two sources"
    full = (1 << ns) - 1
    w = [0] * (full + 1)
    kept_w = [0] * (full + 1)
    for mask in range(1, full + 1):
        w[mask] = inside[mask] + 1
        kept_w[mask] = inside[mask]
    claimed = set()
    for i, extra in singleton_extra.items():
        bit = 1 << i
        if extra > inside[bit]:
            w[bit] = extra + 1
            kept_w[bit] = 0
            claimed.add(bit)
    dp = [(0, 0)] * (full + 1)
    choice = [0] * (full + 1)
    for mask in range(1, full + 1):
        low = mask & -mask
        best = None
        pick = 0
        sub = mask
        while sub:
            if sub & low:
                rest = dp[mask ^ sub]
                cand = (w[sub] + rest[0], kept_w[sub] + rest[1])
                if best is None or cand > best:
                    best = cand
                    pick = sub
            sub = (sub - 1) & mask
        dp[mask] = best
        choice[mask] = pick
    best = None
    pick = 0
    sub = full
    while sub:
        if sub & 1 and sub != full:
            rest = dp[full ^ sub]
            cand = (w[sub] + rest[0], kept_w[sub] + rest[1])
            if best is None or cand > best:
                best = cand
                pick = sub
        sub = (sub - 1) & full
    parts = [pick]
    rest = full ^ pick
    while rest:
        b = choice[rest]
        parts.append(b)
        rest ^= b
    return best[0], best[1], parts, claimed


def _partition_removed_set(d, parts, claimed) -> frozenset:
    _, _, type_sinks = _partition_profile(d)
    x = []
    for m, ts in type_sinks.items():
        if not any(m & b == m for b in parts):
            x.extend(ts)
    for b in parts:
        if b in claimed:
            x.extend(type_sinks.get(b, []))
    return frozenset(x)


def _tside_partition_min(d, heavy) -> HallViolator | None:
    """The sink-side component condition via the source-partition DP.

    Exact for any sink count once the source side is small; the only
    cases the partition optimum cannot see are removals that leave the
    sources connected, and those never violate (their surplus is the
    kept-sink deficit, nonnegative by counting).
    """
    if d.sigma(frozenset()) > 1:
        worst = None
        for t in sorted(d.sinks):
            val = 1 - d.sigma(frozenset({t}))
            if worst is None or val < worst[0]:
                worst = (val, t)
        assert worst is not None and worst[0] < 0
        return HallViolator(
            side="T", vertices=frozenset({worst[1]}), tag="sigma"
        )
    pos, _, _ = _partition_profile(d)
    nt = len(d.sinks)
    extra = {}
    for u, k in heavy:
        i = pos[u]
        extra[i] = max(extra.get(i, 0), k - 1)
    if len(d.sources) == 1:
        claim = extra.get(0, 0)
        if nt - 1 - claim < 0:
            return HallViolator(side="T", vertices=d.sink_set, tag="sigma")
        return None
    value, _, parts, claimed = _best_split_partition(d, extra)
    if nt - value >= 0:
        return None
    x = _partition_removed_set(d, parts, claimed)
    assert x, "a violating removal is nonempty"
    return HallViolator(side="T", vertices=x, tag="sigma")


def degree_feasibility(d, pins: dict) -> HallViolator | None:
    """Can some tight dijoin meet every pin b(u) = k exactly?

    Pins may only sit on free sources. Feasibility is equivalent to the
    component-count conditions of the digraft with each pinned source
    split into k tight copies; both sides are checked on that splitting
    without materializing it.
    """
    sinks, t_table, t_auto, sources, s_sigma, n_mask = _tables(d)
    heavy = [(u, k) for u, k in pins.items() if k >= 2]

    if t_table is not None:
        best = None
        for mask in range(1, 1 << len(sinks)):
            f = t_table[mask]
            for u, k in heavy:
                if n_mask[u] & ~mask == 0:
                    f -= k - 1
            if f < 0 and (best is None or f < best[0]):
                best = (f, mask)
        if best is not None:
            x = frozenset(
                sinks[i] for i in range(len(sinks)) if best[1] >> i & 1
            )
            return HallViolator(side="T", vertices=x, tag="sigma")
    elif t_auto:
        # every sink has two in-arcs and the digraft is 2-edge-connected,
        # so removing any proper sink set leaves at most that many
        # components; only the all-sinks count can fail
        slack = len(sinks) - len(sources) - sum(k - 1 for _, k in heavy)
        if slack < 0:
            return HallViolator(
                side="T", vertices=d.sink_set, tag="sigma"
            )
    elif len(sources) <= _PARTITION_SOURCE_LIMIT:
        viol = _tside_partition_min(d, heavy)
        if viol is not None:
            return viol
    else:
        corr_sets = [(frozenset(d.source_neighbors[u]), k) for u, k in heavy]

        def g(x: frozenset) -> int:
            val = len(x) - d.sigma(x)
            for nb, k in corr_sets:
                if nb <= x:
                    val -= k - 1
            return val

        best = None
        for t in sinks:
            orc = SubmodularOracle(
                ground=tuple(sinks), evaluate=g, forced_in=frozenset({t})
            )
            x, val = minimize(orc)
            if val < 0 and (best is None or val < best[0]):
                best = (val, x)
        if best is not None:
            return HallViolator(side="T", vertices=best[1], tag="sigma")

    atoms = sorted(d.tight_sources) + sorted(pins)
    weight = {u: 1 for u in d.tight_sources}
    weight.update(pins)
    if len(atoms) <= _S_TABLE_LIMIT and s_sigma is not None:
        src_pos = {s: i for i, s in enumerate(sources)}
        best = None
        for mask in range(1, 1 << len(atoms)):
            chosen = [atoms[i] for i in range(len(atoms)) if mask >> i & 1]
            smask = 0
            for u in chosen:
                smask |= 1 << src_pos[u]
            f = sum(weight[u] for u in chosen) - s_sigma[smask]
            if f < 0 and (best is None or f < best[0]):
                best = (f, frozenset(chosen))
        if best is not None:
            return HallViolator(side="S", vertices=best[1], tag="sigma")
    elif atoms:

        def h(y: frozenset) -> int:
            return sum(weight[u] for u in y) - d.sigma(y)

        best = None
        for u in atoms:
            orc = SubmodularOracle(
                ground=tuple(atoms), evaluate=h, forced_in=frozenset({u})
            )
            y, val = minimize(orc)
            if val < 0 and (best is None or val < best[0]):
                best = (val, y)
        if best is not None:
            return HallViolator(side="S", vertices=best[1], tag="sigma")
    return None


def perfect_b_matching(d, b: dict, require_dijoin: bool = True):
    """Realize the degree sequence b, one arc into every sink.

    Returns the arc set, or a HallViolator. With require_dijoin the
    matching is also checked to cross every dicut; that property depends
    only on b, so failure certifies that no matching with these degrees
    is a dijoin.
    """
    total = sum(int(b.get(s, 0)) for s in d.sources)
    if total != len(d.sinks):
        return HallViolator(side="S", vertices=d.source_set, tag="total")
    ok, result = bipartite_b_matching(d.sources, d.sinks, d.arcs, b)
    if not ok:
        return HallViolator(side="S", vertices=result, tag="hall")
    if require_dijoin:
        viol = _dijoin_violator(d, result)
        if viol is not None:
            return viol
    return result


def _dijoin_violator(d, j: frozenset) -> HallViolator | None:
    """Check that flipping j leaves the digraft strongly connected.

    Contracting each sink into its matched source turns the flipped
    digraft into a digraph on the sources: every unmatched arc (u, t)
    becomes u -> match(t). An in-closed vertex set X of that digraph
    yields the violator S minus X, whose demand fills its whole
    neighborhood and so leaves a dicut uncrossed.
    """
    match = {}
    for a in j:
        u, t = d.arcs[a]
        match[t] = u
    edges = []
    for a, (u, t) in enumerate(d.arcs):
        if a not in j and t in match:
            edges.append((u, match[t]))
    missing = [t for t in d.sinks if t not in match]
    if missing:
        return HallViolator(side="T", vertices=frozenset(missing), tag="hall")
    sccs = strongly_connected_components(d.sources, edges)
    if len(sccs) == 1:
        return None
    incoming = {i: False for i in range(len(sccs))}
    comp_of = {}
    for i, comp in enumerate(sccs):
        for v in comp:
            comp_of[v] = i
    for u, v in edges:
        if comp_of[u] != comp_of[v]:
            incoming[comp_of[v]] = True
    candidates = [sccs[i] for i, has in incoming.items() if not has]
    x = min(candidates, key=lambda c: min(c))
    return HallViolator(
        side="S", vertices=d.source_set - x, tag="dicut"
    )


def find_tight_dijoin(d):
    """A tight dijoin, or a component-count violator showing none exists.

    Free sources are pinned in id order at the least feasible degree; the
    last one is forced by the degree sum. Results are cached per digraft.
    """
    cached = _BASE.get(d)
    if cached is not None:
        return cached
    result = _find_tight_dijoin(d)
    _BASE[d] = result
    return result


def _find_tight_dijoin(d):
    viol = degree_feasibility(d, {})
    if viol is not None:
        return viol
    frees = list(d.free_sources)
    pins: dict = {}
    budget = len(d.sinks) - len(d.tight_sources)
    for u in frees[:-1]:
        remaining = len(frees) - len(pins) - 1
        hi = budget - sum(pins.values()) - remaining
        for k in range(1, hi + 1):
            pins[u] = k
            if degree_feasibility(d, pins) is None:
                break
            del pins[u]
        else:
            raise AssertionError("pin scan exhausted on a feasible face")
    b = {s: 1 for s in d.tight_sources}
    b.update(pins)
    b[frees[-1]] = budget - sum(pins.values())
    result = perfect_b_matching(d, b, require_dijoin=True)
    if isinstance(result, HallViolator):
        raise AssertionError("realization failed on a feasible sequence")
    return result


def tight_dijoin_through(d, arc: int) -> frozenset:
    """A tight dijoin containing the given arc.

    Starts from the cached base dijoin and reroutes one unit: the target
    arc's sink is deleted, its old server loses one degree, and a fresh
    matching on the rest is glued back around the target arc.
    """
    base = find_tight_dijoin(d)
    if isinstance(base, HallViolator):
        raise Infeasible("digraft has no tight dijoin", violator=base)
    if arc in base:
        return base
    u, w = d.arcs[arc]
    served = next(a for a in base if d.arcs[a][1] == w)
    if d.arcs[served][0] == u:
        return frozenset(base - {served}) | {arc}
    b = d.degree_sequence(base)
    b[u] -= 1
    keep = [a for a, (x, y) in enumerate(d.arcs) if y != w]
    ok, picked = bipartite_b_matching(
        d.sources,
        [t for t in d.sinks if t != w],
        [d.arcs[a] for a in keep],
        b,
    )
    if not ok:
        raise AssertionError("rerouting must stay feasible")
    return frozenset(keep[i] for i in picked) | {arc}


def edge_cover_raw(sources, sinks, arcs, tight):
    """Degree-constrained cover on raw bipartite data.

    Degree 1 at every sink and tight source, at least 1 elsewhere; no
    dicut condition. Returns (True, arc index set) or (False, violator).
    """
    sources = list(sources)
    sinks = list(sinks)
    tight = frozenset(tight)
    idx = {}
    for v in sources + sinks:
        idx[v] = len(idx)
    hub = len(idx)
    edges = []
    for s in sources:
        hi = 1 if s in tight else max(1, len(sinks))
        edges.append((hub, idx[s], 1, hi))
    arc_pos = []
    for x, y in arcs:
        arc_pos.append(len(edges))
        edges.append((idx[x], idx[y], 0, 1))
    for t in sinks:
        edges.append((idx[t], hub, 1, 1))
    ok, result = feasible_circulation(hub + 1, edges)
    if ok:
        picked = frozenset(a for a, p in enumerate(arc_pos) if result[p] == 1)
        return True, picked
    # the residual cut gives one of two counting violations: either the
    # sinks outside it with no supplier inside it outnumber their (all
    # tight) suppliers, or the sources inside it outnumber their sinks
    reached = result
    feeders = {t: set() for t in sinks}
    for x, y in arcs:
        feeders[y].add(x)
    x_in = frozenset(s for s in sources if idx[s] in reached)
    z_in = frozenset(t for t in sinks if idx[t] in reached)
    if hub in reached:
        y = frozenset(
            t for t in sinks if t not in z_in and not (feeders[t] & x_in)
        )
        return False, HallViolator(side="T", vertices=y, tag="cover")
    return False, HallViolator(side="S", vertices=x_in, tag="cover")


def tight_edge_cover(d):
    """An arc set covering every vertex, degree 1 at tight vertices.

    Solved as a circulation with unit lower bounds; failure yields a
    sink set demanding more than its forced suppliers can give, or a
    source set with too few sinks to stand on.
    """
    ok, result = edge_cover_raw(d.sources, d.sinks, d.arcs, d.tight_sources)
    return result


def _in_face(d, b: dict) -> bool:
    return not isinstance(perfect_b_matching(d, b, True), HallViolator)


def _exchange_walk(d, b: dict, z: frozenset, raise_z: bool, stop_at=None):
    """Move b one exchange at a time, monotonically in b(Z).

    Each step shifts one unit of degree onto the preferred side, taking
    the smallest-id eligible pair. Stops when b(Z) reaches stop_at, or at
    the face optimum when stop_at is None. Returns the final b.
    """
    free = [s for s in d.sources if s not in d.tight_sources]
    gain = sorted(s for s in free if (s in z) == raise_z)
    lose = sorted(s for s in free if (s in z) != raise_z)
    bz = sum(b[s] for s in d.sources if s in z)
    while stop_at is None or bz != stop_at:
        moved = False
        for v in gain:
            for u in lose:
                if b[u] <= 1:
                    continue
                cand = dict(b)
                cand[v] += 1
                cand[u] -= 1
                if _in_face(d, cand):
                    b = cand
                    bz += 1 if raise_z else -1
                    moved = True
                    break
            if moved:
                break
        if not moved:
            break
    return b


def _base_degrees(d) -> dict:
    j = find_tight_dijoin(d)
    if isinstance(j, HallViolator):
        raise Infeasible("digraft has no tight dijoin", violator=j)
    return d.degree_sequence(j)


def extremal_crossing(d, z, direction: str):
    """Tight dijoin with extremal crossing |N(Z)| - b(Z) at the dicut
    that Z and its neighborhood leave behind. Returns (arc set, value)."""
    z = frozenset(z)
    if not z or not z < d.source_set:
        raise ValueError("need a nonempty proper source subset")
    if direction not in ("min", "max"):
        raise ValueError("direction must be 'min' or 'max'")
    b = _base_degrees(d)
    # min crossing means max b(Z)
    b = _exchange_walk(d, b, z, raise_z=(direction == "min"))
    j = perfect_b_matching(d, b, require_dijoin=True)
    nz = len({t for s in z for t in d.source_neighbors[s]})
    return j, nz - sum(b[s] for s in z)


def crossing_number(d, shore: frozenset, j) -> int:
    return sum(
        1 for a in j if d.arcs[a][0] in shore and d.arcs[a][1] not in shore
    )


def jump_free(d, shore, lam: int) -> frozenset:
    """Tight dijoin crossing the dicut at ``shore`` exactly lam times.

    The crossing count is |T outside| - b(S outside), so the walk adjusts
    b on the outside sources one exchange at a time; the intermediate
    value lam is always reachable when it sits between the extremes.
    """
    shore = frozenset(shore)
    d.shore_dicut(shore)
    z = d.source_set - shore
    out_sinks = len(d.sink_set - shore)
    j0 = find_tight_dijoin(d)
    if isinstance(j0, HallViolator):
        raise Infeasible("digraft has no tight dijoin", violator=j0)
    b0 = d.degree_sequence(j0)
    cur = out_sinks - sum(b0[s] for s in z)
    if lam == cur:
        return j0
    if not any(s in z and s not in d.tight_sources for s in d.sources):
        raise OutOfRange(lam, cur, cur)
    target_bz = out_sinks - lam
    bz0 = sum(b0[s] for s in z)
    b = _exchange_walk(d, dict(b0), z, raise_z=target_bz > bz0, stop_at=target_bz)
    if sum(b[s] for s in z) == target_bz:
        return perfect_b_matching(d, b, require_dijoin=True)
    lo_b = _exchange_walk(d, dict(b0), z, raise_z=False)
    hi_b = _exchange_walk(d, dict(b0), z, raise_z=True)
    lo = out_sinks - sum(hi_b[s] for s in z)
    hi = out_sinks - sum(lo_b[s] for s in z)
    raise OutOfRange(lam, lo, hi)


def tight_sources(d) -> frozenset:
    """Sources whose degree is 1 in every tight dijoin.

    A free source is forced exactly when degree 1 is attainable and
    degree 2 is not. Cached per digraft; raises on uncovered digrafts.
    """
    cached = _TIGHT.get(d)
    if cached is not None:
        return cached
    _base_degrees(d)
    frees = list(d.free_sources)
    out = set(d.tight_sources)
    if len(frees) == 1:
        forced = len(d.sinks) - len(d.tight_sources)
        if forced == 1:
            out.add(frees[0])
    else:
        for s in frees:
            if (
                degree_feasibility(d, {s: 1}) is None
                and degree_feasibility(d, {s: 2}) is not None
            ):
                out.add(s)
    result = frozenset(out)
    _TIGHT[d] = result
    return result
