"""Integral bases of tight dijoins, from ears up to full digrafts.

Every construction here outputs tight dijoins whose lattice equals the
integer points of their linear hull. Elementary digrafts (one free
source) get an ear decomposition with a triangular certificate; robust
digrafts reduce to elementary by promoting one free source at a time;
non-robust bricks walk a dominance order on non-tight dicuts until a
dicut is found whose contraction or promotion splits the instance
cleanly; the top-level routine decomposes along tight dicuts and glues
the leaf bases back together.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from . import oracle
from .decompose import (
    contractions,
    glue_bases,
    tight_dicut_decomposition,
)
from .errors import (
    BadCrossing,
    ChainBoundExceeded,
    Imbalanced,
    Infeasible,
    LoopBoundExceeded,
    NotBrick,
    NotCovered,
    NotElementary,
    NotRobust,
)
from .feasibility import (
    HallViolator,
    _dijoin_violator,
    find_tight_dijoin,
    jump_free,
    perfect_b_matching,
    tight_dijoin_through,
    tight_sources,
)
from .flow import bipartite_b_matching
from .graphs import GeneralDigraft, uncross_family
from .structure import Barrier, classify, is_basic, robustness


@dataclass(frozen=True)
class EarDecomposition:
    """Starting star plus odd ears covering an elementary digraft.

    ``f`` is the free source's arc set inside the base solution ``j0``;
    each ear is an odd alternating path recorded in walk order. Ear
    count equals |A| - |V| + 1.
    """

    digraft: object
    f: tuple[int, ...]
    ears: tuple[tuple[int, ...], ...]
    j0: frozenset

    @property
    def r(self) -> int:
        return len(self.ears)

    @property
    def markers(self) -> tuple[int, ...]:
        """One arc per basis element: min of f, then each ear's first
        arc (an odd arc, so it appears in no earlier element)."""
        return (min(self.f),) + tuple(ear[0] for ear in self.ears)


@dataclass(frozen=True)
class DicutChain:
    """Strictly dominating dicuts found on the way to a good one.

    ``dijoins[i]`` certifies the step: it crosses ``cuts[i]`` twice and
    ``cuts[i+1]`` once. Indicator vectors of the cuts are linearly
    independent, bounding the chain by the arc count.
    """

    shores: tuple = ()
    cuts: tuple = ()
    dijoins: tuple = ()

    def __len__(self) -> int:
        return len(self.shores)


@dataclass(frozen=True)
class BasisReport:
    basis: tuple
    size_formula: dict
    certified: bool
    oracle: dict | None = None

    def to_json(self) -> dict:
        return {
            "basis": [sorted(j) for j in self.basis],
            "size_formula": dict(self.size_formula),
            "certified": self.certified,
            "oracle": self.oracle,
        }


def _assert_tight_dijoin(d, j) -> frozenset:
    j = frozenset(j)
    deg = d.degree_sequence(j)
    heads = [d.arcs[a][1] for a in j]
    assert len(heads) == len(set(heads)) == len(d.sinks)
    assert all(deg[s] == 1 for s in d.tight_sources)
    assert all(deg[s] >= 1 for s in d.sources)
    assert _dijoin_violator(d, j) is None
    return j


def _with_tight(d, extra) -> object:
    return replace(d, tight_sources=d.tight_sources | frozenset(extra))


def _mapped(amap, basis) -> list[frozenset]:
    return [frozenset(amap[a] for a in j) for j in basis]


# -- elementary digrafts ---------------------------------------------------


def ear_decomposition(d) -> EarDecomposition:
    """Grow the digraft from the free source's star by odd ears.

    Each ear starts at the smallest unexplored arc touching the current
    prefix, runs through the symmetric difference of the base solution
    and one through that arc, and stops at the first prefix vertex.
    Every prefix stays covered, so the walk never dead-ends.
    """
    if len(d.tight_sources) != len(d.sources) - 1:
        raise NotElementary("need every source but one tight")
    j0 = find_tight_dijoin(d)
    if isinstance(j0, HallViolator):
        raise NotElementary("digraft has no tight dijoin")
    (s0,) = d.free_sources
    f = tuple(sorted(a for a in j0 if d.arcs[a][0] == s0))
    vertices = {s0} | {d.arcs[a][1] for a in f}
    arcs_seen = set(f)
    ears = []
    m = len(d.arcs)
    while len(arcs_seen) < m:
        e = min(
            a
            for a in range(m)
            if a not in arcs_seen
            and (d.arcs[a][0] in vertices or d.arcs[a][1] in vertices)
        )
        ear = _ear_walk(d, j0, tight_dijoin_through(d, e), e, vertices)
        ears.append(ear)
        for a in ear:
            arcs_seen.add(a)
            vertices.add(d.arcs[a][0])
            vertices.add(d.arcs[a][1])
    assert len(ears) == m - len(d.vertex_set) + 1
    return EarDecomposition(
        digraft=d, f=f, ears=tuple(tuple(p) for p in ears), j0=j0
    )


def _ear_walk(d, j0, j, e, prefix) -> list[int]:
    delta = frozenset(j0) ^ frozenset(j)
    at: dict[int, list[int]] = {}
    for a in delta:
        x, y = d.arcs[a]
        at.setdefault(x, []).append(a)
        at.setdefault(y, []).append(a)
    x, y = d.arcs[e]
    cur = y if x in prefix else x
    path = [e]
    prev = e
    while cur not in prefix:
        # off the prefix every degree is fixed, so exactly one arc
        # continues the alternating cycle
        (nxt,) = [a for a in at[cur] if a != prev]
        path.append(nxt)
        x2, y2 = d.arcs[nxt]
        cur = y2 if x2 == cur else x2
        prev = nxt
    assert len(path) % 2 == 1
    return path


def elementary_basis(d) -> list[frozenset]:
    """Base solution plus one solution per ear, triangular over markers.

    The ear solution rebuilds the previous prefix with one unit shifted
    off the ear's source endpoint, then rides the ear's odd arcs and
    the later ears' even arcs back up to the full digraft.
    """
    ed = ear_decomposition(d)
    (s0,) = d.free_sources
    b_s0 = len(d.sinks) - len(d.sources) + 1
    prefixes = [frozenset({s0}) | frozenset(d.arcs[a][1] for a in ed.f)]
    prefix_arcs = [frozenset(ed.f)]
    for ear in ed.ears:
        grown = set(prefixes[-1])
        for a in ear:
            grown.add(d.arcs[a][0])
            grown.add(d.arcs[a][1])
        prefixes.append(frozenset(grown))
        prefix_arcs.append(prefix_arcs[-1] | frozenset(ear))
    basis = [frozenset(ed.j0)]
    for i, ear in enumerate(ed.ears, start=1):
        prev_v = prefixes[i - 1]
        ends = [v for v in d.arcs[ear[0]] if v in prev_v]
        ends += [v for v in d.arcs[ear[-1]] if v in prev_v]
        (u,) = set(v for v in ends if v in d.source_set)
        (w,) = set(v for v in ends if v in d.sink_set)
        b = {v: 1 for v in prev_v & d.source_set}
        b[s0] = b_s0
        b[u] -= 1
        gone = {w} | ({u} if b[u] == 0 else set())
        kept = [
            a
            for a in sorted(prefix_arcs[i - 1])
            if d.arcs[a][0] not in gone and d.arcs[a][1] not in gone
        ]
        ok, picked = bipartite_b_matching(
            sorted((prev_v & d.source_set) - gone),
            sorted((prev_v & d.sink_set) - gone),
            [d.arcs[a] for a in kept],
            b,
        )
        assert ok, "prefix rebuild must stay feasible"
        j = {kept[k] for k in picked}
        j.update(ear[::2])
        for later in ed.ears[i:]:
            j.update(later[1::2])
        basis.append(_assert_tight_dijoin(d, j))
    return basis


def _brace_basis(d) -> list[frozenset]:
    # equal sides force every degree to 1, so the tight flags are
    # immaterial; pin all but the largest source and use ears
    elem = replace(d, tight_sources=d.source_set - {max(d.sources)})
    return elementary_basis(elem)


# -- robust digrafts -------------------------------------------------------


def robust_basis(d) -> list[frozenset]:
    """Promote free sources one at a time, then finish with ears.

    Each promotion step adds one solution with degree 2 at the promoted
    vertex; all later elements keep it at degree 1, so every prefix of
    the output extends the basis of the more constrained digraft.
    """
    if len(d.sources) == len(d.sinks):
        raise Imbalanced("equal sides never reach an elementary digraft")
    witness = robustness(d)
    if witness is not None:
        raise NotRobust("a tight edge cover avoids a dicut", witness=witness)
    frees = sorted(d.free_sources)
    basis = []
    current = d
    for k, v in enumerate(frees[:-1]):
        vp = min(u for u in frees[k + 1 :])
        b = {s: 1 for s in current.sources}
        b[v] = 2
        b[vp] = len(d.sinks) - len(d.sources)
        j = perfect_b_matching(current, b, require_dijoin=True)
        assert not isinstance(j, HallViolator), "promotion step must realize"
        basis.append(frozenset(j))
        current = _with_tight(current, {v})
    basis.extend(elementary_basis(current))
    return basis


# -- good-dicut search on bricks -------------------------------------------


def _lift_shore(d, child_shore, star, mode, shore):
    """Map a contraction's out-shore back to the parent, dropping
    shores whose parent dicut is trivially tight."""
    ps = frozenset(child_shore)
    if mode != "promoted" and star in ps:
        collapsed = d.vertex_set - shore if mode == "in" else shore
        ps = (ps - {star}) | collapsed
    rest = d.vertex_set - ps
    if len(rest) == 1 and next(iter(rest)) in d.sink_set:
        return None
    if len(ps) == 1 and next(iter(ps)) in d.tight_sources:
        return None
    d.shore_dicut(ps)
    return ps


def find_contractible(d, sep) -> frozenset:
    """Walk from a separating dicut to one whose contractions are covered.

    The avoiding cover is kept fixed; whenever a contraction has no
    solution, the violating set shatters that side into components, at
    least one of which hangs behind a dicut the cover misses, and every
    solution crosses that dicut strictly fewer times.
    """
    shore = frozenset(sep.shore)
    cover = frozenset(sep.cover)
    for _ in range(len(d.vertex_set)):
        cut = d.shore_dicut(shore)
        assert not (cover & cut)
        (inner, _), (outer, _) = contractions(d, shore)
        j_in = find_tight_dijoin(inner)
        j_out = find_tight_dijoin(outer)
        if not isinstance(j_in, HallViolator) and not isinstance(
            j_out, HallViolator
        ):
            return shore
        if isinstance(j_in, HallViolator):
            g, star, viol = inner, min(d.vertex_set - shore), j_in
            mode = "in"
        else:
            g, star, viol = outer, min(shore), j_out
            mode = "out"
        assert star in viol.vertices, "violator must use the contracted side"
        comps = g.components_after_removal(viol.vertices)
        if viol.side == "T":
            child_shores = comps
        else:
            child_shores = [g.vertex_set - k for k in comps]
        best = None
        for cs in child_shores:
            ps = _lift_shore(d, cs, star, mode, shore)
            if ps is None or d.is_trivial_shore(ps):
                continue
            if cover & d.shore_dicut(ps):
                continue
            key = (len(ps), tuple(sorted(ps)))
            if best is None or key < best[0]:
                best = (key, ps)
        assert best is not None, "the cover must miss some component dicut"
        shore = best[1]
    raise LoopBoundExceeded(
        "separating-dicut walk exceeded the vertex count"
    )


def _near_brick_and_tight(g) -> bool:
    if tight_dicut_decomposition(g).brick_count != 1:
        return False
    return tight_sources(g) == g.tight_sources


def _goodness_failures(d, shore):
    """Contractions (or the promotion) that block the dicut from being
    good, each paired with its star vertex and side."""
    if len(shore) == 1:
        (u,) = shore
        g = _with_tight(d, {u})
        return [] if _near_brick_and_tight(g) else [(g, u, "promoted")]
    (inner, _), (outer, _) = contractions(d, shore)
    out = []
    if not _near_brick_and_tight(outer):
        out.append((outer, min(shore), "out"))
    if not _near_brick_and_tight(inner):
        out.append((inner, min(d.vertex_set - shore), "in"))
    return out


def _improving_candidates(d, g, star, mode, shore):
    verdict = is_basic(g)
    assert verdict is not True, "a basic contraction cannot fail the checks"
    if isinstance(verdict, Barrier):
        assert star in verdict.members
        comps = g.components_after_removal(verdict.members)
        if verdict.side == "T":
            child_shores = list(comps)
        else:
            child_shores = [g.vertex_set - k for k in comps]
    else:
        assert star in (verdict.source, verdict.sink)
        child_shores = list(verdict.shores)
    out = []
    for cs in child_shores:
        ps = _lift_shore(d, cs, star, mode, shore)
        if ps is not None:
            out.append(ps)
    return out


def find_good_dicut(d, c):
    """From a contractible dicut of a brick to a good one, with the
    chain of strictly dominating dicuts found along the way.

    Every non-good dicut yields a barrier or 2-separation in a failing
    contraction; its components give dicuts every solution crosses at
    most as often. A crossing-2 solution picks out the strict ones;
    when only the equally-dominating dicut remains the walk shifts to
    it and keeps shrinking one side until the stable case appears.
    """
    shore = frozenset(c)
    d.shore_dicut(shore)
    chain_shores: list[frozenset] = []
    chain_cuts: list[frozenset] = []
    chain_dijoins: list[frozenset] = []
    bound = len(d.arcs) + len(d.vertex_set)
    for _ in range(bound):
        failures = _goodness_failures(d, shore)
        if not failures:
            return shore, DicutChain(
                shores=tuple(chain_shores),
                cuts=tuple(chain_cuts),
                dijoins=tuple(chain_dijoins),
            )
        j2 = jump_free(d, shore, 2)
        nxt = None
        for g, star, mode in failures:
            cands = _improving_candidates(d, g, star, mode, shore)
            if not cands:
                continue
            strict = [
                ps for ps in cands if len(j2 & d.shore_dicut(ps)) == 1
            ]
            pool = strict or cands
            pick = min(pool, key=lambda ps: (len(ps), tuple(sorted(ps))))
            nxt = (pick, j2 if strict else None)
            break
        assert nxt is not None, "a failing contraction must yield a dicut"
        shore, certificate = nxt
        if certificate is not None:
            if not chain_shores:
                chain_shores.append(frozenset(c))
                chain_cuts.append(d.shore_dicut(frozenset(c)))
            chain_shores.append(shore)
            chain_cuts.append(d.shore_dicut(shore))
            chain_dijoins.append(certificate)
    raise ChainBoundExceeded("good-dicut walk exceeded arcs plus vertices")


# -- bricks and the full pipeline ------------------------------------------


def extend_with_crossing2(b_prime, j0, c) -> list[frozenset]:
    """Append one crossing-2 solution to a basis of crossing-1 ones.

    Integrality survives: expanding any solution over the result, the
    new coefficient is fixed by the crossing count and the rest reduces
    to the crossing-1 lattice.
    """
    c = frozenset(c)
    j0 = frozenset(j0)
    out = []
    for j in b_prime:
        j = frozenset(j)
        if len(j & c) != 1:
            raise BadCrossing(
                f"basis element crosses the dicut {len(j & c)} times, need 1"
            )
        out.append(j)
    if len(j0 & c) != 2:
        raise BadCrossing(
            f"added solution crosses the dicut {len(j0 & c)} times, need 2"
        )
    out.append(j0)
    return out


def brick_basis(d) -> list[frozenset]:
    """Basis for a brick: robust promotion when possible, otherwise a
    good dicut is promoted or contracted and the pieces are glued.

    Recursion shrinks the vertex count or the free-source count at
    every step. Output size is |A| - |tight vertices| + 1.
    """
    kind = classify(d).kind
    if kind != "brick":
        raise NotBrick(f"digraft is {kind}, need a brick")
    witness = robustness(d)
    if witness is None:
        return robust_basis(d)
    good, _ = find_good_dicut(d, find_contractible(d, witness))
    cut = d.shore_dicut(good)
    j0 = _assert_tight_dijoin(d, jump_free(d, good, 2))
    if len(good) == 1:
        promoted = _with_tight(d, good)
        if classify(promoted).kind == "brick":
            b_prime = brick_basis(promoted)
        else:
            b_prime = _covered_basis(promoted)
    else:
        (inner, imap), (outer, omap) = contractions(d, good)
        b_prime = glue_bases(
            d,
            good,
            _mapped(imap, _covered_basis(inner)),
            _mapped(omap, _covered_basis(outer)),
        )
    return extend_with_crossing2(b_prime, j0, cut)


def _node_basis(node) -> list[frozenset]:
    if node.is_leaf:
        if node.kind == "brace":
            return _brace_basis(node.digraft)
        assert node.kind == "brick", f"unexpected leaf kind {node.kind}"
        return brick_basis(node.digraft)
    inner, outer = node.children
    imap, omap = node.arc_maps
    return glue_bases(
        node.digraft,
        node.shore,
        _mapped(imap, _node_basis(inner)),
        _mapped(omap, _node_basis(outer)),
    )


def _covered_basis(d) -> list[frozenset]:
    return _node_basis(tight_dicut_decomposition(d).root)


def _behavioral_tight_total(tree) -> int:
    """Sources of the root digraft with degree 1 in every solution.

    Each original vertex survives into exactly one leaf, where its
    degree options match the root's; stars never count.
    """
    total = 0

    def walk(node, real):
        nonlocal total
        if node.is_leaf:
            total += len(tight_sources(node.digraft) & real)
            return
        inner, outer = node.children
        walk(inner, real & node.shore)
        walk(outer, real - node.shore)

    walk(tree.root, tree.root.digraft.vertex_set)
    return total


def digraft_basis(d, verify: bool = False) -> BasisReport:
    """Integral basis of the solution lattice of a digraft.

    Crossing family members are uncrossed, nontrivial members contracted
    away, the remainder split along tight dicuts into bricks and braces,
    and the leaf bases glued back up. Size comes out to
    |A| - |tight vertices| - bricks + 2. With ``verify`` the result is
    certified against full enumeration.
    """
    work = uncross_family(d) if isinstance(d, GeneralDigraft) else d
    try:
        tree = tight_dicut_decomposition(work)
    except NotCovered as exc:
        raise Infeasible(str(exc), violator=exc.violator) from exc
    basis = _node_basis(tree.root)
    root = tree.root.digraft
    n = len(root.arcs)
    v_tight = len(root.sinks) + _behavioral_tight_total(tree)
    bricks = tree.brick_count
    expected = n - v_tight - bricks + 2
    assert len(basis) == expected, "size formula must hold"
    certified = False
    cert_json = None
    if verify:
        cert = oracle.verify_integral_basis(
            basis, list(oracle.enumerate_tight_dijoins(d)), n
        )
        certified = bool(cert.ok)
        cert_json = cert.to_json()
    return BasisReport(
        basis=tuple(basis),
        size_formula={
            "arcs": n,
            "tight_vertices": v_tight,
            "bricks": bricks,
            "expected": expected,
            "actual": len(basis),
        },
        certified=certified,
        oracle=cert_json,
    )
