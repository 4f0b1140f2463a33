"""Brute-force oracles and lattice certification.

Everything here is deliberately independent of the fast algorithms: tight
orientations come from trying all orientations, tight dijoins from trying
all per-sink arc choices, and dijoin-ness is checked against an explicit
enumeration of all dicuts. Arc sets travel as bitmask ints internally and
frozensets at the API edge.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .canon import canonical_digraft
from .errors import EmptyConstrainedLattice, TooLarge
from .graphs import (
    Digraft,
    GeneralDigraft,
    UndirectedMultigraph,
    is_strongly_connected,
)
from .intlinalg import (
    bareiss_rank,
    rank_mod_p,
    smith_normal_form,
    solve_integral,
)

_CROSSCHECK_PRIME = 2_147_483_629


def _mask_to_set(mask: int) -> frozenset:
    out = set()
    a = 0
    while mask:
        if mask & 1:
            out.add(a)
        mask >>= 1
        a += 1
    return frozenset(out)


def enumerate_tight_scos(
    g: UndirectedMultigraph, family=(), cap: int = 16
) -> list[frozenset]:
    """All orientations that are strongly connected and cross each family
    member's boundary inward exactly once. Arc ids: edge k gives 2k as
    stored and 2k+1 reversed."""
    m = len(g.edges)
    if m > cap:
        raise TooLarge(f"{m} edges exceeds enumeration cap {cap}")
    members = [frozenset(u) for u in family]
    verts = list(range(g.n))
    out = []
    for bits in range(1 << m):
        arcs = []
        ids = []
        for k, (u, v) in enumerate(g.edges):
            if bits >> k & 1:
                arcs.append((v, u))
                ids.append(2 * k + 1)
            else:
                arcs.append((u, v))
                ids.append(2 * k)
        ok = True
        for memb in members:
            entering = sum(
                1 for (x, y) in arcs if y in memb and x not in memb
            )
            if entering != 1:
                ok = False
                break
        if ok and is_strongly_connected(verts, arcs):
            out.append(frozenset(ids))
    return sorted(out, key=sorted)


def all_out_shores(d) -> list[frozenset]:
    """Every dicut shore: a vertex set with no entering arc and some
    leaving arc. Enumerated as (source subset, subset of fully-fed sinks)."""
    src = list(d.sources)
    shores = []
    full = d.vertex_set
    for mask in range(1 << len(src)):
        xs = frozenset(src[i] for i in range(len(src)) if mask >> i & 1)
        fed = [t for t in d.sinks if d.sink_neighbors[t] <= xs]
        for sub in range(1 << len(fed)):
            u = xs | frozenset(fed[i] for i in range(len(fed)) if sub >> i & 1)
            if u and u != full:
                shores.append(u)
    uniq = sorted(set(shores), key=lambda s: (len(s), sorted(s)))
    return [u for u in uniq if any(
        x in u and y not in u for (x, y) in d.arcs
    )]


def dicut_mask(d, shore) -> int:
    mask = 0
    for a, (x, y) in enumerate(d.arcs):
        if x in shore and y not in shore:
            mask |= 1 << a
    return mask


def enumerate_tight_dijoins(d, cap: int = 24) -> list[frozenset]:
    """All arc sets with one arc per sink and per tight source, at least
    one per other source, crossing every family dicut once and every dicut
    at least once. Accepts both digraft forms."""
    if len(d.arcs) > cap:
        raise TooLarge(f"{len(d.arcs)} arcs exceeds enumeration cap {cap}")
    if isinstance(d, GeneralDigraft):
        tight_sources = frozenset(
            next(iter(m)) for m in d.family if len(m) == 1
        )
        member_masks = [
            dicut_mask(d, m)
            for m in d.family
            if not d.is_trivial_shore(m)
        ]
    else:
        tight_sources = d.tight_sources
        member_masks = []
    shore_masks = [dicut_mask(d, u) for u in all_out_shores(d)]
    sinks = list(d.sinks)
    deg = {s: 0 for s in d.sources}
    found: list[int] = []

    def rec(i: int, mask: int):
        if i == len(sinks):
            if any(
                deg[s] == 0 for s in d.sources
            ):
                return
            for mm in member_masks:
                if (mask & mm).bit_count() != 1:
                    return
            for sm in shore_masks:
                if mask & sm == 0:
                    return
            found.append(mask)
            return
        for a in d.in_arcs[sinks[i]]:
            s = d.arcs[a][0]
            if s in tight_sources and deg[s] == 1:
                continue
            deg[s] += 1
            rec(i + 1, mask | (1 << a))
            deg[s] -= 1

    rec(0, 0)
    return sorted((_mask_to_set(m) for m in found), key=sorted)


def enumerate_tight_edge_covers(d: Digraft) -> list[frozenset]:
    """Degree-valid arc sets only: one arc per sink and tight source, at
    least one per free source. No dicut requirement."""
    if len(d.arcs) > 24:
        raise TooLarge("too many arcs for edge cover enumeration")
    sinks = list(d.sinks)
    deg = {s: 0 for s in d.sources}
    found = []

    def rec(i: int, mask: int):
        if i == len(sinks):
            if all(
                deg[s] >= 1 if s not in d.tight_sources else deg[s] == 1
                for s in d.sources
            ):
                found.append(mask)
            return
        for a in d.in_arcs[sinks[i]]:
            s = d.arcs[a][0]
            if s in d.tight_sources and deg[s] == 1:
                continue
            deg[s] += 1
            rec(i + 1, mask | (1 << a))
            deg[s] -= 1

    rec(0, 0)
    return sorted((_mask_to_set(m) for m in found), key=sorted)


@dataclass(frozen=True)
class StructureReport:
    covered: bool
    dijoins: tuple[frozenset, ...]
    edge_covers: tuple[frozenset, ...]
    tight_dicut_shores: tuple[frozenset, ...]
    nontrivial_tight_shores: tuple[frozenset, ...]
    tight_sources: frozenset
    robust: bool
    basic: bool
    brick: bool
    brace: bool


def brute_structure(d: Digraft) -> StructureReport:
    dijoins = enumerate_tight_dijoins(d)
    covers = enumerate_tight_edge_covers(d)
    masks = [sum(1 << a for a in j) for j in dijoins]
    union = 0
    for m in masks:
        union |= m
    all_arcs = (1 << len(d.arcs)) - 1
    covered = bool(masks) and union == all_arcs
    tight_shores = []
    nontrivial = []
    if masks:
        for shore in all_out_shores(d):
            cm = dicut_mask(d, shore)
            if all((m & cm).bit_count() == 1 for m in masks):
                tight_shores.append(shore)
                if not d.is_trivial_shore(shore):
                    nontrivial.append(shore)
    tight_src = frozenset(
        s
        for s in d.sources
        if masks
        and all(
            sum(1 for a in j if d.arcs[a][0] == s) == 1 for j in dijoins
        )
    )
    robust = covered and set(covers) == set(dijoins)
    basic = covered and not nontrivial
    return StructureReport(
        covered=covered,
        dijoins=tuple(dijoins),
        edge_covers=tuple(covers),
        tight_dicut_shores=tuple(tight_shores),
        nontrivial_tight_shores=tuple(nontrivial),
        tight_sources=tight_src,
        robust=robust,
        basic=basic,
        brick=basic and len(d.sources) < len(d.sinks),
        brace=basic and len(d.sources) == len(d.sinks),
    )


def random_decomposition(d: Digraft, seed: int):
    """Decompose along seeded-random nontrivial tight dicuts.

    Returns (sorted tuple of canonical leaf forms, brick count). Bricks are
    canonicalized with tight-source colors, braces without.
    """
    rng = random.Random(seed)

    def go(cur: Digraft):
        rep = brute_structure(cur)
        if not rep.covered:
            raise EmptyConstrainedLattice("decomposing an uncovered digraft")
        if not rep.nontrivial_tight_shores:
            if rep.brick:
                enc = canonical_digraft(
                    cur, simple=True, tight_override=rep.tight_sources
                )
                return [("brick", enc)], 1
            return [("brace", canonical_digraft(cur, with_tight=False, simple=True))], 0
        shore = rng.choice(list(rep.nontrivial_tight_shores))
        inner, _ = cur.contract(shore, "in")
        outer, _ = cur.contract(shore, "out")
        left, bl = go(inner)
        right, br = go(outer)
        return left + right, bl + br

    leaves, bricks = go(d)
    return tuple(sorted(leaves)), bricks


@dataclass(frozen=True)
class LatticeCertificate:
    ok: bool
    basis_size: int
    enumerated_size: int
    rank_basis: int
    rank_enumerated: int
    invariant_factors: tuple[int, ...]
    all_members_solutions: bool
    integral_expansions: bool
    failures: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "basis_size": self.basis_size,
            "enumerated_size": self.enumerated_size,
            "rank_basis": self.rank_basis,
            "rank_enumerated": self.rank_enumerated,
            "invariant_factors": list(self.invariant_factors),
            "all_members_solutions": self.all_members_solutions,
            "integral_expansions": self.integral_expansions,
            "failures": list(self.failures),
        }


def verify_integral_basis(basis, enumerated, n_arcs: int) -> LatticeCertificate:
    """Certify that ``basis`` integrally spans the enumerated solutions.

    Checks membership, linear independence (exact rank with a random-prime
    cross-check), rank agreement with the enumerated span, unit Smith
    invariant factors, and an integral expansion of every enumerated
    solution.
    """
    enumerated = [frozenset(j) for j in enumerated]
    basis = [frozenset(j) for j in basis]
    if not enumerated:
        raise EmptyConstrainedLattice("nothing enumerated to certify against")
    failures = []
    enum_set = set(enumerated)
    members = all(j in enum_set for j in basis)
    if not members:
        failures.append("basis element is not an enumerated solution")
    rows = [[1 if a in j else 0 for a in range(n_arcs)] for j in basis]
    enum_rows = [[1 if a in j else 0 for a in range(n_arcs)] for j in enumerated]
    rank_b = bareiss_rank(rows)
    if rank_b != rank_mod_p(rows, _CROSSCHECK_PRIME):
        failures.append("rank cross-check mismatch")
    rank_e = bareiss_rank(enum_rows)
    if rank_b != len(basis):
        failures.append("basis is linearly dependent")
    if rank_b != rank_e:
        failures.append("basis does not span the enumerated span")
    factors = tuple(smith_normal_form(rows))
    if any(f != 1 for f in factors):
        failures.append("non-unit invariant factor")
    integral = True
    for j, row in zip(enumerated, enum_rows):
        if solve_integral(rows, row) is None:
            integral = False
            failures.append(f"no integral expansion for {sorted(j)}")
            break
    return LatticeCertificate(
        ok=not failures,
        basis_size=len(basis),
        enumerated_size=len(enumerated),
        rank_basis=rank_b,
        rank_enumerated=rank_e,
        invariant_factors=factors,
        all_members_solutions=members,
        integral_expansions=integral,
        failures=tuple(failures),
    )
