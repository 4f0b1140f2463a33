"""Named instances and the test corpus generator.

The corpus is every 2-edge-connected multigraph with at most 5 vertices
and 8 edges, one representative per isomorphism class, paired with a few
cut-family variants. Enumeration goes support-first: connected simple
graphs up to isomorphism, then edge multiplicities deduped by support
automorphisms. That keeps the search space tiny.
"""

from __future__ import annotations

import random
from itertools import combinations

from .canon import canonical_multigraph, multigraph_automorphisms
from .graphs import Digraft, UndirectedMultigraph, components


# -- named multigraphs -------------------------------------------------------

def theta3() -> UndirectedMultigraph:
    """Two vertices joined by three parallel edges."""
    return UndirectedMultigraph(2, ((0, 1), (0, 1), (0, 1)))


def triangle() -> UndirectedMultigraph:
    return UndirectedMultigraph(3, ((0, 1), (1, 2), (0, 2)))


def square() -> UndirectedMultigraph:
    return UndirectedMultigraph(4, ((0, 1), (1, 2), (2, 3), (0, 3)))


def bowtie() -> UndirectedMultigraph:
    """Two triangles sharing vertex 0."""
    return UndirectedMultigraph(
        5, ((0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4))
    )


def doubled_triangle() -> UndirectedMultigraph:
    return UndirectedMultigraph(
        3, ((0, 1), (0, 1), (1, 2), (1, 2), (0, 2), (0, 2))
    )


NAMED_GRAPHS = {
    "theta3": theta3,
    "triangle": triangle,
    "square": square,
    "bowtie": bowtie,
    "doubled_triangle": doubled_triangle,
}


# -- named digrafts ----------------------------------------------------------

def theta3_digraft(tight: bool = False) -> Digraft:
    return Digraft(
        sources=(0, 1),
        sinks=(2, 3, 4),
        arcs=((0, 2), (1, 2), (0, 3), (1, 3), (0, 4), (1, 4)),
        tight_sources=frozenset({1} if tight else ()),
    )


def figure_left() -> Digraft:
    """Five sources, six sinks; {6, 7, 8} is a sink-side barrier."""
    return Digraft(
        sources=(0, 1, 2, 3, 4),
        sinks=(5, 6, 7, 8, 9, 10),
        arcs=(
            (0, 5), (0, 6), (0, 7),
            (1, 5), (1, 7), (1, 8),
            (2, 6), (2, 8),
            (3, 6), (3, 8), (3, 9), (3, 10),
            (4, 7), (4, 9), (4, 10),
        ),
        tight_sources=frozenset({2}),
    )


def figure_right() -> Digraft:
    """Removing tight source 1 and sink 5 disconnects the rest."""
    return Digraft(
        sources=(0, 1, 2),
        sinks=(3, 4, 5, 6),
        arcs=(
            (0, 3), (0, 4), (0, 5),
            (1, 3), (1, 4), (1, 5), (1, 6),
            (2, 5), (2, 6),
        ),
        tight_sources=frozenset({1}),
    )


def ear_example() -> Digraft:
    """Elementary digraft used for ear-decomposition tests."""
    return Digraft(
        sources=(0, 1, 2),
        sinks=(3, 4, 5, 6),
        arcs=(
            (0, 3), (0, 4), (0, 5), (0, 6),
            (1, 3), (1, 4), (1, 5),
            (2, 4), (2, 6),
        ),
        tight_sources=frozenset({1, 2}),
    )


def brace_c4() -> Digraft:
    return Digraft(
        sources=(0, 1),
        sinks=(2, 3),
        arcs=((0, 2), (1, 2), (0, 3), (1, 3)),
        tight_sources=frozenset(),
    )


def star_deficient() -> Digraft:
    """Sinks 3,4,5 are fed only by the two tight sources: no edge cover."""
    return Digraft(
        sources=(0, 1, 2),
        sinks=(3, 4, 5, 6),
        arcs=(
            (1, 3), (2, 3), (1, 4), (2, 4), (1, 5), (2, 5),
            (0, 6), (1, 6),
        ),
        tight_sources=frozenset({1, 2}),
    )


NAMED_DIGRAFTS = {
    "theta3_digraft": theta3_digraft,
    "theta3_tight": lambda: theta3_digraft(tight=True),
    "figure_left": figure_left,
    "figure_right": figure_right,
    "ear_example": ear_example,
    "brace_c4": brace_c4,
    "star_deficient": star_deficient,
}


# -- corpus enumeration ------------------------------------------------------

def _connected_simple_supports(n: int) -> list[tuple[tuple[int, int], ...]]:
    pairs = list(combinations(range(n), 2))
    reps: dict = {}
    for mask in range(1, 1 << len(pairs)):
        edges = tuple(p for i, p in enumerate(pairs) if mask >> i & 1)
        if len(components(range(n), edges)) != 1:
            continue
        key = canonical_multigraph(n, edges)
        if key not in reps:
            reps[key] = edges
    return [reps[k] for k in sorted(reps)]


def _support_bridges(n: int, edges) -> set[int]:
    bridges = set()
    for i in range(len(edges)):
        rest = edges[:i] + edges[i + 1 :]
        if len(components(range(n), rest)) != 1:
            bridges.add(i)
    return bridges


def _distributions(total: int, slots: int):
    if slots == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _distributions(total - first, slots - 1):
            yield (first,) + rest


def two_edge_connected_multigraphs(
    max_n: int = 5, max_m: int = 8
) -> list[UndirectedMultigraph]:
    """All bridgeless connected loopless multigraphs, one per iso class."""
    out = []
    for n in range(2, max_n + 1):
        for support in _connected_simple_supports(n):
            k = len(support)
            if k > max_m:
                continue
            bridges = _support_bridges(n, support)
            auts = multigraph_automorphisms(n, support)
            order = sorted(support)
            pos = {e: i for i, e in enumerate(order)}
            perms = []
            for p in auts:
                perms.append(
                    tuple(pos[tuple(sorted((p[u], p[v])))] for u, v in order)
                )
            seen = set()
            for extra in range(0, max_m - k + 1):
                for dist in _distributions(extra, k):
                    mult = tuple(1 + d for d in dist)
                    if any(mult[pos[support[i]]] < 2 for i in bridges):
                        continue
                    canon_mult = min(
                        tuple(mult[pi] for pi in perm) for perm in perms
                    )
                    if canon_mult in seen:
                        continue
                    seen.add(canon_mult)
                    edges = []
                    for e, m in zip(order, canon_mult):
                        edges.extend([e] * m)
                    out.append(UndirectedMultigraph(n, tuple(edges)))
    return out


# -- family variants ---------------------------------------------------------

def _entering_arc_ids(g: UndirectedMultigraph, shore: frozenset) -> frozenset:
    """Arc ids of orientations entering the shore.

    This is the dicut that the shore induces after the sink-per-edge
    reduction, read back in orientation arc ids.
    """
    ids = set()
    for k, (x, y) in enumerate(g.edges):
        if (x in shore) != (y in shore):
            ids.add(2 * k + 1 if x in shore else 2 * k)
    return frozenset(ids)


def minimal_dicut_family(g: UndirectedMultigraph) -> tuple[frozenset, ...]:
    """Vertex sets whose leaving-arc sets are inclusion-minimal."""
    candidates = []
    verts = list(range(g.n))
    for mask in range(1, (1 << g.n) - 1):
        shore = frozenset(v for v in verts if mask >> v & 1)
        candidates.append((shore, _entering_arc_ids(g, shore)))
    keep = []
    for shore, arcs in candidates:
        if any(
            other < arcs for _, other in candidates
        ):
            continue
        keep.append(shore)
    seen = set()
    out = []
    for shore in sorted(keep, key=lambda s: (len(s), sorted(s))):
        if shore not in seen:
            out.append(shore)
            seen.add(shore)
    return tuple(out)


def random_cross_free_family(
    g: UndirectedMultigraph, seed: int, members: int = 2
) -> tuple[frozenset, ...]:
    rng = random.Random(seed)
    full = frozenset(range(g.n))
    chosen: list[frozenset] = []
    for _ in range(20 * members):
        if len(chosen) >= members:
            break
        size = rng.randint(1, g.n - 1)
        cand = frozenset(rng.sample(range(g.n), size))
        ok = True
        for m in chosen:
            if (
                (cand & m)
                and (cand | m) != full
                and not (cand <= m or m <= cand)
            ):
                ok = False
                break
        if ok and cand not in chosen:
            chosen.append(cand)
    return tuple(chosen)


def family_variants(g: UndirectedMultigraph, seed: int) -> list[tuple[frozenset, ...]]:
    variants = [()]
    mdf = minimal_dicut_family(g)
    if mdf:
        variants.append(mdf)
    rcf = random_cross_free_family(g, seed)
    if rcf and rcf not in variants:
        variants.append(rcf)
    return variants


def corpus_instances(max_n: int = 5, max_m: int = 8, seed: int = 7):
    """(name, multigraph, family) triples; deterministic for a fixed seed."""
    out = []
    graphs = list(two_edge_connected_multigraphs(max_n, max_m))
    for name, maker in sorted(NAMED_GRAPHS.items()):
        graphs.append(maker())
    seen = set()
    uniq = []
    for g in graphs:
        key = canonical_multigraph(g.n, g.edges)
        if key in seen:
            continue
        seen.add(key)
        uniq.append(g)
    for i, g in enumerate(uniq):
        for j, fam in enumerate(family_variants(g, seed + i)):
            out.append((f"g{i:04d}f{j}", g, fam))
    return out


def big_multigraph(seed: int = 20240801, n: int = 8, m: int = 50) -> UndirectedMultigraph:
    """Random bridgeless multigraph: a spanning cycle plus random edges."""
    rng = random.Random(seed)
    edges = [(i, (i + 1) % n) for i in range(n)]
    while len(edges) < m:
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        edges.append((min(u, v), max(u, v)))
    g = UndirectedMultigraph(n, tuple(edges))
    g.check_two_edge_connected()
    return g
