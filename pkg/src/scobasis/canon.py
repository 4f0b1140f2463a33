"""Canonical forms for multigraphs and digrafts.

Multigraphs in the test corpus are tiny, so their canonical form is the
minimum edge multiset over all vertex permutations. Digrafts can be a bit
larger; they get color refinement with individualization backtracking.
"""

from __future__ import annotations

from itertools import permutations


def canonical_multigraph(n: int, edges) -> tuple:
    """Minimum sorted edge tuple over all relabelings. Loops allowed."""
    best = None
    norm = [tuple(sorted(e)) for e in edges]
    for perm in permutations(range(n)):
        cand = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in norm))
        if best is None or cand < best:
            best = cand
    return (n, best if best is not None else ())


def multigraph_automorphisms(n: int, edges) -> list[tuple[int, ...]]:
    key = tuple(sorted(tuple(sorted(e)) for e in edges))
    auts = []
    for perm in permutations(range(n)):
        cand = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in edges))
        if cand == key:
            auts.append(perm)
    return auts


def _refine(order, colors, out_w, in_w):
    """Iterated neighborhood color refinement. Returns stable coloring."""
    while True:
        sig = {}
        for v in order:
            outs = tuple(sorted((colors[w], m) for w, m in out_w.get(v, {}).items()))
            ins = tuple(sorted((colors[w], m) for w, m in in_w.get(v, {}).items()))
            sig[v] = (colors[v], outs, ins)
        ranking = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        new = {v: ranking[sig[v]] for v in order}
        if new == colors:
            return colors
        colors = new


def _encode(order, colors, out_w, tag):
    by_color = sorted(order, key=lambda v: (colors[v], v))
    pos = {v: i for i, v in enumerate(by_color)}
    arcs = tuple(
        sorted(
            (pos[u], pos[w], m) for u in order for w, m in out_w.get(u, {}).items()
        )
    )
    return (tuple(tag[v] for v in by_color), arcs)


def canonical_digraft(
    d,
    with_tight: bool = True,
    simple: bool = False,
    tight_override=None,
) -> tuple:
    """Canonical encoding of a digraft up to relabeling.

    Vertices are colored by side (and tightness when with_tight) and
    refined; ties are broken by individualizing each member of the first
    ambiguous class and taking the minimum encoding. With simple=True the
    arc multiset is collapsed to its support before anything else.
    """
    order = sorted(d.vertex_set)
    out_w: dict[int, dict[int, int]] = {}
    in_w: dict[int, dict[int, int]] = {}
    for x, y in d.arcs:
        out_w.setdefault(x, {})[y] = out_w.setdefault(x, {}).get(y, 0) + 1
        in_w.setdefault(y, {})[x] = in_w.setdefault(y, {}).get(x, 0) + 1
    if simple:
        out_w = {x: {y: 1 for y in m} for x, m in out_w.items()}
        in_w = {y: {x: 1 for x in m} for y, m in in_w.items()}

    if not with_tight:
        tight = frozenset()
    elif tight_override is not None:
        tight = frozenset(tight_override)
    else:
        tight = getattr(d, "tight_sources", frozenset())
    tag = {
        v: (0 if v in d.source_set else 1, 1 if v in tight else 0) for v in order
    }
    init = {s: i for i, s in enumerate(sorted(set(tag.values())))}
    base_colors = {v: init[tag[v]] for v in order}

    best = [None]

    def search(colors):
        colors = _refine(order, colors, out_w, in_w)
        classes: dict[int, list[int]] = {}
        for v in order:
            classes.setdefault(colors[v], []).append(v)
        ambiguous = sorted(c for c, vs in classes.items() if len(vs) > 1)
        if not ambiguous:
            enc = _encode(order, colors, out_w, tag)
            if best[0] is None or enc < best[0]:
                best[0] = enc
            return
        cell = classes[ambiguous[0]]
        bump = max(colors.values()) + 1
        for v in sorted(cell):
            child = dict(colors)
            child[v] = bump
            search(child)

    search(base_colors)
    return best[0]
