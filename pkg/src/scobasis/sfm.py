"""Constrained submodular function minimization.

Two specialized objectives drive the structure tests: the barrier
deficiency |X| - sigma(V minus X) on one tight side, and the neighborhood
surplus |N(X)| - |X| on the sources. The generic minimizer brute-forces
small ground sets and switches to an exact-arithmetic Fujishige-Wolfe
minimum-norm point above that; the surplus objective always goes through a
max-flow reduction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptyConstrainedLattice
from .flow import Dinic
from .graphs import components

_BRUTE_LIMIT = 18


@dataclass(frozen=True)
class SubmodularOracle:
    ground: tuple
    evaluate: callable
    forced_in: frozenset = frozenset()
    forced_out: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "ground", tuple(self.ground))
        object.__setattr__(self, "forced_in", frozenset(self.forced_in))
        object.__setattr__(self, "forced_out", frozenset(self.forced_out))

    def spot_check(self, seed: int = 0, trials: int = 64) -> bool:
        """Random diminishing-returns triples f(X+v)-f(X) >= f(Y+v)-f(Y)."""
        rng = random.Random(seed)
        g = list(self.ground)
        if not g:
            return True
        for _ in range(trials):
            y = frozenset(v for v in g if rng.random() < 0.5)
            x = frozenset(v for v in y if rng.random() < 0.5)
            rest = [v for v in g if v not in y]
            if not rest:
                continue
            v = rng.choice(rest)
            f = self.evaluate
            if f(x | {v}) - f(x) < f(y | {v}) - f(y):
                return False
        return True


def minimize(oracle: SubmodularOracle) -> tuple[frozenset, int]:
    """Minimize over {X : forced_in <= X <= ground minus forced_out}.

    Ties break to the lexicographically smallest minimizer found. The
    brute backend scans every subset up to ground size 18; larger ground
    sets use the minimum-norm point.
    """
    fin, fout = oracle.forced_in, oracle.forced_out
    if fin & fout:
        raise EmptyConstrainedLattice("a pinned element is both in and out")
    if not set(fin) <= set(oracle.ground) or not set(fout) <= set(oracle.ground):
        raise EmptyConstrainedLattice("pins outside the ground set")
    free = sorted(v for v in oracle.ground if v not in fin and v not in fout)
    f = oracle.evaluate

    def g(sub: frozenset):
        return f(frozenset(fin) | sub)

    if not free:
        return frozenset(fin), g(frozenset())
    if len(free) <= _BRUTE_LIMIT:
        best_set, best_val = frozenset(), g(frozenset())
        for mask in range(1, 1 << len(free)):
            sub = frozenset(free[i] for i in range(len(free)) if mask >> i & 1)
            val = g(sub)
            if val < best_val or (
                val == best_val and sorted(fin | sub) < sorted(fin | best_set)
            ):
                best_set, best_val = sub, val
        return frozenset(fin) | best_set, best_val
    sub = _min_norm_minimizer(free, g)
    return frozenset(fin) | sub, g(sub)


def _solve_affine(points):
    """Min-norm point of the affine hull of ``points`` as barycentrics.

    Solves the normal equations [[G, 1], [1^T, 0]] (lam, mu) = (0, 1) with
    exact fractions. Returns None when the points are affinely dependent.
    """
    k = len(points)
    gram = [
        [sum(a * b for a, b in zip(points[i], points[j])) for j in range(k)]
        for i in range(k)
    ]
    size = k + 1
    aug = [
        [Fraction(gram[i][j]) for j in range(k)] + [Fraction(1), Fraction(0)]
        for i in range(k)
    ]
    aug.append([Fraction(1)] * k + [Fraction(0), Fraction(1)])
    for col in range(size):
        piv = next((r for r in range(col, size) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(size):
            if r != col and aug[r][col] != 0:
                fac = aug[r][col]
                aug[r] = [x - fac * y for x, y in zip(aug[r], aug[col])]
    return [aug[i][size] for i in range(k)]


def _min_norm_minimizer(free: list, g) -> frozenset:
    """Fujishige-Wolfe on the base polytope of the shifted function.

    Works with h(X) = g(X) - g(empty) so h(empty) = 0 as the base polytope
    requires. Exact Fraction arithmetic throughout, so the Wolfe
    termination test is an exact comparison.
    """
    base_val = g(frozenset())

    def h(sub):
        return g(sub) - base_val

    def greedy(order):
        vec, cur, prev = {}, set(), 0
        for v in order:
            cur.add(v)
            val = h(frozenset(cur))
            vec[v] = Fraction(val - prev)
            prev = val
        return tuple(vec[v] for v in free)

    def dot(a, b):
        return sum(x * y for x, y in zip(a, b))

    pos = {v: i for i, v in enumerate(free)}
    x = greedy(free)
    corral = [x]
    lam = [Fraction(1)]
    for _ in range(1 << 14):
        order = sorted(free, key=lambda v: (x[pos[v]], v))
        q = greedy(order)
        if dot(x, x) <= dot(x, q) or q in corral:
            break
        corral.append(q)
        lam.append(Fraction(0))
        while True:
            mu = _solve_affine(corral)
            if mu is None:
                # affinely dependent: drop a zero-weight point and retry
                drop = next(i for i, w in enumerate(lam) if w == 0)
                corral.pop(drop)
                lam.pop(drop)
                continue
            if all(w > 0 for w in mu):
                lam = mu
                break
            theta = min(
                l / (l - m) for l, m in zip(lam, mu) if m <= 0 and l > m
            )
            lam = [theta * m + (1 - theta) * l for l, m in zip(lam, mu)]
            keep = [i for i, w in enumerate(lam) if w > 0]
            corral = [corral[i] for i in keep]
            lam = [lam[i] for i in keep]
        x = tuple(
            sum(lam[i] * corral[i][j] for i in range(len(corral)))
            for j in range(len(free))
        )
    neg = frozenset(v for v, xv in zip(free, x) if xv < 0)
    nonpos = frozenset(v for v, xv in zip(free, x) if xv <= 0)
    return neg if g(neg) <= g(nonpos) else nonpos


def barrier_deficiency_oracle(d, side: str, forced_in=(), forced_out=()):
    """|X| - (number of components of V minus X), over one tight side."""
    if side == "sinks":
        ground = d.sinks
    elif side == "tight_sources":
        ground = tuple(sorted(d.tight_sources))
    else:
        raise ValueError("side must be 'sinks' or 'tight_sources'")
    verts = d.vertex_set

    def f(x: frozenset) -> int:
        keep = verts - x
        pairs = [(a, b) for a, b in d.arcs if a in keep and b in keep]
        return len(x) - len(components(keep, pairs))

    return SubmodularOracle(
        ground=ground,
        evaluate=f,
        forced_in=frozenset(forced_in),
        forced_out=frozenset(forced_out),
    )


def min_barrier_deficiency(
    d, side: str, forced_in=(), forced_out=()
) -> tuple[frozenset, int]:
    oracle = barrier_deficiency_oracle(d, side, forced_in, forced_out)
    if not oracle.ground:
        raise EmptyConstrainedLattice(f"digraft has no {side}")
    return minimize(oracle)


def _surplus_flow(d, forced_in: frozenset, forced_out: frozenset):
    """One max-flow query for min |N(X)| - |X| over the pinned lattice.

    Returns (value, maximal minimizer). Unit source caps make the cut
    value |allowed| + f(X); pinned-in sources get effectively infinite
    capacity so they are never cut.
    """
    allowed = [s for s in d.sources if s not in forced_out]
    big = len(d.sources) + len(d.sinks) + 5
    idx = {}
    net = Dinic(2 + len(allowed) + len(d.sinks))
    for i, s in enumerate(allowed):
        idx[s] = 2 + i
    for j, t in enumerate(d.sinks):
        idx[t] = 2 + len(allowed) + j
    for s in allowed:
        net.add_edge(0, idx[s], big if s in forced_in else 1)
    for t in d.sinks:
        net.add_edge(idx[t], 1, 1)
    seen = set()
    for x, y in d.arcs:
        if x in forced_out or (x, y) in seen:
            continue
        seen.add((x, y))
        net.add_edge(idx[x], idx[y], big)
    cut = net.max_flow(0, 1)
    co = net.residual_coreachable(1)
    x_max = frozenset(s for s in allowed if idx[s] not in co)
    return cut - len(allowed), x_max


def min_neighborhood_surplus(
    d, forced_in=(), forced_out=()
) -> tuple[frozenset, int]:
    """Minimize |N(X)| - |X| over nonempty proper source subsets X.

    Pins restrict the lattice; the nonempty and proper-subset constraints
    are enforced by extra forced pins when the raw query lands on the
    excluded sets. Returns the maximal minimizer of the winning query.
    """
    forced_in = frozenset(forced_in)
    forced_out = frozenset(forced_out)
    src = set(d.sources)
    if forced_in & forced_out or not forced_in <= src or not forced_out <= src:
        raise EmptyConstrainedLattice("bad source pins")
    if len(forced_out) >= len(src):
        raise EmptyConstrainedLattice("every source pinned out")

    def query(fin, fout):
        val, x = _surplus_flow(d, fin, fout)
        return val, x

    if forced_in == src:
        if len(src) == 1:
            raise EmptyConstrainedLattice(
                "no proper nonempty subset of a single source"
            )
        # only proper subsets count; relax one pin at a time
        best = None
        for w in sorted(src):
            val, x = query(forced_in - {w}, frozenset({w}))
            if best is None or val < best[1]:
                best = (x, val)
        return best

    candidates = []
    if forced_in:
        candidates.append((forced_in, forced_out))
    else:
        for u in sorted(src - forced_out):
            candidates.append((frozenset({u}), forced_out))
    best = None
    for fin, fout in candidates:
        val, x = query(fin, fout)
        if x == src:
            for w in sorted(src - fin):
                val2, x2 = query(fin, fout | {w})
                if best is None or val2 < best[1]:
                    best = (x2, val2)
        elif best is None or val < best[1]:
            best = (x, val)
    if best is None:
        raise EmptyConstrainedLattice("no proper nonempty subset satisfies pins")
    return best
