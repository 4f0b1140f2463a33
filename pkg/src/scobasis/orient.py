"""Orientation problems solved through the subdivision digraft.

Subdividing every edge of a multigraph turns orientation questions into
dijoin questions: edge k oriented u -> v corresponds to the arc from v
into the subdivision sink of k, and the two id spaces coincide. Bases of
tight strongly connected orientations pull back from digraft bases, and
bases of tight strengthenings of a digraph come from complementing an
orientation basis of its bidirected double.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import oracle
from .basis import BasisReport, digraft_basis
from .errors import GcdConditionFailed
from .graphs import GeneralDigraft, UndirectedMultigraph
from .intlinalg import extended_gcd_combination


@dataclass(frozen=True)
class OrientationMap:
    """Arc-id bijection between orientations and subdivision dijoins.

    Orientation ids and digraft ids agree position by position, so both
    directions are stored as plain tuples.
    """

    forward: tuple[int, ...]
    backward: tuple[int, ...]

    def image(self, arc_ids) -> frozenset:
        return frozenset(self.forward[a] for a in arc_ids)

    def preimage(self, arc_ids) -> frozenset:
        return frozenset(self.backward[a] for a in arc_ids)


def _check_family(n: int, family) -> tuple[frozenset, ...]:
    full = frozenset(range(n))
    out = []
    for member in family:
        m = frozenset(int(v) for v in member)
        if not m or m == full or not m <= full:
            raise ValueError(
                f"family member {sorted(m)} must be a proper nonempty "
                "vertex subset"
            )
        out.append(m)
    return tuple(out)


def sco_to_digraft(g: UndirectedMultigraph, family=()):
    """The subdivision digraft whose tight dijoins are the tight
    strongly connected orientations of (g, family).

    Every edge becomes a sink fed by both endpoints; a family member U
    maps to the shore holding U and the sinks of its inside edges. The
    returned map is the identity on arc ids.
    """
    g.check_two_edge_connected()
    members = _check_family(g.n, family)
    n = g.n
    arcs = []
    for k, (u, v) in enumerate(g.edges):
        arcs.append((v, n + k))
        arcs.append((u, n + k))
    shores = []
    for m in members:
        inside = {n + k for k, (u, v) in enumerate(g.edges) if u in m and v in m}
        shores.append(m | inside)
    d = GeneralDigraft.normalized(
        sources=tuple(range(n)),
        sinks=tuple(n + k for k in range(len(g.edges))),
        arcs=tuple(arcs),
        family=tuple(shores),
    )
    ident = tuple(range(2 * len(g.edges)))
    return d, OrientationMap(forward=ident, backward=ident)


def sco_basis(g: UndirectedMultigraph, family=(), verify: bool = False):
    """Integral basis of the tight strongly connected orientations.

    Raises Infeasible when no tight orientation exists. With verify the
    report carries a lattice certificate from full enumeration.
    """
    d, omap = sco_to_digraft(g, family)
    rep = digraft_basis(d, verify=verify)
    return BasisReport(
        basis=tuple(omap.preimage(j) for j in rep.basis),
        size_formula=rep.size_formula,
        certified=rep.certified,
        oracle=rep.oracle,
    )


def gcd_certificate(n: int, arcs, family) -> dict:
    """Integer weights on the family with sum w_U * (1 - indeg(U)) = 1.

    Raises GcdConditionFailed when the values' gcd is not 1 (in
    particular for an empty family).
    """
    members = _check_family(n, family)
    values = []
    for m in members:
        indeg = sum(1 for (x, y) in arcs if y in m and x not in m)
        values.append(1 - indeg)
    g, coeffs = extended_gcd_combination(values)
    if g != 1:
        raise GcdConditionFailed(
            f"gcd of the family slack values is {g}, need 1"
        )
    return {m: c for m, c in zip(members, coeffs)}


def scr_basis(n: int, arcs, family, verify: bool = False):
    """Integral basis of the tight strengthenings of a digraph.

    A strengthening is an arc set whose flip makes the digraph strongly
    connected; tight means each family member ends up with exactly one
    entering arc. Built by complementing an orientation basis of the
    bidirected double, which is valid exactly under the gcd certificate.
    """
    arcs = tuple((int(x), int(y)) for x, y in arcs)
    gcd_certificate(n, arcs, family)
    g = UndirectedMultigraph(n=n, edges=arcs)
    rep = sco_basis(g, family)
    flips = tuple(
        frozenset(a // 2 for a in o if a % 2 == 1) for o in rep.basis
    )
    certified = False
    report = None
    if verify:
        scos = oracle.enumerate_tight_scos(g, family)
        strengthenings = [
            frozenset(a // 2 for a in o if a % 2 == 1) for o in scos
        ]
        cert = oracle.verify_integral_basis(flips, strengthenings, len(arcs))
        certified = cert.ok
        report = cert.to_json()
        assert certified, "strengthening basis must certify"
    return BasisReport(
        basis=flips,
        size_formula=rep.size_formula,
        certified=certified,
        oracle=report,
    )
