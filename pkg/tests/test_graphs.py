"""Core graph types: arc identities, validation, JSON, contraction."""

import pytest

from scobasis import oracle
from scobasis.graphs import (
    Digraft,
    GeneralDigraft,
    UndirectedMultigraph,
    components,
    uncross_family,
)
from scobasis.errors import NotTwoEdgeConnected
from scobasis.instances import theta3, triangle
from scobasis.instances import NAMED_DIGRAFTS


def test_arc_id_convention():
    g = triangle()
    assert g.edges == ((0, 1), (1, 2), (0, 2))
    assert g.oriented(0) == (0, 1)
    assert g.oriented(1) == (1, 0)
    assert g.oriented(4) == (0, 2)
    assert g.oriented(5) == (2, 0)
    assert g.arc_pair(2) == ((1, 2), (2, 1))


def test_self_loop_rejected():
    with pytest.raises(ValueError):
        UndirectedMultigraph(n=2, edges=((0, 0),))


def test_two_edge_connectivity():
    assert triangle().is_two_edge_connected()
    assert theta3().is_two_edge_connected()
    path = UndirectedMultigraph(n=3, edges=((0, 1), (1, 2)))
    assert not path.is_two_edge_connected()
    with pytest.raises(NotTwoEdgeConnected):
        path.check_two_edge_connected()
    split = UndirectedMultigraph(n=4, edges=((0, 1), (0, 1), (2, 3), (2, 3)))
    assert not split.is_connected()


def test_components():
    comps = components(range(5), [(0, 1), (2, 3)])
    assert sorted(sorted(c) for c in comps) == [[0, 1], [2, 3], [4]]


def test_graph_json_roundtrip():
    g = theta3()
    assert UndirectedMultigraph.from_json(g.to_json()) == g


def test_digraft_json_roundtrip():
    d = NAMED_DIGRAFTS["theta3_tight"]()
    assert Digraft.from_json(d.to_json()) == d


def test_general_digraft_json_roundtrip():
    from scobasis.orient import sco_to_digraft

    gd, _ = sco_to_digraft(triangle(), (frozenset({0, 1}),))
    again = GeneralDigraft.from_json(gd.to_json())
    assert again.arcs == gd.arcs
    assert set(again.family) == set(gd.family)


def test_digraft_validation():
    with pytest.raises(ValueError):
        Digraft(sources=(0,), sinks=(0,), arcs=((0, 0),))
    with pytest.raises(ValueError):
        Digraft(sources=(0,), sinks=(1,), arcs=((1, 0),))
    with pytest.raises(ValueError):
        Digraft(sources=(), sinks=(1,), arcs=())


def test_general_family_must_be_dicuts():
    # {2} is not a tail shore: arcs enter it from outside
    with pytest.raises(Exception):
        GeneralDigraft(
            sources=(0, 1),
            sinks=(2, 3),
            arcs=((0, 2), (1, 2), (0, 3), (1, 3)),
            family=(frozenset({2}),),
        )


def test_normalized_adds_sink_members():
    gd = GeneralDigraft.normalized(
        sources=(0, 1),
        sinks=(2, 3),
        arcs=((0, 2), (1, 2), (0, 3), (1, 3)),
        family=(),
    )
    everything = frozenset({0, 1, 2, 3})
    for t in (2, 3):
        assert everything - {t} in set(gd.family)


def test_contract_keeps_arc_identity():
    d = NAMED_DIGRAFTS["figure_left"]()
    shore = next(u for u in oracle.all_out_shores(d) if not d.is_trivial_shore(u))
    for side in ("in", "out"):
        child, amap = d.contract(shore, side)
        collapsed = shore if side == "out" else d.vertex_set - shore
        star = min(collapsed)
        assert len(amap) == len(child.arcs)
        for ca, pa in enumerate(amap):
            cx, cy = child.arcs[ca]
            px, py = d.arcs[pa]
            assert cx == (star if px in collapsed else px)
            assert cy == (star if py in collapsed else py)


def test_uncross_preserves_solutions(corpus_digrafts):
    checked = 0
    for name, gd in corpus_digrafts:
        flat = uncross_family(gd)
        if set(flat.family) == set(gd.family):
            continue
        assert oracle.enumerate_tight_dijoins(flat) == (
            oracle.enumerate_tight_dijoins(gd)
        )
        checked += 1
        if checked == 5:
            break
    assert checked == 5, "corpus should contain crossing families"


def test_sigma_counts_components():
    d = NAMED_DIGRAFTS["theta3_digraft"]()
    assert d.sigma(frozenset()) == 1
    lone = d.sigma(frozenset(d.sources))
    assert lone == len(d.sinks)
