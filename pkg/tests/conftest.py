"""Shared fixtures: the instance corpus in its digraft forms.

Built once per session. ``corpus`` holds deduped multigraph instances,
``corpus_digrafts`` their subdivision digrafts, ``plain_digrafts`` the
named digrafts plus every distinct tight-source reduction leaf, and
``plain_structures`` pairs those with brute-force structure reports.
"""

import pytest

from scobasis import oracle
from scobasis.canon import canonical_digraft
from scobasis.decompose import reduce_to_tight_sources
from scobasis.errors import Infeasible, NotCovered
from scobasis.graphs import uncross_family
from scobasis.instances import NAMED_DIGRAFTS, corpus_instances
from scobasis.orient import sco_to_digraft


@pytest.fixture(scope="session")
def corpus():
    out, seen = [], set()
    for name, g, fam in corpus_instances():
        key = (g, frozenset(fam))
        if key in seen:
            continue
        seen.add(key)
        out.append((name, g, fam))
    return out


@pytest.fixture(scope="session")
def corpus_digrafts(corpus):
    return [(name, sco_to_digraft(g, fam)[0]) for name, g, fam in corpus]


@pytest.fixture(scope="session")
def plain_digrafts(corpus_digrafts):
    out = [(name, make()) for name, make in sorted(NAMED_DIGRAFTS.items())]
    seen = set()
    for name, gd in corpus_digrafts:
        try:
            tree = reduce_to_tight_sources(uncross_family(gd))
        except (Infeasible, NotCovered):
            continue
        for i, leaf in enumerate(tree.leaves()):
            d = leaf.digraft
            key = canonical_digraft(d)
            if key in seen:
                continue
            seen.add(key)
            out.append((f"{name}.leaf{i}", d))
    return out


@pytest.fixture(scope="session")
def plain_structures(plain_digrafts):
    return [
        (name, d, oracle.brute_structure(d)) for name, d in plain_digrafts
    ]


@pytest.fixture(scope="session")
def covered_structures(plain_structures):
    return [(n, d, r) for n, d, r in plain_structures if r.covered]
