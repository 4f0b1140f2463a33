"""Integral bases of tight strongly connected orientations.

The package turns a 2-edge-connected multigraph with a cut family into a
bipartite degree-constrained problem, decomposes it along tight dicuts,
builds an integral basis of the solution lattice piece by piece, and can
certify the result against brute-force enumeration at small scale.
"""

from .basis import BasisReport, DicutChain, EarDecomposition, digraft_basis
from .decompose import (
    DecompositionNode,
    DecompositionTree,
    reduce_to_tight_sources,
    tight_dicut_decomposition,
)
from .errors import (
    EmptyConstrainedLattice,
    GcdConditionFailed,
    Infeasible,
    NotCovered,
    NotTwoEdgeConnected,
    ScobasisError,
    TooLarge,
)
from .feasibility import (
    HallViolator,
    degree_feasibility,
    find_tight_dijoin,
    jump_free,
    perfect_b_matching,
    tight_dijoin_through,
    tight_edge_cover,
    tight_sources,
)
from .graphs import Digraft, GeneralDigraft, UndirectedMultigraph
from .oracle import (
    LatticeCertificate,
    enumerate_tight_dijoins,
    enumerate_tight_scos,
    verify_integral_basis,
)
from .orient import OrientationMap, gcd_certificate, sco_basis, sco_to_digraft, scr_basis
from .parity import ParityQuery, even_to_odd_gadget, parity_sco
from .structure import (
    Barrier,
    Classification,
    classify,
    find_barrier_dicut,
    find_two_separation,
    is_basic,
    robustness,
)

__all__ = [
    "Barrier",
    "BasisReport",
    "Classification",
    "DecompositionNode",
    "DecompositionTree",
    "DicutChain",
    "Digraft",
    "EarDecomposition",
    "EmptyConstrainedLattice",
    "GcdConditionFailed",
    "GeneralDigraft",
    "HallViolator",
    "Infeasible",
    "LatticeCertificate",
    "NotCovered",
    "NotTwoEdgeConnected",
    "OrientationMap",
    "ParityQuery",
    "ScobasisError",
    "TooLarge",
    "UndirectedMultigraph",
    "classify",
    "degree_feasibility",
    "digraft_basis",
    "enumerate_tight_dijoins",
    "enumerate_tight_scos",
    "even_to_odd_gadget",
    "find_barrier_dicut",
    "find_tight_dijoin",
    "find_two_separation",
    "gcd_certificate",
    "is_basic",
    "jump_free",
    "parity_sco",
    "perfect_b_matching",
    "reduce_to_tight_sources",
    "robustness",
    "sco_basis",
    "sco_to_digraft",
    "scr_basis",
    "tight_dicut_decomposition",
    "tight_dijoin_through",
    "tight_edge_cover",
    "tight_sources",
    "verify_integral_basis",
]
