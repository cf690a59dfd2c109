"""Exact finite Turán numbers, ladders, zycles and blow-ups for k-uniform hypergraphs."""

from .constructions import (
    BlowupMap,
    augment_tail,
    blow_up,
    complete,
    complete_partite,
    dj_construction,
    hom_image_family,
    ladder,
    ladder_fan,
    zycle,
)
from .core import (
    Hypergraph,
    HypergraphError,
    Provenance,
    VertexMap,
    canonical_form,
    check_map,
    common_link,
    contains_copy,
    count_copies,
    edge_density,
    has_homomorphism,
    is_k_partite,
    link,
    make_hypergraph,
    min_degree,
)
from .extremal import (
    DensityBracket,
    DensitySeq,
    ExtremalResult,
    SearchBudget,
    bracket,
    density_seq,
    hom_turan_number,
    lower_bound_from_construction,
    turan_number,
)
from .formats import parse_hypergraph_file, write_hypergraph_file

__version__ = "0.1.0"
