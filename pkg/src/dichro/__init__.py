"""dichro: a digraph dicolouring toolkit.

Degree parameters, exact and greedy dichromatic number, dense
decompositions into near-bicliques, the random colour-and-uncolour
process, obstruction generators/detectors, and the hardness gadget
reduction, with a reproducible CLI (`dichro`).
"""

from .digraph import (
    Digraph,
    complement,
    from_arcs,
    find_directed_cycle,
    induced,
    join_complete,
    parse_arc_list,
    underlying_edges,
    write_arc_list,
)
from .params import (
    DegreeProfile,
    biclique_number,
    boundary_sizes,
    classify_sparsity,
    degree_profile,
    has_matching_of_size,
)
from .coloring import (
    PartialDicolouring,
    brooks_classify,
    check_extendable,
    dichromatic_number,
    extend_extendable,
    greedy_dicolour,
    is_dicolouring,
)
from .decomposition import (
    DenseDecomposition,
    build_part,
    build_saviour_tuples,
    classify_quasi_biclique,
    dense_decomposition,
    find_saviours,
    low_attachment_vertices,
    part_core,
    saving_part,
)
from .randproc import (
    lll_margin,
    random_colouring,
    run_trials,
    uncolour_step,
)
from .transforms import (
    ObstructionCertificate,
    contains_obstruction,
    delta_min_transform,
    make_bk_tight,
    make_hk,
    make_k_obstruction,
    np_gadget_reduction,
    random_digraph,
    symmetric_lift,
)

__version__ = "0.1.0"
