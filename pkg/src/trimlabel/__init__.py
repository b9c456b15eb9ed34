"""Graph trimming via tree decompositions, applied to sliding-label placement.

Two halves meet in the middle: exact-arithmetic graph machinery (tree
decompositions, level trimming, planar layer peeling) and a label placement
pipeline (stopping values, dependency graphs, candidate positions, exact
solvers and shifting schemes).  Every quantity is a ``fractions.Fraction``.
"""

from .errors import BudgetExceeded, InputError, ParseError, TrimLabelError
from .exact import Rational, format_exact, parse_exact
from .graphs import (
    TreeDecomposition,
    WeightedGraph,
    build_tree_decomposition,
    elongation,
    longest_simple_path,
    longest_simple_path_subsets,
    validate_tree_decomposition,
    width,
)
from .planar import (
    PlanarEmbedding,
    embed_from_coordinates,
    find_planar_embedding,
    planar_layers,
)
from .trimming import (
    TrimParams,
    TrimReport,
    baker_select,
    g_bound,
    is_trimming,
    level_trimming,
    planar_g_bound,
    planar_trimming,
    remark_bound,
    twdeg_g_bound,
)
from .labeling import (
    Anchor,
    AnchorLabelInstance,
    AnchorLabeling,
    LabelInstance,
    LabelPoint,
    Labeling,
    MultiPosInstance,
    anchor_rect,
    anchor_rectangles,
    anchor_weight,
    validate_anchor_labeling,
    validate_labeling,
    validate_multipos,
    weight_of,
)
from .discretize import (
    CandidateSet,
    DependencyGraph,
    StoppingSet,
    StructureReport,
    candidate_positions,
    check_structure,
    dependency_graph,
    longest_dependency_path,
    normalize,
    rank_in,
    stopping_set,
)
from .solve import (
    build_4s_instance,
    exact_1sh,
    exact_multipos,
    ptas_1sh,
    ptas_1sh_result,
    ptas_2sh_result,
    ptas_4s,
    ptas_4s_result,
    reduce_2sh,
    shifting_ptas,
    shifting_ptas_result,
    transpose_instance,
)
from .render import render_svg

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
