"""Local prime factor decomposition of connected graphs under the strong product."""

from .graph import (
    DisconnectedError,
    Graph,
    GraphError,
    VertexSet,
    complete_graph,
    cycle_graph,
    edge_key,
    path_graph,
)
from .products import (
    Coordinatization,
    Fiber,
    cartesian_edge_set,
    cartesian_index,
    cartesian_product,
    strong_product,
)
from .sclasses import (
    NotThinError,
    QuotientResult,
    SPartition,
    backbone,
    is_thin,
    quotient,
    relative_s_partition,
    s1_witness,
    s_class_size,
)
from .isomorphism import canonical_form, find_isomorphism, is_isomorphic
from .factorize import (
    DEFAULT_SIZE_CAP,
    FactorSizeError,
    LocalFactorization,
    NeighborhoodFactorization,
    factor_exact,
    factor_neighborhood,
    reconstructs,
)
from .coloring import (
    ColoringError,
    CoveringSequence,
    NeighborhoodCache,
    PartialProductColoring,
    backbone_bfs,
    color_fibers_from,
    extend_to_s1_fibers,
)
from .skeleton import (
    ColoredSkeleton,
    SkeletonError,
    UnionFind,
    build_skeleton,
    find_square,
    merge_parallel_colors,
    n2_sweep,
)
from .recognize import (
    RecognitionReport,
    pfd_fast,
    product_coordinates,
    recognize,
    verify_product,
)
from .oracle import (
    GenerationError,
    ORACLE_CAP,
    ProductInstance,
    oracle_pfd,
    random_connected_graph,
    random_product_instance,
    random_thin_graph,
    scaling_family_member,
    twisted_instance,
)

__version__ = "0.1.0"
