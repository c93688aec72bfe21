"""Geometric genuine-multipartite-entanglement measures for four-qubit pure states."""

__version__ = "0.1.0"

from .bipartition import (  # noqa: E402
    Bipartition,
    ConcurrenceProfile,
    concurrence,
    enumerate_bipartitions,
    parse_cut,
    profile,
    schmidt_weight_from_squared,
    squared_from_schmidt_weight,
)
from .catalog import EnsembleSpec, build_family, build_named, sample  # noqa: E402
from .geometry import (  # noqa: E402
    build_quadrilateral,
    heron_area,
    polygon_margin,
    strictness_margins,
    sum_of_three_margin,
    triangle_margins,
)
from .measures import (  # noqa: E402
    classify_separability,
    concurrence_fill_3q,
    gme_f,
    gme_f1,
    gme_report,
    six_triangles,
)
from .state import (  # noqa: E402
    StateVector,
    from_amplitudes,
    linear_entropy,
    permute_qubits,
    purity,
    reduced_density,
    tensor_product,
)
