"""Sums of generalized m-gonal numbers: escalator trees, shifted-lattice
representation counts, and exact p-adic local densities."""

from .constructions import (
    GuyForm,
    GuyReport,
    guy_form,
    guy_report_csv,
    lower_bound_witness,
    verify_guy,
    verify_guy_grid,
)
from .errors import (
    InternalConsistencyError,
    ResourceCapError,
    TreeParseError,
    WrongDispatchError,
)
from .escalator import (
    EscalatorNode,
    EscalatorTree,
    build_tree,
    deserialize_tree,
    escalate,
    gamma_estimate,
    min_leaf_depth,
    serialize_tree,
)
from .lattice import (
    ShiftedDiagonalLattice,
    admissible,
    h_of_ell,
    lattice_from_form,
    representation_count,
    represents_equivalence_check,
    shift_fraction,
)
from .localdensity import (
    ConformanceRow,
    Density,
    JordanDecomposition,
    classify_universality_pattern,
    conformance_csv,
    density_p_dividing_N,
    jordan_decompose,
    local_density,
    siegel_count_density,
    stabilization_threshold,
    tau_gauss_sum,
    tau_lemma_value,
    verify_case_bounds,
    yang_density_odd,
    yang_density_two,
)
from .polygonal import (
    PolygonalForm,
    RepresentationSet,
    extend_set,
    polygonal_value,
    polygonal_values_up_to,
    represented_set,
    truant,
)

__version__ = "0.1.0"

__all__ = [
    "ConformanceRow",
    "Density",
    "EscalatorNode",
    "EscalatorTree",
    "GuyForm",
    "GuyReport",
    "InternalConsistencyError",
    "JordanDecomposition",
    "PolygonalForm",
    "RepresentationSet",
    "ResourceCapError",
    "ShiftedDiagonalLattice",
    "TreeParseError",
    "WrongDispatchError",
    "admissible",
    "build_tree",
    "classify_universality_pattern",
    "conformance_csv",
    "density_p_dividing_N",
    "deserialize_tree",
    "escalate",
    "extend_set",
    "gamma_estimate",
    "guy_form",
    "guy_report_csv",
    "h_of_ell",
    "jordan_decompose",
    "lattice_from_form",
    "local_density",
    "lower_bound_witness",
    "min_leaf_depth",
    "polygonal_value",
    "polygonal_values_up_to",
    "representation_count",
    "represented_set",
    "represents_equivalence_check",
    "serialize_tree",
    "shift_fraction",
    "siegel_count_density",
    "stabilization_threshold",
    "tau_gauss_sum",
    "tau_lemma_value",
    "truant",
    "verify_case_bounds",
    "verify_guy",
    "verify_guy_grid",
    "yang_density_odd",
    "yang_density_two",
]
