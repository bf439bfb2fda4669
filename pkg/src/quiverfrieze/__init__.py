"""Exact cluster characters for euclidean quivers via frieze recurrences.

The package computes Laurent expansions of cluster characters for every
indecomposable object over the canonical euclidean orientations (cyclic,
four-ended, and the three exceptional star shapes), together with Euler
characteristics of complete quiver grassmannians, cross-validated against
a seed-mutation engine and a finite-field point counter.
"""

from .errors import (
    CapExceeded,
    GraphMismatch,
    InexactDivision,
    InternalMismatch,
    InterpolationInconsistent,
    NotAModule,
    NotEuclidean,
    NotTransjective,
    QuiverFriezeError,
    RecognitionFailed,
    SectionSearchExhausted,
    WindowExceeded,
)
from .laurent import LaurentPoly, exact_div, poly_prod, substitute_as_fraction
from .quivers import (
    CanonicalModel,
    EuclideanType,
    Quiver,
    build_canonical,
    cartan_matrix,
    coxeter_matrix,
    defect,
    euler_form,
    quiver_from_json,
    radical_vector,
)
from .transjective import (
    PostProjective,
    PreInjective,
    ShiftedProjective,
    ZQPoint,
    frieze_value,
    label_dimension,
    label_to_point,
    point_to_label,
    recognize,
    shift,
    shift_label,
    symbolic_init,
    unit_init,
)
from .tubes import (
    CharacterCache,
    RegularIndex,
    TubeData,
    chebyshev,
    quasi_simple_char,
    regular_char,
    tridiagonal_determinant,
    tube_table,
)
from .characters import (
    CharacterReport,
    DirectSum,
    Regular,
    Transjective,
    character_report,
    cluster_character,
    euler_complete_grassmannian,
    regular,
    reorient_character,
)
from .oracle import (
    ExplicitModule,
    Seed,
    TransportReport,
    grassmannian_chi,
    mutate,
    seed_from_quiver,
    slice_transport_check,
)

__version__ = "0.1.0"

__all__ = [
    "CanonicalModel", "CapExceeded", "CharacterCache", "CharacterReport",
    "DirectSum", "EuclideanType", "ExplicitModule", "GraphMismatch",
    "InexactDivision", "InternalMismatch", "InterpolationInconsistent",
    "LaurentPoly", "NotAModule", "NotEuclidean", "NotTransjective",
    "PostProjective", "PreInjective", "Quiver", "QuiverFriezeError",
    "RecognitionFailed", "Regular", "RegularIndex", "SectionSearchExhausted",
    "Seed", "ShiftedProjective", "Transjective", "TransportReport",
    "TubeData", "WindowExceeded", "ZQPoint", "build_canonical",
    "cartan_matrix", "character_report", "chebyshev", "cluster_character",
    "coxeter_matrix", "defect", "euler_complete_grassmannian", "euler_form",
    "exact_div", "frieze_value", "grassmannian_chi", "label_dimension",
    "label_to_point", "mutate", "point_to_label", "poly_prod",
    "quasi_simple_char", "quiver_from_json", "radical_vector", "recognize",
    "regular", "regular_char", "reorient_character", "seed_from_quiver",
    "shift", "shift_label", "slice_transport_check", "substitute_as_fraction",
    "symbolic_init", "tridiagonal_determinant", "tube_table", "unit_init",
]
