"""Character-variety computations for the rank-2 free group.

Markoff-type integer orbits, Farey trace recursion, extended length
functions and their level sets.
"""
from .farey import (
    Cone,
    PrimitiveClass,
    Slope,
    christoffel_exponents,
    cone_decompose,
    farey_parents,
    mediant,
    stern_brocot_path,
)
from .lengths import (
    AreaResult,
    LevelSetSample,
    area,
    concavity_check,
    convexity_check,
    equilateral_family,
    estimate_compare,
    length_extended,
    level_set,
    sectors,
    spikes,
    transvection_check,
)
from .markoff import (
    BigTriple,
    Move,
    apply_move,
    brute_force_box,
    clebsch_roots,
    count,
    enumerate_orbit,
    markoff_correspondence,
    normalize_signs,
    parabolic_line_points,
    reduce,
)
from .traces import (
    Character,
    Holonomy,
    MatrixPair,
    TheoremOneCase,
    TraceContext,
    classify_character,
    classify_holonomy,
    fricke_matrices,
    gamma2_matrices,
    kappa,
    length_of_class,
    trace_of_class,
    word_trace,
)

__version__ = "0.1.0"
