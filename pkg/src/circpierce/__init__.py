"""Piercing numbers and agreement in circular approval societies."""
from .constructions import ConstructionSpec, figure_society, sharp_society, uniform_society
from .counting import (
    Piece,
    StepFunction,
    agreement_number,
    counting_function,
    euler_integral,
    extremum_intervals,
    is_km_agreeable,
    min_agreeable_m,
    riemann_integral,
)
from .errors import InvariantViolation, KindMismatchError, ParameterError, SocietyFormatError
from .piercing import (
    PiercingResult,
    circular_pierce_alg2,
    exact_pierce,
    extract_disjoint_family,
    greedy_linear_pierce,
    is_linear_equivalent,
    max_disjoint_family,
    piercing_number,
    verify_bounds,
    verify_piercing,
)
from .randomsim import (
    RandomSocietyParams,
    SimulationReport,
    disjoint_probability_check,
    expected_tau_formula,
    formula_tau1_n3,
    formula_tau_k,
    random_society,
    simulate,
)
from .spectrum import Arc, Society, arc_contains, arcs_intersect, load_society, loads_society, make_society

__version__ = "0.1.0"
