"""Danielewski surfaces, overshear words and Nevanlinna growth estimates."""
from .autos import (
    FIRST,
    SECOND,
    I,
    Involution,
    Overshear,
    Word,
    compose_same_side,
    conjugate_normal_form,
    involution_apply,
    invert,
    overshear_apply,
    word_apply,
    word_from_json,
    word_reduce,
    word_to_json,
)
from .checks import REGISTRY, CheckReport, run_all, run_check
from .entire import EntireExpr, approx_equal, deriv, evaluate, is_transcendental, parse_entire
from .functions import SurfaceFunction, coordinate, parse_expression
from .nevanlinna import (
    CharacteristicEstimate,
    RSchedule,
    characteristic,
    characteristic_table,
    jacobian_xz,
    sample_sphere,
    slope_vs_logr,
    theta_apply,
)
from .poly import (
    ComplexPoly,
    assert_simple_zeros,
    complete_square,
    derivative,
    divided_difference,
    eval_poly,
    roots,
)
from .surface import (
    Danielewski,
    SurfacePoint,
    chart_xz,
    contains,
    fiber,
    project,
    random_point,
    tau,
)

__version__ = "0.1.0"

__all__ = [
    "FIRST", "SECOND", "I", "Involution", "Overshear", "Word",
    "compose_same_side", "conjugate_normal_form", "involution_apply", "invert",
    "overshear_apply", "word_apply", "word_from_json", "word_reduce", "word_to_json",
    "REGISTRY", "CheckReport", "run_all", "run_check",
    "EntireExpr", "approx_equal", "deriv", "evaluate", "is_transcendental", "parse_entire",
    "SurfaceFunction", "coordinate", "parse_expression",
    "CharacteristicEstimate", "RSchedule", "characteristic", "characteristic_table",
    "jacobian_xz", "sample_sphere", "slope_vs_logr", "theta_apply",
    "ComplexPoly", "assert_simple_zeros", "complete_square", "derivative",
    "divided_difference", "eval_poly", "roots",
    "Danielewski", "SurfacePoint", "chart_xz", "contains", "fiber", "project",
    "random_point", "tau",
]
