"""Periodic solutions of x'(t) = a(t) f(x(t-1)) with relay feedback."""

from ._relaydde import (
    Params,
    RelayError,
    apply_F,
    classify,
    coefficient_value,
    coexistence_check,
    dual_params,
    integrate,
    nonlinearity_value,
    perturbation_growth,
    propagate,
    reproduce_tables,
    scan,
    simulate_csv,
    smoothing_convergence,
    type1_fixed_point,
    type1_map,
    type2_map,
    type2_two_cycle,
    zeros,
)

__all__ = [
    "Params",
    "RelayError",
    "apply_F",
    "classify",
    "coefficient_value",
    "coexistence_check",
    "dual_params",
    "integrate",
    "nonlinearity_value",
    "perturbation_growth",
    "propagate",
    "reproduce_tables",
    "scan",
    "simulate_csv",
    "smoothing_convergence",
    "type1_fixed_point",
    "type1_map",
    "type2_map",
    "type2_two_cycle",
    "zeros",
]
