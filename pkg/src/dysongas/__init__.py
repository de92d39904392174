"""Mean Coulomb energy of the beta = 1 two-dimensional Dyson gas.

Exact finite-N values over the basis {1, gamma, ln 2, ln N}, the recursions
they satisfy, the unit-argument 3F2 closed form, the large-N expansion and a
Metropolis cross-check.
"""
from .closed_form import (
    EnergyReport,
    Hyp3F2Query,
    energy_exact,
    energy_report,
    energy_rescaled,
    finite_sum_S,
    hyp3f2,
    hyp3f2_identity_residual,
)
from .correlator import CorrelatorQuery, e_formula, e_oracle, e_table, partition_beta1
from .exact import ConstExpr, HighPrec, digamma_int, eval_const, gamma_half_ratio, harmonic
from .recursion import solve_energy_forward

__all__ = [
    "ConstExpr",
    "CorrelatorQuery",
    "EnergyReport",
    "HighPrec",
    "Hyp3F2Query",
    "digamma_int",
    "e_formula",
    "e_oracle",
    "e_table",
    "energy_exact",
    "energy_report",
    "energy_rescaled",
    "eval_const",
    "finite_sum_S",
    "gamma_half_ratio",
    "harmonic",
    "hyp3f2",
    "hyp3f2_identity_residual",
    "partition_beta1",
    "solve_energy_forward",
]
