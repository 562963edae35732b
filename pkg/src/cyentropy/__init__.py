"""Categorical entropy of ``T_O o (- (x) O(-1))`` on Calabi-Yau hypersurfaces."""

from .cohomology import counterexample_report, mukai_pairing, mukai_vector, phi_action_matrix, spectral_analysis
from .dynamics import b_table, c_sequence, composition_oracle, growth_estimate, verify_partition_formula
from .entropy import entropy_curve, hilbert_series_closed_form, solve_entropy, sweep
from .geometry import characteristic_classes, euler_characteristic, hilbert_polynomial, make_variety
from .numerics import Polynomial, RationalFunction, certified_monotone_root, generalized_binomial, ratfun_eval

__version__ = "0.1.0"

__all__ = [
    "b_table",
    "c_sequence",
    "certified_monotone_root",
    "characteristic_classes",
    "composition_oracle",
    "counterexample_report",
    "entropy_curve",
    "euler_characteristic",
    "generalized_binomial",
    "growth_estimate",
    "hilbert_polynomial",
    "hilbert_series_closed_form",
    "make_variety",
    "mukai_pairing",
    "mukai_vector",
    "phi_action_matrix",
    "Polynomial",
    "ratfun_eval",
    "RationalFunction",
    "solve_entropy",
    "spectral_analysis",
    "sweep",
    "verify_partition_formula",
]
