"""Exact and numeric evaluation of zeta functions attached to root systems."""

from .bernoulli_p import VolumeValue, p_function, p_function_lattice, volume_value, volume_value_from_exponents
from .errors import ComputationError, InputError, WeylZetaError
from .numeric import s_sum_numeric, witten_zeta_numeric, zeta_numeric
from .relations import psp2_parity_reduce, psp2_relation, pu3_even_diagonal, pu3_parity_reduce, t41_relation
from .roots import build_root_system, group_registry, intermediate_lattices, parse_type
from .symbolic import SymbolicValue

__version__ = "0.1.0"

__all__ = [
    "VolumeValue",
    "p_function",
    "p_function_lattice",
    "volume_value",
    "volume_value_from_exponents",
    "ComputationError",
    "InputError",
    "WeylZetaError",
    "s_sum_numeric",
    "witten_zeta_numeric",
    "zeta_numeric",
    "psp2_parity_reduce",
    "psp2_relation",
    "pu3_even_diagonal",
    "pu3_parity_reduce",
    "t41_relation",
    "build_root_system",
    "group_registry",
    "intermediate_lattices",
    "parse_type",
    "SymbolicValue",
]
