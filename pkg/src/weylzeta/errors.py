"""Exception hierarchy shared by every module.

Each class carries a short ``code`` used by the command line front end when
it reports failures as JSON.
"""

from __future__ import annotations


class WeylZetaError(Exception):
    code = "error"


class InputError(WeylZetaError, ValueError):
    """Bad user input (exit code 2 on the command line)."""

    code = "input_error"


class ComputationError(WeylZetaError, ArithmeticError):
    """A well-formed request the engines cannot complete (exit code 3)."""

    code = "computation_error"


class UnsupportedType(InputError):
    code = "unsupported_type"


class UnknownGroup(InputError):
    code = "unknown_group"


class VariableMismatch(InputError):
    code = "variable_mismatch"


class LengthClassMismatch(InputError):
    code = "length_class_mismatch"


class OddComponent(InputError):
    code = "odd_component"


class UnsupportedResidue(InputError):
    code = "unsupported_residue"


class NonIntegralPairing(ComputationError):
    code = "non_integral_pairing"


class DimensionTooHigh(ComputationError):
    code = "dimension_too_high"


class DivergentTerm(ComputationError):
    code = "divergent_term"


class Divergent(ComputationError):
    code = "divergent"


class NotProvablyConvergent(ComputationError):
    code = "not_provably_convergent"


class SlowConvergence(ComputationError):
    code = "slow_convergence"


class Undetermined(ComputationError):
    code = "undetermined"
