"""Generalized periodic Bernoulli functions and Witten volume values.

``p_function`` evaluates the iterated integral over ``[0,1]^d`` (one
variable per non-simple positive root) exactly: the fractional parts become
integer shifts on the cells of :func:`polytope.cut_unit_cube`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Tuple

from .errors import DimensionTooHigh, InputError, LengthClassMismatch, OddComponent, VariableMismatch
from .exact import bernoulli_coefficients, frac
from .polytope import MAX_DIM, AffineFactor, Cell, LinearForm, cut_unit_cube, integrate_over_complex
from .roots import (
    RootSystemData,
    SubLattice,
    fourier_coefficient,
    minuscule_representatives,
)

__all__ = [
    "VolumeValue",
    "p_function",
    "p_function_lattice",
    "volume_value",
    "volume_value_from_exponents",
    "s_prefactor",
    "p_function_numeric",
]


@dataclass(frozen=True)
class VolumeValue:
    """The exact number ``q * pi**kappa``."""

    q: Fraction
    kappa: int

    def to_json(self) -> dict:
        from .exact import format_rational

        return {"q": format_rational(self.q), "pi_power": self.kappa}

    def __float__(self) -> float:
        return float(self.q) * math.pi**self.kappa


def _check_k(rs: RootSystemData, k: Sequence[int]) -> Tuple[int, ...]:
    k = tuple(int(x) for x in k)
    if len(k) != rs.n_positive:
        raise VariableMismatch(f"{rs.name} needs {rs.n_positive} exponents, got {len(k)}")
    if any(x < 0 for x in k):
        raise InputError("exponents must be nonnegative")
    return k


def _check_y(rs: RootSystemData, y: Sequence) -> Tuple[Fraction, ...]:
    y = tuple(Fraction(v) for v in y)
    if len(y) != rs.rank:
        raise VariableMismatch(f"{rs.name} twist needs {rs.rank} coordinates, got {len(y)}")
    return y


@lru_cache(maxsize=None)
def _p_cached(rs: RootSystemData, k: Tuple[int, ...], y: Tuple[Fraction, ...]) -> Fraction:
    simple = rs.simple_indices()
    others = [a for a in range(rs.n_positive) if a not in simple]
    d = len(others)
    if d > MAX_DIM:
        raise DimensionTooHigh(
            f"exact integration for {rs.name} needs {d} variables (max {MAX_DIM}); use the numeric route"
        )
    forms = []
    for i in range(rs.rank):
        coeffs = tuple(-rs.positive_coroots[a][i] for a in others)
        forms.append(LinearForm(coeffs, y[i]))
    complex_ = cut_unit_cube(d, forms)

    free_factors = []
    for j, a in enumerate(others):
        unit = tuple(Fraction(int(t == j)) for t in range(d))
        free_factors.append(AffineFactor(bernoulli_coefficients(k[a]), unit, Fraction(0)))

    def integrand(cell: Cell):
        factors = list(free_factors)
        for i, form in enumerate(forms):
            factors.append(
                AffineFactor(
                    bernoulli_coefficients(k[simple[i]]),
                    tuple(Fraction(c) for c in form.coeffs),
                    form.offset - cell.shift[i],
                )
            )
        return factors

    return integrate_over_complex(complex_, integrand)


def p_function(rs: RootSystemData, k: Sequence[int], y: Sequence) -> Fraction:
    """Exact value of the generalized periodic Bernoulli function at ``(k, y)``.

    ``y`` is reduced mod 1 first (the function is periodic in the coroot
    lattice), which keeps every cut-hyperplane offset in ``[0, 1)``.
    """
    k = _check_k(rs, k)
    y = tuple(frac(v) for v in _check_y(rs, y))
    return _p_cached(rs, k, y)


def p_function_lattice(rs: RootSystemData, L: SubLattice, k: Sequence[int], y: Sequence) -> Fraction:
    y = _check_y(rs, y)
    total = Fraction(0)
    for mu in L.dual_reps:
        c = fourier_coefficient(L, mu)
        if c:
            total += c * p_function(rs, k, tuple(a + b for a, b in zip(y, mu)))
    return total


def s_prefactor(k: Sequence[int]) -> Tuple[Fraction, int, int]:
    """``(-1)^n prod (2 pi i)^{k_a} / k_a!`` as ``(rational, pi power, i power mod 4)``."""
    q = Fraction((-1) ** len(k))
    for ka in k:
        q *= Fraction(2**ka, math.factorial(ka))
    ipow = sum(k) % 4
    return q, sum(k), ipow


def _check_length_classes(rs: RootSystemData, k: Sequence[int]) -> None:
    seen = {}
    for cls, ka in zip(rs.length_class, k):
        if seen.setdefault(cls, ka) != ka:
            raise LengthClassMismatch(
                f"exponents must be constant on each length class; class {cls!r} has {seen[cls]} and {ka}"
            )


def volume_value(
    rs: RootSystemData, L: SubLattice, k: Sequence[int], nu: Sequence | None = None
) -> VolumeValue:
    """``zeta(2k, nu; L) = q * pi^kappa`` for half-exponents ``k`` (each ``>= 1``)."""
    k = _check_k(rs, k)
    if any(x < 1 for x in k):
        raise InputError("every k_alpha must be at least 1")
    _check_length_classes(rs, k)
    nu = _check_y(rs, nu if nu is not None else [0] * rs.rank)
    reps = minuscule_representatives(rs)
    if not any(all(frac(a - b) == 0 for a, b in zip(nu, m)) for m in reps):
        raise InputError("nu must be a minuscule coweight representative (or 0)")
    two_k = tuple(2 * x for x in k)
    p = p_function_lattice(rs, L, two_k, nu)
    q = Fraction((-1) ** rs.n_positive, rs.weyl_order)
    for x in k:
        q *= Fraction((-1) ** x * 2 ** (2 * x), math.factorial(2 * x))
    return VolumeValue(q * p, sum(two_k))


def volume_value_from_exponents(
    rs: RootSystemData, L: SubLattice, s: Sequence[int], nu: Sequence | None = None
) -> VolumeValue:
    """Same as :func:`volume_value` but takes the even zeta exponents ``2k``."""
    s = tuple(int(x) for x in s)
    if any(x % 2 for x in s):
        raise OddComponent("the volume formula only covers even exponents")
    return volume_value(rs, L, [x // 2 for x in s], nu)


def p_function_numeric(rs: RootSystemData, k: Sequence[int], y: Sequence, tol: float = 1e-10, **kw):
    """Numeric value of the Bernoulli function via the truncated S-sum.

    Returns ``(value, bound)`` where ``bound`` is the propagated tail bound.
    """
    from .numeric import s_sum_numeric

    k = _check_k(rs, k)
    if any(x < 2 for x in k):
        raise InputError("the S-sum route needs every exponent >= 2")
    y = _check_y(rs, y)
    pref, _, ipow = s_prefactor(k)
    scale = float(pref) * math.pi ** sum(k)
    unit = [1, 1j, -1, -1j][ipow]
    res = s_sum_numeric(rs, k, y, None, tol=tol * abs(scale), **kw)
    value = res.value / (scale * unit)
    return value.real, res.tail_bound / abs(scale)
