"""Exact rational arithmetic: fractional parts, multivariate polynomials and
Bernoulli polynomials.

Rationals are :class:`fractions.Fraction` throughout; nothing in this module
touches floating point.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

Rational = Fraction
Scalar = Union[int, Fraction]
Exponent = Tuple[int, ...]

__all__ = [
    "Rational",
    "MultiPoly",
    "frac",
    "parse_rational",
    "format_rational",
    "bernoulli_coefficients",
    "bernoulli_polynomial",
    "bernoulli_value",
    "bernoulli_number",
    "twisted_bernoulli_sum",
]


def frac(q: Scalar) -> Fraction:
    """Fractional part ``q - floor(q)``, always in ``[0, 1)``."""
    q = Fraction(q)
    return q - math.floor(q)


def parse_rational(text: str) -> Fraction:
    """Parse ``"a/b"``, ``"a"`` or a finite decimal string exactly."""
    text = text.strip()
    if not text:
        raise ValueError("empty rational literal")
    return Fraction(text)


def format_rational(q: Scalar) -> str:
    """Serialize as ``"num/den"``; the denominator is omitted when it is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class MultiPoly:
    """Polynomial with rational coefficients over ``nvars`` variables.

    Terms are stored as a dict from dense exponent tuples to nonzero
    Fractions.  Instances are treated as immutable.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Scalar] | None = None):
        self.nvars = nvars
        clean: Dict[Exponent, Fraction] = {}
        if terms:
            for exps, c in terms.items():
                if len(exps) != nvars:
                    raise ValueError(f"exponent {exps} does not match {nvars} variables")
                if c:
                    clean[tuple(exps)] = Fraction(c)
        self.terms = clean

    @classmethod
    def _raw(cls, nvars: int, terms: Dict[Exponent, Fraction]) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        return obj

    @classmethod
    def constant(cls, nvars: int, c: Scalar) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "MultiPoly":
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, {tuple(exps): 1})

    @classmethod
    def linear(cls, coeffs: Sequence[Scalar], const: Scalar = 0) -> "MultiPoly":
        nvars = len(coeffs)
        terms: Dict[Exponent, Scalar] = {(0,) * nvars: const}
        for i, c in enumerate(coeffs):
            exps = [0] * nvars
            exps[i] = 1
            terms[tuple(exps)] = c
        return cls(nvars, terms)

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def coefficient(self, exps: Exponent) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def univariate_coefficients(self) -> list:
        """Coefficient list ``[c0, c1, ...]`` of a one-variable polynomial."""
        if self.nvars != 1:
            raise ValueError("not a univariate polynomial")
        deg = max(self.degree(), 0)
        return [self.terms.get((i,), Fraction(0)) for i in range(deg + 1)]

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError("point dimension does not match polynomial")
        pt = [Fraction(p) for p in point]
        total = Fraction(0)
        for exps, c in self.terms.items():
            term = c
            for p, e in zip(pt, exps):
                if e:
                    term *= p**e
            total += term
        return total

    __call__ = evaluate

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "MultiPoly") -> None:
        if other.nvars != self.nvars:
            raise ValueError("polynomials live over different variable lists")

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> "MultiPoly":
        c = Fraction(c)
        if not c:
            return MultiPoly._raw(self.nvars, {})
        return MultiPoly._raw(self.nvars, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        out: Dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def compose(self, substitutions: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute polynomial ``substitutions[i]`` for variable ``i``."""
        if len(substitutions) != self.nvars:
            raise ValueError("need one substitution per variable")
        if not substitutions:
            return self
        target = substitutions[0].nvars
        powers: list[Dict[int, MultiPoly]] = [{0: MultiPoly.constant(target, 1)} for _ in substitutions]

        def power(i: int, e: int) -> MultiPoly:
            cache = powers[i]
            if e not in cache:
                cache[e] = power(i, e - 1) * substitutions[i]
            return cache[e]

        out = MultiPoly(target)
        for exps, c in self.terms.items():
            term = MultiPoly.constant(target, c)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
            out = out + term
        return out

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(self.nvars, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "MultiPoly(0)"
        parts = []
        for exps in sorted(self.terms, reverse=True):
            c = self.terms[exps]
            mono = "*".join(
                f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in enumerate(exps) if e
            )
            parts.append(f"{format_rational(c)}" + (f"*{mono}" if mono else ""))
        return "MultiPoly(" + " + ".join(parts) + ")"


@lru_cache(maxsize=None)
def bernoulli_coefficients(k: int) -> Tuple[Fraction, ...]:
    """Coefficients ``(c0, ..., ck)`` of ``B_k(x)``.

    Built from ``B_0 = 1``, ``B_k' = k B_{k-1}`` and ``int_0^1 B_k = 0``.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return (Fraction(1),)
    prev = bernoulli_coefficients(k - 1)
    # antiderivative of k*B_{k-1}; constant fixed by the zero-mean condition
    body = [Fraction(0)] + [k * c / (j + 1) for j, c in enumerate(prev)]
    mean = sum(c / (j + 1) for j, c in enumerate(body))
    body[0] = -mean
    return tuple(body)


def bernoulli_polynomial(k: int) -> MultiPoly:
    """``B_k(x)`` as a univariate :class:`MultiPoly`."""
    return MultiPoly(1, {(j,): c for j, c in enumerate(bernoulli_coefficients(k))})


def bernoulli_value(k: int, x: Scalar) -> Fraction:
    x = Fraction(x)
    acc = Fraction(0)
    for c in reversed(bernoulli_coefficients(k)):
        acc = acc * x + c
    return acc


def bernoulli_number(k: int) -> Fraction:
    """``B_k = B_k(0)`` (so ``B_1 = -1/2``)."""
    return bernoulli_coefficients(k)[0]


def _rho_power_sum(l: int, tau: int) -> Tuple[Fraction, Fraction]:
    # sum_a rho^{l a} B_tau(a/3) as r + s*sqrt(3)*i, using
    # rho^0 = 1, rho^1 = -1/2 + (sqrt3/2) i, rho^2 = -1/2 - (sqrt3/2) i
    table = {0: (Fraction(1), Fraction(0)), 1: (Fraction(-1, 2), Fraction(1, 2)), 2: (Fraction(-1, 2), Fraction(-1, 2))}
    r = Fraction(0)
    s = Fraction(0)
    for a in range(3):
        b = bernoulli_value(tau, Fraction(a, 3))
        re, im = table[(l * a) % 3]
        r += re * b
        s += im * b
    return r, s


def twisted_bernoulli_sum(l: int, tau: int) -> Tuple[Fraction, Fraction]:
    """Return ``(r, s)`` with ``sum_{a=0}^{2} rho^{l a} B_tau(a/3) = r + s*sqrt(3)*i``
    where ``rho = exp(2 pi i / 3)``."""
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    return _rho_power_sum(l, tau)


def binomial(n: int, k: int) -> int:
    """Binomial coefficient with ``C(n, 0) = 1`` for every ``n`` and zero
    whenever ``k < 0`` or ``0 <= n < k``."""
    if k == 0:
        return 1
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def content(values: Iterable[Fraction]) -> Fraction:
    """Positive rational ``c`` such that ``values / c`` are coprime integers."""
    vals = [Fraction(v) for v in values if v]
    if not vals:
        return Fraction(1)
    lcm_den = 1
    for v in vals:
        lcm_den = lcm_den * v.denominator // math.gcd(lcm_den, v.denominator)
    g = 0
    for v in vals:
        g = math.gcd(g, abs(v.numerator * (lcm_den // v.denominator)))
    return Fraction(g, lcm_den)
