"""Exact Q-linear combinations of monomials ``pi^a i^b sqrt3^c prod zeta(n)
prod L(m, chi_3)``.

Canonical form: ``i`` and ``sqrt3`` appear to power 0 or 1, even zeta values
are rewritten as rational multiples of powers of pi, zero coefficients are
dropped.  Two canonical values are equal iff their term maps are equal.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple, Union

from .errors import DivergentTerm, UnsupportedResidue
from .exact import bernoulli_number, format_rational, frac

# (pi power, i power, sqrt3 power, odd zeta arguments, L(., chi_3) arguments)
Monomial = Tuple[int, int, int, Tuple[int, ...], Tuple[int, ...]]
Number = Union[int, Fraction]

__all__ = [
    "SymbolicValue",
    "phi_to_basis",
    "zeta_even_reduce",
    "zeta",
    "L3",
    "PI",
    "I",
    "SQRT3",
    "ONE",
    "ZERO",
]

_ONE_MONO: Monomial = (0, 0, 0, (), ())


def _zeta_even_coefficient(m: int) -> Fraction:
    # zeta(2m) = (-1)^{m+1} B_{2m} (2 pi)^{2m} / (2 (2m)!)
    return (-1) ** (m + 1) * bernoulli_number(2 * m) * Fraction(2 ** (2 * m), 2 * math.factorial(2 * m))


def _canonical_terms(raw: Iterable[Tuple[Tuple[int, int, int, Tuple[int, ...], Tuple[int, ...]], Fraction]]):
    out: Dict[Monomial, Fraction] = {}
    for (p, ip, sp, zs, ls), c in raw:
        c = Fraction(c)
        if not c:
            continue
        if p < 0:
            raise ValueError("negative power of pi")
        ip %= 4
        if ip >= 2:
            c = -c
            ip -= 2
        if sp < 0:
            # 1/sqrt3 = sqrt3/3
            c /= Fraction(3) ** ((-sp + 1) // 2)
            sp = sp % 2
        c *= 3 ** (sp // 2)
        sp %= 2
        odd = []
        for n in zs:
            if n <= 1:
                raise DivergentTerm(f"zeta({n}) is not a finite constant")
            if n % 2 == 0:
                c *= _zeta_even_coefficient(n // 2)
                p += n
            else:
                odd.append(n)
        for n in ls:
            if n < 1:
                raise ValueError("L(n, chi_3) needs n >= 1")
        key = (p, ip, sp, tuple(sorted(odd)), tuple(sorted(ls)))
        v = out.get(key, 0) + c
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return out


class SymbolicValue:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Number] | None = None):
        self.terms: Dict[Monomial, Fraction] = _canonical_terms((terms or {}).items())

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "SymbolicValue":
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def rational(cls, q: Number) -> "SymbolicValue":
        return cls({_ONE_MONO: q})

    @classmethod
    def monomial(cls, coeff: Number = 1, pi: int = 0, i: int = 0, sqrt3: int = 0,
                 zeta: Iterable[int] = (), L3: Iterable[int] = ()) -> "SymbolicValue":
        return cls({(pi, i, sqrt3, tuple(zeta), tuple(L3)): coeff})

    def canonicalize(self) -> "SymbolicValue":
        return SymbolicValue(self.terms)

    # arithmetic -----------------------------------------------------------

    @staticmethod
    def _lift(x) -> "SymbolicValue":
        if isinstance(x, SymbolicValue):
            return x
        if isinstance(x, (int, Fraction)):
            return SymbolicValue.rational(x)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return SymbolicValue._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return SymbolicValue._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, q: Number) -> "SymbolicValue":
        q = Fraction(q)
        if not q:
            return SymbolicValue._raw({})
        return SymbolicValue._raw({k: c * q for k, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        raw = []
        for (p1, i1, s1, z1, l1), c1 in self.terms.items():
            for (p2, i2, s2, z2, l2), c2 in other.terms.items():
                raw.append(((p1 + p2, i1 + i2, s1 + s2, z1 + z2, l1 + l2), c1 * c2))
        return SymbolicValue._raw(_canonical_terms(raw))

    __rmul__ = __mul__

    def __truediv__(self, q):
        if isinstance(q, (int, Fraction)):
            return self.scale(1 / Fraction(q))
        return NotImplemented

    def __pow__(self, n: int) -> "SymbolicValue":
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def conjugate(self) -> "SymbolicValue":
        return SymbolicValue._raw({k: (-c if k[1] else c) for k, c in self.terms.items()})

    # queries --------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_real(self) -> bool:
        return all(k[1] == 0 for k in self.terms)

    def real_part(self) -> "SymbolicValue":
        return SymbolicValue._raw({k: c for k, c in self.terms.items() if k[1] == 0})

    def imag_part(self) -> "SymbolicValue":
        """Coefficient of ``i`` (itself a real value)."""
        return SymbolicValue._raw({(k[0], 0, k[2], k[3], k[4]): c for k, c in self.terms.items() if k[1]})

    def is_rational_pi_power(self) -> bool:
        """True when the value is ``q * pi^k`` for a single ``k`` (or zero)."""
        if not self.terms:
            return True
        if len(self.terms) != 1:
            return False
        (p, ip, sp, zs, ls), = self.terms
        return ip == 0 and sp == 0 and not zs and not ls

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SymbolicValue.rational(other)
        if not isinstance(other, SymbolicValue):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (kv[0][3], kv[0][4], kv[0][1], kv[0][2], kv[0][0]))

    # serialization --------------------------------------------------------

    def to_json(self) -> list:
        return [
            {
                "coeff": format_rational(c),
                "pi": p,
                "i": ip,
                "sqrt3": sp,
                "zeta": list(zs),
                "L3": list(ls),
            }
            for (p, ip, sp, zs, ls), c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, data: list) -> "SymbolicValue":
        terms = {}
        for t in data:
            key = (int(t["pi"]), int(t["i"]), int(t["sqrt3"]), tuple(t["zeta"]), tuple(t["L3"]))
            terms[key] = terms.get(key, 0) + Fraction(t["coeff"])
        return cls(terms)

    def _render(self, latex: bool) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (p, ip, sp, zs, ls), c in self.sorted_terms():
            factors = []
            if sp:
                factors.append(r"\sqrt{3}" if latex else "sqrt3")
            if ip:
                factors.append("i")
            if p:
                base = r"\pi" if latex else "pi"
                factors.append(base if p == 1 else f"{base}^{{{p}}}" if latex else f"{base}^{p}")
            for n in zs:
                factors.append(rf"\zeta({n})" if latex else f"zeta({n})")
            for n in ls:
                factors.append(rf"L({n},\chi_3)" if latex else f"L({n},chi3)")
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if latex:
                coef = (str(a.numerator) if a.denominator == 1 else rf"\frac{{{a.numerator}}}{{{a.denominator}}}")
                body = " ".join(factors)
            else:
                coef = format_rational(a)
                body = "*".join(factors)
            if body:
                text = body if a == 1 else (f"{coef} {body}" if latex else f"{coef}*{body}")
            else:
                text = coef
            parts.append((sign, text))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    def __str__(self) -> str:
        return self._render(False)

    def latex(self) -> str:
        return self._render(True)

    def __repr__(self) -> str:
        return f"SymbolicValue({self})"


ZERO = SymbolicValue()
ONE = SymbolicValue.rational(1)
PI = SymbolicValue.monomial(pi=1)
I = SymbolicValue.monomial(i=1)
SQRT3 = SymbolicValue.monomial(sqrt3=1)


def zeta(n: int) -> SymbolicValue:
    return SymbolicValue.monomial(zeta=(n,))


def L3(n: int) -> SymbolicValue:
    return SymbolicValue.monomial(L3=(n,))


def zeta_even_reduce(m: int) -> SymbolicValue:
    if m < 1:
        raise ValueError("m must be positive")
    return SymbolicValue.monomial(_zeta_even_coefficient(m), pi=2 * m)


def phi_to_basis(n: int, alpha: Number) -> SymbolicValue:
    """Lerch value ``phi(n, alpha) = sum_m e^{2 pi i m alpha} m^{-n}`` in the basis."""
    alpha = frac(Fraction(alpha))
    if n < 1:
        raise ValueError("n must be positive")
    if alpha == 0:
        if n == 1:
            raise DivergentTerm("phi(1, 0) = zeta(1) diverges")
        return zeta(n)
    if n < 2:
        raise UnsupportedResidue("only n >= 2 is covered for nonzero residues")
    if alpha == Fraction(1, 2):
        return zeta(n).scale(Fraction(2) ** (1 - n) - 1)
    if alpha.denominator == 3:
        sign = 1 if alpha == Fraction(1, 3) else -1
        real = zeta(n).scale((Fraction(3) ** (1 - n) - 1) / 2)
        imag = SymbolicValue.monomial(Fraction(sign, 2), i=1, sqrt3=1, L3=(n,))
        return real + imag
    raise UnsupportedResidue(f"residue {alpha} has denominator outside {{1, 2, 3}}")
