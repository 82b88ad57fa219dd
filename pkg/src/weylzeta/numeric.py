"""Floating-point evaluation: lattice zeta sums, the Weyl-image S-sum, Hurwitz
zeta by Euler-Maclaurin, basis constants, symbolic values and rational
reconstruction.

Double precision is the default.  Passing ``dps > 15`` switches the lattice
engine and the constants to mpmath at that many digits.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Sequence, Tuple, Union

import mpmath

from .errors import Divergent, InputError, NotProvablyConvergent, VariableMismatch
from .exact import bernoulli_number, bernoulli_value, binomial, frac
from .lattice_sum import DEFAULT_MAX_TERMS, LatticeSum, NumericResult, convergence_margin, evaluate
from .roots import Congruence, RootSystemData, SubLattice, group_registry, witten_normalization
from .symbolic import SymbolicValue

__all__ = [
    "NumericResult",
    "NoMatch",
    "hurwitz_zeta",
    "zeta_const",
    "L_chi3",
    "phi_numeric",
    "eval_symbolic",
    "rationalize",
    "zeta_numeric",
    "s_sum_numeric",
    "witten_zeta_numeric",
]

Real = Union[float, "mpmath.mpf"]


# ---------------------------------------------------------------------------
# Hurwitz zeta


def _hurwitz_em(s, a, terms: int, order: int, ctx):
    """Euler-Maclaurin with ``terms`` explicit terms and ``order`` corrections.

    Returns ``(value, first omitted correction)``.
    """
    n = terms + a
    head = ctx.fsum([(k + a) ** (-s) for k in range(terms)]) if ctx is mpmath else math.fsum(
        (k + a) ** (-s) for k in range(terms)
    )
    tail = n ** (1 - s) / (s - 1) + n ** (-s) / 2
    rising = s  # s (s+1) ... (s+2j-2)
    corr = []
    err = 0.0
    for j in range(1, order + 2):
        b = bernoulli_number(2 * j)
        fac = math.factorial(2 * j)
        if ctx is mpmath:
            term = mpmath.mpf(b.numerator) / b.denominator / fac * rising * n ** (-s - 2 * j + 1)
        else:
            term = float(b) / fac * rising * n ** (-s - 2 * j + 1)
        if j <= order:
            corr.append(term)
        else:
            err = abs(term)
        rising = rising * (s + 2 * j - 1) * (s + 2 * j)
    if ctx is mpmath:
        return head + tail + mpmath.fsum(corr), err
    return head + tail + math.fsum(corr), float(err)


def hurwitz_zeta(s: float, a: float = 1.0, terms: Optional[int] = None, correction_order: Optional[int] = None,
                 dps: int = 15):
    """``zeta(s, a) = sum_{m >= 0} (m + a)^{-s}`` for real ``s > 1``, ``0 < a <= 1``."""
    if s <= 1:
        raise Divergent("Hurwitz zeta needs s > 1")
    if dps > 15:
        with mpmath.workdps(dps + 10):
            sv = mpmath.mpmathify(s)
            av = mpmath.mpf(a.numerator) / a.denominator if isinstance(a, Fraction) else mpmath.mpmathify(a)
            if av <= 0:
                raise InputError("a must be positive")
            m = terms if terms is not None else dps + 10
            j = correction_order if correction_order is not None else dps
            return _hurwitz_em(sv, av, m, j, mpmath)[0]
    a = float(a)
    if a <= 0:
        raise InputError("a must be positive")
    m = terms if terms is not None else 12
    j = correction_order if correction_order is not None else 10
    return _hurwitz_em(float(s), a, m, j, math)[0]


def hurwitz_zeta_error(s: float, a: float = 1.0, terms: int = 12, correction_order: int = 10) -> float:
    """Magnitude of the first omitted Euler-Maclaurin correction."""
    return _hurwitz_em(float(s), float(a), terms, correction_order, math)[1]


# ---------------------------------------------------------------------------
# constants


def _frac_value(q, dps):
    if dps > 15:
        return mpmath.mpf(q.numerator) / q.denominator
    return q.numerator / q.denominator


@lru_cache(maxsize=None)
def zeta_const(n: int, dps: int = 15):
    if n < 2:
        raise Divergent("zeta(n) needs n >= 2")
    return hurwitz_zeta(n, 1.0 if dps <= 15 else Fraction(1), dps=dps)


@lru_cache(maxsize=None)
def L_chi3(n: int, dps: int = 15):
    """``L(n, chi_3) = sum chi_3(m) m^{-n}`` for ``n >= 1``."""
    if n == 1:
        # pi / (3 sqrt 3)
        if dps > 15:
            with mpmath.workdps(dps + 10):
                return mpmath.pi / (3 * mpmath.sqrt(3))
        return math.pi / (3 * math.sqrt(3))
    if dps > 15:
        with mpmath.workdps(dps + 10):
            return (hurwitz_zeta(n, Fraction(1, 3), dps=dps) - hurwitz_zeta(n, Fraction(2, 3), dps=dps)) / mpmath.mpf(3) ** n
    return (hurwitz_zeta(n, 1 / 3) - hurwitz_zeta(n, 2 / 3)) / 3.0**n


def phi_numeric(n: int, alpha, dps: int = 15) -> complex:
    """Lerch value ``sum_m e^{2 pi i m alpha} m^{-n}`` for rational ``alpha``, ``n >= 2``."""
    if n < 2:
        raise Divergent("phi(n, alpha) is only evaluated for n >= 2")
    alpha = frac(Fraction(alpha))
    den = alpha.denominator
    if den == 1:
        return complex(zeta_const(n, dps))
    if den == 2:
        return complex((2.0 ** (1 - n) - 1) * zeta_const(n))
    if den == 3:
        sign = 1 if alpha == Fraction(1, 3) else -1
        re = (3.0 ** (1 - n) - 1) * zeta_const(n) / 2
        im = sign * math.sqrt(3) * L_chi3(n) / 2
        return complex(re, im)
    # general rational residue: split m by its class mod den
    parts_re, parts_im = [], []
    for j in range(1, den + 1):
        h = hurwitz_zeta(n, j / den) / den**n
        ang = 2 * math.pi * float(frac(alpha * j))
        parts_re.append(math.cos(ang) * h)
        parts_im.append(math.sin(ang) * h)
    return complex(math.fsum(parts_re), math.fsum(parts_im))


# ---------------------------------------------------------------------------
# symbolic values


def eval_symbolic(v: SymbolicValue, dps: int = 15):
    """Numeric value of a canonical symbolic value (complex)."""
    if dps > 15:
        with mpmath.workdps(dps + 10):
            re, im = [], []
            for (p, ip, sp, zs, ls), c in v.sorted_terms():
                t = mpmath.mpf(c.numerator) / c.denominator * mpmath.pi**p
                if sp:
                    t *= mpmath.sqrt(3)
                for n in zs:
                    t *= zeta_const(n, dps)
                for n in ls:
                    t *= L_chi3(n, dps)
                (im if ip else re).append(t)
            return mpmath.mpc(mpmath.fsum(re), mpmath.fsum(im))
    re, im = [], []
    for (p, ip, sp, zs, ls), c in v.sorted_terms():
        t = float(c) * math.pi**p
        if sp:
            t *= math.sqrt(3)
        for n in zs:
            t *= zeta_const(n)
        for n in ls:
            t *= L_chi3(n)
        (im if ip else re).append(t)
    return complex(math.fsum(re), math.fsum(im))


class _NoMatch:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __bool__(self):
        return False

    def __repr__(self):
        return "NoMatch"


NoMatch = _NoMatch()


def _to_fraction(v) -> Fraction:
    if isinstance(v, mpmath.mpf):
        man, exp = v.man, v.exp
        return Fraction(int(man)) * Fraction(2) ** int(exp) if v else Fraction(0)
    return Fraction(float(v))


def rationalize(v, kappa: int, max_den: int, tail_bound: Optional[float] = None):
    """Best rational ``q`` (denominator ``<= max_den``) with ``v ~ q * pi^kappa``.

    Returns :data:`NoMatch` when ``|v - q pi^kappa|`` exceeds ``10 * tail_bound``
    (default bound: a few ulps of ``v``).
    """
    if max_den > 10**15 or max_den < 1:
        raise InputError("max_den must lie in [1, 1e15]")
    if isinstance(v, complex):
        if abs(v.imag) > 1e-12 * max(1.0, abs(v.real)):
            return NoMatch
        v = v.real
    if isinstance(v, mpmath.mpc):
        v = v.real
    if isinstance(v, mpmath.mpf):
        with mpmath.workdps(max(mpmath.mp.dps, 40)):
            x = v / mpmath.pi**kappa
            q = _to_fraction(x).limit_denominator(max_den)
            resid = abs(v - mpmath.mpf(q.numerator) / q.denominator * mpmath.pi**kappa)
            bound = tail_bound if tail_bound is not None else abs(v) * mpmath.mpf(10) ** (-(mpmath.mp.dps - 5))
            return q if resid <= 10 * bound else NoMatch
    v = float(v)
    x = v / math.pi**kappa
    q = _to_fraction(x).limit_denominator(max_den)
    resid = abs(v - float(q) * math.pi**kappa)
    bound = tail_bound if tail_bound is not None else 4 * abs(v) * 2.0**-52
    return q if resid <= 10 * bound else NoMatch


# ---------------------------------------------------------------------------
# lattice sums


def _as_twist(y, rank: int):
    if y is None:
        return tuple(Fraction(0) for _ in range(rank))
    y = tuple(y)
    if len(y) != rank:
        raise VariableMismatch(f"twist needs {rank} coordinates, got {len(y)}")
    out = []
    for v in y:
        if isinstance(v, (int, Fraction)):
            out.append(frac(Fraction(v)))
        elif isinstance(v, str):
            out.append(frac(Fraction(v)))
        elif isinstance(v, float) and v.is_integer():
            out.append(Fraction(0))
        else:
            out.append(v)
    return tuple(out)


def _as_exponents(s):
    out = []
    for v in s:
        if isinstance(v, Fraction) and v.denominator == 1:
            v = int(v)
        if isinstance(v, float) and v.is_integer():
            v = int(v)
        if isinstance(v, complex) and v.imag == 0 and v.real.is_integer():
            v = int(v.real)
        out.append(v)
    return tuple(out)


def zeta_numeric(
    rs: RootSystemData,
    L: Optional[SubLattice],
    s: Sequence,
    y: Optional[Sequence] = None,
    tol: float = 1e-10,
    rel_tol: float = 0.0,
    max_terms: int = DEFAULT_MAX_TERMS,
    dps: int = 15,
    threads: int = 1,
) -> NumericResult:
    """Twisted zeta sum over ``lambda + rho in L + rho`` with ``lambda`` dominant.

    ``threads`` is accepted for interface compatibility; evaluation is
    single-threaded so results are bit-reproducible.
    """
    s = _as_exponents(s)
    if len(s) != rs.n_positive:
        raise VariableMismatch(f"{rs.name} needs {rs.n_positive} exponents, got {len(s)}")
    congs = tuple(L.congruences) if L is not None else ()
    spec = LatticeSum(tuple(rs.positive_coroots), s, congs, _as_twist(y, rs.rank))
    return evaluate(spec, tol=tol, rel_tol=rel_tol, max_terms=max_terms, dps=dps)


def _weyl_image(rs: RootSystemData, w, k: Sequence[int], y: Sequence[Fraction]):
    """Exponents, twist and sign of the ``w``-image summand over ``P++``."""
    r = rs.rank
    index = {c: a for a, c in enumerate(rs.positive_coroots)}
    new_k = [0] * rs.n_positive
    sign = 1
    for a, c in enumerate(rs.positive_coroots):
        v = tuple(sum(w[i][j] * c[i] for i in range(r)) for j in range(r))  # w^T c
        if v in index:
            b = index[v]
        else:
            b = index[tuple(-x for x in v)]
            if k[a] % 2:
                sign = -sign
        new_k[b] = k[a]
    new_y = tuple(frac(sum((w[i][j] * y[i] for i in range(r)), Fraction(0))) for j in range(r))
    return tuple(new_k), new_y, sign


def s_sum_numeric(
    rs: RootSystemData,
    k: Sequence[int],
    y: Optional[Sequence] = None,
    L: Optional[SubLattice] = None,
    tol: float = 1e-10,
    dps: int = 15,
    max_terms: int = DEFAULT_MAX_TERMS,
    threads: int = 1,
) -> NumericResult:
    """``S(k, y, f)`` as the signed sum of twisted zeta sums over the Weyl images
    of the dominant chamber (``f`` the indicator of ``L + rho``, or 1)."""
    k = tuple(int(x) for x in k)
    if len(k) != rs.n_positive:
        raise VariableMismatch(f"{rs.name} needs {rs.n_positive} exponents, got {len(k)}")
    if any(x < 2 for x in k):
        raise InputError("the S-sum needs every exponent >= 2")
    y = _as_twist(y, rs.rank)
    if not all(isinstance(v, Fraction) for v in y):
        raise InputError("the S-sum needs a rational twist")
    groups: Dict[Tuple, int] = {}
    order = []
    for w in rs.weyl_elements:
        nk, ny, sign = _weyl_image(rs, w, k, y)
        key = (nk, ny)
        if key not in groups:
            groups[key] = 0
            order.append(key)
        groups[key] += sign
    per = tol / max(1, len(order))
    parts_re, parts_im, bound, terms = [], [], 0.0, 0
    for key in order:
        mult = groups[key]
        if mult == 0:
            continue
        res = zeta_numeric(rs, L, key[0], key[1], tol=per / abs(mult), dps=dps, max_terms=max_terms)
        val = complex(res.value)
        parts_re.append(mult * val.real)
        parts_im.append(mult * val.imag)
        bound += abs(mult) * res.tail_bound
        terms += res.terms_used
    return NumericResult(complex(math.fsum(parts_re), math.fsum(parts_im)), bound, terms, "weyl-images")


def witten_zeta_numeric(group: str, s: float, tol: float = 1e-10, dps: int = 15) -> NumericResult:
    """``K^s zeta(s, ..., s; L)`` with ``K`` the product of the coroot heights."""
    rs, L = group_registry(group)
    K = witten_normalization(rs)
    scale = float(K) ** s
    res = zeta_numeric(rs, L, [s] * rs.n_positive, None, tol=tol / scale, dps=dps)
    return NumericResult(res.value * scale, res.tail_bound * scale, res.terms_used, res.method)
