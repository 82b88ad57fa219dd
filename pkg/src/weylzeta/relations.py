"""Functional relations among A2 and C2 zeta values and the exact solvers built
on them."""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .bernoulli_p import VolumeValue
from .errors import ComputationError, DivergentTerm, InputError, Undetermined, VariableMismatch
from .exact import bernoulli_value, binomial, format_rational
from .roots import group_registry
from .symbolic import I, ONE, PI, SymbolicValue, ZERO, phi_to_basis, zeta

__all__ = [
    "ZetaSpec",
    "Relation",
    "TSpec",
    "T_FIXTURES",
    "t41_relation",
    "pu3_even_diagonal",
    "psp2_relation",
    "pu3_parity_reduce",
    "pfd_reduce",
    "pfd_identity_holds",
    "psp2_parity_reduce",
    "ParityResult",
    "t_zeta_numeric",
    "lem44_sides",
    "lem44_numeric_check",
]


@dataclass(frozen=True)
class ZetaSpec:
    group: str
    exponents: Tuple[int, ...]
    twist: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        rs, _ = group_registry(self.group)
        object.__setattr__(self, "exponents", tuple(int(x) for x in self.exponents))
        if len(self.exponents) != rs.n_positive:
            raise VariableMismatch(f"{self.group} needs {rs.n_positive} exponents, got {len(self.exponents)}")
        tw = tuple(Fraction(x) for x in self.twist) if self.twist else tuple(Fraction(0) for _ in range(rs.rank))
        object.__setattr__(self, "twist", tw)

    def to_json(self) -> dict:
        return {"group": self.group, "exponents": list(self.exponents), "twist": [format_rational(t) for t in self.twist]}

    def __str__(self):
        body = ",".join(str(e) for e in self.exponents)
        return f"zeta(({body});{self.group})"

    def numeric(self, tol: float = 1e-8):
        from .numeric import zeta_numeric

        rs, L = group_registry(self.group)
        return zeta_numeric(rs, L, self.exponents, self.twist, tol=tol)


@dataclass
class Relation:
    """``sum coeff * zeta(spec) = rhs``."""

    lhs: List[Tuple[Fraction, ZetaSpec]]
    rhs: SymbolicValue

    def merged(self) -> Dict[ZetaSpec, Fraction]:
        out: Dict[ZetaSpec, Fraction] = {}
        for c, spec in self.lhs:
            out[spec] = out.get(spec, 0) + Fraction(c)
        return {k: v for k, v in out.items() if v}

    def solve_single(self) -> SymbolicValue:
        """Value of the unique unknown when all LHS terms coincide."""
        m = self.merged()
        if len(m) != 1:
            raise Undetermined(f"relation involves {len(m)} distinct zeta values")
        (spec, c), = m.items()
        return self.rhs.scale(1 / c)

    def numeric_residual(self, tol: float = 1e-8) -> Tuple[complex, float]:
        """``(sum coeff * numeric(spec) - numeric(rhs), combined bound)``."""
        from .numeric import eval_symbolic

        total = 0j
        bound = 0.0
        for spec, c in self.merged().items():
            res = spec.numeric(tol / (4 * max(1, abs(float(c)))))
            total += float(c) * complex(res.value)
            bound += abs(float(c)) * res.tail_bound
        rhs = eval_symbolic(self.rhs)
        bound += 1e-13 * max(1.0, abs(rhs))
        return total - rhs, bound

    def check(self, tol: float = 1e-6) -> bool:
        resid, bound = self.numeric_residual(tol / 10)
        return abs(resid) <= tol + bound

    def to_json(self) -> dict:
        return {
            "lhs": [{"coeff": format_rational(c), "zeta": s.to_json()} for c, s in self.lhs],
            "rhs": self.rhs.to_json(),
            "rhs_text": str(self.rhs),
        }


def _two_pi_i_power(tau: int) -> SymbolicValue:
    return SymbolicValue.monomial(Fraction(2) ** tau, pi=tau, i=tau)


def _phi(n: int, alpha: Fraction) -> SymbolicValue:
    if n == 1 and alpha % 1 == 0:
        raise DivergentTerm("a zeta(1) term would occur")
    return phi_to_basis(n, alpha % 1)


def t41_relation(p: int, q: int, s: int) -> Relation:
    if p < 1 or q < 1:
        raise InputError("p and q must be positive")
    if s < 1:
        raise InputError("s must be at least 1")
    n = s + p + q
    lhs = [
        (Fraction(3), ZetaSpec("PU3", (p, q, s))),
        (Fraction(3 * (-1) ** p), ZetaSpec("PU3", (p, s, q))),
        (Fraction(3 * (-1) ** q), ZetaSpec("PU3", (q, s, p))),
    ]
    rhs = ZERO
    for tau in range(p + 1):
        c = binomial(p + q - tau - 1, q - 1) * (-1) ** tau * Fraction(1, math.factorial(tau))
        if not c:
            continue
        inner = ZERO
        for a in range(3):
            b = bernoulli_value(tau, Fraction(a, 3))
            if b:
                inner = inner + _phi(n - tau, Fraction(-a, 3)).scale(b)
        rhs = rhs - (_two_pi_i_power(tau) * inner).scale(c)
    for tau in range(q + 1):
        c = binomial(p + q - tau - 1, p - 1) * Fraction(1, math.factorial(tau))
        if not c:
            continue
        inner = ZERO
        for a in range(3):
            b = bernoulli_value(tau, Fraction(a, 3))
            if b:
                inner = inner + _phi(n - tau, Fraction(a, 3)).scale(b)
        rhs = rhs - (_two_pi_i_power(tau) * inner).scale(c)
    return Relation(lhs, rhs)


def pu3_even_diagonal(kk: int) -> VolumeValue:
    """``zeta((2k,2k,2k); PU(3))`` as ``q * pi^{6k}``."""
    if kk < 1:
        raise InputError("k must be positive")
    total = Fraction(0)
    for tau in range(2 * kk + 1):
        c = binomial(4 * kk - tau - 1, 2 * kk - 1)
        if not c:
            continue
        acc = Fraction(0)
        for a in range(3):
            x = Fraction(a, 3)
            acc += bernoulli_value(tau, x) * bernoulli_value(6 * kk - tau, x)
        total += c * acc / (math.factorial(tau) * math.factorial(6 * kk - tau))
    # (2 pi i)^{6k} = (-1)^{3k} 2^{6k} pi^{6k}
    q = total * (-1) ** (3 * kk) * 2 ** (6 * kk) / 9
    return VolumeValue(q, 6 * kk)


def _zeta_or_pi(n: int) -> SymbolicValue:
    if n < 2:
        raise DivergentTerm(f"zeta({n}) would occur")
    return zeta(n)


def psp2_relation(p: int, s: int, q: int, r: int) -> Relation:
    """Relation for the C2 zeta with exponent pattern ``(p, s, q, r)``.

    The arguments follow the order of the exponent tuple of the first LHS term.
    """
    if min(p, q, r) < 1 or s < 1:
        raise InputError("p, q, r must be positive and s >= 1")
    n = s + p + q + r
    lhs = [
        (Fraction(1), ZetaSpec("PSP2", (p, s, q, r))),
        (Fraction((-1) ** p), ZetaSpec("PSP2", (p, q, s, r))),
        (Fraction((-1) ** (p + q)), ZetaSpec("PSP2", (r, q, s, p))),
        (Fraction((-1) ** (p + q + r)), ZetaSpec("PSP2", (r, s, q, p))),
    ]
    half = Fraction(1, 2)
    blocks = ZERO

    def bdiff(xi: int, weight: Fraction = Fraction(1)) -> Fraction:
        return (bernoulli_value(xi, 0) - weight * bernoulli_value(xi, half)) / 2

    for xi in range(p + 1):
        pref = _two_pi_i_power(xi) * _zeta_or_pi(n - xi)
        c = Fraction(0)
        for om in range(p - xi + 1):
            c += (binomial(om + r - 1, om) * binomial(p + q - 1 - xi - om, q - 1)
                  * Fraction((-1) ** (p - xi), 2 ** (r + om)))
        blocks = blocks + pref.scale(c * bdiff(xi) / math.factorial(xi))
    for xi in range(q + 1):
        pref = _two_pi_i_power(xi) * _zeta_or_pi(n - xi)
        c = Fraction(0)
        for om in range(q - xi + 1):
            c += binomial(om + r - 1, om) * binomial(p + q - 1 - xi - om, p - 1) * (-1) ** (p - om)
        w = Fraction(2) ** (1 - n + xi) - 1
        blocks = blocks + pref.scale(c * bdiff(xi, w) / math.factorial(xi))
    for xi in range(r + 1):
        pref = _two_pi_i_power(xi) * _zeta_or_pi(n - xi)
        c = Fraction(0)
        for om in range(p):
            c += (binomial(om + r - xi, om) * binomial(p + q - 2 - om, q - 1)
                  * Fraction((-1) ** p, 2 ** (r - xi + om + 1)))
        for om in range(q):
            c += binomial(om + r - xi, om) * binomial(p + q - 2 - om, p - 1) * (-1) ** (p - om + 1)
        blocks = blocks + pref.scale(c * bdiff(xi) / math.factorial(xi))
    return Relation(lhs, -blocks)


# ---------------------------------------------------------------------------
# A2 parity solver


def _pu3_key(x: int, y: int, z: int) -> Tuple[int, int, int]:
    a, b = sorted((x, y))
    return (a, b, z)


def pu3_parity_reduce(a: int, b: int, c: int) -> SymbolicValue:
    """Closed form of ``zeta((a,b,c); PU(3))`` for odd weight by an exact linear
    solve over the relations attached to all orderings of ``(a, b, c)``."""
    if min(a, b, c) < 1:
        raise InputError("arguments must be positive")
    if (a + b + c) % 2 == 0:
        raise InputError("the parity solver needs odd weight")
    rows: List[Tuple[Dict[Tuple[int, int, int], Fraction], SymbolicValue]] = []
    seen = set()
    for p, q, s in itertools.permutations((a, b, c)):
        if (p, q, s) in seen:
            continue
        seen.add((p, q, s))
        rel = t41_relation(p, q, s)
        coeffs: Dict[Tuple[int, int, int], Fraction] = {}
        for coef, spec in rel.lhs:
            key = _pu3_key(*spec.exponents)
            coeffs[key] = coeffs.get(key, 0) + coef
        rows.append(({k: v for k, v in coeffs.items() if v}, rel.rhs))
    unknowns = sorted({k for cf, _ in rows for k in cf})
    target = _pu3_key(a, b, c)
    if target not in unknowns:
        raise Undetermined("target does not occur in any relation")
    solution = _solve_symbolic(rows, unknowns)
    if target not in solution:
        raise Undetermined(f"the relations do not isolate zeta(({a},{b},{c});PU3)")
    return solution[target]


def _solve_symbolic(rows, unknowns):
    """Gauss-Jordan over Q with symbolic right-hand sides.

    Returns the values of the unknowns that are uniquely determined.
    """
    mat = [[Fraction(cf.get(u, 0)) for u in unknowns] for cf, _ in rows]
    rhs = [r for _, r in rows]
    n = len(unknowns)
    piv_cols = []
    row = 0
    for col in range(n):
        piv = next((i for i in range(row, len(mat)) if mat[i][col]), None)
        if piv is None:
            continue
        mat[row], mat[piv] = mat[piv], mat[row]
        rhs[row], rhs[piv] = rhs[piv], rhs[row]
        p = mat[row][col]
        mat[row] = [x / p for x in mat[row]]
        rhs[row] = rhs[row].scale(1 / p)
        for i in range(len(mat)):
            if i != row and mat[i][col]:
                f = mat[i][col]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[row])]
                rhs[i] = rhs[i] - rhs[row].scale(f)
        piv_cols.append(col)
        row += 1
    for i in range(row, len(mat)):
        if not rhs[i].is_zero():
            raise ComputationError(f"inconsistent relation system: residual {rhs[i]}")
    out = {}
    for i, col in enumerate(piv_cols):
        if all(mat[i][j] == 0 for j in range(n) if j != col):
            out[unknowns[col]] = rhs[i]
    return out


# ---------------------------------------------------------------------------
# C2 partial fractions and T-sums


@dataclass(frozen=True, order=True)
class TSpec:
    """``T_{tau,mu}(k, l, d) = sum_{l', m' >= 0} (2l'+tau)^{-k} (2m'+mu)^{-l} (2l'+2m'+tau+mu)^{-d}``."""

    tau: int
    mu: int
    k: int
    l: int
    d: int

    def __str__(self):
        return f"T{self.tau}{self.mu}({self.k},{self.l},{self.d})"

    def to_json(self) -> dict:
        return {"tau": self.tau, "mu": self.mu, "args": [self.k, self.l, self.d]}


def _fixture(z34: Fraction, z52: Fraction, z7: Fraction) -> SymbolicValue:
    return zeta(3) * zeta(4) * z34 + zeta(5) * zeta(2) * z52 + zeta(7).scale(z7)


T_FIXTURES: Dict[TSpec, SymbolicValue] = {
    TSpec(1, 1, 1, 5, 1): _fixture(Fraction(-105, 128), Fraction(-93, 128), Fraction(381, 128)),
    TSpec(1, 2, 1, 5, 1): _fixture(Fraction(-7, 128), Fraction(-31, 128), Fraction(127, 256)),
    TSpec(1, 1, 1, 4, 2): _fixture(Fraction(105, 128), Fraction(279, 128), Fraction(-1143, 256)),
    TSpec(1, 2, 1, 4, 2): _fixture(Fraction(7, 128), Fraction(183, 128), Fraction(-635, 256)),
}


def pfd_reduce(a: int, b: int, c: int, d: int) -> List[Tuple[int, TSpec]]:
    """Expansion of ``(-1)^c zeta((a,b,c,d); PSp(2))`` into T-sums."""
    if c < 1 or d < 1:
        raise InputError("c and d must be positive")
    acc: Dict[TSpec, int] = {}
    order: List[TSpec] = []

    def add(coef: int, spec: TSpec):
        if spec not in acc:
            acc[spec] = 0
            order.append(spec)
        acc[spec] += coef

    for j in range(1, c + 1):
        coef = binomial(c + d - j - 1, c - j) * (-1) ** j
        add(coef, TSpec(1, 1, a, b + c + d - j, j))
        add(coef, TSpec(1, 2, a, b + c + d - j, j))
    for j in range(1, d + 1):
        coef = binomial(c + d - j - 1, d - j) * 2 ** (b + c + d - j)
        add(coef, TSpec(1, 2, a, b + c + d - j, j))
    return [(acc[s], s) for s in order if acc[s]]


def pfd_identity_holds(c: int, d: int, x: Fraction, y: Fraction) -> bool:
    """Exact check, at rational ``(X, Y)``, of

    ``(-1)^c / (X^c (X+Y)^d) = sum_{j<=c} C(c+d-j-1, c-j) (-1)^j / (Y^{c+d-j} X^j)
    + sum_{j<=d} C(c+d-j-1, d-j) / (Y^{c+d-j} (X+Y)^j)``.
    """
    x, y = Fraction(x), Fraction(y)
    lhs = Fraction((-1) ** c) / (x**c * (x + y) ** d)
    rhs = Fraction(0)
    for j in range(1, c + 1):
        rhs += binomial(c + d - j - 1, c - j) * Fraction((-1) ** j) / (y ** (c + d - j) * x**j)
    for j in range(1, d + 1):
        rhs += binomial(c + d - j - 1, d - j) / (y ** (c + d - j) * (x + y) ** j)
    return lhs == rhs


@dataclass
class ParityResult:
    status: str  # "closed" or "partial"
    value: Optional[SymbolicValue]
    expansion: List[Tuple[int, TSpec]]
    resolved: SymbolicValue
    unresolved: List[Tuple[int, TSpec, float, float]] = field(default_factory=list)

    def numeric(self) -> Tuple[float, float]:
        from .numeric import eval_symbolic

        total = eval_symbolic(self.resolved).real
        bound = 1e-13 * max(1.0, abs(total))
        for coef, _, val, b in self.unresolved:
            total += coef * val
            bound += abs(coef) * b
        return total, bound

    def to_json(self) -> dict:
        out = {
            "status": self.status,
            "expansion": [{"coeff": c, "T": s.to_json(), "name": str(s)} for c, s in self.expansion],
        }
        if self.value is not None:
            out["value"] = self.value.to_json()
            out["value_text"] = str(self.value)
        else:
            out["resolved"] = self.resolved.to_json()
            out["unresolved"] = [
                {"coeff": c, "T": str(s), "numeric": v, "bound": b} for c, s, v, b in self.unresolved
            ]
        val, bound = self.numeric()
        out["numeric"] = val
        out["bound"] = bound
        return out


def psp2_parity_reduce(a: int, b: int, c: int, d: int, tol: float = 1e-10) -> ParityResult:
    if min(a, b, c, d) < 1:
        raise InputError("arguments must be positive")
    if (a + b + c + d) % 2 == 0:
        raise InputError("the parity reduction needs odd weight")
    expansion = pfd_reduce(a, b, c, d)
    sign = (-1) ** c
    resolved = ZERO
    unresolved = []
    for coef, spec in expansion:
        if spec in T_FIXTURES:
            resolved = resolved + T_FIXTURES[spec].scale(sign * coef)
        else:
            res = t_zeta_numeric(spec.tau, spec.mu, spec.k, spec.l, spec.d, tol=tol)
            unresolved.append((sign * coef, spec, float(res.value.real), res.tail_bound))
    if unresolved:
        return ParityResult("partial", None, expansion, resolved, unresolved)
    return ParityResult("closed", resolved, expansion, resolved)


def t_zeta_numeric(tau: int, mu: int, k: int, l: int, d: int, tol: float = 1e-10):
    """Numeric value of ``T_{tau,mu}(k,l,d)`` with a rigorous truncation bound."""
    from .errors import Divergent, NotProvablyConvergent
    from .lattice_sum import LatticeSum, evaluate
    from .roots import Congruence

    if tau not in (1, 2) or mu not in (1, 2):
        raise InputError("tau and mu must be 1 or 2")
    if min(k, l, d) < 0:
        raise InputError("exponents must be nonnegative")
    spec = LatticeSum(
        ((1, 0), (0, 1), (1, 1)),
        (k, l, d),
        (Congruence((1, 0), 2, tau % 2), Congruence((0, 1), 2, mu % 2)),
    )
    try:
        return evaluate(spec, tol=tol)
    except NotProvablyConvergent as exc:
        raise Divergent(f"T{tau}{mu}({k},{l},{d}) does not converge absolutely") from exc


# ---------------------------------------------------------------------------
# two-variable generating identity behind the A2 relation


def _rational_phase(z: complex, limit: int = 720) -> Optional[Fraction]:
    ang = cmath.phase(z) / (2 * math.pi)
    q = Fraction(ang).limit_denominator(limit)
    if abs(float(q) - ang) < 1e-13:
        return q % 1
    return None


def _polylog(n, z: complex) -> complex:
    import mpmath

    if z == 0:
        return 0j
    if abs(abs(z) - 1) < 1e-15:
        ph = _rational_phase(z)
        if ph is not None and float(n).is_integer() and n >= 2:
            from .numeric import phi_numeric

            return phi_numeric(int(n), ph)
    return complex(z * mpmath.lerchphi(z, n, 1))


def lem44_sides(p: int, q: int, s: float, t: float, x: complex, tol: float = 1e-8):
    """Return ``(lhs, rhs, bound)`` for the double-series identity at ``(p,q,s,t,x)``."""
    from .lattice_sum import LatticeSum, evaluate

    if p < 1 or q < 1:
        raise InputError("p, q must be positive")
    if s <= 1:
        raise InputError("s must exceed 1")
    if not (0 <= t < 2 * math.pi):
        raise InputError("t must lie in [0, 2 pi)")
    x = complex(x)
    if abs(x) > 1 + 1e-15:
        raise InputError("|x| must be at most 1")
    b = Fraction(t / (2 * math.pi)).limit_denominator(720)
    if abs(float(b) - t / (2 * math.pi)) > 1e-13:
        b = t / (2 * math.pi)
    forms = ((1, 0), (0, 1), (1, 1))
    sval = int(s) if float(s).is_integer() else s
    lhs = 0j
    bound = 0.0
    if x != 0:
        a = None
        if abs(abs(x) - 1) < 1e-15:
            a = _rational_phase(x)
        if a is None:
            # complex twist: imaginary part carries the damping |x| < 1
            a = cmath.log(x) / (2j * math.pi)
        twists = [(a, a + b), (b, a + b), (-b, a)]
        exps = [(p, q, sval), (p, sval, q), (q, sval, p)]
        signs = [1, (-1) ** p, (-1) ** q]
        for tw, ex, sg in zip(twists, exps, signs):
            tw = tuple(v % 1 if isinstance(v, Fraction) else v for v in tw)
            res = evaluate(LatticeSum(forms, ex, (), tw), tol=tol / 6)
            lhs += sg * complex(res.value)
            bound += res.tail_bound
    bt = Fraction(b) if isinstance(b, Fraction) else None
    rhs_parts = []
    z1 = x * cmath.exp(1j * t)
    n_tot = s + p + q
    for tau in range(p + 1):
        c = binomial(p + q - tau - 1, q - 1) * (-1) ** tau
        if not c:
            continue
        bern = float(bernoulli_value(tau, bt % 1)) if bt is not None else _bern_float(tau, (t / (2 * math.pi)) % 1)
        rhs_parts.append(-c * _polylog(n_tot - tau, z1) * (2j * math.pi) ** tau / math.factorial(tau) * bern)
    for tau in range(q + 1):
        c = binomial(p + q - tau - 1, p - 1)
        if not c:
            continue
        bern = float(bernoulli_value(tau, bt % 1)) if bt is not None else _bern_float(tau, (t / (2 * math.pi)) % 1)
        rhs_parts.append(-c * _polylog(n_tot - tau, x) * (2j * math.pi) ** tau / math.factorial(tau) * bern)
    rhs = complex(math.fsum(v.real for v in rhs_parts), math.fsum(v.imag for v in rhs_parts))
    bound += 1e-12 * max(1.0, abs(rhs))
    return lhs, rhs, bound


def _bern_float(k: int, x: float) -> float:
    from .exact import bernoulli_coefficients

    acc = 0.0
    for c in reversed(bernoulli_coefficients(k)):
        acc = acc * x + float(c)
    return acc


def lem44_numeric_check(p: int, q: int, s: float, t: float, x: complex, tol: float = 1e-6) -> bool:
    lhs, rhs, bound = lem44_sides(p, q, s, t, x, tol=tol / 10)
    return abs(lhs - rhs) <= tol + bound
