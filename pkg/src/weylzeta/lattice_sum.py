"""Congruence-filtered, twisted lattice sums

    sum_{m in N^r, congruences} e^{2 pi i <y, m>} prod_a (c_a . m)^{-s_a}

with rigorous truncation bounds.

Two evaluation routes:

* rank 2 with integer exponents and rational twist: the inner coordinate is
  summed in closed form (partial fractions in the inner variable, then
  Hurwitz zeta / digamma per residue class), the outer coordinate is summed
  term by term with an explicit tail bound;
* everything else: box summation over ``[1..K]^r`` in max-norm shells with a
  tail bound from weighted AM-GM exponent allocation (a small LP).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from scipy import optimize, special

from .errors import NotProvablyConvergent, SlowConvergence
from .roots import Congruence

__all__ = ["LatticeSum", "NumericResult", "evaluate", "convergence_margin"]

EPS = 2.0**-52
DEFAULT_MAX_TERMS = 50_000_000
_CHUNK = 1 << 20


@dataclass(frozen=True)
class NumericResult:
    value: complex
    tail_bound: float
    terms_used: int
    method: str = ""

    def to_json(self) -> dict:
        v = complex(self.value)
        out = {"value": v.real if v.imag == 0 else [v.real, v.imag], "bound": self.tail_bound, "terms": self.terms_used}
        if self.method:
            out["method"] = self.method
        return out


@dataclass(frozen=True)
class LatticeSum:
    coroots: Tuple[Tuple[int, ...], ...]
    exponents: Tuple
    congruences: Tuple[Congruence, ...] = ()
    twist: Tuple = ()

    def __post_init__(self):
        r = len(self.coroots[0])
        if not self.twist:
            object.__setattr__(self, "twist", tuple(Fraction(0) for _ in range(r)))
        if len(self.exponents) != len(self.coroots):
            raise ValueError("one exponent per coroot row is required")

    @property
    def rank(self) -> int:
        return len(self.coroots[0])

    def sigma(self) -> List[float]:
        out = []
        for s in self.exponents:
            re = complex(s).real
            if re < 0:
                raise NotProvablyConvergent("negative real parts are outside the convergence region")
            out.append(re)
        return out

    def integer_exponents(self) -> bool:
        return all(isinstance(s, (int, np.integer)) or (isinstance(s, Fraction) and s.denominator == 1)
                   for s in self.exponents)

    def rational_twist(self) -> bool:
        return all(isinstance(y, (int, Fraction)) for y in self.twist)

    def damping(self) -> Tuple[float, ...]:
        """Per-coordinate factor ``|e^{2 pi i y_j}|``."""
        return tuple(math.exp(-2 * math.pi * complex(y).imag) for y in self.twist)


# ---------------------------------------------------------------------------
# exponent allocation (AM-GM) and tail bounds for box summation


def _allocation_lp(coroots, sigma, target: Optional[int], floor: float):
    """Distribute each exponent over the support of its form.

    With ``target=None`` maximize the smallest coordinate mass; otherwise
    maximize the mass of ``target`` subject to every other coordinate getting
    at least ``floor``.  Returns the per-coordinate masses or ``None``.
    """
    r = len(coroots[0])
    var = []
    for a, (row, s) in enumerate(zip(coroots, sigma)):
        if s <= 0:
            continue
        for i in range(r):
            if row[i]:
                var.append((a, i))
    nv = len(var) + 1  # last variable: t (only used for the max-min problem)
    a_eq, b_eq = [], []
    for a, s in enumerate(sigma):
        if s <= 0:
            continue
        rowv = [0.0] * nv
        for k, (aa, _) in enumerate(var):
            if aa == a:
                rowv[k] = 1.0
        a_eq.append(rowv)
        b_eq.append(s)
    a_ub, b_ub = [], []
    c = [0.0] * nv
    for i in range(r):
        rowv = [0.0] * nv
        for k, (_, ii) in enumerate(var):
            if ii == i:
                rowv[k] = -1.0
        if target is None:
            rowv[-1] = 1.0
            a_ub.append(rowv)
            b_ub.append(0.0)
        elif i != target:
            a_ub.append(rowv)
            b_ub.append(-floor)
        else:
            for k, (_, ii) in enumerate(var):
                if ii == i:
                    c[k] = -1.0
    if target is None:
        c[-1] = -1.0
        bounds = [(0, None)] * (nv - 1) + [(None, None)]
    else:
        bounds = [(0, None)] * (nv - 1) + [(0, 0)]
    if not var:
        return None
    res = optimize.linprog(c, A_ub=a_ub or None, b_ub=b_ub or None, A_eq=a_eq or None, b_eq=b_eq or None,
                           bounds=bounds, method="highs")
    if res.status != 0:
        return None
    masses = [0.0] * r
    for k, (_, i) in enumerate(var):
        masses[i] += res.x[k]
    return masses


@lru_cache(maxsize=None)
def convergence_margin(coroots, sigma) -> float:
    """Largest ``t`` such that every coordinate can receive mass ``>= t``.

    Absolute convergence is certified when ``t > 1``.
    """
    masses = _allocation_lp(coroots, sigma, None, 0.0)
    if masses is None:
        return 0.0
    return min(masses)


_DELTAS = (0.02, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0)


@lru_cache(maxsize=None)
def _tail_profiles(coroots, sigma):
    """For each coordinate j, candidate ``(E_j, prod_{i != j} zeta(E_i))`` pairs.

    ``E_j <= 1`` candidates are kept: they still serve geometrically damped
    coordinates.
    """
    r = len(coroots[0])
    profiles = []
    for j in range(r):
        cands = []
        for delta in _DELTAS:
            masses = _allocation_lp(coroots, sigma, j, 1 + delta)
            if masses is None:
                continue
            others = 1.0
            for i in range(r):
                if i != j:
                    others *= float(special.zeta(min(masses[i], 1 + delta) - 1e-9, 1))
            cands.append((masses[j] - 1e-9, others))
        if not any(e > 1 for e, _ in cands):
            raise NotProvablyConvergent("no exponent allocation certifies the tail")
        profiles.append(tuple(cands))
    return tuple(profiles)


def _coordinate_tail(cands, k: int, rho: float) -> float:
    opts = [others * k ** (1 - e) / (e - 1) for e, others in cands if e > 1]
    if rho < 1:
        opts.extend(others * rho ** (k + 1) / (1 - rho) for _, others in cands)
    return min(opts)


def box_tail_bound(coroots, sigma, k, damping: Optional[Sequence[float]] = None) -> float:
    """Bound for the sum of absolute values over ``m`` outside ``prod [1..k_j]``.

    ``k`` is an integer (a cube) or one limit per coordinate; ``damping[j] < 1``
    is an extra factor ``damping[j]^{m_j}`` in every term.
    """
    profiles = _tail_profiles(coroots, sigma)
    ks = [k] * len(profiles) if isinstance(k, (int, np.integer)) else list(k)
    total = 0.0
    for j, cands in enumerate(profiles):
        rho = damping[j] if damping is not None else 1.0
        total += _coordinate_tail(cands, ks[j], rho)
    return total


def _limit_for(cands, rho: float, target: float, start: int) -> int:
    """Smallest limit (up to doubling granularity) whose coordinate tail is below ``target``."""
    k = max(1, start)
    if _coordinate_tail(cands, k, rho) <= target:
        return k
    hi = k
    while _coordinate_tail(cands, hi, rho) > target:
        hi *= 2
        if hi > 10**13:
            return hi
    lo = hi // 2
    while hi - lo > max(1, lo // 64):
        mid = (lo + hi) // 2
        if _coordinate_tail(cands, mid, rho) > target:
            lo = mid
        else:
            hi = mid
    return hi


# ---------------------------------------------------------------------------
# helpers


def _congruence_mask(congs: Sequence[Congruence], coords: Sequence[np.ndarray]) -> Optional[np.ndarray]:
    mask = None
    for c in congs:
        acc = np.zeros_like(coords[0])
        for cj, x in zip(c.coeffs, coords):
            if cj:
                acc = acc + cj * x
        ok = (acc - c.residue) % c.modulus == 0
        mask = ok if mask is None else (mask & ok)
    return mask


def _phase_factory(twist):
    """Return a function mapping coordinate arrays to complex phases."""
    if all(isinstance(y, (int, Fraction)) for y in twist):
        fr = [Fraction(y) for y in twist]
        if all(f.denominator == 1 for f in fr):
            return None
        q = 1
        for f in fr:
            q = q * f.denominator // math.gcd(q, f.denominator)
        nums = [int(f * q) % q for f in fr]
        table = np.exp(2j * np.pi * np.arange(q) / q)
        # exact roots of unity where available
        for k in range(q):
            if (4 * k) % q == 0:
                table[k] = [1, 1j, -1, -1j][(4 * k // q) % 4]

        def phase(coords):
            acc = np.zeros_like(coords[0])
            for a, x in zip(nums, coords):
                if a:
                    acc = (acc + a * x) % q
            return table[acc]

        return phase
    ys = [complex(y) for y in twist]

    def phase(coords):
        acc = np.zeros(coords[0].shape, dtype=complex)
        for yv, x in zip(ys, coords):
            if yv:
                acc = acc + yv * x
        return np.exp(2j * np.pi * acc)

    return phase


class _Accumulator:
    """Order-fixed compensated accumulation of complex block sums."""

    def __init__(self):
        self.re: List[float] = []
        self.im: List[float] = []
        self.abs_sum = 0.0
        self.terms = 0

    def add_block(self, values: np.ndarray):
        if values.size == 0:
            return
        self.re.append(math.fsum(values.real.tolist()))
        if np.iscomplexobj(values):
            self.im.append(math.fsum(values.imag.tolist()))
        self.abs_sum += float(np.abs(values).sum())
        self.terms += int(values.size)

    def value(self) -> complex:
        return complex(math.fsum(self.re), math.fsum(self.im))


# ---------------------------------------------------------------------------
# direct box summation


def _direct_block(spec: LatticeSum, ranges: Sequence[Tuple[int, int]], phase, acc: _Accumulator):
    """Sum over the product of half-open integer ranges ``[lo, hi)``."""
    if any(hi <= lo for lo, hi in ranges):
        return
    first_lo, first_hi = ranges[0]
    rest = ranges[1:]
    per_first = 1
    for lo, hi in rest:
        per_first *= hi - lo
    step = max(1, _CHUNK // max(per_first, 1))
    exps = spec.exponents
    int_exps = spec.integer_exponents()
    for start in range(first_lo, first_hi, step):
        stop = min(first_hi, start + step)
        axes = [np.arange(start, stop, dtype=np.int64)] + [np.arange(lo, hi, dtype=np.int64) for lo, hi in rest]
        grids = np.meshgrid(*axes, indexing="ij")
        coords = [g.ravel() for g in grids]
        mask = _congruence_mask(spec.congruences, coords)
        if mask is not None:
            coords = [c[mask] for c in coords]
            if coords[0].size == 0:
                continue
        if int_exps:
            term = np.ones(coords[0].shape, dtype=float)
            for row, s in zip(spec.coroots, exps):
                s = int(s)
                if not s:
                    continue
                lin = np.zeros(coords[0].shape, dtype=float)
                for cj, x in zip(row, coords):
                    if cj:
                        lin += cj * x
                term /= lin**s
        else:
            logt = np.zeros(coords[0].shape, dtype=complex)
            for row, s in zip(spec.coroots, exps):
                if s == 0:
                    continue
                lin = np.zeros(coords[0].shape, dtype=float)
                for cj, x in zip(row, coords):
                    if cj:
                        lin += cj * x
                logt -= complex(s) * np.log(lin)
            term = np.exp(logt)
        if phase is not None:
            term = term * phase(coords)
        acc.add_block(term)


def _direct_sum(spec: LatticeSum, tol: float, rel_tol: float, max_terms: int) -> NumericResult:
    coroots = tuple(tuple(r) for r in spec.coroots)
    sigma = tuple(spec.sigma())
    r = spec.rank
    phase = _phase_factory(spec.twist)
    damping = spec.damping()
    profiles = _tail_profiles(coroots, sigma)
    acc = _Accumulator()
    done = [0] * r
    limits = [8] * r
    while True:
        # grow the box from ``done`` to ``limits`` one coordinate slab at a time
        for j in range(r):
            ranges = ([(1, done[i] + 1) for i in range(j)] + [(done[j] + 1, limits[j] + 1)]
                      + [(1, limits[i] + 1) for i in range(j + 1, r)])
            with np.errstate(over="ignore", under="ignore"):
                _direct_block(spec, ranges, phase, acc)
        done = list(limits)
        tail = box_tail_bound(coroots, sigma, done, damping)
        rounding = 8 * EPS * acc.abs_sum
        bound = tail + rounding
        target = max(tol, rel_tol * abs(acc.value()))
        if bound <= target:
            return NumericResult(acc.value(), bound, acc.terms, "box")
        share = 0.5 * target / r
        limits = [max(done[j], _limit_for(profiles[j], damping[j], share, done[j])) for j in range(r)]
        if limits == done:
            limits = [2 * x for x in done]
        if math.prod(limits) > max_terms:
            raise SlowConvergence(
                f"box {limits} needed for tolerance {target:.3g} exceeds the term cap {max_terms}"
            )


def _direct_sum_mp(spec: LatticeSum, tol: float, rel_tol: float, max_terms: int, dps: int) -> NumericResult:
    coroots = tuple(tuple(r) for r in spec.coroots)
    sigma = tuple(spec.sigma())
    r = spec.rank
    with mpmath.workdps(dps + 10):
        k = 4
        while box_tail_bound(coroots, sigma, k) > max(tol, 1e-300) and k < 10**7:
            k *= 2
        if k**r > max_terms:
            raise SlowConvergence(f"box side {k} exceeds the term cap {max_terms}")
        total = mpmath.mpc(0)
        terms = 0
        twist = [mpmath.mpf(y.numerator) / y.denominator if isinstance(y, Fraction) else mpmath.mpmathify(y)
                 for y in spec.twist]
        exps = [mpmath.mpmathify(int(s) if isinstance(s, (int, np.integer)) else s) for s in spec.exponents]
        for m in _box_points(r, k):
            if spec.congruences and not all(c.holds(m) for c in spec.congruences):
                continue
            term = mpmath.mpf(1)
            for row, s in zip(coroots, exps):
                if s:
                    term /= mpmath.mpf(sum(c * x for c, x in zip(row, m))) ** s
            ph = sum(y * x for y, x in zip(twist, m))
            if ph:
                term *= mpmath.expjpi(2 * ph)
            total += term
            terms += 1
        tail = box_tail_bound(coroots, sigma, k)
        return NumericResult(total, tail, terms, "box-mp")


def _box_points(r: int, k: int):
    import itertools

    return itertools.product(range(1, k + 1), repeat=r)


# ---------------------------------------------------------------------------
# rank 2: closed-form inner sums


@dataclass
class _InnerPlan:
    inner: int
    outer: int
    P: int
    groups: List[Tuple[Fraction, int]]  # (gamma, multiplicity)
    pf: List[List[Fraction]]  # pf[g][k-1] = A_{g,k}
    bconst: float
    degree: int
    outer_forms: List[Tuple[int, int]]  # (a, s) forms without inner variable
    tail_pieces: List[Tuple[float, float, int]]  # (c, g, h): c m^-g (1+ln m)^h


def _partial_fractions(groups: List[Tuple[Fraction, int]]) -> List[List[Fraction]]:
    """Coefficients of prod (v + gamma_g)^{-S_g} = sum A_{g,k} (v + gamma_g)^{-k}."""
    out = []
    for gi, (gamma, mult) in enumerate(groups):
        # Taylor series of prod_{h != g} (gamma_h - gamma + e)^{-S_h} around e = 0
        series = [Fraction(1)] + [Fraction(0)] * (mult - 1)
        for hi, (gh, sh) in enumerate(groups):
            if hi == gi:
                continue
            d = gh - gamma
            fac = []
            for t in range(mult):
                # binom(-sh, t) d^{-sh-t}
                b = Fraction(1)
                for u in range(t):
                    b *= Fraction(-sh - u, u + 1)
                fac.append(b * d ** (-sh - t))
            new = [Fraction(0)] * mult
            for a_i, av in enumerate(series):
                if not av:
                    continue
                for b_i in range(mult - a_i):
                    new[a_i + b_i] += av * fac[b_i]
            series = new
        # A_{g,k} = coefficient of e^{mult-k}
        out.append([series[mult - k] for k in range(1, mult + 1)])
    return out


def _sum_power_tail(c: float, g: float, h: int, m: float) -> float:
    """Upper bound for sum_{x > m} c x^-g (1 + ln x)^h, ``g > 1``, ``h in {0,1}``."""
    if c == 0:
        return 0.0
    if h == 0:
        return c * m ** (1 - g) / (g - 1)
    return c * m ** (1 - g) * ((1 + math.log(m)) / (g - 1) + 1 / (g - 1) ** 2)


def _inner_plan(spec: LatticeSum, inner: int) -> Optional[_InnerPlan]:
    outer = 1 - inner
    forms = [(row[outer], row[inner], int(s)) for row, s in zip(spec.coroots, spec.exponents) if int(s)]
    O = [(a, s) for a, b, s in forms if b == 0]
    I = [(b, s) for a, b, s in forms if a == 0]
    M = [(a, b, s) for a, b, s in forms if a and b]
    degree = sum(s for a, b, s in forms if b)
    if degree < 2:
        return None
    grouped = {}
    bconst = 1.0
    for a, b, s in forms:
        if b:
            gamma = Fraction(a, b)
            grouped[gamma] = grouped.get(gamma, 0) + s
            bconst *= float(b) ** (-s)
    groups = sorted(grouped.items())
    pf = _partial_fractions(groups)
    P = 1
    for c in spec.congruences:
        P = P * c.modulus // math.gcd(P, c.modulus)
    yin = Fraction(spec.twist[inner])
    P = P * yin.denominator // math.gcd(P, yin.denominator)

    s_o = sum(s for _, s in O)
    s_i = sum(s for _, s in I)
    s_m = sum(s for _, _, s in M)
    c_o = math.prod(float(a) ** (-s) for a, s in O)
    pieces = []
    # n <= m: mixed forms >= a m
    c1 = c_o * math.prod(float(a) ** (-s) for a, _, s in M) * math.prod(float(b) ** (-s) for b, s in I)
    if s_i > 1:
        pieces.append((c1 * float(special.zeta(s_i, 1)), s_o + s_m, 0))
    elif s_i == 1:
        pieces.append((c1, s_o + s_m, 1))
    else:
        pieces.append((c1 / (1 - s_i), s_o + s_m - (1 - s_i), 0))
    # n > m: mixed forms >= b n
    c2 = c_o * math.prod(float(b) ** (-s) for b, s in I) * math.prod(float(b) ** (-s) for _, b, s in M)
    pieces.append((c2 / (s_i + s_m - 1), s_o + s_i + s_m - 1, 0))
    if any(g <= 1 for _, g, _ in pieces):
        return None
    return _InnerPlan(inner, outer, P, [(g, s) for g, s in groups], pf, bconst, degree, O, pieces)


def _plan_tail(plan: _InnerPlan, m: int) -> float:
    return sum(_sum_power_tail(c, g, h, m) for c, g, h in plan.tail_pieces)


def _residue_weights(spec: LatticeSum, plan: _InnerPlan):
    """For each outer residue mod P: list of (r, weight) for inner residues r."""
    P = plan.P
    yin = Fraction(spec.twist[plan.inner])
    table = []
    for mo in range(P):
        row = []
        for rr in range(1, P + 1):
            coords = [0, 0]
            coords[plan.outer] = mo
            coords[plan.inner] = rr
            if spec.congruences and not all(c.holds(coords) for c in spec.congruences):
                continue
            ph = yin * rr
            ph -= math.floor(ph)
            row.append((rr, ph))
        table.append(row)
    return table


def _root_of_unity(ph: Fraction) -> complex:
    if (4 * ph).denominator == 1:
        return [1, 1j, -1, -1j][int(4 * ph) % 4]
    return complex(math.cos(2 * math.pi * ph), math.sin(2 * math.pi * ph))


def _hybrid_chunk(spec: LatticeSum, plan: _InnerPlan, weights, m: np.ndarray):
    """Exact inner sums for an array of outer indices; returns (values, abs_scale)."""
    with np.errstate(over="ignore", under="ignore"):
        return _hybrid_chunk_body(spec, plan, weights, m)


def _hybrid_chunk_body(spec: LatticeSum, plan: _InnerPlan, weights, m: np.ndarray):
    P = plan.P
    mf = m.astype(float)
    outer = np.ones_like(mf)
    for a, s in plan.outer_forms:
        outer /= (a * mf) ** s
    yout = Fraction(spec.twist[plan.outer])
    if yout:
        num = yout.numerator % yout.denominator
        ph = (num * m) % yout.denominator
        outer = outer * np.exp(2j * np.pi * ph / yout.denominator)
    total = np.zeros(m.shape, dtype=complex)
    scale = np.zeros(m.shape, dtype=float)
    mres = m % P
    for mo in range(P):
        sel = mres == mo
        if not sel.any():
            continue
        msub = mf[sel]
        acc = np.zeros(msub.shape, dtype=complex)
        accabs = np.zeros(msub.shape, dtype=float)
        for rr, ph in weights[mo]:
            w = _root_of_unity(ph)
            inner = np.zeros(msub.shape, dtype=float)
            inner_abs = np.zeros(msub.shape, dtype=float)
            for (gamma, mult), coeffs in zip(plan.groups, plan.pf):
                x = (rr + float(gamma) * msub) / P
                for k in range(1, mult + 1):
                    a = float(coeffs[k - 1])
                    if a == 0:
                        continue
                    mpow = msub ** (k - plan.degree)
                    if k == 1:
                        piece = -a * mpow * special.psi(x) / P
                    else:
                        piece = a * mpow * special.zeta(k, x) / P**k
                    inner += piece
                    inner_abs += np.abs(piece)
            acc += w * inner
            accabs += inner_abs
        total[sel] = acc
        scale[sel] = accabs
    vals = plan.bconst * outer * total
    return vals, plan.bconst * np.abs(outer) * scale


def _hybrid_sum(spec: LatticeSum, tol: float, rel_tol: float, max_terms: int) -> Optional[NumericResult]:
    plans = [p for p in (_inner_plan(spec, 1), _inner_plan(spec, 0)) if p is not None]
    if not plans:
        return None
    # pick the plan whose tail decays fastest
    plan = min(plans, key=lambda p: (_plan_tail(p, 1000), p.P))
    weights = _residue_weights(spec, plan)
    acc = _Accumulator()
    scale_sum = 0.0
    done = 0
    chunk = 4096
    while True:
        m = np.arange(done + 1, done + chunk + 1, dtype=np.int64)
        vals, scale = _hybrid_chunk(spec, plan, weights, m)
        acc.add_block(vals)
        scale_sum += float(scale.sum())
        done += chunk
        tail = _plan_tail(plan, done)
        rounding = 16 * EPS * scale_sum
        bound = tail + rounding
        target = max(tol, rel_tol * abs(acc.value()))
        if bound <= target:
            return NumericResult(acc.value(), bound, done * plan.P, "hybrid")
        if rounding > 0.5 * target:
            # partial-fraction cancellation (huge exponents): let box summation handle it
            return None
        if done * plan.P > max_terms:
            raise SlowConvergence(f"outer range {done} exceeds the term cap for tolerance {target:.3g}")
        if tail > target:
            # jump close to the required outer range
            need = done
            while _plan_tail(plan, need) > 0.5 * target and need < 10**12:
                need = int(need * 1.5) + 1
            chunk = int(min(max(chunk, need - done), 1 << 18))


def _hybrid_sum_mp(spec: LatticeSum, tol: float, dps: int) -> Optional[NumericResult]:
    plans = [p for p in (_inner_plan(spec, 1), _inner_plan(spec, 0)) if p is not None]
    if not plans:
        return None
    plan = min(plans, key=lambda p: (_plan_tail(p, 1000), p.P))
    weights = _residue_weights(spec, plan)
    need = 1
    while _plan_tail(plan, need) > tol:
        need = int(need * 1.5) + 1
        if need > 10**6:
            raise SlowConvergence("outer range too long for extended precision")
    with mpmath.workdps(dps + 15):
        P = plan.P
        yout = Fraction(spec.twist[plan.outer])
        total = mpmath.mpc(0)
        bconst = mpmath.mpf(1)
        for row, s in zip(spec.coroots, spec.exponents):
            if int(s) and row[plan.inner]:
                bconst /= mpmath.mpf(row[plan.inner]) ** int(s)
        pf = [[mpmath.mpf(c.numerator) / c.denominator for c in coeffs] for coeffs in plan.pf]
        for m in range(1, need + 1):
            outer = mpmath.mpf(1)
            for a, s in plan.outer_forms:
                outer /= mpmath.mpf(a * m) ** s
            if yout:
                outer *= mpmath.expjpi(2 * mpmath.mpf((yout * m) % 1))
            inner_total = mpmath.mpc(0)
            for rr, ph in weights[m % P]:
                inner = mpmath.mpf(0)
                for (gamma, mult), coeffs in zip(plan.groups, pf):
                    x = (rr + mpmath.mpf(gamma.numerator) / gamma.denominator * m) / P
                    for k in range(1, mult + 1):
                        a = coeffs[k - 1]
                        if not a:
                            continue
                        mpow = mpmath.mpf(m) ** (k - plan.degree)
                        if k == 1:
                            inner -= a * mpow * mpmath.digamma(x) / P
                        else:
                            inner += a * mpow * mpmath.zeta(k, x) / mpmath.mpf(P) ** k
                inner_total += (mpmath.expjpi(2 * mpmath.mpf(ph)) if ph else 1) * inner
            total += outer * inner_total
        total *= bconst
        return NumericResult(total, _plan_tail(plan, need), need * P, "hybrid-mp")


# ---------------------------------------------------------------------------


def evaluate(
    spec: LatticeSum,
    tol: float = 1e-10,
    rel_tol: float = 0.0,
    max_terms: int = DEFAULT_MAX_TERMS,
    dps: int = 15,
) -> NumericResult:
    """Evaluate the lattice sum to absolute ``tol`` (or ``rel_tol``)."""
    coroots = tuple(tuple(int(c) for c in r) for r in spec.coroots)
    sigma = tuple(spec.sigma())
    margin = convergence_margin(coroots, sigma)
    if margin <= 1 + 1e-9:
        raise NotProvablyConvergent(
            "exponents fail the coordinate-mass test for absolute convergence "
            f"(best margin {margin:.4g} <= 1)"
        )
    hybrid_ok = spec.rank == 2 and spec.integer_exponents() and spec.rational_twist()
    if dps > 15:
        if hybrid_ok:
            res = _hybrid_sum_mp(spec, tol, dps)
            if res is not None:
                return res
        return _direct_sum_mp(spec, tol, rel_tol, max_terms, dps)
    if hybrid_ok:
        res = _hybrid_sum(spec, tol, rel_tol, max_terms)
        if res is not None:
            return res
    return _direct_sum(spec, tol, rel_tol, max_terms)
