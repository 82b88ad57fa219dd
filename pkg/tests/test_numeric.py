import math
import random
from fractions import Fraction as F

import mpmath
import pytest

from weylzeta.bernoulli_p import p_function, p_function_lattice, s_prefactor
from weylzeta.errors import Divergent, NotProvablyConvergent, SlowConvergence, VariableMismatch
from weylzeta.lattice_sum import LatticeSum, box_tail_bound, evaluate
from weylzeta.numeric import (
    NoMatch,
    L_chi3,
    eval_symbolic,
    hurwitz_zeta,
    hurwitz_zeta_error,
    phi_numeric,
    rationalize,
    s_sum_numeric,
    witten_zeta_numeric,
    zeta_const,
    zeta_numeric,
)
from weylzeta.relations import pu3_parity_reduce
from weylzeta.roots import build_root_system, fundamental_coweights, group_registry, intermediate_lattices
from weylzeta.symbolic import ZERO, SymbolicValue

A2 = build_root_system("A", 2)
C2 = build_root_system("C", 2)


def test_hurwitz_values():
    assert abs(hurwitz_zeta(2, 1) - math.pi**2 / 6) < 1e-12
    assert abs(hurwitz_zeta(2, 0.5) - 3 * math.pi**2 / 6) < 1e-12
    direct = math.fsum(m**-5.0 for m in range(1, 200000))
    assert abs(hurwitz_zeta(5, 1) - direct) < 1e-15
    assert hurwitz_zeta_error(3, 1) < 1e-14
    with pytest.raises(Divergent):
        hurwitz_zeta(1, 1)


def test_hurwitz_extended_precision():
    with mpmath.workdps(40):
        v = hurwitz_zeta(3, F(1, 3), dps=40)
        assert abs(v - mpmath.zeta(3, mpmath.mpf(1) / 3)) < mpmath.mpf(10) ** -35


def test_constants():
    direct = math.fsum((1 if m % 3 == 1 else -1 if m % 3 == 2 else 0) / m**2 for m in range(1, 400000))
    assert abs(L_chi3(2) - direct) < 1e-10
    assert abs(phi_numeric(3, 0) - zeta_const(3)) < 1e-12
    total = phi_numeric(2, F(1, 3)) + phi_numeric(2, F(2, 3))
    assert abs(total - (1 / 3 - 1) * math.pi**2 / 6) < 1e-10
    assert abs(L_chi3(1) - math.pi / (3 * math.sqrt(3))) < 1e-15


def test_phi_general_residue():
    alpha = F(1, 5)
    direct = sum(complex(math.cos(2 * math.pi * m / 5), math.sin(2 * math.pi * m / 5)) / m**4 for m in range(1, 50000))
    assert abs(phi_numeric(4, alpha) - direct) < 1e-12


def test_zeta_numeric_examples():
    rs, Q = group_registry("PU3")
    res = zeta_numeric(rs, Q, (2, 2, 2), tol=1e-12)
    assert abs(res.value - 187 / 688905 * math.pi**6) < 1e-8 * res.value.real
    rs, P = group_registry("SU3")
    res = zeta_numeric(rs, P, (2, 2, 2), fundamental_coweights(rs)[0], tol=1e-12)
    assert abs(res.value - 53 / 229635 * math.pi**6) < 1e-8 * 53 / 229635 * math.pi**6


def test_dominant_term():
    P = intermediate_lattices(A2)[0]
    res = zeta_numeric(A2, P, (100, 100, 100), tol=1e-40)
    assert abs(res.value.real - 2.0**-100) <= 1e-12 * 2.0**-100


def test_convergence_rejection():
    P = intermediate_lattices(A2)[0]
    with pytest.raises(NotProvablyConvergent):
        zeta_numeric(A2, P, (1, 1, 0))
    with pytest.raises(NotProvablyConvergent):
        zeta_numeric(A2, P, (0.5, 0.5, 0.5))
    with pytest.raises(VariableMismatch):
        zeta_numeric(A2, P, (2, 2))


def test_term_cap():
    P = intermediate_lattices(A2)[0]
    with pytest.raises(SlowConvergence):
        zeta_numeric(A2, P, (1.5, 1.5, 1.5), tol=1e-12, max_terms=10000)


def test_slow_diagonal_111():
    rs, Q = group_registry("PU3")
    exact = eval_symbolic(pu3_parity_reduce(1, 1, 1))
    res = zeta_numeric(rs, Q, (1, 1, 1), tol=1e-5)
    assert abs(exact - res.value) < 1e-4


def _random_specs(n, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        rs = rng.choice([A2, C2])
        L = rng.choice(intermediate_lattices(rs))
        s = tuple(rng.choice([1, 2, 2, 3, 2.5]) for _ in range(rs.n_positive))
        y = tuple(F(rng.randint(0, 11), 12) for _ in range(rs.rank))
        spec = LatticeSum(rs.positive_coroots, s, L.congruences, y)
        try:
            evaluate(spec, tol=1e-8, max_terms=2 * 10**6)
        except (NotProvablyConvergent, SlowConvergence):
            continue
        out.append(spec)
    return out


@pytest.mark.parametrize("spec", _random_specs(10, seed=3), ids=str)
def test_tail_bound_soundness(spec):
    coarse = evaluate(spec, tol=1e-5)
    fine = evaluate(spec, tol=1e-8)
    assert fine.terms_used >= coarse.terms_used
    assert abs(complex(coarse.value) - complex(fine.value)) <= coarse.tail_bound + fine.tail_bound


def test_tail_bound_against_known_value():
    # s = (2, 2, 0) factors as zeta(2)^2
    spec = LatticeSum(A2.positive_coroots, (2, 2, 0), (), (0, 0))
    for tol in (1e-3, 1e-5, 1e-7):
        res = evaluate(spec, tol=tol)
        assert abs(res.value - (math.pi**2 / 6) ** 2) <= res.tail_bound
    spec = LatticeSum(A2.positive_coroots, (2.5, 2, 0), (), (0, 0))
    res = evaluate(spec, tol=1e-3)
    assert abs(res.value - float(mpmath.zeta(2.5)) * math.pi**2 / 6) <= res.tail_bound


def test_box_tail_bound_monotone():
    b = [box_tail_bound(A2.positive_coroots, (2, 2, 2), k) for k in (10, 100, 1000)]
    assert b[0] > b[1] > b[2] > 0


def test_determinism():
    rs, Q = group_registry("PSp2")
    a = zeta_numeric(rs, Q, (2, 1.5, 2, 2), tol=1e-9)
    b = zeta_numeric(rs, Q, (2, 1.5, 2, 2), tol=1e-9, threads=4)
    assert complex(a.value) == complex(b.value) and a.tail_bound == b.tail_bound


def test_s_sum_examples():
    q, kappa, ipow = s_prefactor((2, 2, 2))
    want = float(q) * math.pi**kappa * (1, 1j, -1, -1j)[ipow] / 3780
    res = s_sum_numeric(A2, (2, 2, 2), (0, 0), tol=1e-12)
    assert abs(res.value - want) <= res.tail_bound + 1e-14
    Q = intermediate_lattices(C2)[1]
    q, kappa, ipow = s_prefactor((2, 2, 2, 2))
    want = float(q * p_function_lattice(C2, Q, (2, 2, 2, 2), (0, 0))) * math.pi**kappa
    res = s_sum_numeric(C2, (2, 2, 2, 2), (0, 0), Q, tol=1e-12)
    assert abs(res.value - want) <= res.tail_bound + 1e-14


def test_s_sum_weyl_invariance():
    # C2 coroot classes: {(1,0),(1,2)} and {(0,1),(1,1)}
    base = s_sum_numeric(C2, (2, 4, 6, 8), (0, 0), tol=1e-12)
    for k in ((8, 4, 6, 2), (2, 6, 4, 8), (8, 6, 4, 2)):
        other = s_sum_numeric(C2, k, (0, 0), tol=1e-12)
        assert abs(base.value - other.value) <= base.tail_bound + other.tail_bound + 1e-14
    base = s_sum_numeric(A2, (2, 4, 6), (0, 0), tol=1e-12)
    for k in ((6, 2, 4), (4, 6, 2), (2, 6, 4)):
        other = s_sum_numeric(A2, k, (0, 0), tol=1e-12)
        assert abs(base.value - other.value) <= base.tail_bound + other.tail_bound + 1e-14


def test_s_sum_matches_exact_twisted():
    y = (F(1, 5), F(2, 7))
    for rs, k in ((A2, (2, 2, 2)), (A2, (2, 3, 4)), (C2, (2, 2, 2, 2))):
        q, kappa, ipow = s_prefactor(k)
        want = float(q * p_function(rs, k, y)) * math.pi**kappa * (1, 1j, -1, -1j)[ipow]
        res = s_sum_numeric(rs, k, y, tol=1e-11)
        assert abs(res.value - want) <= res.tail_bound + 1e-13


def test_eval_symbolic():
    assert eval_symbolic(ZERO) == 0
    v = SymbolicValue.monomial(F(187, 688905), pi=6)
    rs, Q = group_registry("PU3")
    res = zeta_numeric(rs, Q, (2, 2, 2), tol=1e-12)
    assert abs(eval_symbolic(v) - res.value) <= res.tail_bound + 1e-15


def test_rationalize_examples():
    rs, Q = group_registry("PU3")
    res = zeta_numeric(rs, Q, (2, 2, 2), tol=1e-12)
    assert rationalize(complex(res.value), 6, 10**9, res.tail_bound) == F(187, 688905)
    assert rationalize(math.pi**8 / 322560, 8, 10**9) == F(1, 322560)
    assert rationalize(0.5, 0, 10) == F(1, 2)
    assert rationalize(math.sqrt(2), 0, 10) is NoMatch


@pytest.mark.slow
def test_rationalize_extended_precision():
    rs, Q = group_registry("PSp2")
    res = zeta_numeric(rs, Q, (4, 4, 4, 4), tol=1e-30, dps=40)
    assert rationalize(res.value, 16, 10**15, res.tail_bound) == F(479, 55794106368000)


def test_witten_su3():
    direct = math.fsum((m * n * (m + n) / 2) ** -2.0 for m in range(1, 3000) for n in range(1, 3000))
    res = witten_zeta_numeric("SU3", 2, tol=1e-10)
    assert abs(res.value - direct) < 1e-8
    assert abs(witten_zeta_numeric("SU3", 100).value - 1) < 1e-12
    rs, Q = group_registry("PU3")
    pu3 = witten_zeta_numeric("PU3", 2, tol=1e-12)
    assert abs(pu3.value - 4 * zeta_numeric(rs, Q, (2, 2, 2), tol=1e-12).value) < 1e-10


def test_complex_twist_damping():
    P = intermediate_lattices(A2)[0]
    y = (0.5j, 0.25 + 0.5j)
    res = zeta_numeric(A2, P, (1, 1, 1), y, tol=1e-10)
    direct = sum(
        mpmath.exp(2j * mpmath.pi * (y[0] * m + y[1] * n)) / (m * n * (m + n)) for m in range(1, 60) for n in range(1, 60)
    )
    assert abs(res.value - complex(direct)) <= res.tail_bound + 1e-12
