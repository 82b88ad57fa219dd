import cmath
import math
import random
from fractions import Fraction as F

import pytest

from weylzeta.bernoulli_p import VolumeValue, volume_value
from weylzeta.errors import Divergent, DivergentTerm, InputError, Undetermined, VariableMismatch
from weylzeta.numeric import eval_symbolic, zeta_numeric
from weylzeta.relations import (
    T_FIXTURES,
    TSpec,
    ZetaSpec,
    lem44_numeric_check,
    lem44_sides,
    pfd_identity_holds,
    pfd_reduce,
    psp2_parity_reduce,
    psp2_relation,
    pu3_even_diagonal,
    pu3_parity_reduce,
    t41_relation,
    t_zeta_numeric,
)
from weylzeta.roots import group_registry
from weylzeta.symbolic import L3, PI, SQRT3, SymbolicValue, zeta


def test_zeta_spec_validation():
    with pytest.raises(VariableMismatch):
        ZetaSpec("PU3", (1, 2))
    s = ZetaSpec("PSp2", (1, 2, 2, 2))
    assert s.twist == (0, 0)
    assert str(s) == "zeta((1,2,2,2);PSp2)"


def test_t41_shape():
    rel = t41_relation(1, 2, 2)
    assert [c for c, _ in rel.lhs] == [3, -3, 3]
    assert [s.exponents for _, s in rel.lhs] == [(1, 2, 2), (1, 2, 2), (2, 2, 1)]


def test_t41_111_and_122():
    want = zeta(3).scale(F(2, 27)) + (PI * SQRT3 * L3(2)).scale(F(2, 9))
    assert t41_relation(1, 1, 1).solve_single() == want
    rel = t41_relation(1, 2, 2)
    # the two (1,2,2) terms cancel, leaving 3 zeta((2,2,1))
    got = rel.solve_single()
    want = zeta(5).scale(F(-1, 81)) + (PI**2 * zeta(3)).scale(F(35, 243)) - (PI * SQRT3 * L3(4)).scale(F(2, 9))
    assert got == want


@pytest.mark.parametrize("pqs", [(1, 1, 2), (2, 1, 3), (1, 2, 2), (3, 2, 2), (2, 2, 2)])
def test_t41_numeric_residual(pqs):
    assert t41_relation(*pqs).check(1e-6)


def test_t41_errors():
    with pytest.raises(InputError):
        t41_relation(0, 1, 1)
    with pytest.raises(InputError):
        t41_relation(1, 1, 0)


def test_undetermined_when_several_unknowns():
    with pytest.raises(Undetermined):
        t41_relation(1, 3, 5).solve_single()


def test_even_diagonal_examples():
    assert pu3_even_diagonal(1) == VolumeValue(F(187, 688905), 6)
    assert pu3_even_diagonal(2) == VolumeValue(F(3279473, 48475988686125), 12)
    assert pu3_even_diagonal(3) == VolumeValue(F(53109402098, 3020275543157103456225), 18)


def test_even_diagonal_two_pipelines():
    rs, Q = group_registry("PU3")
    for k in range(1, 5):
        assert pu3_even_diagonal(k) == volume_value(rs, Q, (k, k, k))


def test_psp2_examples():
    assert psp2_relation(2, 1, 1, 1).solve_single() == (zeta(2) * zeta(3)).scale(F(3, 8)) - zeta(5).scale(F(31, 64))
    want = (
        (zeta(4) * zeta(9)).scale(F(-15, 16))
        - (zeta(2) * zeta(11)).scale(F(17379, 4096))
        + zeta(13).scale(F(8191, 1024))
    )
    assert psp2_relation(2, 3, 3, 5).solve_single() == want


@pytest.mark.parametrize("args", [(2, 1, 1, 1), (1, 2, 1, 2), (2, 3, 3, 5), (1, 1, 2, 2)])
def test_psp2_numeric_residual(args):
    assert psp2_relation(*args).check(1e-6)


def test_psp2_even_diagonals_are_pi_powers():
    rs, Q = group_registry("PSp2")
    for k, l in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)]:
        v = psp2_relation(2 * k, 2 * l, 2 * l, 2 * k).solve_single()
        assert v.is_real() and v.is_rational_pi_power()
        vol = volume_value(rs, Q, (k, l, l, k))
        assert v == SymbolicValue.monomial(vol.q, pi=vol.kappa)


def test_pu3_parity_examples():
    assert pu3_parity_reduce(1, 1, 1) == zeta(3).scale(F(2, 27)) + (PI * SQRT3 * L3(2)).scale(F(2, 9))
    assert pu3_parity_reduce(2, 2, 1) == t41_relation(1, 2, 2).solve_single()


@pytest.mark.parametrize("abc", [(3, 5, 1), (1, 2, 2), (2, 4, 1), (1, 1, 3)])
def test_pu3_parity_swap_symmetry(abc):
    a, b, c = abc
    assert pu3_parity_reduce(a, b, c) == pu3_parity_reduce(b, a, c)


@pytest.mark.parametrize("abc", [(1, 2, 2), (2, 1, 2), (3, 1, 1), (2, 2, 3)])
def test_pu3_parity_numeric(abc):
    exact = eval_symbolic(pu3_parity_reduce(*abc))
    rs, Q = group_registry("PU3")
    res = zeta_numeric(rs, Q, abc, tol=1e-9)
    assert abs(exact - complex(res.value)) <= res.tail_bound + 1e-12
    assert abs(exact.imag) < 1e-14


def test_pu3_parity_requires_odd_weight():
    with pytest.raises(InputError):
        pu3_parity_reduce(2, 2, 2)


def test_pfd_reduce_1222():
    assert pfd_reduce(1, 2, 2, 2) == [
        (-2, TSpec(1, 1, 1, 5, 1)),
        (62, TSpec(1, 2, 1, 5, 1)),
        (1, TSpec(1, 1, 1, 4, 2)),
        (17, TSpec(1, 2, 1, 4, 2)),
    ]


def test_pfd_degenerate():
    assert len(pfd_reduce(2, 3, 1, 1)) == 2


def test_pfd_identity():
    rng = random.Random(5)
    for c in range(1, 6):
        for d in range(1, 6):
            for _ in range(20):
                x = F(rng.randint(1, 40), rng.randint(1, 12))
                y = F(rng.randint(1, 40), rng.randint(1, 12)) * rng.choice([1, -1])
                if x + y == 0:
                    continue
                assert pfd_identity_holds(c, d, x, y)


def test_psp2_parity_closed():
    res = psp2_parity_reduce(1, 2, 2, 2)
    assert res.status == "closed"
    assert res.value == (zeta(5) * zeta(2)).scale(F(827, 64)) - zeta(7).scale(F(1397, 64))
    rs, Q = group_registry("PSp2")
    num = zeta_numeric(rs, Q, (1, 2, 2, 2), tol=1e-10)
    assert abs(eval_symbolic(res.value).real - complex(num.value).real) <= num.tail_bound + 1e-12


@pytest.mark.parametrize("args", [(1, 2, 1, 1), (2, 1, 1, 1), (1, 1, 2, 1)])
def test_psp2_parity_partial_matches_numeric(args):
    res = psp2_parity_reduce(*args)
    value, bound = res.numeric()
    rs, Q = group_registry("PSp2")
    num = zeta_numeric(rs, Q, args, tol=1e-9)
    assert abs(value - complex(num.value).real) <= 1e-6 + bound + num.tail_bound


def test_t_fixtures_numeric():
    for spec, val in T_FIXTURES.items():
        res = t_zeta_numeric(spec.tau, spec.mu, spec.k, spec.l, spec.d, tol=1e-12)
        assert abs(complex(res.value).real - eval_symbolic(val).real) <= 1e-8


def test_t_zeta_dominant_term():
    res = t_zeta_numeric(1, 2, 30, 30, 30, tol=1e-30)
    first = 1 / (1**30 * 2**30 * 3**30)
    assert abs(complex(res.value).real - first) <= 1e-6 * first


def test_t_zeta_divergent():
    with pytest.raises(Divergent):
        t_zeta_numeric(1, 1, 0, 1, 0)


def test_lem44_examples():
    assert lem44_numeric_check(2, 2, 2, 2 * math.pi / 3, cmath.exp(-4j * math.pi / 3), tol=1e-6)
    assert lem44_numeric_check(1, 1, 2, 0.0, 1, tol=1e-6)
    lhs, rhs, bound = lem44_sides(1, 1, 2, 0.0, 0, tol=1e-8)
    assert abs(lhs) <= bound and abs(rhs) <= bound


def test_lem44_interior_twist():
    assert lem44_numeric_check(1, 2, 2.5, 1.0, 0.5 + 0.3j, tol=1e-6)
