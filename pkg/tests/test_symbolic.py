import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from weylzeta.errors import DivergentTerm, UnsupportedResidue
from weylzeta.numeric import eval_symbolic, phi_numeric
from weylzeta.symbolic import I, L3, ONE, PI, SQRT3, ZERO, SymbolicValue, phi_to_basis, zeta, zeta_even_reduce


def test_even_zeta_reduction():
    assert zeta_even_reduce(1) == SymbolicValue.monomial(F(1, 6), pi=2)
    assert zeta_even_reduce(2) == SymbolicValue.monomial(F(1, 90), pi=4)
    assert zeta_even_reduce(3) == SymbolicValue.monomial(F(1, 945), pi=6)
    assert zeta(2) * zeta(3) == SymbolicValue.monomial(F(1, 6), pi=2, zeta=(3,))


def test_reduction_rules():
    x = zeta(3).scale(F(2, 7)) + PI
    assert (x + x.scale(-1)).is_zero()
    assert (SQRT3 * I) * (SQRT3 * I) == SymbolicValue.rational(-3)
    assert I * I == -ONE
    assert ZERO.terms == {}


def test_phi_basis():
    assert phi_to_basis(3, 0) == zeta(3)
    want = SymbolicValue.monomial(F(-1, 18), pi=2) + SymbolicValue.monomial(F(1, 2), i=1, sqrt3=1, L3=(2,))
    assert phi_to_basis(2, F(1, 3)) == want
    assert phi_to_basis(5, F(1, 2)) == zeta(5).scale(F(1, 16) - 1)
    for n in range(2, 10):
        total = phi_to_basis(n, F(1, 3)) + phi_to_basis(n, F(2, 3))
        assert total == zeta(n).scale(F(3) ** (1 - n) - 1)
    assert phi_to_basis(4, F(-1, 3)) == phi_to_basis(4, F(2, 3))


def test_phi_errors():
    with pytest.raises(UnsupportedResidue):
        phi_to_basis(3, F(1, 5))
    with pytest.raises(DivergentTerm):
        phi_to_basis(1, 0)


@pytest.mark.parametrize("n", range(2, 10))
@pytest.mark.parametrize("alpha", [F(0), F(1, 2), F(1, 3), F(2, 3)])
def test_phi_numeric_soundness(n, alpha):
    # direct series with an explicit tail
    terms = 200000 if n == 2 else 20000
    direct = sum(complex(math.cos(2 * math.pi * m * alpha), math.sin(2 * math.pi * m * alpha)) / m**n for m in range(1, terms))
    tail = 1 / ((n - 1) * (terms - 1) ** (n - 1))
    v = eval_symbolic(phi_to_basis(n, alpha))
    assert abs(v - direct) < max(1e-10, 2 * tail)
    assert abs(v - phi_numeric(n, alpha)) < 1e-12


coeffs = st.fractions(min_value=-20, max_value=20, max_denominator=9)
monos = st.builds(
    lambda c, p, i, s, z, l: SymbolicValue.monomial(c, pi=p, i=i, sqrt3=s, zeta=z, L3=l),
    coeffs,
    st.integers(0, 4),
    st.integers(0, 3),
    st.integers(0, 2),
    st.lists(st.sampled_from([2, 3, 4, 5]), max_size=2),
    st.lists(st.sampled_from([2, 4]), max_size=1),
)
values = st.lists(monos, max_size=3).map(lambda ms: sum(ms, ZERO))


@given(values)
def test_canonicalize_idempotent(v):
    assert v.canonicalize() == v
    assert v.canonicalize().canonicalize() == v.canonicalize()
    for (p, ip, sp, zs, ls), c in v.terms.items():
        assert ip in (0, 1) and sp in (0, 1) and c != 0
        assert all(n % 2 for n in zs)


@given(values, values, values)
def test_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a


@given(values, values)
def test_numeric_homomorphism(a, b):
    lhs = eval_symbolic(a * b)
    rhs = eval_symbolic(a) * eval_symbolic(b)
    assert abs(lhs - rhs) <= 1e-9 * (1 + abs(rhs))


@given(values)
def test_realness(v):
    assert v.real_part().is_real()
    assert (v + v.conjugate()).is_real()
    z = eval_symbolic(v)
    assert abs(eval_symbolic(v.imag_part()).real - z.imag) <= 1e-9 * (1 + abs(z))


@given(values)
def test_json_round_trip(v):
    assert SymbolicValue.from_json(v.to_json()) == v


def test_rendering():
    v = zeta(3).scale(F(2, 27)) + SymbolicValue.monomial(F(2, 9), pi=1, sqrt3=1, L3=(2,))
    assert str(v) == "2/9*sqrt3*pi*L(2,chi3) + 2/27*zeta(3)"
    assert v.latex() == r"\frac{2}{9} \sqrt{3} \pi L(2,\chi_3) + \frac{2}{27} \zeta(3)"
    assert str(ZERO) == "0"
