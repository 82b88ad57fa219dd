import itertools
from fractions import Fraction as F

import pytest

from weylzeta.errors import NonIntegralPairing, UnknownGroup, UnsupportedType
from weylzeta.roots import (
    Congruence,
    SubLattice,
    build_root_system,
    character_sum_coefficient,
    coroot_action,
    fourier_coefficient,
    fundamental_coweights,
    fundamental_weights_in_root_basis,
    group_registry,
    in_lattice,
    intermediate_lattices,
    membership_congruences,
    minuscule_representatives,
    parse_type,
    witten_normalization,
)

TYPES = [("A", 2), ("A", 3), ("B", 2), ("C", 2), ("B", 3), ("C", 3)]


@pytest.fixture(scope="module", params=TYPES, ids=lambda t: f"{t[0]}{t[1]}")
def rs(request):
    return build_root_system(*request.param)


def test_counts(rs):
    n = {"A2": 3, "A3": 6, "B2": 4, "C2": 4, "B3": 9, "C3": 9}[rs.name]
    w = {"A2": 6, "A3": 24, "B2": 8, "C2": 8, "B3": 48, "C3": 48}[rs.name]
    assert rs.n_positive == n
    assert rs.weyl_order == w


def test_coroot_rows():
    assert set(build_root_system("A", 2).positive_coroots) == {(1, 0), (0, 1), (1, 1)}
    assert set(build_root_system("C", 2).positive_coroots) == {(1, 0), (0, 1), (1, 1), (1, 2)}
    assert (2, 2, 1) in build_root_system("B", 3).positive_coroots
    assert build_root_system("A", 2).positive_coroots == ((1, 0), (0, 1), (1, 1))


def test_unsupported():
    with pytest.raises(UnsupportedType):
        build_root_system("D", 4)
    with pytest.raises(UnsupportedType):
        parse_type("G2x")


def test_fundamental_weights():
    assert fundamental_weights_in_root_basis(build_root_system("A", 2)) == ((F(2, 3), F(1, 3)), (F(1, 3), F(2, 3)))
    assert fundamental_weights_in_root_basis(build_root_system("A", 3))[0] == (F(3, 4), F(1, 2), F(1, 4))
    assert fundamental_weights_in_root_basis(build_root_system("B", 3))[2] == (F(1, 2), F(1), F(3, 2))


def test_kronecker_pairing(rs):
    # <alpha_i^vee, lambda_j> = sum_k C[i][k] (lambda_j)_k in the root basis, up to the
    # Cartan convention; the coweights invert the Cartan matrix
    cow = fundamental_coweights(rs)
    r = rs.rank
    for i in range(r):
        for j in range(r):
            pairing = sum(cow[i][k] * rs.cartan[k][j] for k in range(r))
            assert pairing == (1 if i == j else 0)


def test_rho_is_half_sum(rs):
    half = [F(sum(a[i] for a in rs.positive_roots), 2) for i in range(rs.rank)]
    rho = [sum(w[i] for w in rs.fw_in_root_basis) for i in range(rs.rank)]
    assert half == rho


def test_weyl_group_closure(rs):
    elems = set(map(lambda m: tuple(map(tuple, m)), rs.weyl_elements))
    for a in rs.weyl_elements[:8]:
        for b in rs.weyl_elements:
            prod = tuple(tuple(sum(a[i][k] * b[k][j] for k in range(rs.rank)) for j in range(rs.rank)) for i in range(rs.rank))
            assert prod in elems
    ident = tuple(tuple(int(i == j) for j in range(rs.rank)) for i in range(rs.rank))
    for s in rs.simple_reflections():
        sq = tuple(tuple(sum(s[i][k] * s[k][j] for k in range(rs.rank)) for j in range(rs.rank)) for i in range(rs.rank))
        assert sq == ident


def test_coroots_permuted_within_length_class(rs):
    index = {c: a for a, c in enumerate(rs.positive_coroots)}
    for w in rs.weyl_elements:
        act = coroot_action(w)
        for a, c in enumerate(rs.positive_coroots):
            v = tuple(sum(act[i][j] * c[j] for j in range(rs.rank)) for i in range(rs.rank))
            key = v if v in index else tuple(-x for x in v)
            assert key in index
            assert rs.length_class[index[key]] == rs.length_class[a]


def test_length_classes_are_orbits(rs):
    index = {c: a for a, c in enumerate(rs.positive_coroots)}
    for cls in set(rs.length_class):
        members = [a for a, c in enumerate(rs.length_class) if c == cls]
        orbit = set()
        start = rs.positive_coroots[members[0]]
        for w in rs.weyl_elements:
            act = coroot_action(w)
            v = tuple(sum(act[i][j] * start[j] for j in range(rs.rank)) for i in range(rs.rank))
            orbit.add(index[v] if v in index else index[tuple(-x for x in v)])
        assert orbit == set(members)


def test_minuscule_representatives():
    assert len(minuscule_representatives(build_root_system("A", 2))) == 3
    assert len(minuscule_representatives(build_root_system("C", 2))) == 2
    assert len(minuscule_representatives(build_root_system("A", 3))) == 4


def test_two_rho_pairing_integral(rs):
    for mu in minuscule_representatives(rs):
        assert (2 * sum(mu)).denominator == 1


def test_lattice_enumeration():
    names = lambda t: [L.name for L in intermediate_lattices(build_root_system(*t))]
    assert names(("A", 2)) == ["P", "Q"]
    assert names(("A", 3)) == ["P", "L1", "Q"]
    assert names(("B", 2)) == ["P", "Q"]
    L1 = intermediate_lattices(build_root_system("A", 3))[1]
    assert L1.index_L_over_Q == 2


def test_lattice_invariants(rs):
    for L in intermediate_lattices(rs):
        for i in range(rs.rank):
            alpha = [rs.cartan[j][i] for j in range(rs.rank)]
            assert in_lattice(alpha, L.generators)
        assert len(L.dual_reps) == L.index_P_over_L


def test_congruences_match_direct_membership(rs):
    for L in intermediate_lattices(rs):
        for m in itertools.product(range(1, 13), repeat=rs.rank):
            direct = in_lattice([x - 1 for x in m], L.generators)
            assert L.contains_shifted(m) == direct


def test_named_congruences():
    A2 = build_root_system("A", 2)
    (c,) = membership_congruences(intermediate_lattices(A2)[1])
    box = list(itertools.product(range(1, 13), repeat=2))
    assert all(c.holds(m) == ((m[0] - m[1]) % 3 == 0) for m in box)
    (c,) = intermediate_lattices(build_root_system("C", 2))[1].congruences
    assert all(c.holds(m) == (m[0] % 2 == 1) for m in box)
    (c,) = intermediate_lattices(build_root_system("A", 3))[2].congruences
    assert all(c.holds(m) == ((m[0] + 2 * m[1] + 3 * m[2]) % 4 == 2) for m in itertools.product(range(1, 13), repeat=3))


def test_fourier_coefficients():
    A2 = build_root_system("A", 2)
    P, Q = intermediate_lattices(A2)
    reps = minuscule_representatives(A2)
    assert fourier_coefficient(P, reps[0]) == 1
    assert fourier_coefficient(P, reps[1]) == 0
    assert fourier_coefficient(Q, reps[1]) == F(1, 3)
    C2 = build_root_system("C", 2)
    Qc = intermediate_lattices(C2)[1]
    mu = minuscule_representatives(C2)[1]
    assert abs(fourier_coefficient(Qc, mu)) == F(1, 2)


def test_fourier_matches_character_sum(rs):
    for L in intermediate_lattices(rs):
        for mu in minuscule_representatives(rs):
            assert fourier_coefficient(L, mu) == character_sum_coefficient(L, mu)


def test_nonintegral_pairing_detected():
    A2 = build_root_system("A", 2)
    Q = intermediate_lattices(A2)[1]
    with pytest.raises(NonIntegralPairing):
        fourier_coefficient(Q, (F(1, 4), F(0)))


def test_group_registry():
    rs, L = group_registry("PSp2")
    assert (rs.name, L.name) == ("C2", "Q")
    rs, L = group_registry("SU(3)")
    assert (rs.name, L.name) == ("A2", "P")
    rs, L = group_registry("SO6")
    assert (rs.name, L.name) == ("A3", "L1")
    with pytest.raises(UnknownGroup):
        group_registry("E8")


@pytest.mark.parametrize("t, k", [(("A", 2), 2), (("C", 2), 6), (("A", 3), 12)])
def test_witten_normalization(t, k):
    assert witten_normalization(build_root_system(*t)) == k


def test_congruence_rendering():
    c = Congruence((1, 2), 3, 0)
    assert str(c) == "m1 + 2*m2 = 0 (mod 3)"
    assert c.to_json() == {"coeffs": [1, 2], "modulus": 3, "residue": 0}
