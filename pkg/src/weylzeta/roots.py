"""Root systems of types A, B, C in rank 2 and 3, their weight lattices and
the intermediate lattices between Q and P.

Coordinates used throughout:

* weights ``lambda = sum m_j lambda_j`` are integer vectors ``m`` (the
  lambda-basis);
* coweights and twists ``y = sum y_i alpha_i^vee`` are rational vectors in
  the simple-coroot basis, so ``<y, lambda> = sum y_i m_i``;
* a positive coroot is stored as its coordinates in the simple-coroot basis,
  which are exactly the coefficients of the linear form ``<alpha^vee, lambda>``
  in ``m``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .errors import NonIntegralPairing, UnknownGroup, UnsupportedType

IntVec = Tuple[int, ...]
IntMat = Tuple[IntVec, ...]
RatVec = Tuple[Fraction, ...]

__all__ = [
    "RootSystemData",
    "SubLattice",
    "Congruence",
    "build_root_system",
    "fundamental_weights_in_root_basis",
    "fundamental_coweights",
    "minuscule_representatives",
    "intermediate_lattices",
    "membership_congruences",
    "fourier_coefficient",
    "group_registry",
    "GROUPS",
    "witten_normalization",
    "smith_normal_form",
    "hermite_normal_form",
    "in_lattice",
    "coroot_action",
]

# Positive-coroot rows in the order used by every exponent vector.
_COROOT_ORDER: Dict[Tuple[str, int], List[IntVec]] = {
    ("A", 2): [(1, 0), (0, 1), (1, 1)],
    ("B", 2): [(1, 0), (0, 1), (1, 1), (2, 1)],
    ("C", 2): [(1, 0), (0, 1), (1, 1), (1, 2)],
    ("A", 3): [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, 1), (1, 1, 1)],
    ("B", 3): [
        (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, 1),
        (0, 2, 1), (1, 1, 1), (1, 2, 1), (2, 2, 1),
    ],
    ("C", 3): [
        (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, 1),
        (0, 1, 2), (1, 1, 1), (1, 1, 2), (1, 2, 2),
    ],
}


# ---------------------------------------------------------------------------
# small exact linear algebra


def _mat_inverse(m: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def _solve(m: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> List[Fraction]:
    """Solve ``m x = b`` for square invertible ``m``."""
    inv = _mat_inverse(m)
    return [sum((inv[i][j] * b[j] for j in range(len(b))), Fraction(0)) for i in range(len(b))]


def _matmul(a, b):
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0])))
        for i in range(len(a))
    )


def _transpose(a):
    return tuple(tuple(row[j] for row in a) for j in range(len(a[0])))


def _identity(n: int) -> IntMat:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def smith_normal_form(a: Sequence[Sequence[int]]):
    """Return ``(U, D, V)`` with ``U a V = D`` diagonal, ``U, V`` unimodular and
    ``D[i][i]`` dividing ``D[i+1][i+1]``.  Square integer input only."""
    n = len(a)
    d = [list(map(int, row)) for row in a]
    u = [list(r) for r in _identity(n)]
    v = [list(r) for r in _identity(n)]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):  # row_dst += f * row_src
        d[dst] = [x + f * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, f):
        for row in d:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    for t in range(n):
        while True:
            nonzero = [(abs(d[i][j]), i, j) for i in range(t, n) for j in range(t, n) if d[i][j]]
            if not nonzero:
                break
            _, i, j = min(nonzero)
            swap_rows(t, i)
            swap_cols(t, j)
            done = True
            for i in range(t + 1, n):
                q = d[i][t] // d[t][t]
                if q:
                    add_row(t, i, -q)
                if d[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = d[t][j] // d[t][t]
                if q:
                    add_col(t, j, -q)
                if d[t][j]:
                    done = False
            if not done:
                continue
            # divisibility of the remaining block
            bad = next(
                ((i, j) for i in range(t + 1, n) for j in range(t + 1, n) if d[i][j] % d[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    return tuple(map(tuple, u)), tuple(map(tuple, d)), tuple(map(tuple, v))


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> IntMat:
    """Row-style Hermite normal form; returns the nonzero rows only."""
    a = [list(map(int, r)) for r in rows if any(r)]
    if not a:
        return ()
    ncols = len(a[0])
    out_row = 0
    for col in range(ncols):
        while True:
            nz = [i for i in range(out_row, len(a)) if a[i][col]]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(a[i][col]))
            a[out_row], a[p] = a[p], a[out_row]
            changed = False
            for i in range(out_row + 1, len(a)):
                if a[i][col]:
                    q = a[i][col] // a[out_row][col]
                    a[i] = [x - q * y for x, y in zip(a[i], a[out_row])]
                    if a[i][col]:
                        changed = True
            if not changed:
                break
        if out_row < len(a) and a[out_row][col]:
            if a[out_row][col] < 0:
                a[out_row] = [-x for x in a[out_row]]
            for i in range(out_row):
                q = a[i][col] // a[out_row][col]
                a[i] = [x - q * y for x, y in zip(a[i], a[out_row])]
            out_row += 1
    return tuple(tuple(r) for r in a[:out_row])


def in_lattice(vec: Sequence[int], basis: Sequence[Sequence[int]]) -> bool:
    """Direct membership test of an integer vector in the row span of a
    square nonsingular integer basis."""
    x = _solve(_transpose([[Fraction(c) for c in row] for row in basis]), [Fraction(c) for c in vec])
    return all(c.denominator == 1 for c in x)


# ---------------------------------------------------------------------------
# root systems


def _simple_roots_euclidean(family: str, rank: int) -> List[Tuple[int, ...]]:
    if family == "A":
        dim = rank + 1
    else:
        dim = rank
    roots = []
    for i in range(rank - 1 if family != "A" else rank):
        v = [0] * dim
        v[i] = 1
        v[i + 1] = -1
        roots.append(tuple(v))
    if family == "B":
        v = [0] * dim
        v[rank - 1] = 1
        roots.append(tuple(v))
    elif family == "C":
        v = [0] * dim
        v[rank - 1] = 2
        roots.append(tuple(v))
    return roots


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class RootSystemData:
    family: str
    rank: int
    cartan: IntMat
    positive_coroots: Tuple[IntVec, ...]
    positive_roots: Tuple[IntVec, ...]  # root-basis coefficients, same order
    length_class: Tuple[str, ...]
    fw_in_root_basis: Tuple[RatVec, ...]
    weyl_elements: Tuple[IntMat, ...]
    rho_coords: IntVec

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def n_positive(self) -> int:
        return len(self.positive_coroots)

    @property
    def weyl_order(self) -> int:
        return len(self.weyl_elements)

    def simple_indices(self) -> List[int]:
        """Positions of the simple coroots inside ``positive_coroots``."""
        out = []
        for i in range(self.rank):
            e = tuple(int(j == i) for j in range(self.rank))
            out.append(self.positive_coroots.index(e))
        return out

    def simple_reflections(self) -> List[IntMat]:
        r = self.rank
        mats = []
        for i in range(r):
            mats.append(
                tuple(
                    tuple(int(a == b) - (self.cartan[a][i] if b == i else 0) for b in range(r))
                    for a in range(r)
                )
            )
        return mats


def _weyl_closure(gens: Sequence[IntMat]) -> Tuple[IntMat, ...]:
    r = len(gens[0])
    ident = _identity(r)
    seen = {ident: None}
    order = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                p = _matmul(g, w)
                if p not in seen:
                    seen[p] = None
                    order.append(p)
                    nxt.append(p)
        frontier = nxt
    return tuple(order)


def coroot_action(w: IntMat) -> Tuple[Tuple[Fraction, ...], ...]:
    """Matrix acting on coroot coordinates induced by ``w`` on weights.

    Pairing invariance ``<w y, w lambda> = <y, lambda>`` forces ``w^{-T}``.
    """
    inv = _mat_inverse(w)
    return tuple(tuple(inv[j][i] for j in range(len(w))) for i in range(len(w)))


_CACHE: Dict[Tuple[str, int], RootSystemData] = {}


def build_root_system(family: str, rank: int) -> RootSystemData:
    family = str(family).upper()
    key = (family, int(rank))
    if key not in _COROOT_ORDER:
        raise UnsupportedType(f"unsupported root system {family}{rank}; supported: A2 A3 B2 B3 C2 C3")
    if key in _CACHE:
        return _CACHE[key]
    simple = _simple_roots_euclidean(family, rank)
    r = rank
    cartan = tuple(
        tuple(2 * _dot(simple[i], simple[j]) // _dot(simple[i], simple[i]) for j in range(r))
        for i in range(r)
    )

    # all roots as the Weyl orbit of the simple roots (Euclidean coordinates)
    def reflect(v, a):
        c = Fraction(2 * _dot(v, a), _dot(a, a))
        return tuple(int(x - c * y) for x, y in zip(v, a))

    roots = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for v in frontier:
            for a in simple:
                w = reflect(v, a)
                if w not in roots:
                    roots.add(w)
                    nxt.append(w)
        frontier = nxt

    # root-basis coefficients via least squares on the (possibly overcomplete) ambient basis
    gram = [[Fraction(_dot(a, b)) for b in simple] for a in simple]
    positive = []
    for v in roots:
        coeffs = _solve(gram, [Fraction(_dot(v, a)) for a in simple])
        if all(c >= 0 for c in coeffs):
            ints = tuple(int(c) for c in coeffs)
            norm = _dot(v, v)
            cor = tuple(
                Fraction(ints[i] * _dot(simple[i], simple[i]), norm) for i in range(r)
            )
            if any(c.denominator != 1 for c in cor):
                raise AssertionError("coroot coordinates must be integral")
            positive.append((tuple(int(c) for c in cor), ints, norm))

    expected = _COROOT_ORDER[key]
    by_coroot = {p[0]: p for p in positive}
    if set(by_coroot) != set(expected) or len(positive) != len(expected):
        raise AssertionError(f"generated coroots for {family}{rank} disagree with the table")
    ordered = [by_coroot[c] for c in expected]
    norms = sorted({p[2] for p in ordered})
    if len(norms) == 1:
        classes = tuple("all" for _ in ordered)
    else:
        classes = tuple("short" if p[2] == norms[0] else "long" for p in ordered)

    fw = _mat_inverse(_transpose([[Fraction(x) for x in row] for row in cartan]))
    data = RootSystemData(
        family=family,
        rank=r,
        cartan=cartan,
        positive_coroots=tuple(p[0] for p in ordered),
        positive_roots=tuple(p[1] for p in ordered),
        length_class=classes,
        fw_in_root_basis=tuple(tuple(row) for row in fw),
        weyl_elements=(),
        rho_coords=tuple(1 for _ in range(r)),
    )
    weyl = _weyl_closure(data.simple_reflections())
    data = RootSystemData(**{**data.__dict__, "weyl_elements": weyl})
    _CACHE[key] = data
    return data


def parse_type(text: str) -> RootSystemData:
    text = text.strip().upper().replace("_", "")
    if len(text) != 2 or not text[1].isdigit():
        raise UnsupportedType(f"cannot parse root system type {text!r}")
    return build_root_system(text[0], int(text[1]))


def fundamental_weights_in_root_basis(rs: RootSystemData) -> Tuple[RatVec, ...]:
    return rs.fw_in_root_basis


def fundamental_coweights(rs: RootSystemData) -> Tuple[RatVec, ...]:
    """Row ``j`` is ``lambda_j^vee`` in the simple-coroot basis (inverse Cartan)."""
    inv = _mat_inverse([[Fraction(x) for x in row] for row in rs.cartan])
    return tuple(tuple(row) for row in inv)


def minuscule_indices(rs: RootSystemData) -> List[int]:
    # <lambda_j^vee, alpha> is the alpha_j-coefficient of alpha in the root basis
    return [j for j in range(rs.rank) if all(abs(a[j]) <= 1 for a in rs.positive_roots)]


def minuscule_representatives(rs: RootSystemData) -> List[RatVec]:
    cow = fundamental_coweights(rs)
    reps = [tuple(Fraction(0) for _ in range(rs.rank))]
    reps.extend(cow[j] for j in minuscule_indices(rs))
    return reps


def witten_normalization(rs: RootSystemData) -> int:
    return math.prod(sum(c) for c in rs.positive_coroots)


# ---------------------------------------------------------------------------
# lattices


@dataclass(frozen=True)
class Congruence:
    """``sum coeffs[j] * m_j == residue (mod modulus)``."""

    coeffs: IntVec
    modulus: int
    residue: int

    def holds(self, m: Sequence[int]) -> bool:
        return (sum(c * x for c, x in zip(self.coeffs, m)) - self.residue) % self.modulus == 0

    def to_json(self) -> dict:
        return {"coeffs": list(self.coeffs), "modulus": self.modulus, "residue": self.residue}

    def __str__(self) -> str:
        parts = []
        for j, c in enumerate(self.coeffs):
            if c:
                parts.append(f"m{j + 1}" if c == 1 else f"{c}*m{j + 1}")
        lhs = " + ".join(parts) if parts else "0"
        return f"{lhs} = {self.residue} (mod {self.modulus})"


@dataclass(frozen=True)
class SubLattice:
    name: str
    parent: RootSystemData = field(repr=False)
    generators: IntMat
    index_P_over_L: int
    congruences: Tuple[Congruence, ...]
    dual_reps: Tuple[RatVec, ...]

    def contains_shifted(self, m: Sequence[int]) -> bool:
        """Whether ``sum m_j lambda_j`` lies in ``L + rho``."""
        return all(c.holds(m) for c in self.congruences)

    @property
    def index_L_over_Q(self) -> int:
        return quotient_order(self.parent) // self.index_P_over_L


def quotient_order(rs: RootSystemData) -> int:
    det = 1
    _, d, _ = smith_normal_form(_root_lattice_rows(rs))
    for i in range(rs.rank):
        det *= d[i][i]
    return det


def _root_lattice_rows(rs: RootSystemData) -> IntMat:
    # alpha_i in lambda coordinates is the i-th column of the Cartan matrix
    return _transpose(rs.cartan)


def _canonical_congruence(coeffs: Sequence[int], modulus: int, residue: int) -> Congruence:
    coeffs = [c % modulus for c in coeffs]
    residue %= modulus
    lead = next((c for c in coeffs if c), None)
    if lead is not None and math.gcd(lead, modulus) == 1:
        inv = pow(lead, -1, modulus)
        coeffs = [(c * inv) % modulus for c in coeffs]
        residue = (residue * inv) % modulus
    return Congruence(tuple(coeffs), modulus, residue)


def membership_congruences(L: SubLattice | IntMat, rank: int | None = None) -> Tuple[Congruence, ...]:
    """Congruences on ``m`` characterizing ``sum m_j lambda_j in L + rho``."""
    gens = L.generators if isinstance(L, SubLattice) else L
    r = len(gens)
    u, d, v = smith_normal_form(gens)
    # m in rowspan(G)  <=>  (m^T V)_i == 0 mod d_i
    out = []
    for i in range(r):
        di = d[i][i]
        if di == 1:
            continue
        coeffs = [v[j][i] for j in range(r)]
        out.append(_canonical_congruence(coeffs, di, sum(coeffs)))
    out.sort(key=lambda c: (c.modulus, c.coeffs))
    return tuple(out)


def _dual_member(mu: Sequence[Fraction], gens: IntMat) -> bool:
    return all(sum((Fraction(m) * g for m, g in zip(mu, row)), Fraction(0)).denominator == 1 for row in gens)


def _subgroups(rs: RootSystemData) -> List[Tuple[IntVec, ...]]:
    """All subgroups of P/Q, each given by lambda-coordinate representatives."""
    qrows = _root_lattice_rows(rs)
    u, d, v = smith_normal_form(qrows)
    # P/Q = Z^r / rowspan(Q);  rowspan(Q) V = rowspan(D)
    # so m -> (m V mod d_i) is an isomorphism onto prod Z/d_i
    r = rs.rank
    vinv = _mat_inverse([[Fraction(x) for x in row] for row in v])
    vinv = [[int(x) for x in row] for row in vinv]
    moduli = [d[i][i] for i in range(r)]
    elements = []
    for t in itertools.product(*(range(mm) for mm in moduli)):
        # preimage m = t V^{-1}
        m = tuple(sum(t[k] * vinv[k][j] for k in range(r)) for j in range(r))
        elements.append((t, m))

    def add(a, b):
        return tuple((x + y) % mm for x, y, mm in zip(a, b, moduli))

    zero = tuple(0 for _ in moduli)
    found = {}
    elems = [e[0] for e in elements]
    for size in range(len(elems) + 1):
        for subset in itertools.combinations(elems, size):
            group = {zero}
            changed = True
            while changed:
                changed = False
                for a in list(group):
                    for b in list(subset) + list(group):
                        c = add(a, b)
                        if c not in group:
                            group.add(c)
                            changed = True
            found[frozenset(group)] = None
    lookup = dict(elements)
    return [tuple(lookup[t] for t in sorted(g)) for g in found]


def intermediate_lattices(rs: RootSystemData) -> List[SubLattice]:
    qrows = _root_lattice_rows(rs)
    order = quotient_order(rs)
    reps = minuscule_representatives(rs)
    lattices = []
    for group in _subgroups(rs):
        gens = hermite_normal_form(list(qrows) + [list(m) for m in group])
        index = order // len(group)
        dual = tuple(mu for mu in reps if _dual_member(mu, gens))
        lattices.append((index, gens, dual))
    lattices.sort(key=lambda t: t[0])
    out = []
    middle = 0
    for index, gens, dual in lattices:
        if index == 1:
            name = "P"
        elif index == order:
            name = "Q"
        else:
            middle += 1
            name = f"L{middle}"
        out.append(SubLattice(name, rs, gens, index, membership_congruences(gens), dual))
    return out


def get_lattice(rs: RootSystemData, name: str) -> SubLattice:
    for lat in intermediate_lattices(rs):
        if lat.name.upper() == name.strip().upper():
            return lat
    raise UnknownGroup(f"{rs.name} has no lattice named {name!r}")


def fourier_coefficient(L: SubLattice, mu: Sequence[Fraction]) -> Fraction:
    """Fourier coefficient of the characteristic function of ``L + rho`` at ``mu``."""
    two_rho = 2 * sum((Fraction(x) for x in mu), Fraction(0))
    if two_rho.denominator != 1:
        raise NonIntegralPairing(f"<mu, 2 rho> = {two_rho} is not an integer")
    if not _dual_member(mu, L.generators):
        return Fraction(0)
    sign = -1 if two_rho.numerator % 2 else 1
    return Fraction(sign, L.index_P_over_L)


def character_sum_coefficient(L: SubLattice, mu: Sequence[Fraction]) -> Fraction:
    """Same coefficient from the definition: average of ``e^{-2 pi i <mu, lambda>}``
    over coset representatives of ``(L + rho) / Q`` inside ``P / Q``.

    Phases are tracked as rationals mod 1; the sum is real because the set of
    phases is symmetric, so only their cosines survive and those are rational
    for the orders occurring here (2, 3, 4).
    """
    rs = L.parent
    qrows = _root_lattice_rows(rs)
    order = quotient_order(rs)
    cos_table = {
        Fraction(0): Fraction(1), Fraction(1, 2): Fraction(-1),
        Fraction(1, 3): Fraction(-1, 2), Fraction(2, 3): Fraction(-1, 2),
        Fraction(1, 4): Fraction(0), Fraction(3, 4): Fraction(0),
    }
    total = Fraction(0)
    count = 0
    seen = []
    for m in itertools.product(range(order), repeat=rs.rank):
        if not L.contains_shifted(m):
            continue
        if any(in_lattice([a - b for a, b in zip(m, s)], qrows) for s in seen):
            continue
        seen.append(m)
        phase = -sum((Fraction(x) * c for x, c in zip(mu, m)), Fraction(0))
        phase -= math.floor(phase)
        total += cos_table[phase]
        count += 1
    return total / order


# ---------------------------------------------------------------------------
# named groups

GROUPS: Dict[str, Tuple[str, int, str]] = {
    "SU3": ("A", 2, "P"),
    "PU3": ("A", 2, "Q"),
    "SU4": ("A", 3, "P"),
    "SO6": ("A", 3, "L1"),
    "PU4": ("A", 3, "Q"),
    "SPIN5": ("B", 2, "P"),
    "SO5": ("B", 2, "Q"),
    "SP2": ("C", 2, "P"),
    "PSP2": ("C", 2, "Q"),
    "SPIN7": ("B", 3, "P"),
    "SO7": ("B", 3, "Q"),
    "SP3": ("C", 3, "P"),
    "PSP3": ("C", 3, "Q"),
}


def group_registry(name: str) -> Tuple[RootSystemData, SubLattice]:
    key = name.strip().upper().replace("(", "").replace(")", "").replace("_", "")
    if key not in GROUPS:
        raise UnknownGroup(f"unknown group {name!r}; known: {', '.join(sorted(GROUPS))}")
    fam, rank, lat = GROUPS[key]
    rs = build_root_system(fam, rank)
    return rs, get_lattice(rs, lat)
