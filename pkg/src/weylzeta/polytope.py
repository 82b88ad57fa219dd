"""Exact cell decomposition of the unit cube cut by integer translates of
affine hyperplanes, and exact polynomial integration over the cells.

Each cell is the convex polytope where every tracked form has a fixed
integer floor.  Cells are split into simplices by a pulling triangulation
and polynomials are integrated with the Dirichlet moment formula on the
standard simplex.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Sequence, Tuple, Union

from .errors import DimensionTooHigh, VariableMismatch
from .exact import MultiPoly

Point = Tuple[Fraction, ...]
Simplex = Tuple[Point, ...]

__all__ = [
    "LinearForm",
    "Cell",
    "CellComplex",
    "AffineFactor",
    "cut_unit_cube",
    "integrate_over_complex",
    "integrate_simplex",
    "simplex_volume",
]

MAX_DIM = 3


@dataclass(frozen=True)
class LinearForm:
    coeffs: Tuple[int, ...]
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        object.__setattr__(self, "offset", Fraction(self.offset))

    def __call__(self, x: Sequence[Fraction]) -> Fraction:
        return self.offset + sum((c * xi for c, xi in zip(self.coeffs, x)), Fraction(0))

    def range_on_cube(self) -> Tuple[Fraction, Fraction]:
        lo = self.offset + sum(c for c in self.coeffs if c < 0)
        hi = self.offset + sum(c for c in self.coeffs if c > 0)
        return lo, hi


@dataclass(frozen=True)
class Cell:
    shift: Tuple[int, ...]
    simplices: Tuple[Simplex, ...]

    def volume(self) -> Fraction:
        return sum((simplex_volume(s) for s in self.simplices), Fraction(0))

    def centroid(self) -> Point:
        """Volume-weighted centroid; always interior for a full-dimensional cell."""
        vol = self.volume()
        d = len(self.simplices[0][0])
        acc = [Fraction(0)] * d
        for s in self.simplices:
            w = simplex_volume(s)
            for i in range(d):
                acc[i] += w * sum(p[i] for p in s) / len(s)
        return tuple(a / vol for a in acc)


@dataclass(frozen=True)
class CellComplex:
    dim: int
    forms: Tuple[LinearForm, ...]
    cells: Tuple[Cell, ...]

    def volume(self) -> Fraction:
        return sum((c.volume() for c in self.cells), Fraction(0))

    def simplex_count(self) -> int:
        return sum(len(c.simplices) for c in self.cells)


# ---------------------------------------------------------------------------
# geometry helpers


def _det(m: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(m)
    if n == 0:
        return Fraction(1)
    a = [list(row) for row in m]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] / p
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def _solve(m: List[List[Fraction]], b: List[Fraction]):
    """Gaussian elimination; ``None`` when singular."""
    n = len(m)
    a = [list(row) + [bi] for row, bi in zip(m, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(row[n] for row in a)


def _affine_rank(points: Sequence[Point]) -> int:
    if not points:
        return -1
    base = points[0]
    rows = [[p[i] - base[i] for i in range(len(base))] for p in points[1:]]
    rank = 0
    ncols = len(base)
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(rank + 1, len(rows)):
            if rows[r][col]:
                f = rows[r][col] / rows[rank][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def simplex_volume(s: Simplex) -> Fraction:
    d = len(s) - 1
    v0 = s[0]
    jac = [[s[j + 1][i] - v0[i] for j in range(d)] for i in range(d)]
    return abs(_det(jac)) / math.factorial(d)


# half-space a.x <= b
_Constraint = Tuple[Tuple[Fraction, ...], Fraction]


def _cell_constraints(d: int, forms: Sequence[LinearForm], shift: Sequence[int]) -> List[_Constraint]:
    cons: List[_Constraint] = []
    for i in range(d):
        e = tuple(Fraction(int(j == i)) for j in range(d))
        cons.append((tuple(-x for x in e), Fraction(0)))  # -x_i <= 0
        cons.append((e, Fraction(1)))  # x_i <= 1
    for form, m in zip(forms, shift):
        a = tuple(Fraction(c) for c in form.coeffs)
        # m <= form <= m + 1
        cons.append((tuple(-x for x in a), form.offset - m))
        cons.append((a, m + 1 - form.offset))
    return cons


def _polytope_vertices(d: int, cons: List[_Constraint]):
    verts: Dict[Point, frozenset] = {}
    for subset in itertools.combinations(range(len(cons)), d):
        sol = _solve([list(cons[k][0]) for k in subset], [cons[k][1] for k in subset])
        if sol is None or sol in verts:
            continue
        ok = True
        tight = []
        for idx, (a, b) in enumerate(cons):
            val = sum((x * y for x, y in zip(a, sol)), Fraction(0))
            if val > b:
                ok = False
                break
            if val == b:
                tight.append(idx)
        if ok:
            verts[sol] = frozenset(tight)
    return verts


def _pulling_triangulation(verts: Dict[Point, frozenset], dim: int) -> List[Simplex]:
    pts = sorted(verts)
    if dim == 0:
        return [(pts[0],)]
    if len(pts) == dim + 1:
        return [tuple(pts)]
    apex = pts[0]
    all_cons = set().union(*verts.values())
    facets = {}
    for c in all_cons:
        face = frozenset(p for p in pts if c in verts[p])
        if apex in face or face in facets:
            continue
        if _affine_rank(list(face)) == dim - 1:
            facets[face] = None
    out: List[Simplex] = []
    for face in facets:
        sub = {p: verts[p] for p in face}
        for simplex in _pulling_triangulation(sub, dim - 1):
            out.append((apex,) + simplex)
    return out


def _floor_ranges(forms: Sequence[LinearForm]) -> List[range]:
    ranges = []
    for form in forms:
        lo, hi = form.range_on_cube()
        ranges.append(range(math.floor(lo), max(math.ceil(hi), math.floor(lo) + 1)))
    return ranges


def cut_unit_cube(d: int, forms: Sequence[LinearForm]) -> CellComplex:
    """Decompose ``[0,1]^d`` into the cells on which every form has a constant
    integer floor, each split into simplices with rational vertices."""
    if d > MAX_DIM:
        raise DimensionTooHigh(f"cube dimension {d} exceeds the supported maximum {MAX_DIM}")
    if d < 0:
        raise ValueError("dimension must be nonnegative")
    forms = tuple(forms)
    for f in forms:
        if len(f.coeffs) != d:
            raise VariableMismatch(f"form {f} is not over {d} variables")
    if d == 0:
        return CellComplex(0, forms, (Cell(tuple(math.floor(f.offset) for f in forms), (((),),)),))
    cells = []
    for shift in itertools.product(*_floor_ranges(forms)):
        cons = _cell_constraints(d, forms, shift)
        verts = _polytope_vertices(d, cons)
        if len(verts) < d + 1 or _affine_rank(list(verts)) < d:
            continue
        simplices = tuple(s for s in _pulling_triangulation(verts, d) if simplex_volume(s) != 0)
        if simplices:
            cells.append(Cell(tuple(shift), simplices))
    return CellComplex(d, forms, tuple(cells))


# ---------------------------------------------------------------------------
# integration


@dataclass(frozen=True)
class AffineFactor:
    """Univariate polynomial ``sum poly[j] t^j`` composed with the affine map
    ``t = const + sum coeffs[i] x_i``."""

    poly: Tuple[Fraction, ...]
    coeffs: Tuple[Fraction, ...]
    const: Fraction = Fraction(0)


Integrand = Union[MultiPoly, Sequence[AffineFactor]]


def _standard_simplex_functional(p: MultiPoly) -> Fraction:
    d = p.nvars
    total = Fraction(0)
    for exps, c in p.terms.items():
        num = 1
        for e in exps:
            num *= math.factorial(e)
        total += c * Fraction(num, math.factorial(sum(exps) + d))
    return total


def _factor_in_u(f: AffineFactor, base: Point, jac_cols: List[Point]) -> MultiPoly:
    d = len(jac_cols)
    const = f.const + sum((c * b for c, b in zip(f.coeffs, base)), Fraction(0))
    lin = [sum((c * col[i] for i, c in enumerate(f.coeffs)), Fraction(0)) for col in jac_cols]
    t = MultiPoly.linear(lin, const)
    # Horner in t
    acc = MultiPoly(d)
    for c in reversed(f.poly):
        acc = acc * t + c
    return acc


def integrate_simplex(integrand: Integrand, s: Simplex) -> Fraction:
    d = len(s) - 1
    v0 = s[0]
    cols = [tuple(s[j + 1][i] - v0[i] for i in range(d)) for j in range(d)]
    jac = abs(_det([[cols[j][i] for j in range(d)] for i in range(d)]))
    if jac == 0:
        return Fraction(0)
    if d == 0:
        if isinstance(integrand, MultiPoly):
            return integrand.evaluate(())
        val = Fraction(1)
        for f in integrand:
            t = f.const
            val *= sum((c * t**j for j, c in enumerate(f.poly)), Fraction(0))
        return val
    if isinstance(integrand, MultiPoly):
        if integrand.nvars != d:
            raise VariableMismatch(f"integrand has {integrand.nvars} variables, cube has {d}")
        subs = [MultiPoly.linear([cols[j][i] for j in range(d)], v0[i]) for i in range(d)]
        poly = integrand.compose(subs)
    else:
        poly = MultiPoly.constant(d, 1)
        for f in integrand:
            if len(f.coeffs) != d:
                raise VariableMismatch(f"factor over {len(f.coeffs)} variables, cube has {d}")
            poly = poly * _factor_in_u(f, v0, cols)
    return jac * _standard_simplex_functional(poly)


def integrate_over_complex(
    complex_: CellComplex, integrand_per_cell: Callable[[Cell], Integrand]
) -> Fraction:
    total = Fraction(0)
    for cell in complex_.cells:
        integrand = integrand_per_cell(cell)
        for s in cell.simplices:
            total += integrate_simplex(integrand, s)
    return total
