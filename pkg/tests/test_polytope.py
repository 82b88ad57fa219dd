import itertools
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from weylzeta.errors import DimensionTooHigh, VariableMismatch
from weylzeta.exact import MultiPoly
from weylzeta.polytope import AffineFactor, LinearForm, cut_unit_cube, integrate_over_complex, integrate_simplex


def one(d):
    return lambda cell: MultiPoly.constant(d, 1)


def test_single_breakpoint():
    cx = cut_unit_cube(1, [LinearForm((1,), F(-1, 3))])
    cells = sorted(cx.cells, key=lambda c: c.shift)
    assert [c.shift for c in cells] == [(-1,), (0,)]
    assert [c.volume() for c in cells] == [F(1, 3), F(2, 3)]


def test_no_forms():
    cx = cut_unit_cube(2, [])
    assert len(cx.cells) == 1
    assert cx.simplex_count() == 2
    assert cx.volume() == 1


def test_two_forms_cell_count_matches_raster():
    forms = [LinearForm((1, 1)), LinearForm((1, 2))]
    cx = cut_unit_cube(2, forms)
    res = 64
    regions = set()
    for i, j in itertools.product(range(res), repeat=2):
        x = (F(2 * i + 1, 2 * res), F(2 * j + 1, 2 * res))
        regions.add(tuple(math.floor(f(x)) for f in forms))
    assert len(cx.cells) == len(regions)
    assert {c.shift for c in cx.cells} == regions


def test_dimension_guard():
    with pytest.raises(DimensionTooHigh):
        cut_unit_cube(4, [])
    with pytest.raises(VariableMismatch):
        cut_unit_cube(2, [LinearForm((1, 1, 1))])


def test_basic_integrals():
    assert integrate_over_complex(cut_unit_cube(2, []), one(2)) == 1
    x = MultiPoly.variable(1, 0)
    assert integrate_over_complex(cut_unit_cube(1, []), lambda c: x) == F(1, 2)
    tri = ((F(0), F(0)), (F(1), F(0)), (F(0), F(1)))
    xy = MultiPoly(2, {(1, 1): 1})
    assert integrate_simplex(xy, tri) == F(1, 24)


def test_integrand_variable_check():
    with pytest.raises(VariableMismatch):
        integrate_over_complex(cut_unit_cube(2, []), lambda c: MultiPoly.constant(3, 1))


forms_st = st.integers(1, 3).flatmap(
    lambda d: st.tuples(
        st.just(d),
        st.lists(
            st.builds(
                LinearForm,
                st.tuples(*[st.integers(-2, 2)] * d),
                st.fractions(min_value=0, max_value=1, max_denominator=6),
            ),
            max_size=2,
        ),
    )
)


@given(forms_st)
def test_volume_partition_and_floor_consistency(args):
    d, forms = args
    cx = cut_unit_cube(d, forms)
    assert cx.volume() == 1
    for cell in cx.cells:
        c = cell.centroid()
        assert tuple(math.floor(f(c)) for f in forms) == cell.shift


poly_st = st.dictionaries(
    st.tuples(st.integers(0, 2), st.integers(0, 2)), st.fractions(min_value=-5, max_value=5, max_denominator=4), max_size=4
).map(lambda t: MultiPoly(2, t))

form2_st = st.builds(LinearForm, st.tuples(st.integers(-2, 2), st.integers(-2, 2)), st.fractions(0, 1, max_denominator=5))


@given(st.lists(form2_st, max_size=2), form2_st, poly_st)
def test_refinement_additivity(forms, extra, poly):
    coarse = cut_unit_cube(2, forms)
    fine = cut_unit_cube(2, forms + [extra])
    assert integrate_over_complex(coarse, lambda c: poly) == integrate_over_complex(fine, lambda c: poly)


def _quad_oracle(forms, poly, weight):
    """Nested adaptive quadrature that splits at every cut line."""
    from scipy.integrate import quad

    def floors(x, y):
        return tuple(math.floor(f.coeffs[0] * x + f.coeffs[1] * y + float(f.offset)) for f in forms)

    def f(x, y):
        return sum(float(c) * x ** e[0] * y ** e[1] for e, c in poly.terms.items())

    def inner(x):
        cuts = {0.0, 1.0}
        for g in forms:
            a, b, c = g.coeffs[0], g.coeffs[1], float(g.offset)
            if b:
                lo, hi = sorted((a * x + c, a * x + b + c))
                for k in range(math.floor(lo), math.ceil(hi) + 1):
                    y = (k - a * x - c) / b
                    if 0 < y < 1:
                        cuts.add(y)
        ys = sorted(cuts)
        total = 0.0
        for y0, y1 in zip(ys, ys[1:]):
            if y1 - y0 < 1e-15:
                continue
            w = weight(floors(x, 0.5 * (y0 + y1)))
            total += w * quad(lambda y: f(x, y), y0, y1, epsabs=1e-13)[0]
        return total

    pts = set()
    for g in forms:
        a, b, c = g.coeffs[0], g.coeffs[1], float(g.offset)
        if a:
            for yb in (0, 1):
                lo, hi = sorted((b * yb + c, a + b * yb + c))
                for k in range(math.floor(lo), math.ceil(hi) + 1):
                    x = (k - b * yb - c) / a
                    if 0 < x < 1:
                        pts.add(x)
    for g, h in itertools.combinations(forms, 2):
        det = g.coeffs[0] * h.coeffs[1] - g.coeffs[1] * h.coeffs[0]
        if det:
            for k, l in itertools.product(range(-6, 7), repeat=2):
                x = ((k - float(g.offset)) * h.coeffs[1] - (l - float(h.offset)) * g.coeffs[1]) / det
                if 0 < x < 1:
                    pts.add(x)
    xs = sorted(pts | {0.0, 1.0})
    return sum(quad(inner, x0, x1, epsabs=1e-12, limit=200)[0] for x0, x1 in zip(xs, xs[1:]) if x1 - x0 > 1e-15)


@settings(max_examples=10)
@given(st.lists(form2_st, min_size=1, max_size=2), poly_st)
def test_against_adaptive_quadrature(forms, poly):
    weight = lambda shift: 1 + shift[0] + 2 * (shift[-1] if len(shift) > 1 else 0)
    cx = cut_unit_cube(2, forms)
    exact = integrate_over_complex(cx, lambda c: poly.scale(weight(c.shift)))
    approx = _quad_oracle(forms, poly, weight)
    assert abs(float(exact) - approx) < 1e-6


def test_affine_factor_integrand():
    # B_2(x) over [0,1] integrates to zero
    cx = cut_unit_cube(1, [])
    b2 = AffineFactor((F(1, 6), F(-1), F(1)), (F(1),), F(0))
    assert integrate_over_complex(cx, lambda c: [b2]) == 0
