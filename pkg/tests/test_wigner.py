import warnings
from fractions import Fraction as F

import pytest

from ncsurf.scalars import DEFAULT_PARAMS, ScalarExpr
from ncsurf.wigner import Spin, TriangleViolation, cgc, reduced_element, sixj, triangle

# (arguments, sign, square) from an independent symbolic implementation
CG_CASES = [
    ((1, 1, 2, 1, 0, 1), 1, F(1, 2)),
    ((1, 1, 0, 1, -1, 0), 1, F(1, 3)),
    ((F(1, 2), F(1, 2), 1, F(1, 2), F(-1, 2), 0), 1, F(1, 2)),
    ((F(3, 2), 1, F(5, 2), F(1, 2), 0, F(1, 2)), 1, F(3, 5)),
    ((2, 2, 2, 1, -1, 0), 1, F(1, 14)),
    ((3, 2, 4, -2, 1, -1), -1, F(7, 20)),
    ((F(5, 2), F(3, 2), 2, F(3, 2), F(-1, 2), 1), 1, F(1, 42)),
    ((5, 5, 5, 2, -3, -1), -1, F(5, 39)),
    ((F(7, 2), 3, F(3, 2), F(-5, 2), 1, F(-3, 2)), 1, F(5, 21)),
    ((10, 10, 10, 3, 4, 7), -1, F(11583, 785726)),
]

SIXJ_CASES = [
    ((1, 1, 1, 1, 1, 1), 1, F(1, 36)),
    ((2, 2, 2, 2, 2, 2), -1, F(9, 4900)),
    ((F(1, 2), F(1, 2), 1, F(1, 2), F(1, 2), 1), 1, F(1, 36)),
    ((2, F(5, 2), F(5, 2), 3, F(5, 2), F(5, 2)), -1, F(841, 176400)),
    ((3, 3, 3, 3, 3, 3), -1, F(1, 196)),
    ((F(5, 2), 2, F(5, 2), 1, F(5, 2), 2), 1, F(1, 175)),
    ((4, 3, 2, 1, 2, 3), -1, F(1, 2520)),
    ((6, 5, 4, 3, 4, 5), -1, F(21904, 52026975)),
]


def _check(value, sign, square):
    assert value.square() == square
    assert (value.coeff > 0) == (sign > 0)


@pytest.mark.parametrize("args,sign,square", CG_CASES)
def test_cgc_reference_values(args, sign, square):
    _check(cgc(*args), sign, square)


@pytest.mark.parametrize("args,sign,square", SIXJ_CASES)
def test_sixj_reference_values(args, sign, square):
    _check(sixj(*args), sign, square)


@pytest.mark.parametrize("j1,j2", [(1, 1), (F(3, 2), 1), (2, F(5, 2))])
def test_cgc_orthogonality(j1, j2):
    s1, s2 = Spin.of(j1), Spin.of(j2)
    js = [F(t, 2) for t in range(abs(s1.twice_value - s2.twice_value), s1.twice_value + s2.twice_value + 1, 2)]
    for j in js:
        for jp in js:
            for m in Spin.of(j).projections():
                if abs(m) > jp:
                    continue
                total = 0.0
                for m1 in s1.projections():
                    m2 = m - m1
                    if abs(m2) <= s2.value:
                        total += float(cgc(j1, j2, j, m1, m2, m)) * float(cgc(j1, j2, jp, m1, m2, m))
                assert abs(total - (1 if j == jp else 0)) < 1e-12


def test_sixj_symmetry_under_column_swap():
    for args in [(1, 2, 3, 2, 1, 2), (F(3, 2), 2, F(5, 2), 1, F(3, 2), 2)]:
        a, b, c, d, e, f = args
        assert sixj(a, b, c, d, e, f) == sixj(b, a, c, e, d, f) == sixj(a, c, b, d, f, e)


def test_selection_rules():
    assert cgc(1, 1, 3, 0, 0, 0) == 0
    assert cgc(1, 1, 2, 1, 1, 1) == 0
    assert sixj(1, 1, 3, 1, 1, 1) == 0
    assert triangle(1, 2, 3) and not triangle(1, 1, 3)
    with pytest.raises(ValueError):
        cgc(1, 1, 1, F(1, 2), 0, F(1, 2))


def test_reduced_element_warns_on_triangle_violation():
    one = ScalarExpr.const(1, DEFAULT_PARAMS)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        assert reduced_element(1, 1, 3, 2, (one, one, one)).is_zero()
    assert any(issubclass(w.category, TriangleViolation) for w in caught)
