from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncsurf.scalars import DEFAULT_PARAMS, ParameterMismatch, ScalarExpr, SqrtRational, squarefree_split

P = DEFAULT_PARAMS
ALPHA = ScalarExpr.param("alpha", P)
EPS = ScalarExpr.param("eps", P)
R = ScalarExpr.param("R", P)


@st.composite
def scalars(draw):
    """Small random ScalarExprs with radicals, complex parts and negative powers."""
    out = ScalarExpr.zero(P)
    for _ in range(draw(st.integers(0, 3))):
        re = Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 4)))
        im = Fraction(draw(st.integers(-2, 2)), draw(st.integers(1, 3)))
        rad = draw(st.sampled_from([1, 2, 3, 6]))
        term = ScalarExpr.const((re, im), P, radicand=rad)
        for name in ("alpha", "eps", "R"):
            term = term * ScalarExpr.param(name, P, draw(st.integers(-1, 2)))
        out = out + term
    return out


@given(scalars(), scalars(), scalars())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert (a - a).is_zero()


@given(scalars())
def test_eval_is_a_homomorphism(a):
    at = {"alpha": 1.3, "eps": 0.7, "R": 1.9, "kappa": 0.5, "lam": 0.2}
    b = a * a + a
    assert abs(b.eval(at) - (a.eval(at) ** 2 + a.eval(at))) <= 1e-9 * (1 + abs(b.eval(at)))


@pytest.mark.parametrize("n,expected", [(1, (1, 1)), (12, (2, 3)), (72, (6, 2)), (49, (7, 1)), (30, (1, 30))])
def test_squarefree_split(n, expected):
    assert squarefree_split(n) == expected


def test_squarefree_split_large_prime_square():
    p = 1_000_003  # prime above the trial-division bound
    assert squarefree_split(5 * p * p) == (p, 5)


def test_sqrt_rational_normal_form():
    assert SqrtRational.sqrt_of(Fraction(8, 3)) == SqrtRational.sqrt_of(Fraction(8, 3))
    r = SqrtRational.sqrt_of(Fraction(8, 3))
    assert r.radicand == 6 and r.coeff == Fraction(2, 3)
    assert r.square() == Fraction(8, 3)
    assert (r * r) == Fraction(8, 3)


def test_radicals_combine_exactly():
    s2 = ScalarExpr.sqrt(2, P)
    s3 = ScalarExpr.sqrt(3, P)
    assert s2 * s2 == ScalarExpr.const(2, P)
    assert s2 * s3 == ScalarExpr.sqrt(6, P)
    assert (s2 + s3) * (s2 - s3) == ScalarExpr.const(-1, P)


def test_inverse_stays_exact():
    x = ScalarExpr.const(2, P) * ALPHA
    inv = x.inverse()
    assert x * inv == ScalarExpr.const(1, P)
    for re, im in inv.terms.values():
        assert isinstance(re, (int, Fraction)) and isinstance(im, (int, Fraction))
    with pytest.raises(ZeroDivisionError):
        (ALPHA + EPS).inverse()


def test_subs_and_subs_square():
    x = ALPHA * ALPHA * R * R - EPS
    assert x.subs({"alpha": 2}).subs_square("R", Fraction(1, 4)) == ScalarExpr.const(1, P) - EPS
    with pytest.raises(ValueError):
        R.subs_square("R", 4)


def test_complex_conjugate():
    z = ScalarExpr.const((1, 2), P) * ALPHA
    assert z.conj() == ScalarExpr.const((1, -2), P) * ALPHA
    assert (z * z.conj()).is_real()


def test_mismatched_parameters_raise():
    other = ScalarExpr.param("x", ("x",))
    with pytest.raises(ParameterMismatch):
        ALPHA + other
