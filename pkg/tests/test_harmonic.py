from fractions import Fraction

import pytest

from ncsurf.harmonic import (
    anticomm_check,
    beta,
    beta_hat,
    build_P,
    eigen_check,
    gram_check,
    inner,
    norm_check,
    norm_closed_form,
    norm_value,
    pi0,
    product_check,
    product_coefficients,
)
from ncsurf.ncalg import NCPoly, generator
from ncsurf.scalars import DEFAULT_PARAMS, ScalarExpr

P = DEFAULT_PARAMS
A = ScalarExpr.param("alpha", P)
E = ScalarExpr.param("eps", P)
R2 = ScalarExpr.param("R", P, 2)


def c(x):
    return ScalarExpr.const(x, P)


def test_low_basis_elements():
    assert build_P(1, 1).body == generator("+", P)
    assert build_P(1, -1).body == generator("-", P).scale(c(-1))
    assert build_P(1, 0).body == generator("0", P).scale(ScalarExpr.sqrt(2, P) * A * c(-1))
    with pytest.raises(ValueError):
        build_P(1, 2)


def test_norm_closed_form_values():
    assert norm_closed_form(1) == c(Fraction(2, 3)) * A * A * R2
    expected = c(Fraction(8, 15)) * A ** 4 * R2 * R2 - c(Fraction(2, 5)) * A ** 4 * E * E * R2
    assert norm_closed_form(2) == expected


def test_norm_value_at_spin_two():
    assert norm_value(1, 2) == c(2) * A * E


def test_trace_of_identity_and_x0_squared():
    one = NCPoly.one(P)
    assert pi0(one) == c(1)
    x0 = generator("0", P)
    # the average of (eps j)^2 over j = -k..k is eps^2 k(k+1)/3 = R^2/3
    assert inner(x0, x0) == c(Fraction(1, 3)) * R2


def test_product_coefficients_p11_p1m1():
    coeffs = product_coefficients(1, 1, 1, -1)
    assert coeffs[0] == c(Fraction(-2, 3)) * A * A * R2
    assert coeffs[1] == ScalarExpr.sqrt(2, P) * c(Fraction(1, 2)) * A * E
    assert coeffs[2] == ScalarExpr.sqrt(6, P) * c(Fraction(1, 6))


@pytest.mark.parametrize("n", range(4))
def test_eigen_norm_and_anticommutator(n):
    for m in range(-n, n + 1):
        reports = eigen_check(n, m) + [norm_check(n, m)]
        if n:
            reports += anticomm_check(n, m)
        assert all(r.passed for r in reports), [r.as_dict() for r in reports if not r.passed]


def test_gram_matrix_diagonal():
    assert gram_check(3).passed


def test_beta_values():
    assert beta(2) == ScalarExpr.sqrt(3, P) * c(Fraction(1, 3)) * A ** -1
    assert beta_hat(2) == ScalarExpr.sqrt(3, P) * A * (c(Fraction(4, 15)) * R2 - c(Fraction(1, 5)) * E * E)


def test_literal_anticommutator_coefficients_fail():
    reports = anticomm_check(2, 0, literal=True)
    assert [r.status for r in reports] == ["fail", "fail"]
    assert all(r.max_deviation > 0 for r in reports)


@pytest.mark.parametrize("n", range(1, 21))
def test_one_sheeted_hyperboloid_norms_positive(n):
    value = norm_closed_form(n).subs_square("alpha", -1).subs_square("R", -1).subs({"eps": 1}).constant_value()
    assert value.radicand == 1 and value.coeff > 0


@pytest.mark.parametrize("k", [2, Fraction(5, 2)])
@pytest.mark.parametrize("alpha", [1, 1j])
def test_product_law_samples(k, alpha):
    for args in [(1, 1, 1, -1), (2, 0, 1, 1), (2, -1, 2, 2)]:
        r = product_check(*args, k, alpha, 1)
        assert r.passed, r.details
