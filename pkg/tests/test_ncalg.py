import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncsurf.ncalg import (
    GENERATORS,
    MINUS,
    PLUS,
    ZERO,
    NCPoly,
    NotClassicallyRegular,
    SurfaceProfile,
    UnsupportedProfile,
    casimir_residual,
    classical_limit,
    commutator,
    dagger,
    defining_relations,
    generator,
    mul,
    paraboloid_profile,
    poisson,
    poisson_residuals,
    random_profile,
    reduce_word,
    relation_suite,
    rewrite_word,
    sphere_profile,
)
from ncsurf.scalars import DEFAULT_PARAMS, ScalarExpr

P = DEFAULT_PARAMS
SPHERE = sphere_profile()
PARABOLOID = paraboloid_profile()
ALPHA2 = ScalarExpr.param("alpha", P, 2)
EPS = ScalarExpr.param("eps", P)
R2 = ScalarExpr.param("R", P, 2)
XP, X0, XM = (generator(g, P) for g in (PLUS, ZERO, MINUS))

words = st.lists(st.sampled_from(GENERATORS), max_size=6).map(tuple)


@st.composite
def elements(draw, profile=SPHERE):
    out = NCPoly.zero(P)
    for _ in range(draw(st.integers(1, 3))):
        c = Fraction(draw(st.integers(-3, 3)), draw(st.integers(1, 2)))
        out = out + reduce_word(draw(words), profile).scale(ScalarExpr.const(c, P) if c else ScalarExpr.zero(P))
    return out


def test_sphere_relations_in_normal_form():
    assert mul(XP, XM, SPHERE) == NCPoly.x0_poly((ALPHA2 * R2, ALPHA2 * EPS, -ALPHA2))
    # X-X+ = rho(X0 + eps) = alpha^2 (R^2 - X0^2 - eps X0)
    assert mul(XM, XP, SPHERE) == NCPoly.x0_poly((ALPHA2 * R2, -ALPHA2 * EPS, -ALPHA2))
    assert commutator(X0, XP, SPHERE) == XP.scale(EPS)
    assert commutator(X0, XM, SPHERE) == XM.scale(-EPS)


def test_paraboloid_commutator_is_minus_eps():
    assert commutator(XP, XM, PARABOLOID) == NCPoly.scalar(-EPS, P)


def test_sphere_commutator_is_linear_in_x0():
    # rho(X0) - rho(X0 + eps) = alpha^2 (2 eps X0)
    assert commutator(XP, XM, SPHERE) == NCPoly.x0_poly((ScalarExpr.zero(P), 2 * ALPHA2 * EPS))


@given(words)
def test_rewriting_oracle_agrees(w):
    rng = random.Random(len(w))
    for s in (SPHERE, PARABOLOID):
        assert rewrite_word(w, s, rng) == reduce_word(w, s)


@given(elements(), elements(), elements())
def test_ring_axioms(f, g, h):
    assert mul(mul(f, g, SPHERE), h, SPHERE) == mul(f, mul(g, h, SPHERE), SPHERE)
    assert mul(f, g + h, SPHERE) == mul(f, g, SPHERE) + mul(f, h, SPHERE)
    assert mul(f + g, h, SPHERE) == mul(f, h, SPHERE) + mul(g, h, SPHERE)
    assert mul(NCPoly.one(P), f, SPHERE) == f == mul(f, NCPoly.one(P), SPHERE)


@given(elements(), elements())
def test_dagger_reverses_products(f, g):
    lhs = dagger(mul(f, g, SPHERE), SPHERE)
    assert lhs == mul(dagger(g, SPHERE), dagger(f, SPHERE), SPHERE)
    assert dagger(dagger(f, SPHERE), SPHERE) == f


def test_relation_suite_small(rng):
    for s in (SPHERE, PARABOLOID, random_profile(rng)):
        assert relation_suite(s, 40, 6, rng)["failures"] == []


class _MisstatedProfile(SurfaceProfile):
    """Claims X-X+ = rho(X0) instead of rho(X0 + eps)."""

    def shifted(self, r):
        return super().shifted(0)


def test_relation_suite_catches_a_wrong_relation(rng):
    s = _MisstatedProfile(kind="polynomial", epsilon=EPS, poly_coeffs=SPHERE.poly_coeffs, name="broken")
    failures = relation_suite(s, 10, 4, rng)["failures"]
    assert any("rho(X0+eps)" in f for f in failures)


def test_casimir_exact():
    assert casimir_residual().is_zero()


def test_poisson_limits():
    for s in (SPHERE, PARABOLOID):
        assert all(r.is_zero() for r in poisson_residuals(s).values())
    assert poisson(X0, X0, SPHERE).is_zero()


def test_classical_limit_rejects_negative_eps_powers():
    bad = XP.scale(ScalarExpr.param("eps", P, -1))
    with pytest.raises(NotClassicallyRegular):
        classical_limit(bad)


def test_numeric_profiles_refuse_symbolic_work():
    s = SurfaceProfile(kind="numeric", epsilon=0.5, numeric_fn=lambda u: 1 - u * u, name="disc")
    with pytest.raises(UnsupportedProfile):
        mul(XP, XM, s)


def test_unknown_generator():
    with pytest.raises(ValueError):
        reduce_word("+x", SPHERE)
