"""Harmonic basis of the sphere-family algebra and the identities it satisfies.

Everything here is exact and runs over the sphere-family profile
``rho(u) = alpha^2 (R^2 - u^2 + eps u)`` with formal ``alpha, eps, R``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .ncalg import (
    MINUS,
    PLUS,
    ZERO,
    NCPoly,
    commutator,
    dagger,
    generator,
    mul,
    padd,
    sphere_profile,
)
from .reports import CheckReport, exact_report
from .scalars import DEFAULT_PARAMS, ScalarExpr, SqrtRational
from .wigner import Spin, cgc, reduced_element

PARAMS = DEFAULT_PARAMS
PROFILE = sphere_profile(PARAMS)

_ALPHA = ScalarExpr.param("alpha", PARAMS)
_EPS = ScalarExpr.param("eps", PARAMS)
_R2 = ScalarExpr.param("R", PARAMS, 2)


class InternalInconsistency(ArithmeticError):
    """A self-check of the trace computation failed; indicates a reduction bug."""


class ZeroNorm(ArithmeticError):
    """A basis element has zero norm at the requested specialization."""


@dataclass(frozen=True)
class Harmonic:
    n: int
    m: int
    body: NCPoly = field(compare=False)


def _check_nm(n: int, m: int):
    if n < 0 or abs(m) > n:
        raise ValueError(f"need |m| <= n, got n={n}, m={m}")


def _ad(x: NCPoly, f: NCPoly) -> NCPoly:
    return commutator(x, f, PROFILE)


@lru_cache(maxsize=None)
def _ad_minus_chain(n: int, j: int) -> NCPoly:
    """ad(X-)^j applied to X+^n."""
    if j == 0:
        return NCPoly.monomial(n, 0, 0, 1, PARAMS)
    return _ad(generator(MINUS, PARAMS), _ad_minus_chain(n, j - 1))


@lru_cache(maxsize=None)
def build_P(n: int, m: int) -> Harmonic:
    """P^m_n = (alpha eps)^(m-n) sqrt((n+m)!/((2n)!(n-m)!)) ad(X-)^(n-m) X+^n."""
    _check_nm(n, m)
    root = SqrtRational.sqrt_of(Fraction(factorial(n + m), factorial(2 * n) * factorial(n - m)))
    pref = root.to_scalar(PARAMS) * ScalarExpr.param("alpha", PARAMS, m - n) * ScalarExpr.param("eps", PARAMS, m - n)
    body = _ad_minus_chain(n, n - m).scale(pref)
    for c in body.terms().values():
        rng = c.exponent_range("eps")
        if rng is not None and rng[0] < 0:
            raise InternalInconsistency(f"P^{m}_{n} kept a negative power of eps")
    return Harmonic(n, m, body)


# --------------------------------------------------------------------------
# the trace functional


def _poly_from_values(xs: list[int], ys: list[Fraction]) -> list[Fraction]:
    """Interpolating polynomial through (xs, ys), coefficients low first."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= xs[j] * basis[t + 1]
            denom *= xs[i] - xs[j]
        for t, b in enumerate(basis):
            coeffs[t] += ys[i] * b / denom
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _divide(num: list[Fraction], den: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    num = list(num)
    q = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
    while len(num) >= len(den) and any(num):
        shift = len(num) - len(den)
        c = num[-1] / den[-1]
        q[shift] = c
        for i, d in enumerate(den):
            num[shift + i] -= c * d
        num.pop()
        while num and num[-1] == 0:
            num.pop()
    return q, num


@lru_cache(maxsize=None)
def trace_moment(p: int) -> tuple[Fraction, ...]:
    """Coefficients q_d with (1/(2k+1)) sum_{j=-k..k} j^p = sum_d q_d w^d, w = k(k+1)."""
    if p % 2:
        return ()
    ks = list(range(p + 3))
    sums = [Fraction(sum(j ** p for j in range(-k, k + 1))) for k in ks]
    s_k = _poly_from_values(ks, sums)
    quot, rem = _divide(s_k, [Fraction(1), Fraction(2)])
    if rem:
        raise InternalInconsistency(f"power sum of degree {p} is not divisible by 2k+1")
    # rewrite in w = k^2 + k, peeling the top power each round
    w = [Fraction(0), Fraction(1), Fraction(1)]
    out = []
    rest = quot
    while rest and any(rest):
        q, r = _divide(rest, w)
        if len(r) > 1:
            raise InternalInconsistency("trace quotient is not a polynomial in k(k+1)")
        out.append(r[0] if r else Fraction(0))
        rest = q
    return tuple(out)


def _x0_power_trace(p: int) -> ScalarExpr:
    val = ScalarExpr.zero(PARAMS)
    for d, q in enumerate(trace_moment(p)):
        if q:
            val = val + ScalarExpr.param("eps", PARAMS, p - 2 * d) * ScalarExpr.param("R", PARAMS, 2 * d) * q
    return val


def pi0(f: NCPoly) -> ScalarExpr:
    """Normalized trace: the spin-k trace of the X0-diagonal part with R^2 = eps^2 k(k+1)."""
    val = ScalarExpr.zero(PARAMS)
    for p, c in enumerate(f.diagonal()):
        if not c.is_zero():
            val = val + c * _x0_power_trace(p)
    return val


def _diagonal_product(f: NCPoly, g: NCPoly) -> NCPoly:
    # only the shift-zero part of f*g matters for the trace
    f_terms = {s: NCPoly(PARAMS, {s: p}) for s, p in f.graded.items()}
    out: tuple = ()
    for t, q in g.graded.items():
        if -t in f_terms:
            out = padd(out, mul(f_terms[-t], NCPoly(PARAMS, {t: q}), PROFILE).diagonal())
    return NCPoly(PARAMS, {0: out})


def inner(f: NCPoly, g: NCPoly) -> ScalarExpr:
    """<f, g> = pi0(f^dagger g)."""
    return pi0(_diagonal_product(dagger(f, PROFILE), g))


# --------------------------------------------------------------------------
# norms


def norm_closed_form(n: int) -> ScalarExpr:
    """alpha^(2n) (n!)^2/(2n+1)! prod_{r=1..n} (4R^2 + eps^2 (1 - r^2))."""
    val = ScalarExpr.param("alpha", PARAMS, 2 * n) * Fraction(factorial(n) ** 2, factorial(2 * n + 1))
    for r in range(1, n + 1):
        val = val * (_R2 * 4 + ScalarExpr.param("eps", PARAMS, 2) * (1 - r * r))
    return val


def norm_value(n: int, k) -> ScalarExpr:
    """|P_n| = alpha^n (alpha^(-2n) |P_n|^2)^(1/2) at R^2 = eps^2 k(k+1).

    The square root is taken of the positive rational part, so the result is
    the single term ``sqrt(q) alpha^n eps^n``.  Raises :class:`ZeroNorm` for
    ``n > 2k``.
    """
    K = Spin.of(k).twice_value
    q = Fraction(factorial(n) ** 2, factorial(2 * n + 1))
    for r in range(1, n + 1):
        q *= (K + 1) ** 2 - r * r
    if q == 0:
        raise ZeroNorm(f"|P_{n}| vanishes at k = {Fraction(K, 2)}")
    return SqrtRational.sqrt_of(q).to_scalar(PARAMS) * ScalarExpr.param("alpha", PARAMS, n) * ScalarExpr.param("eps", PARAMS, n)


def norm_check(n: int, m: int) -> CheckReport:
    _check_nm(n, m)
    p = build_P(n, m).body
    return exact_report("norm", {"n": n, "m": m}, inner(p, p), norm_closed_form(n))


def gram_matrix(nmax: int) -> dict:
    """All inner products <P^m_n, P^m'_n'> for n, n' <= nmax."""
    basis = [(n, m) for n in range(nmax + 1) for m in range(-n, n + 1)]
    return {(a, b): inner(build_P(*a).body, build_P(*b).body) for a in basis for b in basis}


def gram_check(nmax: int) -> CheckReport:
    off = [key for key, v in gram_matrix(nmax).items() if key[0] != key[1] and not v.is_zero()]
    return CheckReport(
        check="gram-diagonal",
        params={"nmax": nmax},
        status="pass" if not off else "fail",
        max_deviation=0.0 if not off else float(len(off)),
        details="" if not off else f"nonzero off-diagonal entries: {off[:5]}",
    )


# --------------------------------------------------------------------------
# eigen-equations and ladder action


def laplacian(f: NCPoly) -> NCPoly:
    """ad(X0)^2 + (ad(X+)ad(X-) + ad(X-)ad(X+)) / (2 alpha^2)."""
    x0, xp, xm = (generator(g, PARAMS) for g in (ZERO, PLUS, MINUS))
    a0 = _ad(x0, _ad(x0, f))
    mixed = _ad(xp, _ad(xm, f)) + _ad(xm, _ad(xp, f))
    return a0 + mixed.scale(ScalarExpr.param("alpha", PARAMS, -2) * Fraction(1, 2))


def eigen_check(n: int, m: int) -> list[CheckReport]:
    _check_nm(n, m)
    p = build_P(n, m).body
    params = {"n": n, "m": m}
    eps = _EPS
    reports = [
        exact_report("ad-X0", params, _ad(generator(ZERO, PARAMS), p), p.scale(eps * m)),
        exact_report("laplacian", params, laplacian(p), p.scale(eps * eps * (n * (n + 1)))),
    ]
    up = _ad(generator(PLUS, PARAMS), p)
    up_rhs = NCPoly.zero(PARAMS)
    if m < n:
        c = SqrtRational.sqrt_of((n - m) * (n + m + 1)).to_scalar(PARAMS) * _ALPHA * eps
        up_rhs = build_P(n, m + 1).body.scale(c)
    reports.append(exact_report("ladder-up", params, up, up_rhs))
    down = _ad(generator(MINUS, PARAMS), p)
    down_rhs = NCPoly.zero(PARAMS)
    if m > -n:
        c = SqrtRational.sqrt_of((n + m) * (n - m + 1)).to_scalar(PARAMS) * _ALPHA * eps
        down_rhs = build_P(n, m - 1).body.scale(c)
    reports.append(exact_report("ladder-down", params, down, down_rhs))
    return reports


# --------------------------------------------------------------------------
# anticommutator with X0


def beta(n: int, literal: bool = False) -> ScalarExpr:
    """Coefficient of the raising term in X0 P + P X0.

    The default value makes the identity hold; ``literal=True`` returns the
    smaller coefficient ``1/(2 alpha sqrt(2n) sqrt(2n-1))`` that appears in
    the literature, kept for comparison.
    """
    root = SqrtRational.sqrt_of(Fraction(1, 2 * n * (2 * n - 1))).to_scalar(PARAMS)
    scale = Fraction(1, 2) if literal else 2
    return root * ScalarExpr.param("alpha", PARAMS, -1) * scale


def beta_hat(n: int, literal: bool = False) -> ScalarExpr:
    """Coefficient of the lowering term in X0 P + P X0 (see :func:`beta`)."""
    root = SqrtRational.sqrt_of(Fraction(1, 2 * n * (2 * n - 1))).to_scalar(PARAMS)
    bracket = _R2 * 4 + ScalarExpr.param("eps", PARAMS, 2) * (1 - n * n)
    scale = Fraction(1, 4 * (2 * n + 1)) if literal else Fraction(n, 2 * n + 1)
    return root * _ALPHA * bracket * scale


def anticomm_check(n: int, m: int, literal: bool = False) -> list[CheckReport]:
    """X0 P + P X0 = -b_{n+1} sqrt((n+1)^2-m^2) P_{n+1} - bh_n sqrt(n^2-m^2) P_{n-1},
    plus the companion norm identity |P_n|^2 b_n = |P_{n-1}|^2 bh_n."""
    if n < 1:
        raise ValueError("the anticommutator identity needs n >= 1")
    _check_nm(n, m)
    x0 = generator(ZERO, PARAMS)
    p = build_P(n, m).body
    lhs = mul(x0, p, PROFILE) + mul(p, x0, PROFILE)
    rhs = build_P(n + 1, m).body.scale(
        -beta(n + 1, literal) * SqrtRational.sqrt_of((n + 1) ** 2 - m * m).to_scalar(PARAMS)
    )
    if abs(m) < n:
        rhs = rhs - build_P(n - 1, m).body.scale(
            beta_hat(n, literal) * SqrtRational.sqrt_of(n * n - m * m).to_scalar(PARAMS)
        )
    params = {"n": n, "m": m, "literal": literal}
    return [
        exact_report("anticommutator", params, lhs, rhs),
        exact_report(
            "norm-beta",
            params,
            norm_closed_form(n) * beta(n, literal),
            norm_closed_form(n - 1) * beta_hat(n, literal),
        ),
    ]


# --------------------------------------------------------------------------
# product law


def _leading(h: Harmonic) -> tuple[int, ScalarExpr]:
    poly = h.body.graded[h.m]
    return len(poly) - 1, poly[-1]


def product_coefficients(n1: int, m1: int, n2: int, m2: int) -> dict[int, ScalarExpr]:
    """Formal coefficients c_n with P^m1_n1 P^m2_n2 = sum_n c_n P^(m1+m2)_n.

    Each P^m_n sits in a single shift with X0-degree n - |m|, so the expansion
    is found by peeling the top X0 power.
    """
    _check_nm(n1, m1)
    _check_nm(n2, m2)
    m = m1 + m2
    rest = mul(build_P(n1, m1).body, build_P(n2, m2).body, PROFILE)
    out: dict[int, ScalarExpr] = {}
    while not rest.is_zero():
        if set(rest.graded) != {m}:
            raise InternalInconsistency("product left the weight space of m1+m2")
        poly = rest.graded[m]
        n = len(poly) - 1 + abs(m)
        if n > n1 + n2:
            raise InternalInconsistency("product exceeded the expected harmonic degree")
        h = build_P(n, m)
        _, lead = _leading(h)
        c = poly[-1] / lead
        out[n] = c
        rest = rest - h.body.scale(c)
    return dict(sorted(out.items()))


@dataclass
class ProductTerm:
    n: int
    coefficient: ScalarExpr
    gram_consistent: bool
    specialized: ScalarExpr | None = None
    predicted: ScalarExpr | None = None
    note: str = ""

    @property
    def agrees(self) -> bool | None:
        if self.predicted is None:
            return None
        return self.specialized == self.predicted


def _specialize(x: ScalarExpr, k, alpha, eps) -> ScalarExpr:
    K = Spin.of(k).twice_value
    w = Fraction(K * (K + 2), 4)
    y = x.subs_square("R", ScalarExpr.param("eps", PARAMS, 2) * w)
    return y.subs({"alpha": alpha, "eps": eps})


def product_expand(n1: int, m1: int, n2: int, m2: int, k=None, alpha=1, eps=1) -> list[ProductTerm]:
    """Expansion of P^m1_n1 P^m2_n2 in the harmonic basis.

    Coefficients come from :func:`product_coefficients` and are cross-checked
    against Gram projection: <P_n, product> == c_n |P_n|^2 formally.  With a
    spin ``k`` they are also specialized to R^2 = eps^2 k(k+1) and compared
    with the Clebsch-Gordan times 6j prediction; terms with n > 2k have zero
    norm there and carry no prediction.
    """
    m = m1 + m2
    prod = mul(build_P(n1, m1).body, build_P(n2, m2).body, PROFILE)
    coeffs = product_coefficients(n1, m1, n2, m2)
    terms = []
    for n in range(max(abs(n1 - n2), abs(m)), n1 + n2 + 1):
        c = coeffs.get(n, ScalarExpr.zero(PARAMS))
        gram = inner(build_P(n, m).body, prod) == c * norm_closed_form(n)
        term = ProductTerm(n, c, gram)
        if k is not None:
            term.specialized = _specialize(c, k, alpha, eps)
            K = Spin.of(k).twice_value
            if n > K:
                term.note = "zero norm at this spin; no prediction"
            else:
                norms = tuple(_specialize(norm_value(j, k), k, alpha, eps) for j in (n1, n2, n))
                cg = cgc(n1, n2, n, m1, m2, m).to_scalar(PARAMS)
                term.predicted = cg * reduced_element(n1, n2, n, k, norms)
        terms.append(term)
    return terms


def product_check(n1: int, m1: int, n2: int, m2: int, k, alpha=1, eps=1) -> CheckReport:
    terms = product_expand(n1, m1, n2, m2, k, alpha, eps)
    worst = 0.0
    failures = []
    for t in terms:
        if not t.gram_consistent:
            failures.append(f"n={t.n}: Gram projection disagrees")
            worst = max(worst, 1.0)
        if t.predicted is not None and not t.agrees:
            dev = abs(t.specialized.eval({}) - t.predicted.eval({}))
            worst = max(worst, dev)
            failures.append(f"n={t.n}: {t.specialized} vs {t.predicted}")
    return CheckReport(
        check="product-law",
        params={"n1": n1, "m1": m1, "n2": n2, "m2": m2, "k": str(Spin.of(k)), "alpha": str(alpha), "eps": str(eps)},
        status="fail" if failures else "pass",
        max_deviation=worst,
        details="; ".join(failures),
    )


def harmonic_suite(nmax: int) -> list[CheckReport]:
    out: list[CheckReport] = []
    for n in range(nmax + 1):
        for m in range(-n, n + 1):
            out.extend(eigen_check(n, m))
            out.append(norm_check(n, m))
            if n >= 1:
                out.extend(anticomm_check(n, m))
    out.append(gram_check(nmax))
    return out
