"""Exact Clebsch-Gordan and 6j coefficients (Condon-Shortley phase).

Spins and projections are handled as doubled integers so half-integers stay
exact.  Square-root prefactors are assembled from prime exponent vectors
(Legendre's formula for factorials), so no large integer is ever factored.
"""
from __future__ import annotations

import warnings
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .scalars import ScalarExpr, SqrtRational


class TriangleViolation(UserWarning):
    """A coupling was requested for spins that fail the triangle rule."""


@dataclass(frozen=True, order=True)
class Spin:
    """A spin value stored as ``2j``."""

    twice_value: int

    def __post_init__(self):
        if not isinstance(self.twice_value, int) or self.twice_value < 0:
            raise ValueError(f"2j must be a nonnegative integer, got {self.twice_value!r}")

    @classmethod
    def of(cls, value) -> "Spin":
        if isinstance(value, Spin):
            return value
        return cls(_doubled(value))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice_value, 2)

    @property
    def dim(self) -> int:
        return self.twice_value + 1

    def projections(self) -> list[Fraction]:
        return [Fraction(t, 2) for t in range(-self.twice_value, self.twice_value + 1, 2)]

    def __str__(self):
        return str(self.value)


def _doubled(x) -> int:
    if isinstance(x, Spin):
        return x.twice_value
    if isinstance(x, str):
        x = Fraction(x)
    d = Fraction(x) * 2
    if d.denominator != 1:
        raise ValueError(f"{x!r} is not an integer or half-integer")
    return int(d)


# --------------------------------------------------------------------------
# prime exponent bookkeeping


@lru_cache(maxsize=None)
def _primes_upto(n: int) -> tuple[int, ...]:
    if n < 2:
        return ()
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytearray(len(sieve[p * p::p]))
    return tuple(i for i, v in enumerate(sieve) if v)


@lru_cache(maxsize=None)
def _factorial_exponents(n: int) -> tuple[tuple[int, int], ...]:
    out = []
    for p in _primes_upto(n):
        e, q = 0, p
        while q <= n:
            e += n // q
            q *= p
        out.append((p, e))
    return tuple(out)


def _int_exponents(n: int) -> Counter:
    out: Counter = Counter()
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] += 1
            n //= p
        p += 1
    if n > 1:
        out[n] += 1
    return out


def _sqrt_from_exponents(exps: Counter) -> SqrtRational:
    """sqrt(prod p^e) for integer (possibly negative) exponents."""
    num, den, core = 1, 1, 1
    for p, e in exps.items():
        if e == 0:
            continue
        if e % 2:
            core *= p
            e -= 1  # floor towards -inf keeps e even; p^(e) * p under the root
        half = e // 2
        if half > 0:
            num *= p ** half
        elif half < 0:
            den *= p ** (-half)
    return SqrtRational._raw(Fraction(num, den), core)


def _add_factorial(exps: Counter, n: int, sign: int):
    for p, e in _factorial_exponents(n):
        exps[p] += sign * e


# --------------------------------------------------------------------------
# coefficients


def triangle(a, b, c) -> bool:
    """|a - b| <= c <= a + b with a + b + c integral."""
    a2, b2, c2 = _doubled(a), _doubled(b), _doubled(c)
    return abs(a2 - b2) <= c2 <= a2 + b2 and (a2 + b2 + c2) % 2 == 0


def _check_projection(j2: int, m2: int, label: str):
    if abs(m2) > j2 or (j2 - m2) % 2:
        raise ValueError(f"projection {Fraction(m2, 2)} is not admissible for {label} = {Fraction(j2, 2)}")


def cgc(j1, j2, j, m1, m2, m) -> SqrtRational:
    """<j1 m1; j2 m2 | j m> exactly."""
    J1, J2, J, M1, M2, M = (_doubled(x) for x in (j1, j2, j, m1, m2, m))
    for jj, mm, name in ((J1, M1, "j1"), (J2, M2, "j2"), (J, M, "j")):
        _check_projection(jj, mm, name)
    return _cgc2(J1, J2, J, M1, M2, M)


@lru_cache(maxsize=65536)
def _cgc2(J1: int, J2: int, J: int, M1: int, M2: int, M: int) -> SqrtRational:
    zero = SqrtRational._raw(Fraction(0), 1)
    if M != M1 + M2 or not (abs(J1 - J2) <= J <= J1 + J2) or (J1 + J2 + J) % 2:
        return zero
    # integers a..: all the factorial arguments below, in ordinary units
    s1 = (J1 + J2 - J) // 2
    s2 = (J1 - J2 + J) // 2
    s3 = (-J1 + J2 + J) // 2
    s4 = (J1 + J2 + J) // 2 + 1
    exps: Counter = Counter()
    for n in (s1, s2, s3):
        _add_factorial(exps, n, 1)
    _add_factorial(exps, s4, -1)
    for p, e in _int_exponents(J + 1).items():
        exps[p] += e
    for n in ((J + M) // 2, (J - M) // 2, (J1 - M1) // 2, (J1 + M1) // 2, (J2 - M2) // 2, (J2 + M2) // 2):
        _add_factorial(exps, n, 1)
    total = Fraction(0)
    a = s1
    b = (J1 - M1) // 2
    c = (J2 + M2) // 2
    d = (J - J2 + M1) // 2
    e = (J - J1 - M2) // 2
    for k in range(max(0, -d, -e), min(a, b, c) + 1):
        den = factorial(k) * factorial(a - k) * factorial(b - k) * factorial(c - k) * factorial(d + k) * factorial(e + k)
        total += Fraction((-1) ** k, den)
    return _sqrt_from_exponents(exps) * total


def _delta_exps(exps: Counter, a: int, b: int, c: int):
    # doubled arguments; contributes (a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)!
    _add_factorial(exps, (a + b - c) // 2, 1)
    _add_factorial(exps, (a - b + c) // 2, 1)
    _add_factorial(exps, (-a + b + c) // 2, 1)
    _add_factorial(exps, (a + b + c) // 2 + 1, -1)


def _triad(a: int, b: int, c: int) -> bool:
    return abs(a - b) <= c <= a + b and (a + b + c) % 2 == 0


def sixj(a, b, c, d, e, f) -> SqrtRational:
    """Wigner 6j symbol {a b c; d e f} exactly (Racah single sum)."""
    return _sixj2(*(_doubled(x) for x in (a, b, c, d, e, f)))


@lru_cache(maxsize=65536)
def _sixj2(a: int, b: int, c: int, d: int, e: int, f: int) -> SqrtRational:
    zero = SqrtRational._raw(Fraction(0), 1)
    triads = ((a, b, c), (a, e, f), (d, b, f), (d, e, c))
    if not all(_triad(*t) for t in triads):
        return zero
    exps: Counter = Counter()
    for t in triads:
        _delta_exps(exps, *t)
    sums = [sum(t) // 2 for t in triads]
    pairs = [(a + b + d + e) // 2, (a + c + d + f) // 2, (b + c + e + f) // 2]
    total = Fraction(0)
    for t in range(max(sums), min(pairs) + 1):
        den = 1
        for s in sums:
            den *= factorial(t - s)
        for p in pairs:
            den *= factorial(p - t)
        total += Fraction((-1) ** t * factorial(t + 1), den)
    return _sqrt_from_exponents(exps) * total


def reduced_element(n1: int, n2: int, n: int, k, norms) -> ScalarExpr:
    """Coefficient B(n1, n2, n) in the coupling law of the harmonic basis.

    ``norms`` is ``(|P_n1|, |P_n2|, |P_n|)`` as single-term ScalarExprs (any
    projection, the norm does not depend on it).  The result is

        (-1)^(2k+n1+n2) |P_n1||P_n2|/|P_n| sqrt((2k+1)(2n1+1)(2n2+1)) {k n1 k; n2 k n}.

    A triangle violation returns zero and emits :class:`TriangleViolation`.
    """
    norm1, norm2, norm = norms
    params = norm.params
    if not triangle(n1, n2, n):
        warnings.warn(f"({n1}, {n2}, {n}) is not a triangle", TriangleViolation, stacklevel=2)
        return ScalarExpr.zero(params)
    K = _doubled(k)
    six = sixj(Fraction(K, 2), n1, Fraction(K, 2), n2, Fraction(K, 2), n)
    root = SqrtRational.sqrt_of((K + 1) * (2 * n1 + 1) * (2 * n2 + 1))
    sign = -1 if (K + n1 + n2) % 2 else 1
    value = (six * root * sign).to_scalar(params)
    return value * norm1 * norm2 / norm
