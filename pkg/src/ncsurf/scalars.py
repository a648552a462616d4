"""Exact scalars: Gaussian rationals times integer square roots times Laurent
monomials in formal, self-adjoint parameters.

A :class:`ScalarExpr` is a finite sum of terms ``c * sqrt(s) * p1**e1 * ...``
with ``c`` a Gaussian rational, ``s`` a squarefree positive integer and integer
(possibly negative) exponents.  Distinct squarefree radicals are linearly
independent over Q(i), so syntactic equality of the canonical term map is
mathematical equality.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from numbers import Rational
from typing import Iterable, Mapping

DEFAULT_PARAMS = ("alpha", "eps", "R")
_ZERO = Fraction(0)
_TRIAL_LIMIT = 1 << 20

_PRETTY = {"alpha": "α", "eps": "ε", "R": "R", "kappa": "κ", "lam": "λ"}


class ParameterMismatch(ValueError):
    """Operands were declared over different parameter sets."""


# --------------------------------------------------------------------------
# integer helpers


def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(outer, core)`` with ``n == outer**2 * core`` and ``core`` squarefree.

    Trial division runs up to ``_TRIAL_LIMIT``; a larger cofactor is accepted
    as squarefree unless it is a perfect square.  Every radicand produced in
    this package factors over small primes, so the cutoff is never reached in
    practice.
    """
    if n <= 0:
        raise ValueError("squarefree_split needs a positive integer")
    outer, core = 1, 1
    p = 2
    while p * p <= n and p <= _TRIAL_LIMIT:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            outer *= p ** (e // 2)
            if e % 2:
                core *= p
        p += 1 if p == 2 else 2
    r = isqrt(n)
    if r * r == n:
        outer *= r
    else:
        core *= n
    return outer, core


def _combine_radicands(s: int, t: int) -> tuple[int, int]:
    # sqrt(s) * sqrt(t) for squarefree s, t -> g * sqrt(s*t/g^2)
    if s == 1:
        return 1, t
    if t == 1:
        return 1, s
    g = gcd(s, t)
    return g, (s // g) * (t // g)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


# --------------------------------------------------------------------------
# SqrtRational


class SqrtRational:
    """``coeff * sqrt(radicand)`` with rational ``coeff`` and squarefree ``radicand``."""

    __slots__ = ("coeff", "radicand")

    def __init__(self, coeff=0, radicand: int = 1):
        coeff = _frac(coeff)
        if radicand <= 0:
            raise ValueError("radicand must be positive")
        outer, core = squarefree_split(radicand) if radicand > 1 else (1, 1)
        coeff *= outer
        if coeff == 0:
            core = 1
        self.coeff = coeff
        self.radicand = core

    @classmethod
    def _raw(cls, coeff: Fraction, radicand: int) -> "SqrtRational":
        obj = cls.__new__(cls)
        obj.coeff = Fraction(coeff)
        obj.radicand = 1 if coeff == 0 else radicand
        return obj

    @classmethod
    def sqrt_of(cls, q, sign: int = 1) -> "SqrtRational":
        """``sign * sqrt(q)`` for a nonnegative rational ``q``."""
        q = _frac(q)
        if q < 0:
            raise ValueError("square root of a negative rational")
        if q == 0:
            return cls._raw(Fraction(0), 1)
        num, den = q.numerator, q.denominator
        outer, core = squarefree_split(num * den)
        return cls._raw(Fraction(sign * outer, den), core)

    def square(self) -> Fraction:
        return self.coeff * self.coeff * self.radicand

    def __mul__(self, other):
        if isinstance(other, SqrtRational):
            g, core = _combine_radicands(self.radicand, other.radicand)
            return SqrtRational._raw(self.coeff * other.coeff * g, core)
        if isinstance(other, (int, Fraction)):
            return SqrtRational._raw(self.coeff * other, self.radicand)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return SqrtRational._raw(-self.coeff, self.radicand)

    def __truediv__(self, other):
        if isinstance(other, SqrtRational):
            if other.coeff == 0:
                raise ZeroDivisionError("division by zero SqrtRational")
            inv = SqrtRational._raw(1 / (other.coeff * other.radicand), other.radicand)
            return self * inv
        if isinstance(other, (int, Fraction)):
            return SqrtRational._raw(self.coeff / other, self.radicand)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, SqrtRational):
            return self.coeff == other.coeff and self.radicand == other.radicand
        if isinstance(other, (int, Fraction)):
            return self.radicand == 1 and self.coeff == other
        return NotImplemented

    def __hash__(self):
        return hash((self.coeff, self.radicand))

    def __float__(self):
        return float(self.coeff) * self.radicand ** 0.5

    def __bool__(self):
        return self.coeff != 0

    def __repr__(self):
        if self.radicand == 1:
            return f"SqrtRational({self.coeff})"
        return f"SqrtRational({self.coeff}*sqrt({self.radicand}))"

    def to_scalar(self, params: tuple[str, ...] = DEFAULT_PARAMS) -> "ScalarExpr":
        if self.coeff == 0:
            return ScalarExpr.zero(params)
        key = (self.radicand, (0,) * len(params))
        return ScalarExpr._from_terms(params, {key: (_q(self.coeff), 0)})


# --------------------------------------------------------------------------
# ScalarExpr

# A term key is (radicand, exponent tuple aligned with params); the value is a
# Gaussian rational stored as a (re, im) pair of ints or Fractions.


def _q(x):
    """Integral rationals are kept as int: far cheaper to multiply than Fraction."""
    if type(x) is Fraction and x._denominator == 1:
        return x._numerator
    return x


def _gauss(value) -> tuple[Fraction, Fraction]:
    if isinstance(value, complex):
        re, im = value.real, value.imag
        if re != int(re) or im != int(im):
            raise TypeError("only integral complex literals are exact")
        return int(re), int(im)
    if isinstance(value, tuple):
        return _q(_frac(value[0])), _q(_frac(value[1]))
    return _q(_frac(value)), 0


class ScalarExpr:
    """Immutable exact scalar over a declared tuple of parameter names."""

    __slots__ = ("params", "terms", "_hash")

    def __init__(self, params: tuple[str, ...] = DEFAULT_PARAMS, terms=None):
        self.params = tuple(params)
        clean = {}
        if terms:
            n = len(self.params)
            for (rad, exps), c in terms.items():
                exps = tuple(exps)
                if len(exps) != n:
                    raise ValueError("exponent tuple does not match parameters")
                re, im = _gauss(c)
                if rad != 1:
                    outer, rad = squarefree_split(rad)
                    re, im = re * outer, im * outer
                key = (rad, exps)
                if key in clean:
                    ore, oim = clean[key]
                    re, im = _q(re + ore), _q(im + oim)
                if re == 0 and im == 0:
                    clean.pop(key, None)
                else:
                    clean[key] = (_q(re), _q(im))
        self.terms = clean
        self._hash = None

    @classmethod
    def _from_terms(cls, params, terms) -> "ScalarExpr":
        obj = cls.__new__(cls)
        obj.params = params
        obj.terms = terms
        obj._hash = None
        return obj

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, params=DEFAULT_PARAMS) -> "ScalarExpr":
        return cls._from_terms(tuple(params), {})

    @classmethod
    def const(cls, value, params=DEFAULT_PARAMS, radicand: int = 1) -> "ScalarExpr":
        params = tuple(params)
        return cls(params, {(radicand, (0,) * len(params)): value})

    @classmethod
    def param(cls, name: str, params=DEFAULT_PARAMS, power: int = 1) -> "ScalarExpr":
        params = tuple(params)
        if name not in params:
            raise ParameterMismatch(f"{name!r} is not among declared parameters {params}")
        exps = tuple(power if p == name else 0 for p in params)
        return cls._from_terms(params, {(1, exps): (1, 0)})

    @classmethod
    def sqrt(cls, q, params=DEFAULT_PARAMS) -> "ScalarExpr":
        """Principal square root of a nonnegative rational."""
        return SqrtRational.sqrt_of(q).to_scalar(tuple(params))

    # -- coercion ----------------------------------------------------------

    def _coerce(self, other) -> "ScalarExpr":
        if isinstance(other, ScalarExpr):
            if other.params != self.params:
                if not other.terms and not self.terms:
                    return ScalarExpr.zero(self.params)
                raise ParameterMismatch(f"{self.params} vs {other.params}")
            return other
        if isinstance(other, SqrtRational):
            return other.to_scalar(self.params)
        if isinstance(other, (int, Fraction, complex)):
            if other == 0:
                return ScalarExpr.zero(self.params)
            return ScalarExpr.const(other, self.params)
        raise TypeError(f"cannot combine ScalarExpr with {type(other).__name__}")

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for key, (re, im) in other.terms.items():
            cur = out.get(key)
            if cur is None:
                out[key] = (re, im)
            else:
                nre, nim = _q(cur[0] + re), _q(cur[1] + im)
                if nre == 0 and nim == 0:
                    del out[key]
                else:
                    out[key] = (nre, nim)
        return ScalarExpr._from_terms(self.params, out)

    __radd__ = __add__

    def __neg__(self):
        return ScalarExpr._from_terms(
            self.params, {k: (-re, -im) for k, (re, im) in self.terms.items()}
        )

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return ScalarExpr.zero(self.params)
            return ScalarExpr._from_terms(
                self.params, {k: (_q(re * other), _q(im * other)) for k, (re, im) in self.terms.items()}
            )
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out: dict = {}
        for (r1, e1), (a, b) in self.terms.items():
            for (r2, e2), (c, d) in other.terms.items():
                if r1 == 1:
                    g, rad = 1, r2
                elif r2 == 1:
                    g, rad = 1, r1
                else:
                    g, rad = _combine_radicands(r1, r2)
                exps = tuple(x + y for x, y in zip(e1, e2))
                if b == 0 and d == 0:
                    re, im = _q(a * c), 0
                else:
                    re, im = _q(a * c - b * d), _q(a * d + b * c)
                if g != 1:
                    re, im = re * g, im * g
                key = (rad, exps)
                cur = out.get(key)
                if cur is None:
                    out[key] = (re, im)
                else:
                    out[key] = (_q(cur[0] + re), _q(cur[1] + im))
        out = {k: v for k, v in out.items() if v[0] != 0 or v[1] != 0}
        return ScalarExpr._from_terms(self.params, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ScalarExpr.const(1, self.params)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_single_term(self) -> bool:
        return len(self.terms) == 1

    def inverse(self) -> "ScalarExpr":
        """Inverse of a single-term scalar; sums of terms are not invertible here."""
        if len(self.terms) != 1:
            raise ZeroDivisionError(
                "only single-term scalars are invertible" if self.terms else "division by zero"
            )
        ((rad, exps), (re, im)), = self.terms.items()
        norm = re * re + im * im
        # 1/(c sqrt(s)) = conj(c) sqrt(s) / (|c|^2 s)
        scale = norm * rad
        key = (rad, tuple(-e for e in exps))
        return ScalarExpr._from_terms(self.params, {key: (_q(Fraction(re) / scale), _q(Fraction(-im) / scale))})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    # -- structure ---------------------------------------------------------

    def conj(self) -> "ScalarExpr":
        """Complex conjugate: parameters are self-adjoint, only ``i`` flips."""
        return ScalarExpr._from_terms(
            self.params, {k: (re, -im) for k, (re, im) in self.terms.items()}
        )

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, ScalarExpr):
            if other.params != self.params:
                return not self.terms and not other.terms
            return self.terms == other.terms
        if isinstance(other, (int, Fraction, complex, SqrtRational)):
            return self.terms == self._coerce(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.params, frozenset(self.terms.items())))
        return self._hash

    def exponent_range(self, name: str) -> tuple[int, int] | None:
        """(min, max) exponent of ``name`` across terms, or None when zero."""
        i = self.params.index(name)
        exps = [e[i] for (_, e) in self.terms]
        if not exps:
            return None
        return min(exps), max(exps)

    def degree_part(self, name: str, power: int) -> "ScalarExpr":
        """Terms whose exponent of ``name`` is exactly ``power``."""
        i = self.params.index(name)
        return ScalarExpr._from_terms(
            self.params, {k: v for k, v in self.terms.items() if k[1][i] == power}
        )

    def times_param(self, name: str, power: int) -> "ScalarExpr":
        i = self.params.index(name)
        out = {}
        for (rad, exps), v in self.terms.items():
            e = list(exps)
            e[i] += power
            out[(rad, tuple(e))] = v
        return ScalarExpr._from_terms(self.params, out)

    def is_real(self) -> bool:
        return all(im == 0 for (_, im) in self.terms.values())

    def constant_value(self) -> SqrtRational | None:
        """The value as a real SqrtRational when this is a parameter-free single term."""
        if not self.terms:
            return SqrtRational(0)
        if len(self.terms) != 1:
            return None
        ((rad, exps), (re, im)), = self.terms.items()
        if any(exps) or im != 0:
            return None
        return SqrtRational._raw(re, rad)

    # -- specialization ----------------------------------------------------

    def subs(self, values: Mapping[str, object]) -> "ScalarExpr":
        """Exact substitution of parameters by exact scalars.

        Values may be ints, Fractions, integral complex numbers, ``(re, im)``
        pairs, SqrtRationals or parameter-compatible ScalarExprs.  Substituted
        parameters keep their slot with exponent zero.
        """
        idx = {}
        for name, v in values.items():
            if name not in self.params:
                raise ParameterMismatch(f"unknown parameter {name!r}")
            idx[self.params.index(name)] = self._coerce(
                ScalarExpr.const(v, self.params) if isinstance(v, tuple) else v
            )
        out = ScalarExpr.zero(self.params)
        cache: dict = {}
        for (rad, exps), c in self.terms.items():
            rest = list(exps)
            factor = ScalarExpr._from_terms(self.params, {(rad, tuple(0 for _ in exps)): c})
            for i, val in idx.items():
                e = rest[i]
                rest[i] = 0
                if e:
                    key = (i, e)
                    if key not in cache:
                        cache[key] = val ** e
                    factor = factor * cache[key]
            out = out + factor.times_exps(tuple(rest))
        return out

    def subs_square(self, name: str, value) -> "ScalarExpr":
        """Replace ``name**(2e)`` by ``value**e``; odd powers are an error."""
        i = self.params.index(name)
        val = self._coerce(value)
        out = ScalarExpr.zero(self.params)
        for (rad, exps), c in self.terms.items():
            e = exps[i]
            if e % 2:
                raise ValueError(f"odd power of {name} cannot be specialized through its square")
            rest = list(exps)
            rest[i] = 0
            term = ScalarExpr._from_terms(self.params, {(rad, tuple(rest)): c})
            out = out + term * val ** (e // 2)
        return out

    def times_exps(self, exps: tuple[int, ...]) -> "ScalarExpr":
        if not any(exps):
            return self
        out = {}
        for (rad, e), v in self.terms.items():
            out[(rad, tuple(x + y for x, y in zip(e, exps)))] = v
        return ScalarExpr._from_terms(self.params, out)

    def eval(self, bindings: Mapping[str, complex]) -> complex:
        """Numeric value; radicands are principal square roots."""
        total = 0j
        for (rad, exps), (re, im) in self.terms.items():
            val = complex(float(re), float(im))
            if rad != 1:
                val *= rad ** 0.5
            for name, e in zip(self.params, exps):
                if e == 0:
                    continue
                if name not in bindings:
                    raise KeyError(f"unbound parameter {name!r}")
                x = complex(bindings[name])
                if e < 0 and x == 0:
                    raise ZeroDivisionError(f"{name} = 0 raised to a negative power")
                val *= x ** e
            total += val
        return total

    # -- display -----------------------------------------------------------

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (rad, exps), (re, im) in sorted(self.terms.items()):
            if im == 0:
                c = str(re)
            elif re == 0:
                c = f"{im}i"
            else:
                c = f"({re}{'+' if im > 0 else '-'}{abs(im)}i)"
            factors = [c]
            if rad != 1:
                factors.append(f"√{rad}")
            for name, e in zip(self.params, exps):
                if e:
                    sym = _PRETTY.get(name, name)
                    factors.append(sym if e == 1 else f"{sym}^{e}")
            parts.append("·".join(factors))
        return " + ".join(parts)


def as_params(values: Iterable[ScalarExpr]) -> tuple[str, ...]:
    """Common parameter tuple of a collection of scalars."""
    params = None
    for v in values:
        if params is None:
            params = v.params
        elif v.params != params:
            raise ParameterMismatch(f"{params} vs {v.params}")
    return params or DEFAULT_PARAMS


def numeric_value(x) -> complex:
    """Best-effort numeric value of an exact constant."""
    if isinstance(x, ScalarExpr):
        return x.eval({})
    if isinstance(x, SqrtRational):
        return complex(float(x))
    return complex(x)


def is_perfect_square(q: Fraction) -> bool:
    q = _frac(q)
    if q < 0:
        return False
    n, d = q.numerator, q.denominator
    return isqrt(n) ** 2 == n and isqrt(d) ** 2 == d
