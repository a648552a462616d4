"""Normal ordering for the surface-of-rotation algebra A(rho, eps).

Generators X+, X0, X- obey

    [X0, X+] = eps X+,   [X0, X-] = -eps X-,
    X+ X- = rho(X0),     X- X+ = rho(X0 + eps).

Canonical monomials are ``X+^a X0^c X-^b`` with ``a*b == 0``.  Internally a
polynomial is graded by the shift ``s = a - b`` (the ad X0 weight): shift
``s >= 0`` stores ``X+^s f(X0)`` and shift ``s < 0`` stores ``f(X0) X-^|s|``,
with ``f`` a coefficient list in powers of X0.  Products then reduce to
shifting polynomial arguments by multiples of eps and multiplying by finite
products of shifted ``rho``.
"""
from __future__ import annotations

import random
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Sequence

import numpy as np

from .scalars import DEFAULT_PARAMS, ScalarExpr

PLUS, ZERO, MINUS = "+", "0", "-"
GENERATORS = (PLUS, ZERO, MINUS)


class UnsupportedProfile(ValueError):
    """The operation needs an exact polynomial profile."""


class ConjugationUndefined(ValueError):
    """dagger was asked for on a profile that is not real."""


class NotClassicallyRegular(ValueError):
    """A negative power of eps blocks the eps -> 0 limit."""


# --------------------------------------------------------------------------
# univariate polynomials in X0 with ScalarExpr coefficients (tuples, low first)


def _trim(p: list) -> tuple:
    while p and p[-1].is_zero():
        p.pop()
    return tuple(p)


def padd(f: Sequence[ScalarExpr], g: Sequence[ScalarExpr]) -> tuple:
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = out[i] + c
    return _trim(out)


def pmul(f: Sequence[ScalarExpr], g: Sequence[ScalarExpr]) -> tuple:
    if not f or not g:
        return ()
    params = f[0].params
    out = [ScalarExpr.zero(params)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a.is_zero():
            continue
        for j, b in enumerate(g):
            if not b.is_zero():
                out[i + j] = out[i + j] + a * b
    return _trim(out)


def pscale(f: Sequence[ScalarExpr], c) -> tuple:
    return _trim([a * c for a in f])


# --------------------------------------------------------------------------
# profiles


@dataclass(eq=False)
class SurfaceProfile:
    """The function rho of x^2 + y^2 = rho(z), with its deformation parameter.

    ``kind == "polynomial"`` carries exact coefficients (constant term first)
    and is usable by the symbolic kernel.  ``kind == "numeric"`` only carries
    a callable and is usable by representations, maps and spectra.
    """

    kind: str
    epsilon: object
    poly_coeffs: tuple = ()
    numeric_fn: Callable[[float], float] | None = None
    real_flag: bool = True
    I_rho: tuple[float, float] | None = None
    name: str = ""
    params: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.kind not in ("polynomial", "numeric"):
            raise ValueError(f"unknown profile kind {self.kind!r}")
        if self.kind == "polynomial":
            self.poly_coeffs = tuple(self.poly_coeffs)
            if not isinstance(self.epsilon, ScalarExpr):
                raise TypeError("exact profiles need a ScalarExpr epsilon")
            for c in self.poly_coeffs:
                if c.params != self.epsilon.params:
                    raise ValueError("profile coefficients and epsilon disagree on parameters")
            if self.real_flag and any(not c.is_real() for c in self.poly_coeffs):
                raise ValueError("real profile with non-real coefficients")
        elif self.numeric_fn is None:
            raise ValueError("numeric profile needs numeric_fn")

    @property
    def scalar_params(self) -> tuple[str, ...]:
        return self.epsilon.params

    def require_exact(self):
        if self.kind != "polynomial":
            raise UnsupportedProfile(f"profile {self.name or self.kind!r} is not an exact polynomial")

    def shifted(self, r: int) -> tuple:
        """Coefficients of rho(X0 + r eps)."""
        key = ("shift", r)
        if key not in self._cache:
            self._cache[key] = shift_poly(self.poly_coeffs, r, self.epsilon)
        return self._cache[key]

    def rho_product(self, lo: int, hi: int) -> tuple:
        """Coefficients of prod_{r=lo}^{hi} rho(X0 + r eps) (empty product is 1)."""
        key = ("prod", lo, hi)
        if key not in self._cache:
            if hi < lo:
                val = (ScalarExpr.const(1, self.scalar_params),)
            else:
                val = pmul(self.rho_product(lo, hi - 1), self.shifted(hi))
            self._cache[key] = val
        return self._cache[key]

    def evaluate(self, u, bindings=None):
        """Numeric rho(u); exact profiles need bindings for their parameters."""
        if self.kind == "numeric":
            return self.numeric_fn(u)
        coeffs = [c.eval(bindings or {}) for c in self.poly_coeffs]
        val = 0
        for c in reversed(coeffs):
            val = val * u + c
        return val

    def numeric_epsilon(self, bindings=None) -> float:
        if isinstance(self.epsilon, ScalarExpr):
            return self.epsilon.eval(bindings or {}).real
        return float(self.epsilon)


@lru_cache(maxsize=4096)
def _shift_table(n: int, t: int, eps: ScalarExpr) -> tuple:
    """table[p][q] = comb(p, q) * (t eps)^(p - q) for p < n."""
    params = eps.params
    powers = [ScalarExpr.const(1, params)]
    step = eps * t
    for _ in range(n - 1):
        powers.append(powers[-1] * step)
    return tuple(tuple(powers[p - q] * comb(p, q) for q in range(p + 1)) for p in range(n))


def shift_poly(f: Sequence[ScalarExpr], t: int, eps: ScalarExpr) -> tuple:
    """Coefficients of f(X0 + t*eps)."""
    if t == 0 or len(f) <= 1:
        return tuple(f)
    n = len(f)
    table = _shift_table(n, t, eps)
    out = [ScalarExpr.zero(eps.params)] * n
    for p, c in enumerate(f):
        if c.is_zero():
            continue
        for q, w in enumerate(table[p]):
            out[q] = out[q] + c * w
    return _trim(out)


# --------------------------------------------------------------------------
# NCPoly


class NCPoly:
    """Normal-ordered element of A(rho, eps): sum of coeff * X+^a X0^c X-^b."""

    __slots__ = ("params", "graded")

    def __init__(self, params: tuple[str, ...] = DEFAULT_PARAMS, graded: dict | None = None):
        self.params = tuple(params)
        self.graded = {}
        for s, f in (graded or {}).items():
            f = _trim(list(f))
            if f:
                self.graded[s] = f

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, params=DEFAULT_PARAMS) -> "NCPoly":
        return cls(params)

    @classmethod
    def scalar(cls, c, params=DEFAULT_PARAMS) -> "NCPoly":
        if not isinstance(c, ScalarExpr):
            c = ScalarExpr.const(c, params)
        return cls(c.params, {0: (c,)})

    @classmethod
    def one(cls, params=DEFAULT_PARAMS) -> "NCPoly":
        return cls.scalar(1, params)

    @classmethod
    def monomial(cls, a: int, c: int, b: int, coeff=1, params=DEFAULT_PARAMS) -> "NCPoly":
        """coeff * X+^a X0^c X-^b, which must already be canonical (a*b == 0)."""
        if a and b:
            raise ValueError("X+^a X0^c X-^b with a, b > 0 is not canonical; use reduce_word")
        if not isinstance(coeff, ScalarExpr):
            coeff = ScalarExpr.const(coeff, params)
        zero = ScalarExpr.zero(coeff.params)
        return cls(coeff.params, {a - b: (zero,) * c + (coeff,)})

    @classmethod
    def from_terms(cls, terms: dict, params=DEFAULT_PARAMS) -> "NCPoly":
        out = NCPoly.zero(params)
        for (a, c, b), coeff in terms.items():
            out = out + NCPoly.monomial(a, c, b, coeff, params)
        return out

    @classmethod
    def x0_poly(cls, f: Sequence[ScalarExpr]) -> "NCPoly":
        params = f[0].params if f else DEFAULT_PARAMS
        return cls(params, {0: tuple(f)})

    # -- views ---------------------------------------------------------------

    def terms(self) -> dict:
        """Map (a, c, b) -> coefficient."""
        out = {}
        for s, f in self.graded.items():
            a, b = (s, 0) if s >= 0 else (0, -s)
            for c, coeff in enumerate(f):
                if not coeff.is_zero():
                    out[(a, c, b)] = coeff
        return out

    def diagonal(self) -> tuple:
        """Coefficients of the shift-zero part, a polynomial in X0."""
        return self.graded.get(0, ())

    def is_zero(self) -> bool:
        return not self.graded

    def map_coeffs(self, fn: Callable[[ScalarExpr], ScalarExpr]) -> "NCPoly":
        return NCPoly(self.params, {s: tuple(fn(c) for c in f) for s, f in self.graded.items()})

    # -- linear structure ----------------------------------------------------

    def _check(self, other: "NCPoly"):
        if other.params != self.params:
            raise ValueError(f"parameter sets differ: {self.params} vs {other.params}")

    def __add__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        self._check(other)
        out = dict(self.graded)
        for s, f in other.graded.items():
            out[s] = padd(out[s], f) if s in out else f
        return NCPoly(self.params, out)

    def __neg__(self):
        return self.map_coeffs(lambda c: -c)

    def __sub__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "NCPoly":
        return NCPoly(self.params, {s: pscale(f, c) for s, f in self.graded.items()})

    def __eq__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.params == other.params and self.graded == other.graded

    def __hash__(self):
        return hash(tuple(sorted(self.graded.items())))

    def __repr__(self):
        if not self.graded:
            return "0"
        parts = []
        for (a, c, b), coeff in sorted(self.terms().items()):
            mono = "".join(
                s for s in (f"X+^{a}" if a > 1 else "X+" if a else "",
                            f"X0^{c}" if c > 1 else "X0" if c else "",
                            f"X-^{b}" if b > 1 else "X-" if b else "") if s
            )
            parts.append(f"({coeff})" + (f"·{mono}" if mono else ""))
        return " + ".join(parts)


def generator(g: str, params=DEFAULT_PARAMS) -> NCPoly:
    a, c, b = {PLUS: (1, 0, 0), ZERO: (0, 1, 0), MINUS: (0, 0, 1)}[g]
    return NCPoly.monomial(a, c, b, 1, params)


# --------------------------------------------------------------------------
# products


def _mul_graded(s: int, f: tuple, t: int, g: tuple, prof: SurfaceProfile) -> tuple[int, tuple]:
    eps = prof.epsilon
    if s >= 0 and t >= 0:
        # X+^s f X+^t g = X+^(s+t) f(X0 + t eps) g
        return s + t, pmul(shift_poly(f, t, eps), g)
    if s < 0 and t < 0:
        # f X-^a g X-^b = f g(X0 + a eps) X-^(a+b)
        a = -s
        return s + t, pmul(f, shift_poly(g, a, eps))
    if s >= 0:
        # X+^s (f g) X-^b
        b = -t
        h = pmul(f, g)
        if s >= b:
            core = pmul(shift_poly(h, -b, eps), prof.rho_product(-(b - 1), 0))
            return s - b, core
        core = pmul(shift_poly(h, -s, eps), prof.rho_product(-(s - 1), 0))
        return s - b, core
    # f X-^a X+^b g
    a, b = -s, t
    if a >= b:
        core = pmul(pmul(f, prof.rho_product(a - b + 1, a)), shift_poly(g, a - b, eps))
        return b - a, core
    core = pmul(pmul(shift_poly(f, b - a, eps), prof.rho_product(b - a + 1, b)), g)
    return b - a, core


def mul(f: NCPoly, g: NCPoly, s: SurfaceProfile) -> NCPoly:
    """Canonical product f*g in A(rho, eps)."""
    s.require_exact()
    f._check(g)
    if f.params != s.scalar_params:
        raise ValueError("polynomial and profile disagree on parameters")
    out: dict = {}
    for sf, pf in f.graded.items():
        for sg, pg in g.graded.items():
            shift, core = _mul_graded(sf, pf, sg, pg, s)
            if core:
                out[shift] = padd(out[shift], core) if shift in out else core
    return NCPoly(f.params, out)


def mul_many(items: Iterable[NCPoly], s: SurfaceProfile) -> NCPoly:
    items = list(items)
    result = NCPoly.one(s.scalar_params)
    for x in items:
        result = mul(result, x, s)
    return result


def commutator(f: NCPoly, g: NCPoly, s: SurfaceProfile) -> NCPoly:
    return mul(f, g, s) - mul(g, f, s)


def dagger(f: NCPoly, s: SurfaceProfile) -> NCPoly:
    """Antilinear anti-automorphism X0 -> X0, X+ <-> X-.

    ``X+^a f(X0)`` maps to ``conj(f)(X0) X-^a``, which is already canonical.
    """
    if not s.real_flag:
        raise ConjugationUndefined("conjugation needs a real profile")
    return NCPoly(f.params, {-sh: tuple(c.conj() for c in p) for sh, p in f.graded.items()})


# --------------------------------------------------------------------------
# words


def _as_word(w) -> tuple[str, ...]:
    letters = tuple(w)
    for x in letters:
        if x not in GENERATORS:
            raise ValueError(f"unknown generator {x!r}; use '+', '0', '-'")
    return letters


def reduce_word(w, s: SurfaceProfile) -> NCPoly:
    """Canonical form of a word in the generators ('+', '0', '-')."""
    s.require_exact()
    params = s.scalar_params
    result = NCPoly.one(params)
    for x in _as_word(w):
        result = mul(result, generator(x, params), s)
    return result


def rewrite_word(w, s: SurfaceProfile, rng: random.Random | None = None) -> NCPoly:
    """Canonical form by plain string rewriting, applying rules at random positions.

    Rules: ``0+ -> +0 + eps +``, ``-0 -> 0- + eps -``, ``-+ -> rho(X0 + eps)``
    and ``+ 0^c - -> (X0 - eps)^c rho(X0)``.  This is independent of the graded
    product used by :func:`reduce_word` and serves as its oracle.
    """
    s.require_exact()
    rng = rng or random.Random(0)
    params = s.scalar_params
    eps = s.epsilon
    one = ScalarExpr.const(1, params)

    def poly_words(coeffs, prefix_shift=0):
        out = []
        for c, coeff in enumerate(coeffs):
            if not coeff.is_zero():
                out.append(((ZERO,) * c, coeff))
        return out

    pending = {_as_word(w): one}
    done: dict = {}
    while pending:
        word, coeff = pending.popitem()
        sites = []
        for i in range(len(word) - 1):
            pair = word[i] + word[i + 1]
            if pair in ("0+", "-0", "-+"):
                sites.append((i, pair))
        for i, x in enumerate(word):
            if x == PLUS:
                j = i + 1
                while j < len(word) and word[j] == ZERO:
                    j += 1
                if j < len(word) and word[j] == MINUS:
                    sites.append((i, "+0-", j))
        if not sites:
            done[word] = done.get(word, ScalarExpr.zero(params)) + coeff
            continue
        site = rng.choice(sites)
        i = site[0]
        pieces: list[tuple[tuple, ScalarExpr]]
        if site[1] == "0+":
            head, tail = word[:i], word[i + 2:]
            pieces = [(head + (PLUS, ZERO) + tail, coeff), (head + (PLUS,) + tail, coeff * eps)]
        elif site[1] == "-0":
            head, tail = word[:i], word[i + 2:]
            pieces = [(head + (ZERO, MINUS) + tail, coeff), (head + (MINUS,) + tail, coeff * eps)]
        elif site[1] == "-+":
            head, tail = word[:i], word[i + 2:]
            pieces = [(head + mid + tail, coeff * c) for mid, c in poly_words(s.shifted(1))]
        else:
            j = site[2]
            head, tail = word[:i], word[j + 1:]
            c = j - i - 1
            shifted = (ScalarExpr.zero(params),) * c + (one,)
            poly = pmul(shift_poly(shifted, -1, eps), s.shifted(0))
            pieces = [(head + mid + tail, coeff * k) for mid, k in poly_words(poly)]
        for new, k in pieces:
            cur = pending.get(new)
            pending[new] = k if cur is None else cur + k
            if pending[new].is_zero():
                del pending[new]
    terms = {}
    for word, coeff in done.items():
        if coeff.is_zero():
            continue
        a = word.count(PLUS)
        c = word.count(ZERO)
        b = word.count(MINUS)
        terms[(a, c, b)] = terms.get((a, c, b), ScalarExpr.zero(params)) + coeff
    return NCPoly.from_terms(terms, params)


# --------------------------------------------------------------------------
# classical limit and Poisson bracket


def classical_limit(f: NCPoly, eps_name: str = "eps") -> NCPoly:
    """Drop every term carrying a positive power of eps."""

    def limit(c: ScalarExpr) -> ScalarExpr:
        rng = c.exponent_range(eps_name)
        if rng is None:
            return c
        if rng[0] < 0:
            raise NotClassicallyRegular(f"coefficient {c} has a negative power of {eps_name}")
        return c.degree_part(eps_name, 0)

    return f.map_coeffs(limit)


def poisson(f: NCPoly, g: NCPoly, s: SurfaceProfile, eps_name: str = "eps") -> NCPoly:
    """lim_{eps->0} [f, g]/eps, as a commutative polynomial."""
    if s.epsilon != ScalarExpr.param(eps_name, s.scalar_params):
        raise UnsupportedProfile("the Poisson limit needs eps as a formal parameter")
    c = commutator(f, g, s)
    return classical_limit(c.map_coeffs(lambda x: x.times_param(eps_name, -1)), eps_name)


def derivative(coeffs: Sequence[ScalarExpr]) -> tuple:
    return _trim([c * p for p, c in enumerate(coeffs)][1:])


# --------------------------------------------------------------------------
# exact profiles used throughout


def sphere_profile(params: tuple[str, ...] = DEFAULT_PARAMS) -> SurfaceProfile:
    """rho(u) = alpha^2 (R^2 - u^2 + eps u) over formal alpha, eps, R."""
    a2 = ScalarExpr.param("alpha", params, 2)
    eps = ScalarExpr.param("eps", params)
    r2 = ScalarExpr.param("R", params, 2)
    return SurfaceProfile(
        kind="polynomial",
        epsilon=eps,
        poly_coeffs=(a2 * r2, a2 * eps, -a2),
        name="sphere-family",
    )


def paraboloid_profile(params: tuple[str, ...] = DEFAULT_PARAMS) -> SurfaceProfile:
    """rho(u) = u: the Heisenberg-Weyl algebra."""
    eps = ScalarExpr.param("eps", params)
    return SurfaceProfile(
        kind="polynomial",
        epsilon=eps,
        poly_coeffs=(ScalarExpr.zero(params), ScalarExpr.const(1, params)),
        name="paraboloid",
    )


def casimir(s: SurfaceProfile, alpha_name: str = "alpha") -> NCPoly:
    """X0^2 + (X+X- + X-X+) / (2 alpha^2)."""
    params = s.scalar_params
    x0 = generator(ZERO, params)
    xp, xm = generator(PLUS, params), generator(MINUS, params)
    half = ScalarExpr.param(alpha_name, params, -2) * Fraction(1, 2)
    return mul(x0, x0, s) + (mul(xp, xm, s) + mul(xm, xp, s)).scale(half)


# --------------------------------------------------------------------------
# numeric specialization of profiles

_ALIASES = {"epsilon": "eps", "lambda": "lam"}


def normalize_values(values: dict) -> dict:
    """Canonical parameter names; ``x_sq`` entries are kept as given."""
    out = {}
    for key, v in values.items():
        key = _ALIASES.get(key, key)
        if key in out:
            raise ValueError(f"parameter {key!r} given twice")
        out[key] = v
    return out


def numeric_bindings(values: dict) -> dict[str, complex]:
    """Numeric bindings for eval: ``x_sq`` becomes the principal root ``x``."""
    vals = normalize_values(values)
    out: dict[str, complex] = {}
    for key, v in vals.items():
        if key.endswith("_sq"):
            name = key[:-3]
            if name in vals:
                raise ValueError(f"both {name} and {key} given")
            out[name] = complex(v) ** 0.5
        elif not isinstance(v, str):
            out[key] = complex(v)
    return out


def exact_constant(x: ScalarExpr, values: dict):
    """Exact value of ``x`` when every needed value is rational, else None.

    Returns a ScalarExpr with no parameters left (possibly with radicals).
    """
    vals = normalize_values(values)
    y = x
    for name in x.params:
        rng = y.exponent_range(name)
        if rng is None or rng == (0, 0):
            continue
        if name in vals and isinstance(vals[name], (int, Fraction)):
            y = y.subs({name: vals[name]})
        elif name + "_sq" in vals and isinstance(vals[name + "_sq"], (int, Fraction)):
            y = y.subs_square(name, vals[name + "_sq"])
        else:
            return None
    return y


def _scan_positive(fn, center: float, scale: float) -> tuple[float, float]:
    from scipy.optimize import brentq

    if not fn(center) > 0:
        raise ValueError("profile is not positive at the search centre")
    ends = []
    for direction in (-1.0, 1.0):
        step, prev = scale, center
        end = direction * np.inf
        for _ in range(200):
            x = center + direction * step
            if not fn(x) > 0:
                a, b = sorted((prev, x))
                end = brentq(fn, a, b, xtol=1e-15)
                break
            prev, step = x, step * 1.5
            if abs(x) > 1e12:
                break
        ends.append(end)
    return ends[0], ends[1]


@dataclass
class BoundProfile:
    """A profile with every parameter given a number."""

    rho: Callable[[np.ndarray], np.ndarray]
    epsilon: float
    coeffs: np.ndarray | None
    components: list[tuple[float, float]]
    source: SurfaceProfile
    values: dict

    def interval(self, sheet: int | None = None) -> tuple[float, float]:
        """The positivity component; with several, ``sheet`` picks one (default: the upper)."""
        if not self.components:
            raise ValueError("profile is nowhere positive")
        if sheet is None:
            sheet = -1
        return self.components[sheet]


def bind_profile(s: SurfaceProfile, values: dict | None = None) -> BoundProfile:
    """Fix every parameter of ``s``; without ``values`` the profile's own are used."""
    values = normalize_values(s.params if values is None else values)
    if s.kind == "numeric":
        eps = float(s.epsilon if not isinstance(s.epsilon, ScalarExpr) else s.epsilon.eval(numeric_bindings(values)).real)
        fn = np.vectorize(s.numeric_fn, otypes=[float])
        if s.I_rho is not None:
            comps = [tuple(s.I_rho)]
        else:
            comps = [_scan_positive(s.numeric_fn, float(s.params.get("center", eps / 2)), 0.05)]
        return BoundProfile(fn, eps, None, comps, s, values)
    bindings = numeric_bindings(values)
    coeffs = np.array([c.eval(bindings) for c in s.poly_coeffs], dtype=complex)
    if np.max(np.abs(coeffs.imag), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(coeffs))):
        raise ValueError("profile coefficients are not real at these parameters")
    coeffs = coeffs.real
    eps = s.epsilon.eval(bindings).real

    def rho(u, c=coeffs):
        return np.polynomial.polynomial.polyval(u, c)

    return BoundProfile(rho, eps, coeffs, _poly_components(coeffs), s, values)


def _poly_components(coeffs: np.ndarray) -> list[tuple[float, float]]:
    c = np.trim_zeros(coeffs, "b")
    if len(c) == 0:
        return []
    if len(c) == 1:
        return [(-np.inf, np.inf)] if c[0] > 0 else []
    roots = np.roots(c[::-1])
    real = sorted({float(r.real) for r in roots if abs(r.imag) <= 1e-12 * max(1.0, abs(r))})
    edges = [-np.inf] + real + [np.inf]
    comps = []
    for a, b in zip(edges[:-1], edges[1:]):
        if a == b:
            continue
        if np.isinf(a) and np.isinf(b):
            mid = 0.0
        elif np.isinf(a):
            mid = b - 1.0
        elif np.isinf(b):
            mid = a + 1.0
        else:
            mid = (a + b) / 2
        if np.polynomial.polynomial.polyval(mid, c) > 0:
            if comps and comps[-1][1] == a:
                comps[-1] = (comps[-1][0], b)  # double root touching zero
            else:
                comps.append((a, b))
    return comps


# --------------------------------------------------------------------------
# verification suites


def random_word(rng: random.Random, max_len: int) -> tuple[str, ...]:
    return tuple(rng.choice(GENERATORS) for _ in range(rng.randint(0, max_len)))


def random_profile(rng: random.Random, params: tuple[str, ...] = DEFAULT_PARAMS, max_degree: int = 3) -> SurfaceProfile:
    """A real polynomial profile with small rational coefficients over formal eps."""
    degree = rng.randint(1, max_degree)
    coeffs = []
    for _ in range(degree + 1):
        c = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        coeffs.append(ScalarExpr.const(c, params) * ScalarExpr.param("eps", params, rng.randint(0, 1)))
    if coeffs[-1].is_zero():
        coeffs[-1] = ScalarExpr.const(1, params)
    return SurfaceProfile(kind="polynomial", epsilon=ScalarExpr.param("eps", params), poly_coeffs=tuple(coeffs), name="random")


def defining_relations(s: SurfaceProfile) -> list[tuple[str, tuple[str, str], NCPoly]]:
    """(label, word, canonical value) for the four defining relations, with
    ``[X0, X+-]`` written as the words X0X+- compared against X+-X0 +- eps X+-."""
    params = s.scalar_params
    eps = s.epsilon
    xp, x0, xm = (generator(g, params) for g in (PLUS, ZERO, MINUS))
    return [
        ("X0X+ = X+X0 + eps X+", (ZERO, PLUS), mul(xp, x0, s) + xp.scale(eps)),
        ("X0X- = X-X0 - eps X-", (ZERO, MINUS), mul(xm, x0, s) - xm.scale(eps)),
        ("X+X- = rho(X0)", (PLUS, MINUS), NCPoly.x0_poly(s.shifted(0))),
        ("X-X+ = rho(X0+eps)", (MINUS, PLUS), NCPoly.x0_poly(s.shifted(1))),
    ]


def relation_suite(s: SurfaceProfile, n_words: int, max_len: int, rng: random.Random) -> dict:
    """Randomized exact checks on words of length <= max_len.

    Each word is reduced and compared with the rewriting oracle; every
    defining relation is applied on both sides of the reduced word; and the
    word is split in three to check that regrouping the reduced pieces gives
    the same product.
    """
    s.require_exact()
    params = s.scalar_params
    rels = [(label, generator(a, params), generator(b, params), value) for label, (a, b), value in defining_relations(s)]
    failures: list[str] = []
    for _ in range(n_words):
        w = random_word(rng, max_len)
        name = "".join(w) or "1"
        f = reduce_word(w, s)
        if rewrite_word(w, s, rng) != f:
            failures.append(f"rewriting disagrees on {name}")
        for label, ga, gb, value in rels:
            if mul(mul(f, ga, s), gb, s) != mul(f, value, s):
                failures.append(f"{label} fails right of {name}")
            if mul(ga, mul(gb, f, s), s) != mul(value, f, s):
                failures.append(f"{label} fails left of {name}")
        i, j = sorted(rng.randint(0, len(w)) for _ in range(2))
        a, b, c = (reduce_word(part, s) for part in (w[:i], w[i:j], w[j:]))
        left = mul(mul(a, b, s), c, s)
        if left != mul(a, mul(b, c, s), s) or left != f:
            failures.append(f"associativity fails at {name[:i]}|{name[i:j]}|{name[j:]}")
    return {"words": n_words, "failures": failures}


def casimir_residual(s: SurfaceProfile | None = None) -> NCPoly:
    """Casimir minus R^2 over the formal sphere family (zero when the identity holds)."""
    s = s or sphere_profile()
    return casimir(s) - NCPoly.scalar(ScalarExpr.param("R", s.scalar_params, 2), s.scalar_params)


def poisson_residuals(s: SurfaceProfile) -> dict[str, NCPoly]:
    """{X0, X+} - X+, {X0, X-} + X-, and {X+, X-} + rho'(X0), all expected zero."""
    params = s.scalar_params
    xp, x0, xm = (generator(g, params) for g in (PLUS, ZERO, MINUS))
    rho_prime = classical_limit(NCPoly.x0_poly(derivative(s.poly_coeffs)))
    return {
        "{X0,X+} = X+": poisson(x0, xp, s) - xp,
        "{X0,X-} = -X-": poisson(x0, xm, s) + xm,
        "{X+,X-} = -rho'(X0)": poisson(xp, xm, s) + rho_prime,
    }
