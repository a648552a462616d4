"""Ladder representations: X0 diagonal, X+ and X- as weighted shifts.

Sites are integers ``m`` with X0 eigenvalue ``eps (m + lam)``.  In unitary
mode ``X+|m> = conj(D(m+1)) |m+1>`` and ``X-|m> = D(m) |m-1>`` with
``|D(m)|^2 = rho(eps (m + lam))``.  In general mode ``X+|m-1> = C(m) |m>`` and
``X-|m> = D(m) |m-1>`` with ``C(m) D(m) = rho(eps (m + lam))``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, isqrt
from typing import Callable

import numpy as np

from .ncalg import (
    NCPoly,
    SurfaceProfile,
    bind_profile,
    exact_constant,
    normalize_values,
    numeric_bindings,
)
from .reports import CheckReport, numeric_report
from .scalars import DEFAULT_PARAMS, ScalarExpr, SqrtRational
from .wigner import Spin, cgc

ROOT, CUT = "root", "cut"
UNITARY, GENERAL = "unitary", "general"

# How close an interval endpoint must sit to the lattice to count as on it.
LATTICE_TOL = 1e-9


class QuantizationError(ValueError):
    """No finite unitary representation exists at these parameters."""


@dataclass
class Rep:
    """A finite window of a ladder representation.

    ``raise_amp[i]`` is the X+ matrix element from site i to site i+1 and
    ``lower_amp[i]`` the X- element from site i+1 to site i.  ``d_low`` is
    ``D`` at the lowest site, which must vanish there when the end is a root.
    """

    m_values: np.ndarray
    lambda_offset: float
    epsilon: float
    diag: np.ndarray
    raise_amp: np.ndarray
    lower_amp: np.ndarray
    mode: str = UNITARY
    boundary: dict = field(default_factory=lambda: {"low": ROOT, "high": ROOT})
    d_low: complex = 0.0
    exact: dict | None = None

    @property
    def dim(self) -> int:
        return len(self.m_values)

    def hop(self, m: int) -> complex:
        """D(m) for a site m in the window."""
        i = int(m - self.m_values[0])
        if i == 0:
            return self.d_low
        return self.lower_amp[i - 1]

    def matrices(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Dense (X+, X0, X-)."""
        n = self.dim
        dtype = complex
        xp = np.zeros((n, n), dtype)
        xm = np.zeros((n, n), dtype)
        idx = np.arange(n - 1)
        xp[idx + 1, idx] = self.raise_amp
        xm[idx, idx + 1] = self.lower_amp
        return xp, np.diag(self.diag.astype(dtype)), xm

    def interior_mask(self) -> np.ndarray:
        """Sites whose rows and columns are free of truncation effects."""
        keep = np.ones(self.dim, bool)
        if self.boundary.get("low") == CUT:
            keep[0] = False
        if self.boundary.get("high") == CUT:
            keep[-1] = False
        return keep


# --------------------------------------------------------------------------
# constructors


def rep_spin(k, values: dict) -> Rep:
    """Spin-k representation of the sphere family: X0|j> = eps j,
    X+-|j> = alpha eps sqrt((k -+ j)(k +- j + 1)) |j +- 1>."""
    K = Spin.of(k).twice_value
    b = numeric_bindings(values)
    eps = b["eps"].real
    alpha = b["alpha"] if "alpha" in b else 1.0
    lam = Fraction(K % 2, 2)
    js = [Fraction(t, 2) for t in range(-K, K + 1, 2)]
    m_values = np.array([int(j - lam) for j in js])
    kk = Fraction(K, 2)
    params = DEFAULT_PARAMS
    ae = ScalarExpr.param("alpha", params) * ScalarExpr.param("eps", params)
    up_exact = [ae * SqrtRational.sqrt_of((kk - j) * (kk + j + 1)).to_scalar(params) for j in js[:-1]]
    down_exact = [ae * SqrtRational.sqrt_of((kk + j) * (kk - j + 1)).to_scalar(params) for j in js[1:]]
    diag_exact = [ScalarExpr.param("eps", params) * j for j in js]
    bind = {"alpha": alpha, "eps": eps}
    return Rep(
        m_values=m_values,
        lambda_offset=float(lam),
        epsilon=eps,
        diag=np.array([c.eval(bind) for c in diag_exact]).real,
        raise_amp=np.array([c.eval(bind) for c in up_exact], dtype=complex),
        lower_amp=np.array([c.eval(bind) for c in down_exact], dtype=complex),
        mode=UNITARY if abs(complex(alpha).imag) < 1e-15 and complex(alpha).real >= 0 else GENERAL,
        boundary={"low": ROOT, "high": ROOT},
        d_low=0.0,
        exact={"k": kk, "diag": diag_exact, "raise": up_exact, "lower": down_exact},
    )


def _exact_interval_length_sq(s: SurfaceProfile, values: dict):
    """|I_rho|^2 exactly for a quadratic profile with rational inputs, else None."""
    if s.kind != "polynomial" or len(s.poly_coeffs) != 3:
        return None
    cs = [exact_constant(c, values) for c in s.poly_coeffs]
    if any(c is None for c in cs):
        return None
    vals = [c.constant_value() if not c.is_zero() else SqrtRational(0) for c in cs]
    if any(v is None or v.radicand != 1 for v in vals):
        return None
    c0, c1, c2 = (v.coeff for v in vals)
    if c2 >= 0:
        return None
    return (c1 * c1 - 4 * c0 * c2) / (c2 * c2)


def _exact_eps(values: dict):
    v = normalize_values(values)
    e = v.get("eps")
    return e if isinstance(e, (int, Fraction)) else None


def quantization_dimension(s: SurfaceProfile, values: dict, sheet: int | None = None) -> tuple[int, bool]:
    """(dim, exact) for a bounded positivity interval; QuantizationError if |I|/eps is not an integer."""
    bound = bind_profile(s, values)
    lo, hi = bound.interval(sheet)
    if np.isinf(lo) or np.isinf(hi):
        raise ValueError("positivity interval is unbounded")
    length_sq = _exact_interval_length_sq(s, values)
    eps = _exact_eps(values)
    if length_sq is not None and eps is not None:
        ratio = length_sq / (Fraction(eps) ** 2)
        n, d = ratio.numerator, ratio.denominator
        if d == 1 and isqrt(n) ** 2 == n:
            return isqrt(n), True
        raise QuantizationError(f"|I_rho|/eps = sqrt({ratio}) is not an integer")
    ratio = (hi - lo) / bound.epsilon
    dim = round(ratio)
    if dim < 1 or abs(ratio - dim) > LATTICE_TOL * max(1.0, ratio):
        raise QuantizationError(f"|I_rho|/eps = {ratio!r} is not an integer")
    return dim, False


def _fractional(x: float) -> float:
    f = x - floor(x)
    if f > 1 - LATTICE_TOL:
        f = 0.0
    return f


def _same_mod1(a: float, b: float) -> bool:
    d = (a - b) % 1.0
    return min(d, 1.0 - d) <= LATTICE_TOL


def rep_surface(
    profile: SurfaceProfile,
    values: dict | None = None,
    lam: float | None = None,
    truncation: int = 200,
    sheet: int | None = None,
    factorization: tuple[Callable, Callable] | None = None,
) -> Rep:
    """Ladder representation on the positivity interval of ``profile``.

    Bounded interval: the lattice must fit exactly, giving dim = |I_rho|/eps;
    ``lam`` is found from the lower root unless pinned, in which case it is
    validated.  Half-bounded: ``truncation`` sites from the finite end.
    Unbounded: sites ``-truncation .. truncation``.

    ``factorization = (C, D)`` builds the general-mode representation, with
    callables of the site value ``u = eps (m + lam)`` whose product must be
    ``rho(u)``.
    """
    values = dict(profile.params if values is None else values)
    bound = bind_profile(profile, values)
    eps = bound.epsilon
    if eps <= 0:
        raise ValueError("ladder representations need eps > 0")
    lo, hi = bound.interval(sheet)
    boundary = {"low": ROOT, "high": ROOT}
    if np.isfinite(lo) and np.isfinite(hi):
        dim, _ = quantization_dimension(profile, values, sheet)
        found = _fractional(lo / eps)
        if lam is not None and not _same_mod1(lam, found):
            raise QuantizationError(f"lambda = {lam} puts no lattice point on the lower root {lo}")
        lam = found
        m0 = round(lo / eps - lam)
        ms = np.arange(m0, m0 + dim)
    elif np.isfinite(lo):
        found = _fractional(lo / eps)
        if lam is not None and not _same_mod1(lam, found):
            raise QuantizationError(f"lambda = {lam} puts no lattice point on the lower root {lo}")
        lam = found
        m0 = round(lo / eps - lam)
        ms = np.arange(m0, m0 + truncation)
        boundary["high"] = CUT
    elif np.isfinite(hi):
        found = _fractional(hi / eps)
        if lam is not None and not _same_mod1(lam, found):
            raise QuantizationError(f"lambda = {lam} puts no lattice point on the upper root {hi}")
        lam = found
        top = round(hi / eps - lam) - 1
        ms = np.arange(top - truncation + 1, top + 1)
        boundary["low"] = CUT
    else:
        lam = 0.0 if lam is None else float(lam)
        ms = np.arange(-truncation, truncation + 1)
        boundary = {"low": CUT, "high": CUT}
    lam = float(lam)
    u = eps * (ms + lam)
    rho_vals = np.asarray(bound.rho(u), dtype=float)
    # roots land on the lattice only up to rounding
    if boundary["low"] == ROOT:
        rho_vals[0] = 0.0
    if factorization is None:
        if np.any(rho_vals[1:] < -LATTICE_TOL):
            raise QuantizationError("rho is negative on an interior lattice site")
        d = np.sqrt(np.clip(rho_vals, 0.0, None)).astype(complex)
        raise_amp = np.conj(d[1:])
        lower_amp = d[1:]
        d_low = d[0]
        mode = UNITARY
    else:
        c_fn, d_fn = factorization
        cs = np.array([c_fn(x) for x in u], dtype=complex)
        ds = np.array([d_fn(x) for x in u], dtype=complex)
        raise_amp, lower_amp, d_low = cs[1:], ds[1:], ds[0]
        mode = GENERAL
    return Rep(
        m_values=ms,
        lambda_offset=lam,
        epsilon=eps,
        diag=u,
        raise_amp=raise_amp,
        lower_amp=lower_amp,
        mode=mode,
        boundary=boundary,
        d_low=d_low,
    )


# --------------------------------------------------------------------------
# matrices and diagnostics


def matrix_of(f: NCPoly, rep: Rep, values: dict) -> np.ndarray:
    """Image of ``f`` under the representation (parameters bound by ``values``)."""
    b = numeric_bindings(values)
    xp, x0, xm = rep.matrices()
    n = rep.dim
    pw: dict = {}

    def power(key, base, e):
        if (key, e) not in pw:
            pw[(key, e)] = np.linalg.matrix_power(base, e) if e else np.eye(n, dtype=complex)
        return pw[(key, e)]

    out = np.zeros((n, n), dtype=complex)
    for (a, c, bb), coeff in f.terms().items():
        val = coeff.eval(b)
        out += val * power("+", xp, a) @ power("0", x0, c) @ power("-", xm, bb)
    return out


def relation_matrices(rep, rho: Callable[[np.ndarray], np.ndarray], eps: float) -> dict[str, np.ndarray]:
    """Defining relations evaluated on a Rep or on a triple (X+, X0, X-) with X0 diagonal."""
    xp, x0, xm = rep.matrices() if isinstance(rep, Rep) else rep
    d = np.diag(x0)
    return {
        "[X0,X+]-eps X+": x0 @ xp - xp @ x0 - eps * xp,
        "[X0,X-]+eps X-": x0 @ xm - xm @ x0 + eps * xm,
        "X+X- - rho(X0)": xp @ xm - np.diag(rho(d)),
        "X-X+ - rho(X0+eps)": xm @ xp - np.diag(rho(d + eps)),
    }


def masked_max(mat: np.ndarray, keep: np.ndarray) -> float:
    sub = mat[np.ix_(keep, keep)]
    return float(np.max(np.abs(sub), initial=0.0))


def relation_residual(rep: Rep, profile: SurfaceProfile, values: dict | None = None) -> float:
    """Max entrywise deviation of the four defining relations away from cut ends."""
    bound = bind_profile(profile, values)
    keep = rep.interior_mask()
    return max(masked_max(m, keep) for m in relation_matrices(rep, bound.rho, bound.epsilon).values())


def unitarity_defect(rep: Rep) -> float:
    """max |X+ - X-^dagger| plus the imaginary size of X0."""
    xp, x0, xm = rep.matrices()
    return float(max(np.max(np.abs(xp - xm.conj().T), initial=0.0), np.max(np.abs(x0.imag), initial=0.0)))


def wigner_operator(k, n: int, m: int) -> np.ndarray:
    """Matrix with entries <k, j+m | W | k, j> = CG(k, n, k; j, m, j+m)."""
    kk = Spin.of(k)
    js = kk.projections()
    idx = {j: i for i, j in enumerate(js)}
    w = np.zeros((len(js), len(js)))
    for j in js:
        jp = j + m
        if jp in idx:
            w[idx[jp], idx[j]] = float(cgc(kk.value, n, kk.value, j, m, jp))
    return w


def wigner_operator_check(k, n: int, m: int, values: dict, tol: float = 1e-12) -> CheckReport:
    """matrix_of(P^m_n) against (-1)^n |P^m_n| sqrt(2n+1) times the CG matrix."""
    from .harmonic import build_P, norm_value

    kk = Spin.of(k)
    if n > kk.twice_value:
        raise ValueError(f"need n <= 2k, got n={n}, k={kk}")
    rep = rep_spin(kk, values)
    b = numeric_bindings(values)
    r = b["eps"].real * float(kk.value * (kk.value + 1)) ** 0.5
    bind = {"alpha": b.get("alpha", 1.0), "eps": b["eps"], "R": r}
    lhs = matrix_of(build_P(n, m).body, rep, bind)
    norm = norm_value(n, kk).eval(bind)
    rhs = (-1) ** n * norm * (2 * n + 1) ** 0.5 * wigner_operator(kk, n, m)
    dev = float(np.max(np.abs(lhs - rhs)))
    scale = max(1.0, float(np.max(np.abs(rhs))))
    report = numeric_report("wigner-operator", {"k": str(kk), "n": n, "m": m}, dev / scale, tol)
    report.extra["absolute"] = dev
    return report
