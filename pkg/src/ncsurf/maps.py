"""Profile library, homomorphisms between surfaces, and the stereographic picture."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from . import _kernels
from .ncalg import (
    BoundProfile,
    SurfaceProfile,
    UnsupportedProfile,
    bind_profile,
    normalize_values,
    paraboloid_profile,
    sphere_profile,
)
from .rep import CUT, ROOT, Rep, masked_max, relation_matrices
from .scalars import DEFAULT_PARAMS

BUILTINS = ("sphere-family", "paraboloid", "q-sphere")


class SingularMapping(ArithmeticError):
    """A map hit a pole on the spectrum it is applied to."""


# --------------------------------------------------------------------------
# profiles


def qsphere_rho(kappa: float, eps: float, r_sq: float, c: float = 0.0, kernel: str = "corrected") -> Callable[[float], float]:
    """rho_q(u) = -cosh(2 kappa u - eps kappa)/(2 sinh^2 kappa) + 1/(2 kappa^2) + R^2 + eps^2/4 - 1/6 + C.

    ``kernel="literal"`` swaps in ``+cosh(3 kappa u - eps kappa)`` for the first
    term; it is kept only to show that it fails the commutator and small-kappa
    checks.
    """
    if kappa == 0:
        raise ValueError("kappa = 0 is the undeformed sphere; use the sphere-family profile")
    s2 = 2.0 * math.sinh(kappa) ** 2
    const = 1.0 / (2.0 * kappa * kappa) + r_sq + eps * eps / 4.0 - 1.0 / 6.0 + c
    if kernel == "corrected":
        def rho(u):
            return -np.cosh(2.0 * kappa * u - eps * kappa) / s2 + const
    elif kernel == "literal":
        def rho(u):
            return np.cosh(3.0 * kappa * u - eps * kappa) / s2 + const
    else:
        raise ValueError(f"unknown q-sphere kernel {kernel!r}")
    return rho


def profile_builtin(name: str, params: dict | None = None) -> SurfaceProfile:
    """One of the built-in profiles with its parameter values attached.

    sphere-family needs alpha_sq, R_sq, eps; paraboloid needs eps; q-sphere
    needs kappa, R_sq, eps and optionally C (default 0) and kernel.
    """
    params = normalize_values(dict(params or {}))
    if name == "sphere-family":
        _require(name, params, ("alpha_sq", "R_sq", "eps"))
        s = sphere_profile(DEFAULT_PARAMS)
    elif name == "paraboloid":
        _require(name, params, ("eps",))
        s = paraboloid_profile(DEFAULT_PARAMS)
    elif name == "q-sphere":
        _require(name, params, ("kappa", "R_sq", "eps"))
        kappa = float(params["kappa"])
        eps = float(params["eps"])
        rho = qsphere_rho(kappa, eps, float(params["R_sq"]), float(params.get("C", 0)), params.get("kernel", "corrected"))
        s = SurfaceProfile(kind="numeric", epsilon=eps, numeric_fn=rho, name=name)
        params.setdefault("center", eps / 2)
    else:
        raise ValueError(f"unknown builtin profile {name!r}; choose from {', '.join(BUILTINS)}")
    s.name = name
    s.params = params
    return s


def _require(name: str, params: dict, keys: tuple[str, ...]):
    missing = [k for k in keys if k not in params]
    if missing:
        raise ValueError(f"{name} needs parameter(s): {', '.join(missing)}")


def positivity_interval(profile: SurfaceProfile, values: dict | None = None, sheet: int | None = None) -> tuple[float, float]:
    return bind_profile(profile, values).interval(sheet)


# --------------------------------------------------------------------------
# homomorphisms


@dataclass
class HomSpec:
    """X0 -> r Y0 + lam, X+ -> sigma_plus(Y0) Y+, X- -> Y- sigma_minus(Y0), r = eps1/eps2.

    Valid when rho1(r u + lam) = rho2(u) sigma_plus(u) sigma_minus(u).
    """

    sigma_plus: Callable[[np.ndarray], np.ndarray]
    sigma_minus: Callable[[np.ndarray], np.ndarray]
    lambda_shift: float
    source_profile: SurfaceProfile
    target_profile: SurfaceProfile
    epsilon_ratio: float = 1.0
    source_values: dict | None = None
    target_values: dict | None = None
    poles: tuple[float, ...] = field(default_factory=tuple)

    def source(self) -> BoundProfile:
        return bind_profile(self.source_profile, self.source_values)

    def target(self) -> BoundProfile:
        return bind_profile(self.target_profile, self.target_values)

    def factorization_defect(self, grid: np.ndarray) -> float:
        u = np.asarray(grid, dtype=float)
        lhs = self.source().rho(self.epsilon_ratio * u + self.lambda_shift)
        rhs = self.target().rho(u) * self.sigma_plus(u) * self.sigma_minus(u)
        scale = np.maximum(1.0, np.abs(lhs))
        return float(np.max(np.abs(lhs - rhs) / scale))

    def conjugation_defect(self, grid: np.ndarray) -> float:
        """max |conj(sigma_plus) - sigma_minus| on real points, plus |Im lam|."""
        u = np.asarray(grid, dtype=float)
        gap = np.abs(np.conj(self.sigma_plus(u)) - self.sigma_minus(u))
        return float(np.max(gap, initial=0.0) + abs(complex(self.lambda_shift).imag))


@dataclass
class HomImage:
    x_plus: np.ndarray
    x_zero: np.ndarray
    x_minus: np.ndarray
    residual: float


def hom_apply(spec: HomSpec, rep_y: Rep) -> HomImage:
    """Images of X0, X+, X- as matrices in a representation of the target."""
    y_plus, y_zero, y_minus = rep_y.matrices()
    u = rep_y.diag.real
    for p in spec.poles:
        if np.any(np.isclose(u, p, rtol=0, atol=1e-12)):
            raise SingularMapping(f"sigma has a pole at {p}, which lies on the spectrum")
    sp = np.asarray(spec.sigma_plus(u), dtype=complex)
    sm = np.asarray(spec.sigma_minus(u), dtype=complex)
    if not (np.all(np.isfinite(sp)) and np.all(np.isfinite(sm))):
        raise SingularMapping("sigma is not finite on the spectrum of Y0")
    x0 = np.diag(spec.epsilon_ratio * u + spec.lambda_shift).astype(complex)
    xp = np.diag(sp) @ y_plus
    xm = y_minus @ np.diag(sm)
    src = spec.source()
    rels = relation_matrices((xp, x0, xm), src.rho, src.epsilon)
    keep = rep_y.interior_mask()
    residual = max(masked_max(m, keep) for m in rels.values())
    return HomImage(xp, x0, xm, residual)


def holstein_primakoff(k: int, eps: float = 1.0) -> HomSpec:
    """Spin-k sphere (alpha = 1) inside the paraboloid algebra.

    rho_sphere(u - eps k) = u ((2k+1) eps - u), so sigma_plus = sigma_minus =
    sqrt((2k+1) eps - u) on the boson lattice.
    """
    r_sq = eps * eps * k * (k + 1)
    top = (2 * k + 1) * eps

    def sigma(u):
        return np.sqrt(np.asarray(top - u, dtype=complex))

    return HomSpec(
        sigma_plus=sigma,
        sigma_minus=sigma,
        lambda_shift=-eps * k,
        source_profile=profile_builtin("sphere-family", {"alpha_sq": 1, "R_sq": r_sq, "eps": eps}),
        target_profile=profile_builtin("paraboloid", {"eps": eps}),
    )


def rescaling_hom(profile: SurfaceProfile, values: dict, scale: float) -> HomSpec:
    """Sphere-family into itself with alpha^2 divided by scale^2.

    rho1(u) = scale^2 rho2(u), so the constant sigma_plus = sigma_minus = scale
    works and preserves conjugation.
    """
    vals = normalize_values(values)
    target_vals = dict(vals)
    target_vals["alpha_sq"] = float(vals["alpha_sq"]) / (scale * scale)
    return HomSpec(
        sigma_plus=lambda u: np.full(np.shape(u), scale, dtype=complex),
        sigma_minus=lambda u: np.full(np.shape(u), scale, dtype=complex),
        lambda_shift=0.0,
        source_profile=profile,
        target_profile=profile,
        source_values=vals,
        target_values=target_vals,
    )


def topology_ratios(spec: HomSpec) -> tuple[float, float]:
    """(|I_rho1|/eps1, |I_rho2|/eps2), each endpoint located by bracketing root search."""
    out = []
    for bound in (spec.source(), spec.target()):
        lo, hi = bound.interval()
        if not (np.isfinite(lo) and np.isfinite(hi)):
            raise ValueError("topology ratio needs bounded positivity intervals")
        mid = 0.5 * (lo + hi)
        width = hi - lo
        a = brentq(bound.rho, lo - 0.25 * width, mid, xtol=1e-15)
        b = brentq(bound.rho, mid, hi + 0.25 * width, xtol=1e-15)
        out.append((b - a) / bound.epsilon)
    return out[0], out[1]


# --------------------------------------------------------------------------
# Moebius recursion and stereographic projection


@dataclass(frozen=True)
class MobiusParams:
    epsilon: float
    Rhat: float
    alpha_sq: float

    def __post_init__(self):
        if not self.Rhat > 0:
            raise ValueError("Rhat must be positive")

    @classmethod
    def from_surface(cls, alpha_sq: float, r_sq: float, epsilon: float) -> "MobiusParams":
        rhat_sq = r_sq + epsilon * epsilon / 4
        if rhat_sq <= 0:
            raise ValueError("R^2 + eps^2/4 must be positive")
        return cls(epsilon, math.sqrt(rhat_sq), alpha_sq)

    def coefficients(self) -> tuple[float, float, float, float]:
        """(a, b, c, d) with y = (a x + b)/(c x + d)."""
        e, r, a2 = self.epsilon, self.Rhat, self.alpha_sq
        return 1 + e / (2 * r), 2 * e * r / a2, -e * a2 / (8 * r ** 3), 1 - e / (2 * r)

    def pole(self) -> float:
        """x at which 4 Rhat^2 + alpha^2 x vanishes."""
        return -4 * self.Rhat ** 2 / self.alpha_sq


def mobius_step(x: float, p: MobiusParams) -> float:
    """y from x = z-z+ through x - y = -eps/(8 Rhat^3 alpha^2) (4Rhat^2 + alpha^2 x)(4Rhat^2 + alpha^2 y)."""
    a, b, c, d = p.coefficients()
    den = c * x + d
    if den == 0:
        raise SingularMapping(f"Moebius denominator vanishes at x = {x}")
    return (a * x + b) / den


def mobius_inverse(y: float, p: MobiusParams) -> float:
    a, b, c, d = p.coefficients()
    den = -c * y + a
    if den == 0:
        raise SingularMapping(f"inverse Moebius denominator vanishes at y = {y}")
    return (d * y - b) / den


def cross_relation_defect(x: float, y: float, p: MobiusParams) -> float:
    r, a2 = p.Rhat, p.alpha_sq
    rhs = -p.epsilon / (8 * r ** 3 * a2) * (4 * r * r + a2 * x) * (4 * r * r + a2 * y)
    return abs((x - y) - rhs) / max(1.0, abs(x), abs(y))


def stereo_functions(x, p: MobiusParams):
    """(J0, f) with J0 = Rhat (4Rhat^2 - a2 x)/(4Rhat^2 + a2 x) - eps/2 and f = 4Rhat^2 a2/(4Rhat^2 + a2 x)."""
    r, a2 = p.Rhat, p.alpha_sq
    den = 4 * r * r + a2 * np.asarray(x)
    return r * (4 * r * r - a2 * np.asarray(x)) / den - p.epsilon / 2, 4 * r * r * a2 / den


def classical_stereographic(z, alpha_sq: float, R: float):
    """Inverse stereographic projection written through zeta = z/(2R).

    Sphere (alpha_sq = 1): (Z, X + iY) = R((1 - |zeta|^2), 2 zeta)/(1 + |zeta|^2);
    hyperboloid (alpha_sq = -1): R((1 + |zeta|^2), 2 zeta)/(1 - |zeta|^2).
    """
    zeta = np.asarray(z) / (2 * R)
    a = np.abs(zeta) ** 2
    if alpha_sq > 0:
        return R * (1 - a) / (1 + a), 2 * R * zeta / (1 + a)
    return R * (1 + a) / (1 - a), 2 * R * zeta / (1 - a)


@dataclass
class StereoResult:
    x: np.ndarray
    j_plus: np.ndarray
    j_zero: np.ndarray
    j_minus: np.ndarray
    relation_residual: float
    casimir_residual: float
    spacing_defect: float
    reversibility_defect: float
    boundary: dict


def stereo_rep(alpha_sq: float, r_sq: float, epsilon: float, truncation: int = 400) -> StereoResult:
    """Weighted-shift realization of z+- and the images of J0, J+, J-.

    J0 = g(x), J+ = i f(y) z+ = i z+ f(x), J- = -i z- f(y) = -i f(x) z-, with
    g, f from :func:`stereo_functions`, x = z-z+ and y = z+z-.  On site m,
    y_m = x_{m-1}, and the Moebius map gives x_{m-1} = M(x_m).  For alpha_sq > 0 the orbit starts from x = 0 at the top
    site (J+ annihilates it) and runs downwards; for alpha_sq < 0 it starts
    from y = 0 at the bottom site and runs upwards.  Weights are principal
    square roots, so past a pole-free turning point the realization need not
    be unitary; the relations are algebraic and hold regardless.
    """
    if truncation < 4:
        raise ValueError("truncation must be at least 4")
    p = MobiusParams.from_surface(alpha_sq, r_sq, epsilon)
    a, b, c, d = p.coefficients()
    n = truncation
    if alpha_sq > 0:
        # x_top = 0, then x_{m-1} = M(x_m); store ascending in m
        orbit, hit = _kernels.mobius_orbit(0.0, a, b, c, d, n)
        if hit >= 0 and hit < n:
            raise SingularMapping(f"Moebius orbit reaches the pole after {hit} steps")
        x = orbit[:n][::-1].copy()
        y = orbit[1:n + 1][::-1].copy()
        back, _ = _kernels.mobius_orbit(x[0], d, -b, -c, a, n - 1)
        boundary = {"low": CUT, "high": ROOT}
    else:
        # y_bottom = x_{bottom-1} = 0, then x_m = M^{-1}(x_{m-1})
        orbit, hit = _kernels.mobius_orbit(0.0, d, -b, -c, a, n)
        if hit >= 0 and hit < n:
            raise SingularMapping(f"inverse Moebius orbit reaches the pole after {hit} steps")
        y = orbit[:n].copy()
        x = orbit[1:n + 1].copy()
        back, _ = _kernels.mobius_orbit(x[-1], a, b, c, d, n - 1)
        back = back[::-1]
        boundary = {"low": ROOT, "high": CUT}
    if np.any(np.isclose(4 * p.Rhat ** 2 + alpha_sq * x, 0.0, atol=1e-300)):
        raise SingularMapping("projection denominator vanishes on the orbit")
    w = np.sqrt(y.astype(complex))  # z- on site m has weight sqrt(y_m)
    j0_vals, _ = stereo_functions(x, p)
    # reversibility is measured on J0, the coordinate in which M is a shift by eps
    reversibility = float(np.max(np.abs(stereo_functions(back, p)[0] - j0_vals)))
    _, f_y = stereo_functions(y, p)
    # z+|m> = w_{m+1}|m+1>, z-|m> = w_m|m-1>
    zp = np.zeros((n, n), complex)
    zm = np.zeros((n, n), complex)
    idx = np.arange(n - 1)
    zp[idx + 1, idx] = w[1:]
    zm[idx, idx + 1] = w[1:]
    # the weight function takes z+z- (= y) next to z+ on its left, i.e. z+ f(x)
    fy = np.diag(f_y.astype(complex))
    jp = 1j * fy @ zp
    jm = -1j * zm @ fy
    j0 = np.diag(j0_vals.astype(complex))
    bound = bind_profile(sphere_profile(DEFAULT_PARAMS), {"alpha_sq": alpha_sq, "R_sq": r_sq, "eps": epsilon})
    keep = np.ones(n, bool)
    keep[0 if boundary["low"] == CUT else -1] = False
    rels = relation_matrices((jp, j0, jm), bound.rho, epsilon)
    residual = max(masked_max(m, keep) for m in rels.values())
    casimir = j0 @ j0 + (jp @ jm + jm @ jp) / (2 * alpha_sq) - r_sq * np.eye(n)
    cas = masked_max(casimir, keep)
    spacing = float(np.max(np.abs(np.diff(j0_vals) - epsilon)))
    return StereoResult(x, jp, j0, jm, residual, cas, spacing, reversibility, boundary)


# --------------------------------------------------------------------------
# noncommutative complex plane


def monotone_branches(bound: BoundProfile, sheet: int | None = None) -> list[tuple[float, float]]:
    """Split the positivity interval at critical points of rho."""
    lo, hi = bound.interval(sheet)
    crit: list[float] = []
    if bound.coeffs is not None:
        deriv = np.polynomial.polynomial.polyder(bound.coeffs)
        if len(deriv):
            for r in np.roots(deriv[::-1]):
                if abs(r.imag) < 1e-12 and lo < r.real < hi:
                    crit.append(float(r.real))
    else:
        a = lo if np.isfinite(lo) else -50.0
        b = hi if np.isfinite(hi) else 50.0
        grid = np.linspace(a, b, 4001)
        slope = np.sign(np.diff(bound.rho(grid)))
        for i in np.nonzero(slope[1:] != slope[:-1])[0]:
            crit.append(float(grid[i + 1]))
    edges = [lo] + sorted(crit) + [hi]
    return list(zip(edges[:-1], edges[1:]))


def tau_check(profile: SurfaceProfile, rep: Rep, values: dict | None = None, branch: int | None = None) -> float:
    """With z+- = X+-, check tau(z-z+) - tau(z+z-) = eps and X0 = tau(z+z-), tau = rho^{-1}.

    ``rho`` must be monotone on the part of I_rho in use; when it is not,
    ``branch`` picks a monotone piece and only sites whose values u and
    u + eps both lie on it are compared.
    """
    bound = bind_profile(profile, values)
    branches = monotone_branches(bound)
    if len(branches) > 1 and branch is None:
        raise UnsupportedProfile("rho is not monotone on I_rho; pick a monotone branch")
    lo, hi = branches[0 if branch is None else branch]
    xp, x0, xm = rep.matrices()
    u = rep.diag.real
    eps = bound.epsilon
    keep = rep.interior_mask() & (u >= lo - 1e-12) & (u + eps <= hi + 1e-12)
    if not keep.any():
        raise ValueError("no lattice site lies on the chosen branch")
    v_low = np.real(np.diag(xp @ xm))
    v_high = np.real(np.diag(xm @ xp))
    rho = bound.rho
    b_hi = hi if np.isfinite(hi) else max(u.max() + 10 * eps, lo + 1.0)
    b_lo = lo if np.isfinite(lo) else min(u.min() - 10 * eps, hi - 1.0)

    def tau(v):
        if abs(v - rho(b_lo)) <= 1e-13 * max(1.0, abs(v)):
            return b_lo
        if abs(v - rho(b_hi)) <= 1e-13 * max(1.0, abs(v)):
            return b_hi
        return brentq(lambda t: rho(t) - v, b_lo, b_hi, xtol=1e-15, maxiter=500)

    dev = 0.0
    for i in np.nonzero(keep)[0]:
        t_low = tau(v_low[i])
        t_high = tau(v_high[i])
        scale = max(1.0, abs(u[i]))
        dev = max(dev, abs(t_high - t_low - eps) / scale, abs(t_low - u[i]) / scale)
    return dev
