"""Tridiagonal spectra and the three-term recursion of hyperboloid modes."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .rep import UNITARY, Rep


@dataclass(frozen=True)
class Tridiag:
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        if len(self.offdiag) != max(len(self.diag) - 1, 0):
            raise ValueError("offdiag must be one shorter than diag")

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def shifted(self, c: float) -> "Tridiag":
        return Tridiag(self.diag + c, self.offdiag)


def crystal_matrix(rep: Rep) -> Tridiag:
    """H = X0 + X+ + X- in a unitary ladder representation."""
    if rep.mode != UNITARY:
        raise ValueError("the crystal Hamiltonian is symmetric only in a unitary representation")
    off = np.asarray(rep.lower_amp)
    if np.max(np.abs(off.imag), initial=0.0) > 1e-14 * max(1.0, np.max(np.abs(off), initial=0.0)):
        raise ValueError("hopping amplitudes are not real")
    return Tridiag(np.asarray(rep.diag, dtype=float).copy(), off.real.copy())


def eigenvalues(t: Tridiag, tol: float = 1e-13) -> np.ndarray:
    """All eigenvalues in ascending order, each within ``tol * max(1, |H|)``.

    Sturm-sequence bisection started from the Gershgorin interval.
    """
    d = np.asarray(t.diag, dtype=float)
    e = np.asarray(t.offdiag, dtype=float)
    n = len(d)
    if n == 0:
        raise ValueError("empty matrix")
    if n == 1:
        return d.copy()
    radius = np.zeros(n)
    radius[:-1] += np.abs(e)
    radius[1:] += np.abs(e)
    lo = float(np.min(d - radius))
    hi = float(np.max(d + radius))
    scale = max(1.0, abs(lo), abs(hi))
    span = hi - lo
    lo -= 1e-12 * scale + 1e-3 * span
    hi += 1e-12 * scale + 1e-3 * span
    vals = _kernels.bisect(d, e * e, lo, hi, tol * scale)
    return np.sort(vals)


# --------------------------------------------------------------------------
# hyperboloid modes


@dataclass
class ModeSequence:
    """c_n = mantissa_n * 10**log10_scale_n for n = |m| .. N."""

    m: int
    lam: complex
    epsilon: float
    Rhat: float
    n: np.ndarray
    mantissa: np.ndarray
    log10_scale: np.ndarray

    @property
    def mu(self) -> complex:
        return self.lam + self.m * self.epsilon / 2

    def gamma(self, n) -> np.ndarray:
        n = np.asarray(n, dtype=float)
        m, e, r = self.m, self.epsilon, self.Rhat
        return np.sqrt(np.clip((n * n - m * m) * (4 * r * r + e * e * n * n) / (16 * (4 * n * n - 1)), 0, None))

    def log_c(self) -> np.ndarray:
        """Complex natural log of c_n with the phase unwrapped along n."""
        mag = np.log(np.abs(self.mantissa)) + self.log10_scale * math.log(10.0)
        phase = np.unwrap(np.angle(self.mantissa))
        return mag + 1j * phase

    def values(self) -> np.ndarray:
        """c_n as plain complex numbers (may overflow for large scales)."""
        with np.errstate(over="ignore"):
            return self.mantissa * 10.0 ** self.log10_scale

    def recursion_defect(self) -> float:
        """max relative residual of gamma_{n+1} c_{n+1} + i mu c_n + gamma_n c_{n-1} = 0.

        Checked in the scaled frame of each triple so no value overflows.
        """
        g = self.gamma(self.n)
        worst = 0.0
        mant, logs = self.mantissa, self.log10_scale
        for i in range(1, len(self.n) - 1):
            ref = logs[i]
            a = g[i + 1] * mant[i + 1] * 10.0 ** (logs[i + 1] - ref)
            b = 1j * self.mu * mant[i]
            c = g[i] * mant[i - 1] * 10.0 ** (logs[i - 1] - ref)
            size = max(abs(a), abs(b), abs(c), 1e-300)
            worst = max(worst, abs(a + b + c) / size)
        return worst


def cn_sequence(m: int, lam: complex, epsilon: float, Rhat: float, N: int) -> ModeSequence:
    """Forward recursion from c_|m| = 1 with gamma_n = ((n^2-m^2)(4Rhat^2+eps^2 n^2)/(16(4n^2-1)))^(1/2)."""
    if Rhat < 0:
        raise ValueError("Rhat must be nonnegative")
    if N <= abs(m):
        raise ValueError("N must exceed |m|")
    mu = complex(lam) + m * epsilon / 2
    mant, logs = _kernels.cn_loop(m, mu, epsilon, Rhat, N)
    return ModeSequence(m, complex(lam), float(epsilon), float(Rhat), np.arange(abs(m), N + 1), mant, logs)


@dataclass
class ExponentFit:
    a: complex
    stderr: complex
    window: tuple[int, int]
    drift: complex  # coefficient of n: exponential growth rate and phase per step

    def within(self, target: complex, tol: float) -> bool:
        return abs(self.a.real - target.real) <= tol and abs(self.a.imag - target.imag) <= tol


def exponent_estimate(seq: ModeSequence, window: tuple[int, int] | None = None) -> ExponentFit:
    """Fit log c_n = const + drift n + a log n over a trailing window.

    The drift term absorbs a constant phase advance per step (the sequence
    alternates like (+-i)^n) and any geometric growth.  Default window is the
    last decade of n.  Rescaling c by a constant only moves the intercept.
    """
    n = seq.n
    if window is None:
        window = (max(int(n[-1]) // 10, int(n[0]) + 2), int(n[-1]))
    lo, hi = window
    if lo < n[0] or hi > n[-1] or hi - lo < 3:
        raise ValueError(f"window {window} does not fit the sequence n = {n[0]}..{n[-1]}")
    sel = (n >= lo) & (n <= hi)
    nn = n[sel].astype(float)
    y = seq.log_c()[sel]
    design = np.column_stack([np.ones_like(nn), nn, np.log(nn)])
    coef_re, res_re, *_ = np.linalg.lstsq(design, y.real, rcond=None)
    coef_im, res_im, *_ = np.linalg.lstsq(design, y.imag, rcond=None)
    dof = max(len(nn) - 3, 1)
    cov = np.linalg.inv(design.T @ design)
    se_re = math.sqrt(max(float(res_re[0]) if len(res_re) else 0.0, 0.0) / dof * cov[2, 2])
    se_im = math.sqrt(max(float(res_im[0]) if len(res_im) else 0.0, 0.0) / dof * cov[2, 2])
    return ExponentFit(
        a=complex(coef_re[2], coef_im[2]),
        stderr=complex(se_re, se_im),
        window=(lo, hi),
        drift=complex(coef_re[1], coef_im[1]),
    )


BOUNDED, LOG_DIVERGENT, POWER_DIVERGENT = "bounded", "log-divergent", "power-divergent"


@dataclass
class TailReport:
    """Empirical growth class of sum |c_n|^2; not a proof of convergence."""

    classification: str
    decade_ratio: float
    checkpoints: np.ndarray  # n values
    log10_partial_sums: np.ndarray


def tail_partial_sums(seq: ModeSequence) -> TailReport:
    """Classify S(N) = sum_{n<=N} |c_n|^2 by the ratio of its last two decade increments.

    ratio < 0.8: bounded; 0.8 .. 1.25: log-divergent (equal increments per
    decade); > 1.25: power-divergent.
    """
    log_sq = 2 * (np.log10(np.abs(seq.mantissa) + 1e-320) + seq.log10_scale)
    zero = seq.mantissa == 0
    n = seq.n
    top = float(np.max(np.where(zero, -np.inf, log_sq)))
    if not np.isfinite(top):
        return TailReport(BOUNDED, 0.0, n[[-1]], np.array([-np.inf]))
    # partial sums relative to the largest term, so nothing overflows
    rel = np.where(zero, 0.0, 10.0 ** (log_sq - top))
    cum = np.cumsum(rel)
    last = int(n[-1])
    marks = [last // 100, last // 10, last]
    idx = [int(np.searchsorted(n, max(k, int(n[0])), side="right")) - 1 for k in marks]
    s = [cum[i] for i in idx]
    inc_old = s[1] - s[0]
    inc_new = s[2] - s[1]
    if inc_new == 0:
        ratio = 0.0
    elif inc_old == 0:
        ratio = math.inf
    else:
        ratio = inc_new / inc_old
    if ratio < 0.8:
        cls = BOUNDED
    elif ratio <= 1.25:
        cls = LOG_DIVERGENT
    else:
        cls = POWER_DIVERGENT
    with np.errstate(divide="ignore"):
        logs = np.log10(np.array(s)) + top
    return TailReport(cls, float(ratio), n[idx], logs)
