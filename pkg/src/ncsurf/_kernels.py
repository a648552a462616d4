"""Hot numeric loops, compiled with numba when available.

Set ``NCSURF_NUMBA=0`` to force the pure numpy/python versions.  Both
implementations are always importable as ``*_numba`` / ``*_numpy`` so they can
be benchmarked against each other; the unsuffixed names are the active ones.
"""
from __future__ import annotations

import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

NUMBA_AVAILABLE = numba is not None
USE_NUMBA = NUMBA_AVAILABLE and os.environ.get("NCSURF_NUMBA", "1") != "0"

# Rescale the recursion state whenever it leaves [1/BIG, BIG].
BIG = 1e100


def _jit(fn):
    if not NUMBA_AVAILABLE:
        return fn
    return numba.njit(cache=True)(fn)


# --------------------------------------------------------------------------
# three-term recursion of the hyperboloid modes


def _cn_loop(m, mu, eps, rhat, nmax):
    """c_n for n = |m| .. nmax as (mantissa, log10 scale), c_|m| = 1.

    gamma_{n+1} c_{n+1} + i mu c_n + gamma_n c_{n-1} = 0.
    """
    m0 = abs(m)
    size = nmax - m0 + 1
    mant = np.zeros(size, dtype=np.complex128)
    logs = np.zeros(size, dtype=np.float64)
    prev = 0.0 + 0.0j
    cur = 1.0 + 0.0j
    scale = 0.0
    mant[0] = cur
    g_cur = 0.0  # gamma_{|m|} vanishes
    for i in range(1, size):
        n = m0 + i - 1
        g_next = math.sqrt((((n + 1) * (n + 1) - m * m) * (4.0 * rhat * rhat + eps * eps * (n + 1) * (n + 1)))
                           / (16.0 * (4.0 * (n + 1) * (n + 1) - 1.0)))
        nxt = -(1j * mu * cur + g_cur * prev) / g_next
        prev = cur
        cur = nxt
        g_cur = g_next
        a = abs(cur)
        if a > BIG or (a < 1.0 / BIG and a > 0.0):
            s = math.log10(a)
            f = 10.0 ** (-s)
            cur *= f
            prev *= f
            scale += s
        mant[i] = cur
        logs[i] = scale
    return mant, logs


cn_loop_numba = _jit(_cn_loop)


def cn_loop_numpy(m, mu, eps, rhat, nmax):
    """Same recursion with the gamma table built by numpy; the loop itself is sequential."""
    m0 = abs(m)
    n = np.arange(m0, nmax + 1, dtype=float)
    g = np.sqrt(np.clip((n * n - m * m) * (4.0 * rhat * rhat + eps * eps * n * n) / (16.0 * (4.0 * n * n - 1.0)), 0, None))
    size = len(n)
    mant = np.zeros(size, dtype=complex)
    logs = np.zeros(size)
    prev, cur, scale = 0j, 1 + 0j, 0.0
    mant[0] = cur
    imu = 1j * mu
    for i in range(1, size):
        nxt = -(imu * cur + g[i - 1] * prev) / g[i]
        prev, cur = cur, nxt
        a = abs(cur)
        if a > BIG or 0.0 < a < 1.0 / BIG:
            s = math.log10(a)
            f = 10.0 ** (-s)
            cur *= f
            prev *= f
            scale += s
        mant[i] = cur
        logs[i] = scale
    return mant, logs


# --------------------------------------------------------------------------
# symmetric tridiagonal eigenvalues by Sturm bisection


def _sturm_count(d, e2, x):
    """Number of eigenvalues strictly below x."""
    count = 0
    q = d[0] - x
    if q < 0:
        count += 1
    for i in range(1, len(d)):
        if q == 0.0:
            q = 1e-300
        q = d[i] - x - e2[i - 1] / q
        if q < 0:
            count += 1
    return count


_sturm_count_jit = _jit(_sturm_count)


def _bisect_all(d, e2, lo, hi, tol, max_iter):
    n = len(d)
    out = np.empty(n)
    for k in range(n):
        a, b = lo, hi
        for _ in range(max_iter):
            mid = 0.5 * (a + b)
            if mid <= a or mid >= b or b - a <= tol:
                break
            if _sturm_count_jit(d, e2, mid) > k:
                b = mid
            else:
                a = mid
        out[k] = 0.5 * (a + b)
    return out


bisect_numba = _jit(_bisect_all)


def bisect_numpy(d, e2, lo, hi, tol, max_iter):
    """All eigen-indices bisected at once; each sweep is vectorised over indices."""
    n = len(d)
    ks = np.arange(n)
    a = np.full(n, lo)
    b = np.full(n, hi)
    for _ in range(max_iter):
        mid = 0.5 * (a + b)
        if np.all((b - a) <= tol) or np.all((mid <= a) | (mid >= b)):
            break
        q = d[0] - mid
        count = (q < 0).astype(np.int64)
        for i in range(1, n):
            q = np.where(q == 0.0, 1e-300, q)
            q = d[i] - mid - e2[i - 1] / q
            count += q < 0
        go_left = count > ks
        b = np.where(go_left, mid, b)
        a = np.where(go_left, a, mid)
    return 0.5 * (a + b)


# --------------------------------------------------------------------------
# Moebius orbit


def _mobius_orbit(x0, a, b, c, d, steps, pole_tol):
    """x_{i+1} = (a x_i + b)/(c x_i + d).  Returns (orbit, index of a pole hit or -1)."""
    out = np.empty(steps + 1)
    out[0] = x0
    x = x0
    for i in range(steps):
        den = c * x + d
        if abs(den) <= pole_tol * (abs(c * x) + abs(d)):
            out[i + 1:] = np.nan
            return out, i
        x = (a * x + b) / den
        out[i + 1] = x
    return out, -1


mobius_orbit_numba = _jit(_mobius_orbit)
mobius_orbit_numpy = _mobius_orbit


# --------------------------------------------------------------------------
# active dispatch


def cn_loop(m, mu, eps, rhat, nmax):
    fn = cn_loop_numba if USE_NUMBA else cn_loop_numpy
    return fn(int(m), complex(mu), float(eps), float(rhat), int(nmax))


def bisect(d, e2, lo, hi, tol, max_iter=200):
    d = np.ascontiguousarray(d, dtype=np.float64)
    e2 = np.ascontiguousarray(e2, dtype=np.float64)
    fn = bisect_numba if USE_NUMBA else bisect_numpy
    return fn(d, e2, float(lo), float(hi), float(tol), int(max_iter))


def mobius_orbit(x0, a, b, c, d, steps, pole_tol=1e-14):
    fn = mobius_orbit_numba if USE_NUMBA else mobius_orbit_numpy
    return fn(float(x0), float(a), float(b), float(c), float(d), int(steps), float(pole_tol))
