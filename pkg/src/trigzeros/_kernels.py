"""Hot numeric kernels with twin implementations: numba-compiled and pure numpy.

Every kernel exists twice, as ``<name>_np`` (vectorized numpy, always available)
and ``<name>_nb`` (numba ``@njit``, compiled lazily and cached on disk).  The
public, unsuffixed name points at the numba twin when it is usable and at the
numpy twin otherwise.  The numpy path is selected when

* the ``TRIGZEROS_DISABLE_NUMBA`` environment variable is set (non-empty), or
* numba's own ``NUMBA_DISABLE_JIT`` is set, or
* numba cannot be imported.

``BACKEND`` records the active choice ("numba" or "numpy").  Both twins
implement the same recurrences so the results agree to ~1e-12 relative; see
tests/test_kernels.py and benchmarks/compare_backends.py.

Kernel families
---------------
* ``trig_*``     complex Horner evaluation of sum_k (xi_k sin kt + eta_k cos kt)
                 on the unit circle, values and t-derivatives, grids and scalars.
* ``cardinal_*`` truncated sinc cardinal series sum_k sinc(t - pi k) N_k, using
                 the factorization sinc(t - pi k) = (-1)^k sin(t)/(t - pi k)
                 with a Taylor switch near lattice points.
* ``levy_*``     Riemann-Stieltjes sums sum_j [sin(t u_j) dRe_j + cos(t u_j) dIm_j]
                 over midpoint nodes u_j = (2j-1)/(2m), via a Horner recurrence
                 in w = exp(i t / (2m)).
"""

from __future__ import annotations

import os

import numpy as np

_NEAR_LATTICE = 1e-3  # switch to the Taylor form of sinc within this distance of pi*Z

_disabled = bool(os.environ.get("TRIGZEROS_DISABLE_NUMBA")) or bool(
    os.environ.get("NUMBA_DISABLE_JIT")
)
try:
    if _disabled:
        raise ImportError("numba disabled by environment flag")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    njit = None
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


# ----------------------------------------------------------------------------
# trigonometric polynomial kernels (numpy twins)
# ----------------------------------------------------------------------------

def trig_eval_grid_np(xi, eta, s, inv_n, inv_norm, us):
    """X_n(s + u*inv_n) * inv_norm for each u, by complex Horner at e^{it}."""
    t = s + np.asarray(us, dtype=np.float64) * inv_n
    z = np.cos(t) + 1j * np.sin(t)
    n = xi.shape[0]
    c = eta - 1j * xi
    h = np.full(t.shape, c[n - 1], dtype=np.complex128)
    for k in range(n - 2, -1, -1):
        h = h * z + c[k]
    return (h * z).real * inv_norm


def trig_eval_scalar_np(xi, eta, t, inv_norm):
    """Compensated complex Horner at a single point.

    The Horner additions carry a TwoSum error term which is propagated through
    the recurrence and folded back in at the end; product rounding is not
    compensated.  This is the reference scalar evaluation.
    """
    n = xi.shape[0]
    zr = np.cos(t)
    zi = np.sin(t)
    hr = eta[n - 1]
    hi = -xi[n - 1]
    er = 0.0
    ei = 0.0
    for k in range(n - 2, -1, -1):
        pr = hr * zr - hi * zi
        pi = hr * zi + hi * zr
        tr = er * zr - ei * zi
        ei = er * zi + ei * zr
        er = tr
        # TwoSum(pr, eta[k]) and TwoSum(pi, -xi[k])
        hr = pr + eta[k]
        b = hr - pr
        er += (pr - (hr - b)) + (eta[k] - b)
        hi = pi + (-xi[k])
        b = hi - pi
        ei += (pi - (hi - b)) + ((-xi[k]) - b)
    return ((hr + er) * zr - (hi + ei) * zi) * inv_norm


def trig_deriv_grid_np(wxi, weta, s, inv_n, scale, us):
    """d/du of the scaled evaluation; wxi = k*xi, weta = k*eta pre-multiplied."""
    t = s + np.asarray(us, dtype=np.float64) * inv_n
    z = np.cos(t) + 1j * np.sin(t)
    n = wxi.shape[0]
    c = weta - 1j * wxi
    h = np.full(t.shape, c[n - 1], dtype=np.complex128)
    for k in range(n - 2, -1, -1):
        h = h * z + c[k]
    return -(h * z).imag * scale


def trig_deriv_scalar_np(wxi, weta, t, scale):
    n = wxi.shape[0]
    zr = np.cos(t)
    zi = np.sin(t)
    hr = weta[n - 1]
    hi = -wxi[n - 1]
    for k in range(n - 2, -1, -1):
        tr = hr * zr - hi * zi + weta[k]
        hi = hr * zi + hi * zr - wxi[k]
        hr = tr
    return -(hr * zi + hi * zr) * scale


# ----------------------------------------------------------------------------
# cardinal series kernels (numpy twins)
# ----------------------------------------------------------------------------

def _sinc_taylor(x):
    return 1.0 - x * x / 6.0 + x * x * x * x / 120.0


def _dsinc_taylor(x):
    return -x / 3.0 + x * x * x / 30.0


def cardinal_eval_grid_np(m_signed, ts):
    """sum_k sinc(t - pi k) N_k with m_signed[k+K] = (-1)^k N_k."""
    K = (m_signed.shape[0] - 1) // 2
    ts = np.asarray(ts, dtype=np.float64)
    out = np.empty(ts.shape, dtype=np.float64)
    ks = np.pi * np.arange(-K, K + 1)
    for lo in range(0, ts.shape[0], 4096):
        t = ts[lo:lo + 4096]
        x = t[:, None] - ks[None, :]
        kk = np.rint(t / np.pi).astype(np.int64)
        near = (np.abs(t - np.pi * kk) < _NEAR_LATTICE) & (np.abs(kk) <= K)
        rows = np.nonzero(near)[0]
        cols = kk[rows] + K
        xsafe = x.copy()
        xsafe[rows, cols] = 1.0
        contrib = m_signed[None, :] / xsafe
        contrib[rows, cols] = 0.0
        vals = np.sin(t) * contrib.sum(axis=1)
        if rows.size:
            xj = t[rows] - np.pi * kk[rows]
            sign = np.where(kk[rows] % 2 == 0, 1.0, -1.0)
            vals[rows] += sign * m_signed[cols] * _sinc_taylor(xj)
        out[lo:lo + 4096] = vals
    return out


def cardinal_eval_scalar_np(m_signed, t):
    return cardinal_eval_grid_np(m_signed, np.array([t]))[0]


def cardinal_deriv_grid_np(m_signed, ts):
    """Termwise derivative: cos(t)*sum M_k/x_k - sin(t)*sum M_k/x_k^2."""
    K = (m_signed.shape[0] - 1) // 2
    ts = np.asarray(ts, dtype=np.float64)
    out = np.empty(ts.shape, dtype=np.float64)
    ks = np.pi * np.arange(-K, K + 1)
    for lo in range(0, ts.shape[0], 4096):
        t = ts[lo:lo + 4096]
        x = t[:, None] - ks[None, :]
        kk = np.rint(t / np.pi).astype(np.int64)
        near = (np.abs(t - np.pi * kk) < _NEAR_LATTICE) & (np.abs(kk) <= K)
        rows = np.nonzero(near)[0]
        cols = kk[rows] + K
        xsafe = x.copy()
        xsafe[rows, cols] = 1.0
        inv = m_signed[None, :] / xsafe
        inv[rows, cols] = 0.0
        inv2 = inv / xsafe
        vals = np.cos(t) * inv.sum(axis=1) - np.sin(t) * inv2.sum(axis=1)
        if rows.size:
            xj = t[rows] - np.pi * kk[rows]
            sign = np.where(kk[rows] % 2 == 0, 1.0, -1.0)
            vals[rows] += sign * m_signed[cols] * _dsinc_taylor(xj)
        out[lo:lo + 4096] = vals
    return out


def cardinal_deriv_scalar_np(m_signed, t):
    return cardinal_deriv_grid_np(m_signed, np.array([t]))[0]


# ----------------------------------------------------------------------------
# Levy / Brownian stochastic-integral kernels (numpy twins)
# ----------------------------------------------------------------------------

def levy_eval_grid_np(dre, dim, ts):
    """Im sum_j e^{i t u_j} dL_j over midpoints u_j = (2j-1)/(2m)."""
    m = dre.shape[0]
    ts = np.asarray(ts, dtype=np.float64)
    inv2m = 1.0 / (2.0 * m)
    w = np.cos(ts * inv2m) + 1j * np.sin(ts * inv2m)
    W = w * w
    c = dre + 1j * dim
    h = np.full(ts.shape, c[m - 1], dtype=np.complex128)
    for j in range(m - 2, -1, -1):
        h = h * W + c[j]
    return (w * h).imag


def levy_eval_scalar_np(dre, dim, t):
    return levy_eval_grid_np(dre, dim, np.array([t]))[0]


def levy_deriv_grid_np(udre, udim, ts):
    """Re sum_j u_j e^{i t u_j} dL_j; coefficients pre-multiplied by u_j."""
    m = udre.shape[0]
    ts = np.asarray(ts, dtype=np.float64)
    inv2m = 1.0 / (2.0 * m)
    w = np.cos(ts * inv2m) + 1j * np.sin(ts * inv2m)
    W = w * w
    c = udre + 1j * udim
    h = np.full(ts.shape, c[m - 1], dtype=np.complex128)
    for j in range(m - 2, -1, -1):
        h = h * W + c[j]
    return (w * h).real


def levy_deriv_scalar_np(udre, udim, t):
    return levy_deriv_grid_np(udre, udim, np.array([t]))[0]


# ----------------------------------------------------------------------------
# numba twins
# ----------------------------------------------------------------------------

if HAVE_NUMBA:
    _jit = njit(cache=True, nogil=True)

    @_jit
    def trig_eval_grid_nb(xi, eta, s, inv_n, inv_norm, us):
        n = xi.shape[0]
        out = np.empty(us.shape[0], dtype=np.float64)
        for j in range(us.shape[0]):
            t = s + us[j] * inv_n
            zr = np.cos(t)
            zi = np.sin(t)
            hr = eta[n - 1]
            hi = -xi[n - 1]
            for k in range(n - 2, -1, -1):
                tr = hr * zr - hi * zi + eta[k]
                hi = hr * zi + hi * zr - xi[k]
                hr = tr
            out[j] = (hr * zr - hi * zi) * inv_norm
        return out

    @_jit
    def trig_eval_scalar_nb(xi, eta, t, inv_norm):
        n = xi.shape[0]
        zr = np.cos(t)
        zi = np.sin(t)
        hr = eta[n - 1]
        hi = -xi[n - 1]
        er = 0.0
        ei = 0.0
        for k in range(n - 2, -1, -1):
            pr = hr * zr - hi * zi
            pi = hr * zi + hi * zr
            tr = er * zr - ei * zi
            ei = er * zi + ei * zr
            er = tr
            hr = pr + eta[k]
            b = hr - pr
            er += (pr - (hr - b)) + (eta[k] - b)
            hi = pi + (-xi[k])
            b = hi - pi
            ei += (pi - (hi - b)) + ((-xi[k]) - b)
        return ((hr + er) * zr - (hi + ei) * zi) * inv_norm

    @_jit
    def trig_deriv_grid_nb(wxi, weta, s, inv_n, scale, us):
        n = wxi.shape[0]
        out = np.empty(us.shape[0], dtype=np.float64)
        for j in range(us.shape[0]):
            t = s + us[j] * inv_n
            zr = np.cos(t)
            zi = np.sin(t)
            hr = weta[n - 1]
            hi = -wxi[n - 1]
            for k in range(n - 2, -1, -1):
                tr = hr * zr - hi * zi + weta[k]
                hi = hr * zi + hi * zr - wxi[k]
                hr = tr
            out[j] = -(hr * zi + hi * zr) * scale
        return out

    @_jit
    def trig_deriv_scalar_nb(wxi, weta, t, scale):
        n = wxi.shape[0]
        zr = np.cos(t)
        zi = np.sin(t)
        hr = weta[n - 1]
        hi = -wxi[n - 1]
        for k in range(n - 2, -1, -1):
            tr = hr * zr - hi * zi + weta[k]
            hi = hr * zi + hi * zr - wxi[k]
            hr = tr
        return -(hr * zi + hi * zr) * scale

    @_jit
    def _cardinal_point_nb(m_signed, K, t):
        kk = int(np.rint(t / np.pi))
        near = (abs(t - np.pi * kk) < _NEAR_LATTICE) and (abs(kk) <= K)
        acc = 0.0
        for k in range(-K, K + 1):
            if near and k == kk:
                continue
            acc += m_signed[k + K] / (t - np.pi * k)
        val = np.sin(t) * acc
        if near:
            x = t - np.pi * kk
            sign = 1.0 if kk % 2 == 0 else -1.0
            val += sign * m_signed[kk + K] * (1.0 - x * x / 6.0 + x * x * x * x / 120.0)
        return val

    @_jit
    def cardinal_eval_grid_nb(m_signed, ts):
        K = (m_signed.shape[0] - 1) // 2
        out = np.empty(ts.shape[0], dtype=np.float64)
        for j in range(ts.shape[0]):
            out[j] = _cardinal_point_nb(m_signed, K, ts[j])
        return out

    @_jit
    def cardinal_eval_scalar_nb(m_signed, t):
        K = (m_signed.shape[0] - 1) // 2
        return _cardinal_point_nb(m_signed, K, t)

    @_jit
    def _cardinal_dpoint_nb(m_signed, K, t):
        kk = int(np.rint(t / np.pi))
        near = (abs(t - np.pi * kk) < _NEAR_LATTICE) and (abs(kk) <= K)
        acc1 = 0.0
        acc2 = 0.0
        for k in range(-K, K + 1):
            if near and k == kk:
                continue
            x = t - np.pi * k
            r = m_signed[k + K] / x
            acc1 += r
            acc2 += r / x
        val = np.cos(t) * acc1 - np.sin(t) * acc2
        if near:
            x = t - np.pi * kk
            sign = 1.0 if kk % 2 == 0 else -1.0
            val += sign * m_signed[kk + K] * (-x / 3.0 + x * x * x / 30.0)
        return val

    @_jit
    def cardinal_deriv_grid_nb(m_signed, ts):
        K = (m_signed.shape[0] - 1) // 2
        out = np.empty(ts.shape[0], dtype=np.float64)
        for j in range(ts.shape[0]):
            out[j] = _cardinal_dpoint_nb(m_signed, K, ts[j])
        return out

    @_jit
    def cardinal_deriv_scalar_nb(m_signed, t):
        K = (m_signed.shape[0] - 1) // 2
        return _cardinal_dpoint_nb(m_signed, K, t)

    @_jit
    def levy_eval_grid_nb(dre, dim, ts):
        m = dre.shape[0]
        inv2m = 1.0 / (2.0 * m)
        out = np.empty(ts.shape[0], dtype=np.float64)
        for j in range(ts.shape[0]):
            t = ts[j]
            wr = np.cos(t * inv2m)
            wi = np.sin(t * inv2m)
            Wr = wr * wr - wi * wi
            Wi = 2.0 * wr * wi
            hr = dre[m - 1]
            hi = dim[m - 1]
            for k in range(m - 2, -1, -1):
                tr = hr * Wr - hi * Wi + dre[k]
                hi = hr * Wi + hi * Wr + dim[k]
                hr = tr
            out[j] = wr * hi + wi * hr
        return out

    @_jit
    def levy_eval_scalar_nb(dre, dim, t):
        m = dre.shape[0]
        inv2m = 1.0 / (2.0 * m)
        wr = np.cos(t * inv2m)
        wi = np.sin(t * inv2m)
        Wr = wr * wr - wi * wi
        Wi = 2.0 * wr * wi
        hr = dre[m - 1]
        hi = dim[m - 1]
        for k in range(m - 2, -1, -1):
            tr = hr * Wr - hi * Wi + dre[k]
            hi = hr * Wi + hi * Wr + dim[k]
            hr = tr
        return wr * hi + wi * hr

    @_jit
    def levy_deriv_grid_nb(udre, udim, ts):
        m = udre.shape[0]
        inv2m = 1.0 / (2.0 * m)
        out = np.empty(ts.shape[0], dtype=np.float64)
        for j in range(ts.shape[0]):
            t = ts[j]
            wr = np.cos(t * inv2m)
            wi = np.sin(t * inv2m)
            Wr = wr * wr - wi * wi
            Wi = 2.0 * wr * wi
            hr = udre[m - 1]
            hi = udim[m - 1]
            for k in range(m - 2, -1, -1):
                tr = hr * Wr - hi * Wi + udre[k]
                hi = hr * Wi + hi * Wr + udim[k]
                hr = tr
            out[j] = wr * hr - wi * hi
        return out

    @_jit
    def levy_deriv_scalar_nb(udre, udim, t):
        m = udre.shape[0]
        inv2m = 1.0 / (2.0 * m)
        wr = np.cos(t * inv2m)
        wi = np.sin(t * inv2m)
        Wr = wr * wr - wi * wi
        Wi = 2.0 * wr * wi
        hr = udre[m - 1]
        hi = udim[m - 1]
        for k in range(m - 2, -1, -1):
            tr = hr * Wr - hi * Wi + udre[k]
            hi = hr * Wi + hi * Wr + udim[k]
            hr = tr
        return wr * hr - wi * hi

    trig_eval_grid = trig_eval_grid_nb
    trig_eval_scalar = trig_eval_scalar_nb
    trig_deriv_grid = trig_deriv_grid_nb
    trig_deriv_scalar = trig_deriv_scalar_nb
    cardinal_eval_grid = cardinal_eval_grid_nb
    cardinal_eval_scalar = cardinal_eval_scalar_nb
    cardinal_deriv_grid = cardinal_deriv_grid_nb
    cardinal_deriv_scalar = cardinal_deriv_scalar_nb
    levy_eval_grid = levy_eval_grid_nb
    levy_eval_scalar = levy_eval_scalar_nb
    levy_deriv_grid = levy_deriv_grid_nb
    levy_deriv_scalar = levy_deriv_scalar_nb
else:
    trig_eval_grid = trig_eval_grid_np
    trig_eval_scalar = trig_eval_scalar_np
    trig_deriv_grid = trig_deriv_grid_np
    trig_deriv_scalar = trig_deriv_scalar_np
    cardinal_eval_grid = cardinal_eval_grid_np
    cardinal_eval_scalar = cardinal_eval_scalar_np
    cardinal_deriv_grid = cardinal_deriv_grid_np
    cardinal_deriv_scalar = cardinal_deriv_scalar_np
    levy_eval_grid = levy_eval_grid_np
    levy_eval_scalar = levy_eval_scalar_np
    levy_deriv_grid = levy_deriv_grid_np
    levy_deriv_scalar = levy_deriv_scalar_np
