"""Hot inner loops: transfer-matrix sweeps and the Schur recursion.

Every kernel exists in two semantically identical forms:

* a loop form compiled with ``numba.njit`` (the default when numba imports),
* a vectorised pure-numpy form.

Setting the environment variable ``NLFT_PURE_NUMPY=1`` before import forces
the numpy path; it is also taken automatically when numba is unavailable.
``benchmarks/kernel_bench.py`` times both paths side by side.

Grid kernels take a precomputed table ``roots[m] = exp(2*pi*i*m/g)`` and
address powers as ``z_k**n = roots[(k*n) % g]``, which is exact (no phase
drift over long sweeps).
"""

from __future__ import annotations

import math
import os

import numpy as np

_SCHUR_EXTREMAL_TOL = 1e-13


def _env_flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() not in ("", "0", "false", "no")


FORCE_NUMPY = _env_flag("NLFT_PURE_NUMPY")

try:
    if FORCE_NUMPY:
        raise ImportError("numpy path forced via NLFT_PURE_NUMPY")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    njit = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not FORCE_NUMPY


# ---------------------------------------------------------------------------
# transfer product, coefficient level
#
# Renormalised transfer step at site n with value F (prefactors
# (1-|F|^2)^(-1/2) are accumulated by the caller, they commute with the sum):
#   a <- a + conj(F) z^(-n) b
#   b <- b + F z^(+n) a
# a lives on exponents [m0-m1, 0], b on [m0, m1]; with sites processed in
# increasing order the touched index windows pair up one to one.
# ---------------------------------------------------------------------------

def _transfer_coeffs_loop(positions, values, a, b, m0):
    W = b.shape[0]
    for i in range(positions.shape[0]):
        n = positions[i]
        F = values[i]
        Fc = F.conjugate()
        d = n - m0
        for k in range(d + 1):
            ia = W - 1 - d + k
            va = a[ia]
            vb = b[k]
            a[ia] = va + Fc * vb
            b[k] = vb + F * va


def _transfer_coeffs_numpy(positions, values, a, b, m0):
    W = b.shape[0]
    for i in range(positions.shape[0]):
        n = positions[i]
        F = values[i]
        d = n - m0
        sl_a = slice(W - 1 - d, W)
        sl_b = slice(0, d + 1)
        va = a[sl_a].copy()
        a[sl_a] += np.conj(F) * b[sl_b]
        b[sl_b] += F * va


# ---------------------------------------------------------------------------
# transfer product on a circle grid (final state only)
# ---------------------------------------------------------------------------

def _transfer_grid_loop(positions, values, roots, a, b):
    g = roots.shape[0]
    mask = g - 1  # grid sizes are powers of two, so & mask == mod g
    for i in range(positions.shape[0]):
        n = positions[i]
        F = values[i]
        c = 1.0 / math.sqrt(1.0 - (F.real * F.real + F.imag * F.imag))
        for k in range(g):
            t = F * roots[(k * n) & mask]
            va = a[k]
            vb = b[k]
            a[k] = c * (va + t.conjugate() * vb)
            b[k] = c * (t * va + vb)


def _transfer_grid_numpy(positions, values, roots, a, b):
    g = roots.shape[0]
    karr = np.arange(g, dtype=np.int64)
    for i in range(positions.shape[0]):
        n = positions[i]
        F = values[i]
        c = 1.0 / math.sqrt(1.0 - abs(F) ** 2)
        t = F * roots[(karr * n) % g]
        na = c * (a + np.conj(t) * b)
        nb = c * (t * a + b)
        a[:] = na
        b[:] = nb


# ---------------------------------------------------------------------------
# prefix scan: transfer product with per-prefix tracking of
#   - the continuous branch of arg a^(*) (sum of principal angles of
#     consecutive ratios; valid while |ratio - 1| < 1, the max deviation is
#     reported so callers can certify the branch),
#   - min/max of arg a^(*), Re/Im a, Re/Im b (oscillation over prefixes),
#   - per-point max of |r| = |b/a^(*)|,
#   - the worst excess over the per-step ratio-variation bound
#     |r_next - r| <= |F|/(1 - |F|).
# On the unit circle a^(*) = conj(a), so arg a^(*) = -arg a pointwise.
# ---------------------------------------------------------------------------

def _transfer_scan_loop(positions, values, varbound, roots):
    g = roots.shape[0]
    mask = g - 1
    a = np.ones(g, dtype=np.complex128)
    b = np.zeros(g, dtype=np.complex128)
    r = np.zeros(g, dtype=np.complex128)
    arg = np.zeros(g, dtype=np.float64)
    arg_min = np.zeros(g, dtype=np.float64)
    arg_max = np.zeros(g, dtype=np.float64)
    rea_min = np.ones(g, dtype=np.float64)
    rea_max = np.ones(g, dtype=np.float64)
    ima_min = np.zeros(g, dtype=np.float64)
    ima_max = np.zeros(g, dtype=np.float64)
    reb_min = np.zeros(g, dtype=np.float64)
    reb_max = np.zeros(g, dtype=np.float64)
    imb_min = np.zeros(g, dtype=np.float64)
    imb_max = np.zeros(g, dtype=np.float64)
    absr2_max = np.zeros(g, dtype=np.float64)
    ratio_dev2_max = 0.0
    var_excess_max = -1.0e300
    for i in range(positions.shape[0]):
        n = positions[i]
        F = values[i]
        vb = varbound[i]
        c = 1.0 / math.sqrt(1.0 - (F.real * F.real + F.imag * F.imag))
        dr2_max = 0.0
        for k in range(g):
            t = F * roots[(k * n) & mask]
            va = a[k]
            vbk = b[k]
            na = c * (va + t.conjugate() * vbk)
            nb = c * (t * va + vbk)
            # na/va direction without dividing: u = na*conj(va)
            u = na * va.conjugate()
            x = u.real
            y = u.imag
            tt = y / x
            if x <= 0.0 or tt > 0.09 or tt < -0.09:
                inc = math.atan2(y, x)
            else:
                # |arctan series tail| <= tt^11/11 < 3e-13 inside the guard
                r2 = tt * tt
                inc = tt * (1.0 - r2 * (1.0 / 3.0 - r2 * (0.2 - r2 * (
                    1.0 / 7.0 - r2 / 9.0))))
            arg[k] -= inc
            aa_old = va.real * va.real + va.imag * va.imag
            aa_new = na.real * na.real + na.imag * na.imag
            dxr = x - aa_old
            dev2 = (dxr * dxr + y * y) / (aa_old * aa_old)
            if dev2 > ratio_dev2_max:
                ratio_dev2_max = dev2
            rn = nb * na * (1.0 / aa_new)  # = nb / conj(na), |na| >= 1
            dr = rn - r[k]
            dr2 = dr.real * dr.real + dr.imag * dr.imag
            if dr2 > dr2_max:
                dr2_max = dr2
            a[k] = na
            b[k] = nb
            r[k] = rn
            rn2 = rn.real * rn.real + rn.imag * rn.imag
            if rn2 > absr2_max[k]:
                absr2_max[k] = rn2
            x = arg[k]
            if x < arg_min[k]:
                arg_min[k] = x
            if x > arg_max[k]:
                arg_max[k] = x
            x = na.real
            if x < rea_min[k]:
                rea_min[k] = x
            if x > rea_max[k]:
                rea_max[k] = x
            x = na.imag
            if x < ima_min[k]:
                ima_min[k] = x
            if x > ima_max[k]:
                ima_max[k] = x
            x = nb.real
            if x < reb_min[k]:
                reb_min[k] = x
            if x > reb_max[k]:
                reb_max[k] = x
            x = nb.imag
            if x < imb_min[k]:
                imb_min[k] = x
            if x > imb_max[k]:
                imb_max[k] = x
        excess = math.sqrt(dr2_max) - vb
        if excess > var_excess_max:
            var_excess_max = excess
    return (a, b, arg, arg_min, arg_max, rea_min, rea_max, ima_min, ima_max,
            reb_min, reb_max, imb_min, imb_max, np.sqrt(absr2_max),
            math.sqrt(ratio_dev2_max), var_excess_max)


def _transfer_scan_numpy(positions, values, varbound, roots):
    g = roots.shape[0]
    a = np.ones(g, dtype=np.complex128)
    b = np.zeros(g, dtype=np.complex128)
    r = np.zeros(g, dtype=np.complex128)
    arg = np.zeros(g, dtype=np.float64)
    arg_min = np.zeros(g)
    arg_max = np.zeros(g)
    rea_min = np.ones(g)
    rea_max = np.ones(g)
    ima_min = np.zeros(g)
    ima_max = np.zeros(g)
    reb_min = np.zeros(g)
    reb_max = np.zeros(g)
    imb_min = np.zeros(g)
    imb_max = np.zeros(g)
    absr_max = np.zeros(g)
    ratio_dev_max = 0.0
    var_excess_max = -1.0e300
    karr = np.arange(g, dtype=np.int64)
    for i in range(positions.shape[0]):
        n = positions[i]
        F = values[i]
        vb = varbound[i]
        c = 1.0 / math.sqrt(1.0 - abs(F) ** 2)
        t = F * roots[(karr * n) % g]
        na = c * (a + np.conj(t) * b)
        nb = c * (t * a + b)
        w = na / a
        ratio_dev_max = max(ratio_dev_max, float(np.max(np.abs(w - 1.0))))
        arg -= np.arctan2(w.imag, w.real)
        rn = nb / np.conj(na)
        var_excess_max = max(var_excess_max, float(np.max(np.abs(rn - r))) - vb)
        a, b, r = na, nb, rn
        np.minimum(arg_min, arg, out=arg_min)
        np.maximum(arg_max, arg, out=arg_max)
        np.minimum(rea_min, na.real, out=rea_min)
        np.maximum(rea_max, na.real, out=rea_max)
        np.minimum(ima_min, na.imag, out=ima_min)
        np.maximum(ima_max, na.imag, out=ima_max)
        np.minimum(reb_min, nb.real, out=reb_min)
        np.maximum(reb_max, nb.real, out=reb_max)
        np.minimum(imb_min, nb.imag, out=imb_min)
        np.maximum(imb_max, nb.imag, out=imb_max)
        np.maximum(absr_max, np.abs(rn), out=absr_max)
    return (a, b, arg, arg_min, arg_max, rea_min, rea_max, ima_min, ima_max,
            reb_min, reb_max, imb_min, imb_max, absr_max,
            ratio_dev_max, var_excess_max)


# ---------------------------------------------------------------------------
# Schur recursion on Taylor coefficients: one step maps f to
#   z^(-1) (f - f(0)) / (1 - conj(f(0)) f)
# losing one coefficient of accuracy; the division is plain power-series
# long division.  flag=1 signals an extremal parameter (|gamma| >= 1).
# ---------------------------------------------------------------------------

def _schur_taylor_loop(taylor, n_steps):
    m = taylor.shape[0]
    f = taylor.copy()
    gam = np.zeros(n_steps, dtype=np.complex128)
    q = np.zeros(m, dtype=np.complex128)
    count = 0
    flag = 0
    for s in range(n_steps):
        L = m - s
        if L <= 0:
            break
        g0 = f[0]
        if abs(g0) >= 1.0 - _SCHUR_EXTREMAL_TOL:
            flag = 1
            break
        gam[s] = g0
        count += 1
        gc = g0.conjugate()
        d0 = 1.0 - gc * g0
        q[0] = 0.0
        for k in range(1, L):
            srem = f[k]
            for j in range(1, k + 1):
                srem += gc * f[j] * q[k - j]
            q[k] = srem / d0
        for k in range(L - 1):
            f[k] = q[k + 1]
    return gam, count, flag


def _schur_taylor_numpy(taylor, n_steps):
    m = taylor.shape[0]
    f = taylor.astype(np.complex128).copy()
    gam = np.zeros(n_steps, dtype=np.complex128)
    count = 0
    flag = 0
    for s in range(n_steps):
        L = m - s
        if L <= 0:
            break
        g0 = f[0]
        if abs(g0) >= 1.0 - _SCHUR_EXTREMAL_TOL:
            flag = 1
            break
        gam[s] = g0
        count += 1
        gc = g0.conjugate()
        d0 = 1.0 - gc * g0
        q = np.zeros(L, dtype=np.complex128)
        for k in range(1, L):
            q[k] = (f[k] + gc * np.dot(f[1:k + 1], q[k - 1::-1])) / d0
        f = f[:L]
        f[:L - 1] = q[1:]
    return gam, count, flag


# ---------------------------------------------------------------------------
# Schur recursion driven on grid samples: gamma = mean(f) (= f(0) for an
# analytic f sampled alias-free), then the same Moebius step pointwise.
# ---------------------------------------------------------------------------

def _schur_grid_loop(fvals, z, n_steps):
    g = fvals.shape[0]
    f = fvals.copy()
    gam = np.zeros(n_steps, dtype=np.complex128)
    count = 0
    flag = 0
    for s in range(n_steps):
        acc = 0.0 + 0.0j
        for k in range(g):
            acc += f[k]
        g0 = acc / g
        if abs(g0) >= 1.0 - _SCHUR_EXTREMAL_TOL:
            flag = 1
            break
        gam[s] = g0
        count += 1
        gc = g0.conjugate()
        for k in range(g):
            f[k] = (f[k] - g0) / ((1.0 - gc * f[k]) * z[k])
    return gam, count, flag


def _schur_grid_numpy(fvals, z, n_steps):
    f = fvals.astype(np.complex128).copy()
    gam = np.zeros(n_steps, dtype=np.complex128)
    count = 0
    flag = 0
    for s in range(n_steps):
        g0 = np.mean(f)
        if abs(g0) >= 1.0 - _SCHUR_EXTREMAL_TOL:
            flag = 1
            break
        gam[s] = g0
        count += 1
        f = (f - g0) / ((1.0 - np.conj(g0) * f) * z)
    return gam, count, flag


if USE_NUMBA:
    _transfer_coeffs_jit = njit(cache=True)(_transfer_coeffs_loop)
    _transfer_grid_jit = njit(cache=True)(_transfer_grid_loop)
    _transfer_scan_jit = njit(cache=True)(_transfer_scan_loop)
    _schur_taylor_jit = njit(cache=True)(_schur_taylor_loop)
    _schur_grid_jit = njit(cache=True)(_schur_grid_loop)
else:
    _transfer_coeffs_jit = None
    _transfer_grid_jit = None
    _transfer_scan_jit = None
    _schur_taylor_jit = None
    _schur_grid_jit = None


def transfer_coeffs(positions, values, a, b, m0):
    if USE_NUMBA:
        _transfer_coeffs_jit(positions, values, a, b, m0)
    else:
        _transfer_coeffs_numpy(positions, values, a, b, m0)


def transfer_grid(positions, values, roots, a, b):
    if USE_NUMBA:
        _transfer_grid_jit(positions, values, roots, a, b)
    else:
        _transfer_grid_numpy(positions, values, roots, a, b)


def transfer_scan(positions, values, varbound, roots):
    if USE_NUMBA:
        return _transfer_scan_jit(positions, values, varbound, roots)
    return _transfer_scan_numpy(positions, values, varbound, roots)


def schur_taylor(taylor, n_steps):
    if USE_NUMBA:
        return _schur_taylor_jit(taylor, n_steps)
    return _schur_taylor_numpy(taylor, n_steps)


def schur_grid(fvals, z, n_steps):
    if USE_NUMBA:
        return _schur_grid_jit(fvals, z, n_steps)
    return _schur_grid_numpy(fvals, z, n_steps)


# name -> (numpy implementation, jitted implementation or None); used by the
# kernel benchmark and the cross-path agreement tests
IMPLEMENTATIONS = {
    "transfer_coeffs": (_transfer_coeffs_numpy, _transfer_coeffs_jit),
    "transfer_grid": (_transfer_grid_numpy, _transfer_grid_jit),
    "transfer_scan": (_transfer_scan_numpy, _transfer_scan_jit),
    "schur_taylor": (_schur_taylor_numpy, _schur_taylor_jit),
    "schur_grid": (_schur_grid_numpy, _schur_grid_jit),
}
