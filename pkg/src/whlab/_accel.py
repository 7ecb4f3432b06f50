"""Hot loops, compiled with numba when available.

Every kernel exists twice: a plain numpy version (``*_np``) and a jitted
one.  The public name is bound to the jitted version unless numba is
missing or ``WHLAB_DISABLE_JIT`` is set to a truthy value at import time.
Both paths must agree to rounding; tests/test_accel.py checks that.
"""
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_flag = os.environ.get("WHLAB_DISABLE_JIT", "").strip().lower()
JIT_ENABLED = numba is not None and _flag in ("", "0", "false", "no")


# -- numpy reference implementations ---------------------------------------

def laguerre_table_np(nmax, alpha, x):
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = 1.0 + alpha - x
    for k in range(1, nmax):
        out[k + 1] = ((2 * k + 1 + alpha - x) * out[k] - (k + alpha) * out[k - 1]) / (k + 1)
    return out


def laguerre_fn_table_np(nmax, x):
    # sqrt(2) L_n(2x) e^{-x}; the exponential rides along from the start,
    # so large n at large x never forms the huge raw polynomial
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = np.sqrt(2.0) * np.exp(-x)
    if nmax >= 1:
        out[1] = (1.0 - 2.0 * x) * out[0]
    for k in range(1, nmax):
        out[k + 1] = ((2 * k + 1 - 2.0 * x) * out[k] - k * out[k - 1]) / (k + 1)
    return out


def expsum_np(y, wv, z):
    """sum_k wv[k] exp(z[j] y[k]) for every j."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape, dtype=complex)
    flat = z.ravel()
    res = out.ravel()
    step = max(1, 4_000_000 // max(len(y), 1))
    for s in range(0, flat.size, step):
        res[s:s + step] = np.exp(np.outer(flat[s:s + step], y)) @ wv
    return out


def bump_shape_np(y):
    y = np.asarray(y, dtype=float)
    out = np.zeros(y.shape)
    inside = (y > 0.0) & (y < 1.0)
    yi = y[inside]
    out[inside] = np.exp(-1.0 / (yi * (1.0 - yi)))
    return out


def helmholtz_stencil_np(values, h, p):
    """Apply (-D^2 + 1)^p with 3-point centered differences, p times.

    Returns the len(values) - 2p interior points.
    """
    v = np.asarray(values)
    for _ in range(p):
        v = -(v[2:] - 2.0 * v[1:-1] + v[:-2]) / (h * h) + v[1:-1]
    return v


# -- jitted versions -------------------------------------------------------

if numba is not None:
    _njit = numba.njit(cache=False, nogil=True)

    @_njit
    def _laguerre_table_nb(nmax, alpha, x):
        # row-major fill: k outer keeps the writes contiguous
        m = x.size
        out = np.empty((nmax + 1, m))
        for j in range(m):
            out[0, j] = 1.0
        if nmax >= 1:
            for j in range(m):
                out[1, j] = 1.0 + alpha - x[j]
        for k in range(1, nmax):
            c0 = 2 * k + 1 + alpha
            c1 = k + alpha
            inv = 1.0 / (k + 1)
            for j in range(m):
                out[k + 1, j] = ((c0 - x[j]) * out[k, j] - c1 * out[k - 1, j]) * inv
        return out

    @_njit
    def _laguerre_fn_table_nb(nmax, x):
        m = x.size
        out = np.empty((nmax + 1, m))
        r2 = np.sqrt(2.0)
        for j in range(m):
            out[0, j] = r2 * np.exp(-x[j])
        if nmax >= 1:
            for j in range(m):
                out[1, j] = (1.0 - 2.0 * x[j]) * out[0, j]
        for k in range(1, nmax):
            c0 = 2 * k + 1
            inv = 1.0 / (k + 1)
            for j in range(m):
                out[k + 1, j] = ((c0 - 2.0 * x[j]) * out[k, j] - k * out[k - 1, j]) * inv
        return out

    @_njit
    def _expsum_nb(y, wv, z):
        out = np.empty(z.size, dtype=np.complex128)
        for j in range(z.size):
            zj = z[j]
            acc = 0.0 + 0.0j
            for k in range(y.size):
                acc += wv[k] * np.exp(zj * y[k])
            out[j] = acc
        return out

    @_njit
    def _bump_shape_nb(y):
        out = np.zeros(y.size)
        for j in range(y.size):
            t = y[j]
            if 0.0 < t < 1.0:
                out[j] = np.exp(-1.0 / (t * (1.0 - t)))
        return out

    @_njit
    def _helmholtz_stencil_nb(values, h, p):
        v = values.copy()
        n = v.size
        inv = 1.0 / (h * h)
        for _ in range(p):
            w = np.empty(n - 2, dtype=v.dtype)
            for i in range(n - 2):
                w[i] = -(v[i + 2] - 2.0 * v[i + 1] + v[i]) * inv + v[i + 1]
            v = w
            n -= 2
        return v


def _as_1d(a, dtype):
    a = np.asarray(a, dtype=dtype)
    return np.ascontiguousarray(a.ravel()), a.shape


def laguerre_table(nmax, alpha, x):
    """Rows L_0^alpha(x) .. L_nmax^alpha(x) by the three-term recurrence."""
    if not JIT_ENABLED:
        return laguerre_table_np(nmax, alpha, x)
    flat, shape = _as_1d(x, float)
    return _laguerre_table_nb(int(nmax), float(alpha), flat).reshape((nmax + 1,) + shape)


def laguerre_fn_table(nmax, x):
    """Rows sqrt(2) L_n(2x) e^{-x} for n = 0..nmax."""
    if not JIT_ENABLED:
        return laguerre_fn_table_np(nmax, x)
    flat, shape = _as_1d(x, float)
    return _laguerre_fn_table_nb(int(nmax), flat).reshape((nmax + 1,) + shape)


def expsum(y, wv, z):
    """Exponential sums sum_k wv[k] exp(z y[k]), vectorized over z."""
    if not JIT_ENABLED:
        return expsum_np(y, wv, z)
    flat, shape = _as_1d(z, complex)
    y = np.ascontiguousarray(y, dtype=float)
    wv = np.ascontiguousarray(wv, dtype=complex)
    return _expsum_nb(y, wv, flat).reshape(shape)


def bump_shape(y):
    """Unnormalized exp(-1/(y(1-y))) on (0, 1), zero elsewhere."""
    if not JIT_ENABLED:
        return bump_shape_np(y)
    flat, shape = _as_1d(y, float)
    return _bump_shape_nb(flat).reshape(shape)


def helmholtz_stencil(values, h, p):
    if not JIT_ENABLED:
        return helmholtz_stencil_np(values, h, p)
    v = np.ascontiguousarray(values)
    if not np.iscomplexobj(v):
        v = v.astype(float)
    return _helmholtz_stencil_nb(v, float(h), int(p))
