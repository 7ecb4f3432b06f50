"""Test functions on the half-line with exact-grade transforms.

Conventions (used everywhere):
    fourier(lam) = (1/sqrt(2 pi)) int e^{i x lam} f(x) dx
    laplace(lam) = int_0^inf e^{-x lam} f(x) dx
"""
import numpy as np

from . import _accel
from .quadrature import gauss_legendre

_SQRT2PI = np.sqrt(2 * np.pi)
_PANELS, _ORDER = 16, 24


def _unit_rule(panels=_PANELS):
    return gauss_legendre(0.0, 1.0, _ORDER, panels)


def _bump_constants():
    y, w = _unit_rule(64)
    raw = _accel.bump_shape_np(y)
    z = raw @ w
    return z, (raw / z) ** 2 @ w


BUMP_MASS, BUMP_NORM2 = _bump_constants()  # int of raw bump, ||psi||^2


def bump(y):
    """psi(y) = exp(-1/(y(1-y))) on (0,1), normalized to unit integral."""
    return _accel.bump_shape(y) / BUMP_MASS


def _psi_transform(z):
    """int_0^1 e^{z y} psi(y) dy for complex z (array)."""
    z = np.asarray(z, dtype=complex)
    top = float(np.max(np.abs(z.imag))) if z.size else 0.0
    panels = max(_PANELS, int(np.ceil(top / (4 * np.pi))))
    y, w = _unit_rule(panels)
    return _accel.expsum(y, w * bump(y), z)


class TestFunction:
    """Shared interface; subclasses fill in the transforms."""
    __test__ = False  # keep pytest from collecting this name

    support = (0.0, np.inf)

    def band(self):
        return None

    def order_at_zero(self):
        return 0

    def breakpoints(self):
        return None


class Bump(TestFunction):
    """coeff * scale^-1 psi((x - shift)/scale) e^{-i modulation x}."""

    def __init__(self, scale=1.0, shift=0.0, modulation=0.0, coeff=1.0):
        if not scale > 0 or shift < 0:
            raise ValueError("bump needs scale > 0 and shift >= 0")
        self.scale, self.shift = float(scale), float(shift)
        self.modulation, self.coeff = float(modulation), complex(coeff)
        self.support = (self.shift, self.shift + self.scale)

    def __repr__(self):
        return (f"Bump(scale={self.scale:g}, shift={self.shift:g}, "
                f"modulation={self.modulation:g}, coeff={self.coeff:g})")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        y = (x - self.shift) / self.scale
        return self.coeff / self.scale * bump(y) * np.exp(-1j * self.modulation * x)

    def shifted(self, t):
        return Bump(self.scale, self.shift + t, self.modulation,
                    self.coeff * np.exp(1j * self.modulation * t))

    def norm2(self):
        return abs(self.coeff) ** 2 * BUMP_NORM2 / self.scale

    def integral(self):
        return complex(self.fourier(0.0) * _SQRT2PI)

    def band(self):
        return (self.modulation, 1.0 / self.scale)

    def order_at_zero(self):
        return np.inf

    def quadrature_rule(self, panels=_PANELS):
        y, w = _unit_rule(panels)
        return self.shift + self.scale * y, self.scale * w

    def fourier(self, lam):
        mu = np.asarray(lam, dtype=float) - self.modulation
        k = _psi_transform(1j * self.scale * mu)
        return self.coeff / _SQRT2PI * np.exp(1j * self.shift * mu) * k

    def laplace(self, lam):
        z = np.asarray(lam, dtype=float) + 1j * self.modulation
        k = _psi_transform(-self.scale * z)
        return self.coeff * np.exp(-self.shift * z) * k


def _seg_weights(u):
    """E1(u) = int_0^1 e^{us}(1-s) ds and E2(u) = int_0^1 e^{us} s ds."""
    u = np.asarray(u, dtype=complex)
    small = np.abs(u) < 0.5
    us = np.where(small, 1.0, u)
    eu = np.exp(us)
    e1 = (eu - 1 - us) / us ** 2
    e2 = (us * eu - eu + 1) / us ** 2
    if np.any(small):
        v = u[small]
        s1 = np.zeros(v.shape, dtype=complex)
        s2 = np.zeros(v.shape, dtype=complex)
        term = np.ones(v.shape, dtype=complex)
        fact = 2.0  # (k+2)!
        for k in range(20):
            s1 += term / fact
            s2 += (k + 1) * term / fact
            term = term * v
            fact *= k + 3
        e1[small], e2[small] = s1, s2
    return e1, e2


class SampledFunction(TestFunction):
    """Linear interpolation of samples; zero outside [x[0], x[-1]]."""

    def __init__(self, x, values):
        x = np.asarray(x, dtype=float)
        v = np.asarray(values, dtype=complex)
        if x.ndim != 1 or x.shape != v.shape or x.size < 2:
            raise ValueError("need matching 1-d sample arrays with >= 2 points")
        if x[0] < 0 or np.any(np.diff(x) <= 0):
            raise ValueError("sample grid must be increasing inside [0, inf)")
        self.x, self.values = x, v
        self.support = (float(x[0]), float(x[-1]))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        inside = (t >= self.x[0]) & (t <= self.x[-1])
        re = np.interp(t, self.x, self.values.real)
        im = np.interp(t, self.x, self.values.imag)
        return np.where(inside, re + 1j * im, 0.0)

    def shifted(self, t):
        return SampledFunction(self.x + t, self.values)

    def breakpoints(self):
        return self.x

    def order_at_zero(self):
        if self.x[0] > 0:
            return np.inf
        return 0 if self.values[0] != 0 else 1

    def norm2(self):
        a, b = self.values[:-1], self.values[1:]
        h = np.diff(self.x)
        return float(np.sum(h / 3 * (abs(a) ** 2 + np.real(a * np.conj(b)) + abs(b) ** 2)))

    def quadrature_rule(self, order=8):
        t, w = np.polynomial.legendre.leggauss(order)
        h = np.diff(self.x) / 2
        mid = (self.x[1:] + self.x[:-1]) / 2
        return (mid[:, None] + h[:, None] * t).ravel(), (h[:, None] * w).ravel()

    def _transform(self, z):
        # int e^{z x} f(x) dx, exact for the piecewise-linear interpolant
        z = np.asarray(z, dtype=complex)
        a, h = self.x[:-1], np.diff(self.x)
        out = np.empty(z.shape, dtype=complex)
        flat = z.ravel()
        res = out.ravel()
        for j, zj in enumerate(flat):
            e1, e2 = _seg_weights(zj * h)
            res[j] = np.sum(h * np.exp(zj * a) * (self.values[:-1] * e1 + self.values[1:] * e2))
        return out

    def fourier(self, lam):
        return self._transform(1j * np.asarray(lam, dtype=float)) / _SQRT2PI

    def laplace(self, lam):
        return self._transform(-np.asarray(lam, dtype=complex))


class LaguerreCombination(TestFunction):
    """sum_n g_n l_n(x) with l_n the orthonormal Laguerre functions."""

    def __init__(self, coeffs):
        self.coeffs = np.atleast_1d(np.asarray(coeffs, dtype=complex))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        nmax = self.coeffs.size - 1
        tab = _accel.laguerre_fn_table(nmax, np.atleast_1d(x))
        return (self.coeffs @ tab).reshape(x.shape)

    def norm2(self):
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def order_at_zero(self):
        return 0 if abs(np.sum(self.coeffs)) > 0 else 1

    def fourier(self, lam):
        # transform of l_n is omega^n / (sqrt(pi) (1 - i lam)), omega = (lam-i)/(lam+i)
        lam = np.asarray(lam, dtype=float)
        omega = (lam - 1j) / (lam + 1j)
        return np.polyval(self.coeffs[::-1], omega) / (np.sqrt(np.pi) * (1 - 1j * lam))

    def laplace(self, lam):
        # int l_n e^{-x lam} = sqrt(2)/2 (zeta-1)^n / zeta^(n+1), 2 zeta = 1 + lam
        zeta = (1.0 + np.asarray(lam, dtype=complex)) / 2
        r = (zeta - 1) / zeta
        return np.sqrt(2) / 2 * np.polyval(self.coeffs[::-1], r) / zeta
