"""Laguerre polynomials (alpha in {0, 1}) and the orthonormal basis of L2(0, inf).

The basis functions are l_n(x) = sqrt(2) L_n(2x) e^{-x}.  Coefficient
vectors map to functions through ``LaguerreBasis.synthesize``; that map is
unitary from l2 onto L2(0, inf).
"""
import warnings

import numpy as np

from . import _accel
from .errors import DomainError
from .quadrature import gauss_legendre, warn_approximate


def laguerre_poly(n, alpha, x):
    """L_n^alpha(x) by the three-term recurrence."""
    if alpha not in (0, 1):
        raise DomainError("only alpha = 0 and alpha = 1 are supported")
    n = int(n)
    if n < 0:
        raise DomainError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    out = _accel.laguerre_table(n, alpha, np.atleast_1d(x))[n]
    return out.reshape(x.shape) if x.ndim else float(out[0])


def laguerre_basis_fn(n, x):
    """sqrt(2) L_n(2x) e^{-x}, weight folded into the recurrence."""
    x = np.asarray(x, dtype=float)
    out = _accel.laguerre_fn_table(int(n), np.atleast_1d(x))[int(n)]
    return out.reshape(x.shape) if x.ndim else float(out[0])


def laguerre_laplace_l1(n, zeta):
    """int_0^inf L_n^1(x) e^{-zeta x} dx = 1 - ((zeta-1)/zeta)^(n+1)."""
    zeta = complex(zeta)
    if not zeta.real > 0:
        raise DomainError("need Re zeta > 0")
    return 1.0 - ((zeta - 1.0) / zeta) ** (int(n) + 1)


def laguerre_laplace_l1_quad(n, zeta, tol=1e-12):
    """Same integral by quadrature, independent of the closed form.

    The ray x = s/zeta turns the integrand into a polynomial against e^{-s}
    (the contour rotation is legitimate since Re zeta > 0), which
    Gauss-Laguerre integrates exactly.  The alternating sum loses digits
    when |zeta| is small; if the estimated rounding error is above ``tol``
    (relative to max(1, |value|)) the rule is rerun in extended precision.
    """
    zeta = complex(zeta)
    if not zeta.real > 0:
        raise DomainError("need Re zeta > 0")
    n = int(n)
    k = n // 2 + 2
    s, w = np.polynomial.laguerre.laggauss(k)
    z = s / zeta
    terms = w * _laguerre1_complex(n, z)
    value = terms.sum() / zeta
    bound = np.sum(np.abs(terms)) / abs(zeta) * 1e-15 * (n + 1)
    scale = max(1.0, abs(value))
    if bound <= tol * scale:
        return complex(value)
    return _laguerre_laplace_mp(n, zeta, k, bound, tol * scale)


def _laguerre1_complex(n, z):
    a = np.ones_like(z)
    if n == 0:
        return a
    b = 2.0 - z
    for k in range(1, n):
        a, b = b, ((2 * k + 2 - z) * b - (k + 1) * a) / (k + 1)
    return b


def _laguerre_laplace_mp(n, zeta, k, bound, tol):
    import mpmath

    digits = int(np.ceil(np.log10(max(bound / tol, 10.0)))) + 20
    with mpmath.workdps(digits):
        s, w = mpmath.gauss_quadrature(k, "laguerre")
        zm = mpmath.mpc(zeta.real, zeta.imag)
        acc = mpmath.mpc(0)
        for sj, wj in zip(s, w):
            x = sj / zm
            a, b = mpmath.mpf(1), 2 - x
            if n == 0:
                b = a
            for m in range(1, n):
                a, b = b, ((2 * m + 2 - x) * b - (m + 1) * a) / (m + 1)
            acc += wj * b
        acc /= zm
        return complex(acc)


def halfline_integrate(func, tol=1e-12, x0=16.0, width=0.5, order=40, x_cap=4096.0):
    """int_0^inf func(x) dx for func(x) -> array with x on the last axis.

    [0, X] is grown by doubling until the newest shell contributes less than
    ``tol`` entrywise.  The integrand must carry its own decay.
    """
    x, w = gauss_legendre(0.0, x0, order, int(np.ceil(x0 / width)))
    total = func(x) @ w
    X = x0
    while X < x_cap:
        x, w = gauss_legendre(X, 2 * X, order, int(np.ceil(X / width)))
        shell = func(x) @ w
        total = total + shell
        X *= 2
        if np.max(np.abs(shell)) < tol:
            return total
    warn_approximate("half-line integral", float(np.max(np.abs(shell))), tol)
    return total


def cayley_power_identity_residual(n, lam, full_output=False):
    """|omega^-n - (1 - 2 int_0^inf L_{n-1}^1(2x) e^{-x - i lam x} dx)|.

    omega = (lam - i)/(lam + i); the integral is done by quadrature.
    """
    n = int(n)
    if n < 1:
        raise DomainError("n must be >= 1")
    lam = float(lam)
    width = min(0.5, np.pi / (2 * max(abs(lam), 1e-12)))

    def integrand(x):
        return laguerre_poly(n - 1, 1, 2 * x) * np.exp(-x * (1 + 1j * lam))

    integral = halfline_integrate(integrand, tol=1e-14, width=width)
    lhs = ((lam - 1j) / (lam + 1j)) ** (-n)
    res = float(abs(lhs - (1 - 2 * integral)))
    if full_output:
        return res, {"lhs": complex(lhs), "integral": complex(integral)}
    return res


class LaguerreBasis:
    """Orthonormal functions l_0 .. l_{max_degree} on (0, inf)."""

    def __init__(self, max_degree):
        self.max_degree = int(max_degree)

    def __call__(self, x):
        """Table of shape (max_degree + 1, len(x))."""
        return _accel.laguerre_fn_table(self.max_degree, np.atleast_1d(np.asarray(x, float)))

    def gram(self, tol=1e-13):
        return halfline_integrate(lambda x: self(x)[:, None, :] * self(x)[None, :, :], tol=tol)

    def synthesize(self, g):
        """The function sum_n g_n l_n (unitary image of the vector g)."""
        from .testfunctions import LaguerreCombination
        g = np.asarray(g, dtype=complex)
        if g.size > self.max_degree + 1:
            raise DomainError("coefficient vector longer than the basis")
        return LaguerreCombination(g)


def gram_matrix(N):
    """Gram matrix of l_0 .. l_N on (0, inf) by half-line quadrature."""
    return LaguerreBasis(N).gram()


def laguerre_expand(f, N):
    """g_n = int_0^inf f(x) l_n(x) dx for n < N.

    ``f`` is a test function (compact support, exact breakpoints) or any
    vectorized callable decaying on the half-line.
    """
    N = int(N)
    if N <= 0:
        return np.zeros(0, dtype=complex)
    support = getattr(f, "support", None)
    if support is not None and np.isfinite(support[1]):
        x, w = f.quadrature_rule()
        return _accel.laguerre_fn_table(N - 1, x) @ (w * f(x))
    return halfline_integrate(lambda x: _accel.laguerre_fn_table(N - 1, x) * f(x), tol=1e-14)


def parseval_defect(f, N):
    """||f||^2 - sum_{n<N} |g_n|^2; non-negative and non-increasing in N."""
    g = laguerre_expand(f, N)
    if hasattr(f, "norm2"):
        nrm = f.norm2()
    else:
        nrm = float(np.real(halfline_integrate(lambda x: np.abs(f(x)) ** 2, tol=1e-15)))
    return float(nrm - np.sum(np.abs(g) ** 2))
