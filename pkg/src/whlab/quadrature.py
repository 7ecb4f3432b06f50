"""Fixed quadrature rules and the damping ladder used across modules.

Fixed rules are preferred over adaptive ones where a value is later
differentiated numerically: an adaptive error pattern changes with x,
a fixed rule's error stays smooth.
"""
import warnings
from functools import lru_cache

import numpy as np
from scipy import special

# default tolerances; the CLI can override them per run
REL_TOL = 1e-8
OSC_TOL = 1e-5
LAMBDA_MAX = 2.0 ** 22
EPS_LADDER = (1e-1, 1e-2, 1e-3, 1e-4)


@lru_cache(maxsize=None)
def _legendre(order):
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=None)
def _jacobi_left(order, exponent):
    # weight (1+t)^exponent on [-1, 1]
    x, w = special.roots_jacobi(order, 0.0, exponent)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(a, b, order=32, panels=1):
    """Composite Gauss-Legendre nodes and weights on [a, b]."""
    t, w = _legendre(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * t).ravel()
    wt = (half[:, None] * w).ravel()
    return x, wt


def gauss_jacobi_left(a, b, exponent, order=32):
    """Nodes/weights for int_a^b (x-a)^exponent g(x) dx, exponent > -1."""
    t, w = _jacobi_left(order, float(exponent))
    half = 0.5 * (b - a)
    return a + half * (t + 1.0), w * half ** (exponent + 1.0)


def panel_count(length, omega, per_panel=2.0):
    """Panels so that each one holds at most ``per_panel`` periods."""
    periods = abs(omega) * length / (2 * np.pi)
    return int(max(1, np.ceil(periods / per_panel)))


@lru_cache(maxsize=None)
def _ooura_mori(kind, h):
    # double-exponential rule for int_0^inf g(u) trig(u) du; nodes approach
    # the zeros of trig double-exponentially so truncation is harmless
    M = np.pi / h
    beta = 0.25
    alpha = beta / np.sqrt(1 + M * np.log1p(M) / (4 * np.pi))
    k = np.arange(np.floor(-12.0 / h), np.ceil(6.0 / h) + 1)
    t = k * h if kind == "sin" else (k - 0.5) * h
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        u = -2 * t - alpha * (1 - np.exp(-t)) - beta * np.expm1(t)
        em1 = np.expm1(u)
        phi = t / -em1
        du = -2 - alpha * np.exp(-t) - beta * np.exp(t)
        dphi = (-em1 + t * du * (em1 + 1)) / em1 ** 2
        zero = t == 0
        c = 2 + alpha + beta
        phi[zero] = 1 / c
        dphi[zero] = ((alpha - beta) / 2 + c * c / 2) / c ** 2
        x = M * phi
        w = M * h * dphi
        trig = np.sin(x) if kind == "sin" else np.cos(x)
        wt = w * trig
    keep = np.isfinite(x) & np.isfinite(wt) & (x > 0) & (wt != 0)
    x, wt = x[keep], wt[keep]
    x.setflags(write=False)
    wt.setflags(write=False)
    return x, wt


def fourier_halfline(g, omega, kind, h=0.05):
    """int_0^inf g(u) cos(omega u) du (kind='cos') or sin, omega > 0.

    ``g`` must accept arrays; ``omega`` may be an array (result has its shape).
    """
    omega = np.asarray(omega, dtype=float)
    x, wt = _ooura_mori(kind, h)
    u = x / omega[..., None]
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        gv = g(u)
    gv = np.where(np.isfinite(gv), gv, 0.0)
    return (gv @ wt) / omega


def extrapolate_to_zero(eps, values):
    """Polynomial (Neville) extrapolation of values(eps) to eps = 0.

    Returns (value, error) where error compares the full extrapolant with the
    one that drops the coarsest level.
    """
    eps = np.asarray(eps, dtype=float)
    vals = np.asarray(values)

    def neville(e, v):
        p = list(v)
        n = len(e)
        for m in range(1, n):
            for i in range(n - m):
                p[i] = (e[i] * p[i + 1] - e[i + m] * p[i]) / (e[i] - e[i + m])
        return p[0]

    full = neville(eps, vals)
    reduced = neville(eps[1:], vals[1:])
    return full, np.abs(full - reduced)


def halfline_rule(x_max, width=0.5, order=40):
    """Composite Gauss-Legendre rule on [0, x_max] with fixed panel width."""
    panels = int(np.ceil(x_max / width))
    return gauss_legendre(0.0, panels * width, order, panels)


def warn_approximate(what, err, tol):
    from .errors import ApproximateResultWarning
    warnings.warn(f"{what}: error estimate {err:.3g} exceeds tolerance {tol:.3g}",
                  ApproximateResultWarning, stacklevel=3)
