"""Hankel-type forms h[f, f] = int h(t) (conj f * f)(t) dt with h a Laplace transform.

For a measure supported in [0, inf) (plus finitely many atoms anywhere)
h(t) = (1/2pi) int e^{-t lam} dM(lam) is completely monotone on t > 0.
"""
import numpy as np
from scipy.special import comb

from .errors import DomainError, GridError, RepresentationDomainError, SingularKernelError
from .quadrature import gauss_jacobi_left, gauss_legendre

_TWO_PI = 2 * np.pi

CLOSABLE = "closable (sufficient condition met)"
NOT_MET = "criterion not met"


def _check_laplace_domain(measure):
    lo, _ = measure.density.support()
    if measure.density.pieces() and not np.isfinite(lo):
        raise RepresentationDomainError(
            f"{measure.density.kind} density extends to -inf: e^(-t lam) is not integrable")


def bernstein_profile(measure, t):
    """h(t) = (1/2pi) int e^{-t lam} dM(lam), t > 0."""
    _check_laplace_domain(measure)
    ta = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(ta <= 0):
        raise DomainError("t must be positive")
    out = np.empty(ta.shape)
    # atoms at lam < 0 grow like e^{t|lam|}; overflow to inf is the right answer
    with np.errstate(over="ignore"):
        for j, tj in np.ndenumerate(ta):
            out[j] = measure.integrate(lambda lam: np.exp(-tj * lam),
                                       points=(1.0 / tj, 8.0 / tj, 40.0 / tj), rtol=1e-12) / _TWO_PI
    return out if np.ndim(t) else float(out[0])


class HankelProfile:
    """h(t) on t > 0 with its small-t singular exponent (h ~ t^-s)."""

    def __init__(self, func, singular_exponent=0.0, measure=None):
        self.func = func
        self.singular_exponent = float(singular_exponent)
        self.measure = measure

    def __call__(self, t):
        return self.func(np.asarray(t, dtype=float))

    @classmethod
    def from_measure(cls, measure):
        _check_laplace_domain(measure)
        return cls(lambda t: bernstein_profile(measure, t),
                   measure.density.laplace_exponent, measure)

    @classmethod
    def power(cls, a):
        return cls(lambda t: t ** -float(a), a)

    @classmethod
    def constant(cls, c=1.0):
        return cls(lambda t: np.full(np.shape(t), float(c)))


def _convolution(f, t):
    """(conj f * f)(t) = int conj(f(s)) f(t - s) ds."""
    a, b = f.support
    t = np.atleast_1d(t)
    out = np.zeros(t.shape, dtype=complex)
    br = f.breakpoints()
    for j, tj in enumerate(t):
        lo, hi = max(a, tj - b), min(b, tj - a)
        if hi <= lo:
            continue
        if br is not None:
            pts = np.concatenate([[lo, hi], br, tj - br])
            pts = np.unique(pts[(pts >= lo) & (pts <= hi)])
            g = np.array([-1.0, 1.0]) / np.sqrt(3.0)
            h = np.diff(pts) / 2
            s = ((pts[1:] + pts[:-1]) / 2)[:, None] + h[:, None] * g
            s, w = s.ravel(), np.repeat(h, 2)
        else:
            s, w = gauss_legendre(lo, hi, 24, 8)
        out[j] = np.sum(w * np.conj(f(s)) * f(tj - s))
    return out


def hankel_form_time(h, f, panels=32, order=16):
    """int h(t) (conj f * f)(t) dt on [2a, 2b] for f supported in [a, b]."""
    a, b = f.support
    s = h.singular_exponent
    if a == 0 and s > 0:
        k = f.order_at_zero()
        # conj f * f vanishes like t^(2k+1) at 0
        if not s < 2 * k + 2:
            raise SingularKernelError(
                f"profile singularity t^-{s:g} not integrable against this f; use hankel_form_spectral")
    mid = a + b
    if a == 0 and s > 0:
        # weight t^(m-s) with m = floor(s) <= 2k+1 powers taken from the convolution
        m = np.floor(s)
        first = mid / panels
        tj, wj = gauss_jacobi_left(0.0, first, m - s, 2 * order)
        wj = wj * tj ** (s - m)
        tg, wg = gauss_legendre(first, mid, order, panels - 1)
        t1, w1 = np.concatenate([tj, tg]), np.concatenate([wj, wg])
    else:
        t1, w1 = gauss_legendre(2 * a, mid, order, panels)
    t2, w2 = gauss_legendre(mid, 2 * b, order, panels)
    t = np.concatenate([t1, t2])
    w = np.concatenate([w1, w2])
    return float(np.real(np.sum(w * h(t) * _convolution(f, t))))


def hankel_form_spectral(measure, f, rtol=1e-10):
    """(1/2pi) int |Lf(lam)|^2 dM(lam), Lf the Laplace transform of f."""
    _check_laplace_domain(measure)
    val = measure.integrate(lambda lam: np.abs(f.laplace(lam)) ** 2, rtol=rtol,
                            include_atoms=False,
                            points=(1.0, 10.0, 100.0))
    if measure.atoms:
        val += float(measure.masses @ np.abs(f.laplace(measure.locations)) ** 2)
    return val / _TWO_PI


def complete_monotonicity_residual(h, k_max, t_grid, rel_step=0.05):
    """Most negative (-1)^k Delta^k h(t) over the grid and k = 0..k_max.

    Forward differences with step rel_step * t; undivided so that
    rounding in h is not amplified.
    """
    t = np.asarray(t_grid, dtype=float)
    if t.size == 0 or np.any(t <= 0):
        raise GridError("t grid must be non-empty and bounded away from 0")
    if not 0 <= k_max <= 6:
        raise GridError("k_max must be in 0..6")
    worst = np.inf
    for tj in t:
        d = rel_step * tj
        vals = np.asarray(h(tj + d * np.arange(k_max + 1)), dtype=float)
        for k in range(k_max + 1):
            j = np.arange(k + 1)
            diff = np.sum((-1.0) ** (k - j) * comb(k, j) * vals[: k + 1])
            worst = min(worst, (-1) ** k * diff)
    return float(worst)


def hankel_closability_flag(measure, t_probe=None, threshold=1e-2):
    """Sufficient-condition check: M((-inf, 0]) = 0 and h(t) -> 0 along t_probe."""
    if t_probe is None:
        t_probe = np.logspace(0, 6, 13)
    t_probe = np.asarray(t_probe, dtype=float)
    if np.any(np.diff(t_probe) <= 0):
        raise ValueError("t_probe must be increasing")
    h = bernstein_profile(measure, t_probe)
    halfline = measure.halfline_supported()
    with np.errstate(invalid="ignore"):
        decreasing = bool(np.all(np.diff(h) <= 1e-12 * np.abs(h[:-1])))
    ok = halfline and decreasing and h[-1] < threshold
    info = {"halfline_support": halfline, "decreasing": decreasing,
            "t": t_probe, "h": h, "threshold": threshold}
    return (CLOSABLE if ok else NOT_MET), info
