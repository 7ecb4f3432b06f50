"""Measures on the real line with polynomial growth.

A measure is an absolutely continuous density plus finitely many atoms.
Densities come from a small closed-form family or a table; each one
describes itself as a list of pieces so integrators can pick a rule
per piece (finite panels, half-lines, an algebraic endpoint singularity).
"""
import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate, special

from .errors import (ApproximateResultWarning, InvalidMeasureError,
                     NonFiniteResultError)
from .quadrature import LAMBDA_MAX, OSC_TOL, REL_TOL, warn_approximate


@dataclass(frozen=True)
class Piece:
    """phi(lam) = func(lam) * (lam - lo)**exponent on (lo, hi)."""
    lo: float
    hi: float
    func: Callable
    exponent: float = 0.0

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        if self.exponent == 0.0:
            return self.func(lam)
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.func(lam) * (lam - self.lo) ** self.exponent


def _const(c):
    return lambda lam: np.full(np.shape(lam), float(c))


class Density:
    kind = "abstract"
    min_growth = 0       # least p with (1+lam^2)^-p |phi| integrable
    laplace_exponent = 0.0  # h(t) ~ t^-s as t -> 0 for the Laplace side
    delta_weight = 0.0   # coefficient of delta(x) in the kernel

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        out = np.zeros(lam.shape)
        for pc in self.pieces():
            m = (lam > pc.lo) & (lam < pc.hi)
            if np.any(m):
                out[m] = pc(lam[m])
        return out

    def pieces(self):
        return []

    def support(self):
        ps = self.pieces()
        if not ps:
            return (0.0, 0.0)
        return (min(p.lo for p in ps), max(p.hi for p in ps))

    def to_spec(self):
        raise NotImplementedError

    def breakpoints(self):
        pts = set()
        for p in self.pieces():
            pts.update(v for v in (p.lo, p.hi) if np.isfinite(v))
        return sorted(pts)

    def __repr__(self):
        return f"{type(self).__name__}({self.to_spec()})"


class ZeroDensity(Density):
    kind = "zero"

    def to_spec(self):
        return {"kind": "zero"}


class Lebesgue(Density):
    kind = "lebesgue"

    def __init__(self, level=1.0):
        self.level = float(level)
        self.min_growth = 1 if self.level != 0 else 0
        self.delta_weight = self.level

    def pieces(self):
        if self.level == 0:
            return []
        return [Piece(-np.inf, np.inf, _const(self.level))]

    def to_spec(self):
        return {"kind": "lebesgue", "level": self.level}


class Lorentzian(Density):
    """amplitude / (1 + (lam/width)^2)."""
    kind = "lorentzian"

    def __init__(self, amplitude=1.0, width=1.0):
        if not width > 0:
            raise InvalidMeasureError("lorentzian: width must be positive")
        self.amplitude = float(amplitude)
        self.width = float(width)

    def _f(self, lam):
        return self.amplitude / (1.0 + (lam / self.width) ** 2)

    def pieces(self):
        return [Piece(-np.inf, np.inf, self._f)]

    def kernel(self, x):
        x = np.asarray(x, dtype=float)
        return 0.5 * self.amplitude * self.width * np.exp(-self.width * np.abs(x)) + 0j

    def to_spec(self):
        return {"kind": "lorentzian", "amplitude": self.amplitude, "width": self.width}


class Power(Density):
    """(2 pi / Gamma(a)) lam^(a-1) on lam > 0, zero on lam < 0.

    Normalized so that (1/2pi) int e^{-t lam} phi dlam = t^-a.
    """
    kind = "power"

    def __init__(self, a=0.5):
        a = float(a)
        if not a > 0:
            raise InvalidMeasureError("power: exponent a must be positive")
        self.a = a
        self.coef = 2 * np.pi / special.gamma(a)
        self.min_growth = int(np.floor(a / 2)) + 1
        self.laplace_exponent = a
        self.delta_weight = np.pi if a == 1.0 else 0.0

    def pieces(self):
        return [Piece(0.0, np.inf, _const(self.coef), self.a - 1.0)]

    def to_spec(self):
        return {"kind": "power", "a": self.a}


class Window(Density):
    """Constant level on [lo, hi]."""
    kind = "window"

    def __init__(self, level=1.0, lo=-1.0, hi=1.0):
        if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
            raise InvalidMeasureError("window: need finite lo < hi")
        self.level, self.lo, self.hi = float(level), float(lo), float(hi)

    def pieces(self):
        return [Piece(self.lo, self.hi, _const(self.level))]

    def kernel(self, x):
        x = np.asarray(x, dtype=float)
        c = self.level / (2 * np.pi)
        out = np.empty(x.shape, dtype=complex)
        small = np.abs(x) * (self.hi - self.lo) < 1e-8
        xs = np.where(small, 1.0, x)
        out[:] = c * (np.exp(-1j * xs * self.lo) - np.exp(-1j * xs * self.hi)) / (1j * xs)
        out[small] = c * (self.hi - self.lo)
        return out

    def to_spec(self):
        return {"kind": "window", "level": self.level, "lo": self.lo, "hi": self.hi}


class Table(Density):
    """Linear interpolation of (lambda, phi) samples, zero outside."""
    kind = "table"

    def __init__(self, lam, phi):
        lam = np.asarray(lam, dtype=float)
        phi = np.asarray(phi, dtype=float)
        if lam.size == 0 or phi.size == 0:
            raise InvalidMeasureError("table: empty table")
        if lam.ndim != 1 or lam.shape != phi.shape:
            raise InvalidMeasureError("table: lambda and phi must be 1-d of equal length")
        if lam.size < 2 or np.any(np.diff(lam) <= 0):
            raise InvalidMeasureError("table: lambda must be strictly increasing (>= 2 points)")
        if not (np.all(np.isfinite(lam)) and np.all(np.isfinite(phi))):
            raise InvalidMeasureError("table: non-finite entries")
        self.lam, self.phi = lam, phi

    def pieces(self):
        out = []
        for k in range(self.lam.size - 1):
            a, b = self.lam[k], self.lam[k + 1]
            fa, s = self.phi[k], (self.phi[k + 1] - self.phi[k]) / (b - a)
            out.append(Piece(a, b, lambda lam, a=a, fa=fa, s=s: fa + s * (lam - a)))
        return out

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        return np.interp(lam, self.lam, self.phi, left=0.0, right=0.0)

    def to_spec(self):
        return {"kind": "table", "lambda": self.lam.tolist(), "phi": self.phi.tolist()}


class SumDensity(Density):
    kind = "sum"

    def __init__(self, terms):
        flat = []
        for t in terms:
            flat.extend(t.terms if isinstance(t, SumDensity) else [t])
        self.terms = [t for t in flat if not isinstance(t, ZeroDensity)]
        self.min_growth = max([t.min_growth for t in self.terms], default=0)
        self.laplace_exponent = max([t.laplace_exponent for t in self.terms], default=0.0)
        self.delta_weight = sum(t.delta_weight for t in self.terms)

    def pieces(self):
        return [p for t in self.terms for p in t.pieces()]

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        return sum((t(lam) for t in self.terms), np.zeros(lam.shape))

    def to_spec(self):
        return {"kind": "sum", "terms": [t.to_spec() for t in self.terms]}


class Weighted(Density):
    """base(lam) * (1 + lam^2)^-p."""
    kind = "weighted"

    def __init__(self, base, p):
        if isinstance(base, Weighted):
            base, p = base.base, base.p + p
        self.base, self.p = base, int(p)
        self.min_growth = max(base.min_growth - self.p, 0)
        self.laplace_exponent = base.laplace_exponent

    def pieces(self):
        p = self.p
        return [Piece(pc.lo, pc.hi,
                      lambda lam, f=pc.func: f(lam) / (1.0 + lam * lam) ** p,
                      pc.exponent)
                for pc in self.base.pieces()]

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        return self.base(lam) / (1.0 + lam * lam) ** self.p

    def to_spec(self):
        return {"kind": "weighted", "p": self.p, "base": self.base.to_spec()}


ZERO = ZeroDensity()


def density_from_spec(spec):
    if spec is None:
        return ZERO
    if not isinstance(spec, dict) or "kind" not in spec:
        raise InvalidMeasureError("density: expected an object with a 'kind' field")
    kind = spec["kind"]
    params = {k: v for k, v in spec.items() if k != "kind"}

    def num(name, default=None):
        v = params.pop(name, default)
        if v is None:
            raise InvalidMeasureError(f"density.{name}: missing for kind '{kind}'")
        try:
            return float(v)
        except (TypeError, ValueError):
            raise InvalidMeasureError(f"density.{name}: not a number: {v!r}") from None

    if kind == "zero":
        d = ZERO
    elif kind == "lebesgue":
        d = Lebesgue(num("level", 1.0))
    elif kind == "lorentzian":
        d = Lorentzian(num("amplitude", 1.0), num("width", 1.0))
    elif kind == "power":
        d = Power(num("a"))
    elif kind == "window":
        d = Window(num("level", 1.0), num("lo"), num("hi"))
    elif kind == "table":
        try:
            lam, phi = params.pop("lambda"), params.pop("phi")
        except KeyError as e:
            raise InvalidMeasureError(f"density.{e.args[0]}: missing for kind 'table'") from None
        d = Table(lam, phi)
    elif kind == "sum":
        terms = params.pop("terms", None)
        if not isinstance(terms, list):
            raise InvalidMeasureError("density.terms: expected a list")
        d = SumDensity([density_from_spec(t) for t in terms])
    elif kind == "weighted":
        base = params.pop("base", None)
        p = params.pop("p", None)
        if not isinstance(p, int) or p < 0:
            raise InvalidMeasureError("density.p: expected a non-negative integer")
        d = Weighted(density_from_spec(base), p)
    else:
        raise InvalidMeasureError(f"density.kind: unknown kind {kind!r}")
    if params:
        raise InvalidMeasureError(f"density.{sorted(params)[0]}: unexpected field for kind '{kind}'")
    return d


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralMeasure:
    """density + atoms, with a declared growth exponent.

    ``growth_p=None`` picks the least admissible exponent.
    """
    density: Density = field(default=ZERO)
    atoms: tuple = ()
    growth_p: Optional[int] = None
    gamma_hint: Optional[float] = None

    def __post_init__(self):
        atoms = []
        for a in self.atoms:
            try:
                loc, mass = (a["lambda"], a["mass"]) if isinstance(a, dict) else a
                loc, mass = float(loc), float(mass)
            except (KeyError, TypeError, ValueError):
                raise InvalidMeasureError(f"atoms: malformed entry {a!r}") from None
            if not (np.isfinite(loc) and np.isfinite(mass)) or mass == 0.0:
                raise InvalidMeasureError(f"atoms: mass must be finite and nonzero at {loc}")
            atoms.append((loc, mass))
        atoms.sort()
        locs = [a[0] for a in atoms]
        if len(set(locs)) != len(locs):
            raise InvalidMeasureError("atoms: locations must be distinct")
        object.__setattr__(self, "atoms", tuple(atoms))
        need = self.density.min_growth
        p = need if self.growth_p is None else self.growth_p
        if not isinstance(p, (int, np.integer)) or p < 0:
            raise InvalidMeasureError("growth_p: expected a non-negative integer")
        if p < need:
            raise InvalidMeasureError(
                f"growth_p: declared {p} but the {self.density.kind} density needs {need}")
        object.__setattr__(self, "growth_p", int(p))
        if self.gamma_hint is not None:
            g = float(self.gamma_hint)
            if g >= 0 and any(m < 0 for _, m in atoms):
                raise InvalidMeasureError("atoms: negative mass with non-negative gamma_hint")
            lo, hi = _default_window(self.density)
            if ess_inf_density(self, np.linspace(lo, hi, 2001)) < g - 1e-12:
                raise InvalidMeasureError("gamma_hint: density drops below the declared bound")

    # -- conveniences --
    @property
    def locations(self):
        return np.array([a[0] for a in self.atoms], dtype=float)

    @property
    def masses(self):
        return np.array([a[1] for a in self.atoms], dtype=float)

    def __add__(self, other):
        merged = dict(self.atoms)
        for loc, m in other.atoms:
            merged[loc] = merged.get(loc, 0.0) + m
        atoms = tuple((k, v) for k, v in merged.items() if v != 0.0)
        return SpectralMeasure(SumDensity([self.density, other.density]), atoms,
                               max(self.growth_p, other.growth_p))

    def is_nonnegative(self):
        if any(m < 0 for _, m in self.atoms):
            return False
        lo, hi = _default_window(self.density)
        return ess_inf_density(self, np.linspace(lo, hi, 2001)) >= 0

    def halfline_supported(self):
        """True when M((-inf, 0]) = 0 by inspection."""
        lo, _ = self.density.support()
        return lo >= 0 and all(loc > 0 for loc, _ in self.atoms)

    def to_spec(self):
        spec = {"density": self.density.to_spec(),
                "atoms": [{"lambda": l, "mass": m} for l, m in self.atoms],
                "growth_p": self.growth_p}
        if self.gamma_hint is not None:
            spec["gamma_hint"] = float(self.gamma_hint)
        return spec

    @classmethod
    def from_spec(cls, spec):
        if not isinstance(spec, dict):
            raise InvalidMeasureError("measure: expected a JSON object")
        extra = set(spec) - {"density", "atoms", "growth_p", "gamma_hint"}
        if extra:
            raise InvalidMeasureError(f"{sorted(extra)[0]}: unexpected top-level field")
        atoms = spec.get("atoms", [])
        if not isinstance(atoms, list):
            raise InvalidMeasureError("atoms: expected a list")
        for i, a in enumerate(atoms):
            if not isinstance(a, dict) or set(a) != {"lambda", "mass"}:
                raise InvalidMeasureError(f"atoms[{i}]: expected {{'lambda': x, 'mass': m}}")
        p = spec.get("growth_p")
        if p is not None and (isinstance(p, bool) or not isinstance(p, int)):
            raise InvalidMeasureError("growth_p: expected a non-negative integer")
        return cls(density_from_spec(spec.get("density")),
                   tuple((a["lambda"], a["mass"]) for a in atoms), p,
                   spec.get("gamma_hint"))

    # -- integration --
    def integrate(self, g, window=None, points=(), rtol=REL_TOL,
                  lambda_max=LAMBDA_MAX, include_atoms=True, full_output=False):
        """int g(lam) dM(lam) for a real, vectorizable g.

        With ``window=(center, width)`` the line is truncated to
        |lam - center| <= L and L doubled until the increment is below rtol;
        otherwise half-lines are mapped to finite intervals by lam = c + tan s.
        """
        total, err, ok = 0.0, 0.0, True
        for pc in self.density.pieces():
            if window is None:
                v, e = _integrate_piece_mapped(pc, g, points, rtol)
            else:
                v, e, conv = _integrate_piece_window(pc, g, window, rtol, lambda_max)
                ok &= conv
            total += v
            err += e
        if include_atoms and self.atoms:
            total += float(np.sum(self.masses * np.real(g(self.locations))))
        ok &= err <= max(rtol * abs(total), 1e-13)
        if not ok:
            warn_approximate("measure integral", err, rtol * abs(total))
        if full_output:
            return total, {"status": "converged" if ok else "approximate", "error": err}
        return total


class FiniteMeasure(SpectralMeasure):
    """A measure with finite total variation (growth exponent 0)."""

    def __post_init__(self):
        super().__post_init__()
        if self.density.min_growth > 0:
            raise NonFiniteResultError(
                f"{self.density.kind} density has infinite total variation")
        object.__setattr__(self, "growth_p", 0)

    def total_variation(self, rtol=REL_TOL):
        ac = 0.0
        for pc in self.density.pieces():
            ac += _integrate_piece_mapped(pc, lambda lam: np.ones_like(lam), (), rtol, absolute=True)[0]
        return ac + float(np.sum(np.abs(self.masses)))

    def total_mass(self, rtol=REL_TOL):
        return self.integrate(lambda lam: np.ones_like(lam), rtol=rtol)


def _default_window(density):
    lo, hi = density.support()
    lo = max(lo, -100.0)
    hi = min(hi, 100.0)
    if lo >= hi:
        lo, hi = -1.0, 1.0
    return lo, hi


def _quad(f, a, b, rtol, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        v, e = integrate.quad(f, a, b, epsabs=1e-14, epsrel=rtol, limit=400, **kw)
    return v, e


def _integrate_piece_mapped(pc, g, points, rtol, absolute=False):
    def h(lam):
        v = pc.func(lam) * np.real(g(lam))
        return np.abs(v) if absolute else v

    lo, hi = pc.lo, pc.hi
    total, err = 0.0, 0.0
    # peel off a unit interval carrying the algebraic endpoint behaviour
    if pc.exponent != 0.0 and np.isfinite(lo):
        cut = min(hi, lo + 1.0)
        inner = [p for p in points if lo < p < cut]
        edges = [lo] + inner + [cut]
        for k, (a, b) in enumerate(zip(edges[:-1], edges[1:])):
            if k == 0:
                v, e = _quad(h, a, b, rtol, weight="alg", wvar=(pc.exponent, 0.0))
            else:
                v, e = _quad(lambda lam: h(lam) * (lam - lo) ** pc.exponent, a, b, rtol)
            total += v
            err += e
        lo = cut
        if lo >= hi:
            return total, err
    hf = (lambda lam: h(lam) * (lam - pc.lo) ** pc.exponent) if pc.exponent != 0.0 else h

    if np.isfinite(lo) and np.isfinite(hi):
        pts = [p for p in points if lo < p < hi]
        v, e = _quad(hf, lo, hi, rtol, points=pts or None)
        return total + v, err + e

    # map infinite ends: lam = c + tan s
    c = 0.0 if not np.isfinite(lo) and not np.isfinite(hi) else (lo if np.isfinite(lo) else hi)
    slo = np.arctan(lo - c) if np.isfinite(lo) else -np.pi / 2
    shi = np.arctan(hi - c) if np.isfinite(hi) else np.pi / 2

    def mapped(s):
        t = np.tan(s)
        return hf(c + t) * (1.0 + t * t)

    spts = sorted(np.arctan(np.asarray([p for p in points if lo < p < hi], dtype=float) - c))
    v, e = _quad(mapped, slo, shi, rtol, points=spts or None)
    return total + v, err + e


def _restrict(pc, a, b):
    """The part of a piece on [a, b]; the endpoint factor is kept only at lo."""
    a, b = max(a, pc.lo), min(b, pc.hi)
    if a >= b:
        return None
    if pc.exponent == 0.0 or a == pc.lo:
        return Piece(a, b, pc.func, pc.exponent)
    return Piece(a, b, lambda lam, f=pc.func, lo=pc.lo, e=pc.exponent: f(lam) * (lam - lo) ** e)


def _integrate_piece_window(pc, g, window, rtol, lambda_max):
    center, width = window
    width = max(float(width), 1e-12)
    L = 32.0 * width

    def part(a, b):
        # panels of a few spectral widths keep quad from skipping features
        n = int(min(64, max(1, np.ceil((b - a) / (8 * width)))))
        edges = np.linspace(a, b, n + 1)
        v = e = 0.0
        for k in range(n):
            q = _restrict(pc, edges[k], edges[k + 1])
            if q is not None:
                vv, ee = _integrate_piece_mapped(q, g, (), rtol)
                v += vv
                e += ee
        return v, e

    total, err = part(center - L, center + L)
    small = 0
    while L < lambda_max:
        v1, e1 = part(center - 2 * L, center - L)
        v2, e2 = part(center + L, center + 2 * L)
        inc = v1 + v2
        total += inc
        err += e1 + e2
        L *= 2
        if abs(inc) <= rtol * abs(total) or (total == 0.0 and inc == 0.0):
            small += 1
            if small >= 2:
                return total, err, True
        else:
            small = 0
    return total, err, False


# ---------------------------------------------------------------------------

def load_measure(path):
    with open(path) as fh:
        try:
            spec = json.load(fh)
        except json.JSONDecodeError as e:
            raise InvalidMeasureError(f"measure file: not valid JSON ({e.msg} at line {e.lineno})") from None
    return SpectralMeasure.from_spec(spec)


def ess_inf_density(measure, grid):
    """Minimum of the density over a grid (numerical semiboundedness bound)."""
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise InvalidMeasureError("ess_inf_density: empty grid")
    if isinstance(measure.density, Table) and measure.density.lam.size == 0:
        raise InvalidMeasureError("table: empty table")
    vals = measure.density(grid)
    return float(np.min(vals))


def weight_measure(measure, p):
    """Multiply by (1 + lam^2)^-p; the result has finite total variation."""
    p = int(p)
    if p < measure.growth_p:
        raise NonFiniteResultError(
            f"weight exponent {p} is below the declared growth exponent {measure.growth_p}")
    atoms = tuple((loc, m / (1.0 + loc * loc) ** p) for loc, m in measure.atoms)
    dens = measure.density if p == 0 else Weighted(measure.density, p)
    if isinstance(measure.density, ZeroDensity):
        dens = ZERO
    return FiniteMeasure(dens, atoms, 0)


def certify_growth(measure, p=None, rtol=REL_TOL, lambda_max=2.0 ** 40):
    """Check that int_{|lam|<=L} (1+lam^2)^-p d|M| settles as L doubles.

    Returns (certified, last_value).  Geometric extrapolation of the
    increments must put the remaining tail below rtol of the total.
    """
    p = measure.growth_p if p is None else int(p)
    absw = lambda lam: 1.0 / (1.0 + lam * lam) ** p

    def shell(a, b):
        s = 0.0
        for pc in measure.density.pieces():
            q = _restrict(pc, a, b)
            if q is not None:
                s += _integrate_piece_mapped(q, absw, (), 1e-10, absolute=True)[0]
        return s

    L = 1.0
    total = shell(-L, L) + sum(abs(m) * absw(loc) for loc, m in measure.atoms if abs(loc) <= L)
    prev_inc = None
    while L < lambda_max:
        inc = shell(-2 * L, -L) + shell(L, 2 * L)
        inc += sum(abs(m) * absw(loc) for loc, m in measure.atoms if L < abs(loc) <= 2 * L)
        total += inc
        L *= 2
        if prev_inc is not None and prev_inc > 0:
            r = inc / prev_inc
            if r < 0.75 and inc * r / (1 - r) <= rtol * max(total, 1e-300):
                return True, total
        elif prev_inc == 0 and inc == 0 and L > 64:
            return True, total
        prev_inc = inc
    return False, total


# ---------------------------------------------------------------------------

def cayley_point(lam):
    """(lam - i)/(lam + i), the image of the line on the unit circle."""
    lam = np.asarray(lam, dtype=float)
    return (lam - 1j) / (lam + 1j)


def _as_finite(m):
    if isinstance(m, FiniteMeasure):
        return m
    if m.density.min_growth > 0 or m.growth_p > 0:
        raise NonFiniteResultError("coefficient integrals need a measure of finite variation")
    return FiniteMeasure(m.density, m.atoms, 0)


def cayley_coeff(m, n, rtol=1e-10, full_output=False):
    """int ((lam - i)/(lam + i))^-n dm(lam) for a finite measure m.

    With lam = tan s the integrand becomes (-1)^n e^{-2ins}, so each density
    piece is a finite Fourier integral in s (QAWO).
    """
    m = _as_finite(m)
    n = int(n)
    total = 0j
    err = 0.0
    for pc in m.density.pieces():
        v, e = _cayley_piece(pc, n, rtol)
        total += v
        err += e
    if m.atoms:
        total += complex(np.sum(m.masses * cayley_point(m.locations) ** (-n)))
    scale = max(abs(total), m.total_variation() if m.density.pieces() else 0.0, 1e-300)
    ok = err <= max(rtol, 1e-9) * scale
    if not ok:
        warn_approximate(f"cayley_coeff(n={n})", err, rtol * scale)
    if full_output:
        return total, {"status": "converged" if ok else "approximate", "error": err}
    return total


def _cayley_piece(pc, n, rtol):
    slo, shi = np.arctan(pc.lo), np.arctan(pc.hi)
    sign = -1.0 if n % 2 else 1.0
    w = 2.0 * abs(n)
    sgn = 1.0 if n >= 0 else -1.0

    def rho(s):
        t = np.tan(s)
        return pc(t) * (1.0 + t * t)

    def cs(f, a, b, exponent=0.0):
        kw = {}
        if exponent != 0.0:
            kw = {"weight": "alg", "wvar": (exponent, 0.0)}
            re, e1 = _quad(lambda s: f(s) * np.cos(w * s), a, b, rtol, **kw)
            im, e2 = _quad(lambda s: f(s) * np.sin(w * s), a, b, rtol, **kw)
        elif w == 0:
            re, e1 = _quad(f, a, b, rtol)
            im, e2 = 0.0, 0.0
        else:
            re, e1 = _quad(f, a, b, rtol, weight="cos", wvar=w)
            im, e2 = _quad(f, a, b, rtol, weight="sin", wvar=w)
        return re - 1j * sgn * im, e1 + e2

    total, err = 0j, 0.0
    a = slo
    if pc.exponent != 0.0:
        # (tan s - lo)^e ~ (s - slo)^e sec^2(slo)^e; split it off analytically
        b = slo + 0.5 * min(shi - slo, 0.5)

        def smooth(s):
            t = np.tan(s)
            ds = s - slo
            ratio = np.where(ds > 0, (t - pc.lo) / np.where(ds > 0, ds, 1.0), 1.0 + pc.lo ** 2)
            return pc.func(t) * ratio ** pc.exponent * (1.0 + t * t)

        v, e = cs(smooth, slo, b, pc.exponent)
        total += v
        err += e
        a = b
    v, e = cs(rho, a, shi)
    return sign * (total + v), err + e


def wiener_atom_statistic(m, N, n_start=None, full_output=False):
    """Mean of |c_n|^2 over n = -N..N, or over n_start..n_start+N-1.

    The symmetric mean converges to the sum of squared pushforward atom
    masses; the one-sided tail version is exact for atom-plus-Riesz-type
    measures whose coefficients vanish for n >= n_start.
    """
    N = int(N)
    if N < 1:
        raise ValueError("N must be >= 1")
    idx = range(-N, N + 1) if n_start is None else range(n_start, n_start + N)
    vals, status = [], "converged"
    for n in idx:
        c, info = cayley_coeff(m, n, full_output=True)
        vals.append(abs(c) ** 2)
        if info["status"] != "converged":
            status = "approximate"
    out = float(np.mean(vals))
    if full_output:
        return out, {"status": status}
    return out
