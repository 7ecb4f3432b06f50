"""Command-line experiment driver.

    whlab <subcommand> --measure spec.json [options]

Every run writes one report (JSON by default, CSV for grid outputs) and
exits 0 when converged, 2 when some value is only approximate, 1 when the
input was refused.
"""
import argparse
import csv
import io
import json
import os
import sys
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import ApproximateResultWarning, WhlabError
from .quadrature import LAMBDA_MAX, OSC_TOL, REL_TOL

EXIT = {"converged": 0, "approximate": 2, "refused": 1}


def _plain(v):
    """JSON-safe copy: complex -> [re, im], numpy -> python, nan -> null."""
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_plain(x) for x in v]
    if isinstance(v, (complex, np.complexfloating)):
        return [_plain(v.real), _plain(v.imag)]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return f if np.isfinite(f) else None
    return v


@dataclass
class DiagnosticReport:
    experiment: str
    inputs: dict
    tolerances: dict
    results: dict = field(default_factory=dict)   # column name -> list
    values: dict = field(default_factory=dict)    # scalars
    residuals: dict = field(default_factory=dict)
    verdict: str = None
    status: str = "converged"
    error: dict = None

    def to_dict(self):
        d = {
            "experiment": self.experiment,
            "inputs": self.inputs,
            "tolerances": self.tolerances,
            "results": self.results,
            "values": self.values,
            "residuals": self.residuals,
            # verdicts are only meaningful for converged runs
            "verdict": self.verdict if self.status == "converged" else None,
            "status": self.status,
        }
        if self.error:
            d["error"] = self.error
        return _plain(d)

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = list(self.results)
        if not cols:
            w.writerow(["status"])
            w.writerow([self.status])
            return buf.getvalue()
        flat_cols, getters = [], []
        for c in cols:
            col = self.results[c]
            if any(isinstance(x, (complex, np.complexfloating)) for x in col):
                flat_cols += [f"{c}_re", f"{c}_im"]
                getters += [lambda i, c=c: complex(self.results[c][i]).real,
                            lambda i, c=c: complex(self.results[c][i]).imag]
            else:
                flat_cols.append(c)
                getters.append(lambda i, c=c: self.results[c][i])
        w.writerow(flat_cols)
        for i in range(len(self.results[cols[0]])):
            w.writerow([_csv_cell(g(i)) for g in getters])
        return buf.getvalue()

    @property
    def exit_code(self):
        return EXIT[self.status]


def _csv_cell(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def _grid(text):
    try:
        a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b:n, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("grid needs n >= 1")
    return np.linspace(a, b, n)


def _pair(text):
    try:
        a, b = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b, got {text!r}") from None
    return (a, b)


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _default_rel_tol():
    env = os.environ.get("WHLAB_TOL_OVERRIDE")
    if env:
        try:
            return float(env)
        except ValueError:
            print(f"whlab: ignoring malformed WHLAB_TOL_OVERRIDE={env!r}", file=sys.stderr)
    return REL_TOL


# -- experiments --------------------------------------------------------------

def _load(args):
    from .measure import load_measure
    return load_measure(args.measure)


def run_synth_kernel(args, rep):
    from .kernel import regularized_kernel, synthesize_kernel
    m = _load(args)
    rep.inputs["measure"] = m.to_spec()
    x = args.x_grid
    if args.q is not None:
        vals, info = regularized_kernel(m, args.q, x, osc_tol=args.osc_tol,
                                        lambda_max=args.lambda_max, full_output=True)
    else:
        vals, info = synthesize_kernel(m, x, osc_tol=args.osc_tol, full_output=True)
    vals = np.atleast_1d(vals)
    status = [str(s) for s in np.atleast_1d(info["status"])]
    rep.results = {"x": list(x), "re": [float(v.real) for v in vals],
                   "im": [float(v.imag) for v in vals], "status": status}
    if any(s != "converged" for s in status):
        rep.status = "approximate"
    rep.verdict = None


def run_bounds(args, rep):
    from .forms import section_spectrum, toeplitz_section
    from .measure import ess_inf_density
    m = _load(args)
    rep.inputs["measure"] = m.to_spec()
    T = toeplitz_section(m, args.N)
    sizes = sorted({n for n in (2 ** k for k in range(0, 20)) if n <= args.N} | {args.N})
    lo, hi = [], []
    for n in sizes:
        a, b, _ = section_spectrum(T.leading(n))
        lo.append(a)
        hi.append(b)
    rep.results = {"N": sizes, "min_eigenvalue": lo, "max_eigenvalue": hi}
    viol = max([0.0] + [lo[i + 1] - lo[i] for i in range(len(lo) - 1)]
               + [hi[i] - hi[i + 1] for i in range(len(hi) - 1)])
    herm = float(np.max(np.abs(T.matrix - T.matrix.conj().T)))
    rep.residuals = {"monotonicity_violation": viol, "hermitian_defect": herm}
    if m.density.pieces():
        grid = np.linspace(-100, 100, 20001)
        rep.values["density_min_on_window"] = ess_inf_density(m, grid)
        rep.values["density_max_on_window"] = float(np.max(m.density(grid)))
    if T.status != "converged":
        rep.status = "approximate"
    tol = 1e-10 * max(1.0, abs(hi[-1]))
    rep.verdict = ("extremes monotone in N" if viol <= tol
                   else "extremes not monotone in N")


def run_defect_probe(args, rep):
    from .forms import defect_probe
    m = _load(args)
    rep.inputs["measure"] = m.to_spec()
    rows, verdict = defect_probe(m, args.lambda0, args.scales, rtol=args.rel_tol,
                                 lambda_max=args.lambda_max)
    rep.results = {"n": [r[0] for r in rows], "norm2": [r[1] for r in rows],
                   "form": [r[2] for r in rows], "ratio": [r[3] for r in rows]}
    rep.values["ratio_growth"] = rows[-1][3] / rows[0][3]
    rep.verdict = verdict


def run_correspondence(args, rep):
    from .forms import correspondence_residual
    m = _load(args)
    rep.inputs["measure"] = m.to_spec()
    gs = args.g or [[1.0], [0.0, 1.0], [2 ** -0.5, 2 ** -0.5]]
    labels, spec, toe, res = [], [], [], []
    for g in gs:
        r, info = correspondence_residual(m, g, args.N, rtol=args.rel_tol, full_output=True)
        labels.append(",".join(f"{v:g}" for v in g))
        spec.append(info["spectral"])
        toe.append(info["toeplitz"])
        res.append(r)
        if info["status"] != "converged":
            rep.status = "approximate"
    rep.results = {"g": labels, "spectral": spec, "toeplitz": toe, "residual": res}
    rep.residuals["max_residual"] = max(res)
    rep.verdict = ("correspondence holds" if max(res) <= args.corr_tol
                   else "correspondence residual above tolerance")


def run_rb_pipeline(args, rep):
    from .kernel import rb_pipeline
    m = _load(args)
    rep.inputs["measure"] = m.to_spec()
    p = args.p if args.p is not None else max(m.growth_p, 1)
    out = rb_pipeline(m, p, fit_window=args.fit_window, ode_window=args.ode_window,
                      n_count=args.n_count)
    rep.results = {"n": list(out["n"]), "coefficient": list(out["coefficients"])}
    rep.values = {"p": p, "fit_coefficients": list(out["fit_coefficients"]), "b": out["b"],
                  "atom_weighted_mass": out["atom_weighted_mass"]}
    rep.residuals = {"ode": out["ode_residual"], "fit": out["fit_residual"],
                     "constancy": out["constancy_residual"], "oscillation": out["oscillation"]}
    rep.status = out["status"]
    rep.verdict = out["verdict"]


def run_laguerre_verify(args, rep):
    from .laguerre import (cayley_power_identity_residual, gram_matrix, laguerre_laplace_l1,
                           laguerre_laplace_l1_quad)
    nmax = args.n_max
    la1 = max(abs(laguerre_laplace_l1(n, 1.0) - 1.0) for n in range(nmax + 1))
    zetas = [0.3, 0.3 + 5j, 0.5 - 2j, 1.0 + 1j, 2.0 - 3j, 10.0]
    kl = 0.0
    for n in range(nmax + 1):
        for z in zetas:
            c = laguerre_laplace_l1(n, z)
            kl = max(kl, abs(laguerre_laplace_l1_quad(n, z) - c) / max(1.0, abs(c)))
    lams = [-50.0, -7.5, -1.0, 0.0, 1.0, 10.0, 50.0]
    lag = max(cayley_power_identity_residual(n, lam)
              for n in range(1, min(nmax, 30) + 1) for lam in lams)
    G = gram_matrix(min(nmax, 60))
    gram = float(np.max(np.abs(G - np.eye(G.shape[0]))))
    names = ["laplace_at_one", "laplace_closed_vs_quadrature", "cayley_power", "gram"]
    vals = [la1, kl, lag, gram]
    tols = [1e-8, 1e-8, 1e-6, 1e-8]
    rep.results = {"identity": names, "max_residual": vals, "tolerance": tols,
                   "pass": [v <= t for v, t in zip(vals, tols)]}
    rep.residuals = dict(zip(names, vals))
    rep.verdict = ("all identities hold" if all(rep.results["pass"])
                   else "identity residual above tolerance")


def run_hankel(args, rep):
    from .errors import SingularKernelError
    from .hankel import (HankelProfile, bernstein_profile, complete_monotonicity_residual,
                         hankel_closability_flag, hankel_form_spectral, hankel_form_time)
    from .testfunctions import Bump
    m = _load(args)
    rep.inputs["measure"] = m.to_spec()
    t = args.t_grid
    h = bernstein_profile(m, t)
    rep.results = {"t": list(t), "h": list(np.atleast_1d(h))}
    checks = args.check
    parts = []
    if "cm" in checks:
        viol = complete_monotonicity_residual(lambda s: bernstein_profile(m, s), args.k_max, t)
        rep.residuals["cm_violation"] = viol
        parts.append("cm: " + ("pass" if viol >= -args.cm_tol else "fail"))
    if "closability" in checks:
        verdict, info = hankel_closability_flag(m)
        rep.values["closability"] = {"verdict": verdict, "t_probe": info["t"], "h_probe": info["h"],
                                     "threshold": info["threshold"]}
        parts.append("closability: " + verdict)
    if "forms" in checks:
        fs = [Bump(1.0, 0.0), Bump(1.0, 0.5), Bump(2.0, 0.25)]
        spec_v, time_v = [], []
        prof = HankelProfile.from_measure(m)
        for f in fs:
            spec_v.append(hankel_form_spectral(m, f))
            try:
                time_v.append(hankel_form_time(prof, f))
            except SingularKernelError:
                time_v.append(None)
        diffs = [abs(a - b) for a, b in zip(spec_v, time_v) if b is not None]
        rep.values["forms"] = {"f": [repr(f) for f in fs], "spectral": spec_v, "time": time_v}
        rep.residuals["forms_max_difference"] = max(diffs) if diffs else None
        ok = all(d <= 1e-4 for d in diffs)
        parts.append("forms: " + ("agree" if ok else "disagree"))
    rep.verdict = "; ".join(parts) if parts else None


# -- parser --------------------------------------------------------------------

def _g_vector(text):
    return _float_list(text)


class _Parser(argparse.ArgumentParser):
    # exit code 2 is reserved for approximate results
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _glue_negative_values(argv):
    """Let '--x-grid -1:1:5' through; argparse would read -1:1:5 as a flag."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in ("--x-grid", "--t-grid", "--fit-window", "--ode-window", "--scales", "--g",
                 "--lambda0") and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--rel-tol", type=float, default=_default_rel_tol(),
                        help="relative tolerance for smooth integrals (env WHLAB_TOL_OVERRIDE)")
    common.add_argument("--osc-tol", type=float, default=OSC_TOL,
                        help="tolerance for oscillatory integrals")
    common.add_argument("--lambda-max", type=float, default=LAMBDA_MAX,
                        help="cap for spectral truncation doubling")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--output", "-o", default=None, help="write report here instead of stdout")

    p = _Parser(prog="whlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"whlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth-kernel", parents=[common], help="kernel on an x grid")
    s.add_argument("--measure", required=True)
    s.add_argument("--x-grid", type=_grid, required=True, help="a:b:n")
    s.add_argument("--q", type=int, default=None, help="use the (1+lam^2)^-q regularized kernel")
    s.set_defaults(func=run_synth_kernel, default_format="csv")

    s = sub.add_parser("bounds", parents=[common], help="section eigenvalue extremes vs N")
    s.add_argument("--measure", required=True)
    s.add_argument("--N", type=int, required=True)
    s.set_defaults(func=run_bounds)

    s = sub.add_parser("defect-probe", parents=[common], help="scaled-bump closability probe")
    s.add_argument("--measure", required=True)
    s.add_argument("--lambda0", type=float, default=0.0)
    s.add_argument("--scales", type=_float_list, default=[1, 2, 4, 8, 16, 32, 64])
    s.set_defaults(func=run_defect_probe)

    s = sub.add_parser("correspondence", parents=[common], help="form vs Toeplitz section")
    s.add_argument("--measure", required=True)
    s.add_argument("--N", type=int, default=32)
    s.add_argument("--g", type=_g_vector, action="append", default=None,
                   help="coefficient vector, comma separated; repeatable")
    s.add_argument("--corr-tol", type=float, default=1e-5)
    s.set_defaults(func=run_correspondence)

    s = sub.add_parser("rb-pipeline", parents=[common], help="weighted kernel / coefficient pipeline")
    s.add_argument("--measure", required=True)
    s.add_argument("--p", type=int, default=None)
    s.add_argument("--fit-window", type=_pair, default=(0.5, 3.0))
    s.add_argument("--ode-window", type=_pair, default=(2.0, 5.0))
    s.add_argument("--n-count", type=int, default=21)
    s.set_defaults(func=run_rb_pipeline)

    s = sub.add_parser("laguerre-verify", parents=[common], help="Laguerre identity residuals")
    s.add_argument("--n-max", type=int, default=30)
    s.set_defaults(func=run_laguerre_verify, needs_measure=False)

    s = sub.add_parser("hankel", parents=[common], help="Laplace-side profile and forms")
    s.add_argument("--measure", required=True)
    s.add_argument("--t-grid", type=_grid, default=np.linspace(0.5, 10, 20))
    s.add_argument("--check", type=lambda v: [c.strip() for c in v.split(",") if c.strip()],
                   default=["cm", "closability", "forms"])
    s.add_argument("--k-max", type=int, default=4)
    s.add_argument("--cm-tol", type=float, default=1e-6)
    s.set_defaults(func=run_hankel)
    return p


def _echo_flags(args):
    skip = {"func", "default_format", "needs_measure", "output", "measure"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip:
            continue
        out[k] = v.tolist() if isinstance(v, np.ndarray) else v
    return out


def run(argv=None):
    """Parse, run one experiment, return (report, text)."""
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_negative_values(argv))
    fmt = args.format or getattr(args, "default_format", "json")
    args.format = fmt
    rep = DiagnosticReport(
        experiment=args.command,
        inputs={"flags": _echo_flags(args)},
        tolerances={"rel_tol": args.rel_tol, "osc_tol": args.osc_tol,
                    "lambda_max": args.lambda_max})
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", ApproximateResultWarning)
            args.func(args, rep)
        if any(issubclass(w.category, ApproximateResultWarning) for w in caught):
            if rep.status == "converged":
                rep.status = "approximate"
    except (WhlabError, OSError) as e:
        rep.status = "refused"
        rep.error = {"kind": getattr(e, "kind", "io"), "message": str(e)}
        rep.results, rep.values, rep.residuals = {}, {}, {}
        print(f"whlab: {rep.error['kind']}: {e}", file=sys.stderr)
    text = rep.to_csv() if fmt == "csv" else rep.to_json()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    return rep, text


def main(argv=None):
    rep, text = run(argv)
    if not _output_given(argv):
        sys.stdout.write(text)
    return rep.exit_code


def _output_given(argv):
    argv = sys.argv[1:] if argv is None else argv
    return any(a in ("--output", "-o") or a.startswith("--output=") for a in argv)


if __name__ == "__main__":
    sys.exit(main())
