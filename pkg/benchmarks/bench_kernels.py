"""Time the jitted kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5]

The numpy versions are the ones used when WHLAB_DISABLE_JIT=1.
"""
import argparse
import time

import numpy as np

from whlab import _accel


def best_of(fn, repeat):
    fn()  # warm-up (includes compilation for the jitted path)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng):
    x = np.linspace(0, 40, 20000)
    y = np.sort(rng.random(400))
    wv = rng.standard_normal(400) + 0j
    z = 1j * np.linspace(-200, 200, 4000)
    v = np.exp(-np.linspace(0.1, 5, 100000))
    return {
        "laguerre_table n=200": (lambda: _accel.laguerre_table_np(200, 1, x),
                                 lambda: _accel._laguerre_table_nb(200, 1.0, x)),
        "laguerre_fn_table n=200": (lambda: _accel.laguerre_fn_table_np(200, x),
                                    lambda: _accel._laguerre_fn_table_nb(200, x)),
        "expsum 4000x400": (lambda: _accel.expsum_np(y, wv, z),
                            lambda: _accel._expsum_nb(y, wv, z)),
        "bump_shape 1e6": (lambda: _accel.bump_shape_np(np.linspace(-0.5, 1.5, 10 ** 6)),
                           lambda: _accel._bump_shape_nb(np.linspace(-0.5, 1.5, 10 ** 6))),
        "helmholtz p=3 1e5": (lambda: _accel.helmholtz_stencil_np(v, 1e-3, 3),
                              lambda: _accel._helmholtz_stencil_nb(v, 1e-3, 3)),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _accel.numba is None:
        raise SystemExit("numba is not installed; nothing to compare")
    rng = np.random.default_rng(0)
    print(f"{'kernel':28s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s}  rel diff")
    for name, (f_np, f_nb) in cases(rng).items():
        a, b = np.asarray(f_np()), np.asarray(f_nb())
        diff = float(np.max(np.abs(a - b)) / max(np.max(np.abs(a)), 1e-300))
        t_np = best_of(f_np, args.repeat)
        t_nb = best_of(f_nb, args.repeat)
        print(f"{name:28s} {1e3 * t_np:11.2f} {1e3 * t_nb:11.2f} {t_np / t_nb:8.1f}  {diff:.2e}")


if __name__ == "__main__":
    main()
