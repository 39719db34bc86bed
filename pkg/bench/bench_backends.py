"""Benchmark the numba kernels against the pure-numpy fallback.

Run from the repo root:

    python bench/bench_backends.py

Forces both flavors in-process (the numpy versions are always
importable), so no env juggling is needed; set PROXCOR_BACKEND=numpy to
check what an install without numba would use by default.
"""

import time

import numpy as np

from proxcor import _kernels, backend_name


def timeit(fn, *args, repeat=3):
    fn(*args)  # warm-up (and JIT compile for the numba flavor)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    print(f"active backend: {backend_name()}")
    radii = np.full(250, np.sqrt(1 - 0.6**2))
    w = np.linspace(-0.3, 0.3, 18)
    w /= np.linalg.norm(w)
    w *= np.sqrt(1 - 0.37**2)

    cases = [
        ("sphere_tails 2e5 x 48", "sphere_tails", (7, 200_000, 48, 0.8)),
        ("rho_fixed_q 1e6 x 18", "rho_fixed_q", (7, 1_000_000, 18, 0.185, 0.866, w)),
        ("null_traces 2000 x 250 x 18", "null_covariance_traces", (7, 2000, 250, 18, radii)),
    ]
    print(f"{'kernel':<30} {'numpy':>10} {'active':>10} {'speedup':>9}")
    for label, name, args in cases:
        t_np, out_np = timeit(getattr(_kernels, f"{name}_numpy"), *args)
        t_ac, out_ac = timeit(getattr(_kernels, name), *args)
        worst = float(np.max(np.abs(out_np - out_ac)))
        print(
            f"{label:<30} {t_np:>9.3f}s {t_ac:>9.3f}s {t_np / t_ac:>8.1f}x"
            f"   max|diff|={worst:.2e}"
        )


if __name__ == "__main__":
    main()
