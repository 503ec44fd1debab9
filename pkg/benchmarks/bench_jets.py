#!/usr/bin/env python3
"""Benchmark the jet product/division kernels: numba JIT vs pure-numpy fallback.

The same comparison can be driven through the environment: running any workload
with QUADALG_DISABLE_NUMBA=1 selects the numpy path package-wide. This script
times both implementations directly in one process and reports per-call timings
and the speedup ratio, after a warmup call so JIT compilation is not billed.
"""

import time

import numpy as np

from quadalg import _jet_kernels as kernels
from quadalg.jets import jet_space


def _time_calls(fn, args, repeats):
    fn(*args)  # warmup (and JIT compile on the numba path)
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn(*args)
    return (time.perf_counter() - t0) / repeats


def bench_space(n_vars, degree, repeats):
    sp = jet_space(n_vars, degree)
    rng = np.random.default_rng(0)
    a = rng.standard_normal(sp.n_terms) + 1j * rng.standard_normal(sp.n_terms)
    b = rng.standard_normal(sp.n_terms) + 1j * rng.standard_normal(sp.n_terms)
    b[0] += 10.0  # keep the divisor well-conditioned
    mul_args = (a, b, sp.mul_i, sp.mul_j, sp.mul_k, sp.n_terms)
    div_args = (a, b, sp.div_i, sp.div_j, sp.div_k,
                sp.div_level_starts, sp.term_level_starts, sp.n_terms)

    rows = []
    t_np_mul = _time_calls(kernels.mul_numpy, mul_args, repeats)
    t_np_div = _time_calls(kernels.div_numpy, div_args, repeats)
    if kernels.NUMBA_ACTIVE:
        t_nb_mul = _time_calls(kernels.mul_numba, mul_args, repeats)
        t_nb_div = _time_calls(kernels.div_numba, div_args, repeats)
        # cross-check both paths agree
        ref = kernels.mul_numpy(*mul_args)
        alt = kernels.mul_numba(*mul_args)
        assert np.abs(ref - alt).max() < 1e-12 * max(1.0, np.abs(ref).max())
        rows.append(("mul", t_np_mul, t_nb_mul))
        rows.append(("div", t_np_div, t_nb_div))
    else:
        rows.append(("mul", t_np_mul, None))
        rows.append(("div", t_np_div, None))

    print(f"\njet space: {n_vars} vars, degree {degree} "
          f"({sp.n_terms} terms, {len(sp.mul_i)} product pairs)")
    for name, t_np, t_nb in rows:
        if t_nb is None:
            print(f"  {name}: numpy {t_np * 1e6:8.1f} us   (numba unavailable)")
        else:
            print(f"  {name}: numpy {t_np * 1e6:8.1f} us   numba {t_nb * 1e6:8.1f} us"
                  f"   speedup x{t_np / t_nb:5.1f}")


def main():
    print(f"numba active: {kernels.NUMBA_ACTIVE} "
          f"(set {kernels.ENV_FLAG}=1 to force the numpy path)")
    bench_space(5, 6, repeats=300)
    bench_space(8, 6, repeats=100)
    bench_space(8, 8, repeats=30)


if __name__ == "__main__":
    main()
