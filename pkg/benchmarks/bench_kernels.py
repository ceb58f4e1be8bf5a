"""Timing comparison of the numba and numpy kernel backends.

Runs both implementations of the two hot kernels (cyclic chain-link
amplitudes and per-sample connection terms) on identical inputs and prints
per-call times plus the numba speedup. The private backend functions are
called directly, so the comparison is independent of the GGP_BACKEND
selection made at import time. Numba functions are invoked once before
timing so JIT compilation cost is excluded.

Usage: python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

import ggphase._kernels as kernels

# (label, number of states, Hilbert-space dimension, timed iterations)
CHAIN_CASES = [
    ("small", 20, 2, 20000),
    ("medium", 500, 8, 2000),
    ("large", 5000, 16, 100),
]

CURVE_CASES = [
    ("small", 101, 2, 10000),
    ("medium", 1001, 8, 500),
    ("large", 10001, 16, 20),
]


def random_inputs(rng, count, dim):
    """Unit-normalized complex state stack plus a Hermitian observable."""
    states = rng.normal(size=(count, dim)) + 1j * rng.normal(size=(count, dim))
    states /= np.linalg.norm(states, axis=1, keepdims=True)
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    obs = (m + m.conj().T) / 2.0
    return np.ascontiguousarray(states), np.ascontiguousarray(obs)


def timeit(func, args, n_iter, warmup=3):
    """Best-of-three per-call time in seconds after a short warmup."""
    for _ in range(warmup):
        func(*args)
    best = float("inf")
    for _ in range(3):
        start = time.perf_counter()
        for _ in range(n_iter):
            func(*args)
        best = min(best, (time.perf_counter() - start) / n_iter)
    return best


def fmt(seconds):
    return f"{seconds * 1e6:10.2f} us"


def run_section(title, cases, numpy_func, numba_func, make_args):
    print(f"\n{title}")
    print(f"  {'case':<20} {'numpy':>13} {'numba':>13} {'speedup':>9}")
    for label, count, dim, n_iter in cases:
        args = make_args(count, dim)
        if numba_func is not None:
            got_np = numpy_func(*args)
            got_nb = numba_func(*args)
            first_np = got_np[0] if isinstance(got_np, tuple) else got_np
            first_nb = got_nb[0] if isinstance(got_nb, tuple) else got_nb
            if not np.allclose(first_np, first_nb, rtol=1e-10, atol=1e-12):
                raise AssertionError(f"backend mismatch on {title} / {label}")
        t_np = timeit(numpy_func, args, n_iter)
        case = f"{label} ({count}x{dim})"
        if numba_func is None:
            print(f"  {case:<20} {fmt(t_np):>13} {'n/a':>13} {'n/a':>9}")
            continue
        t_nb = timeit(numba_func, args, n_iter)
        print(f"  {case:<20} {fmt(t_np):>13} {fmt(t_nb):>13} {t_np / t_nb:>8.2f}x")


def main():
    rng = np.random.default_rng(0)
    if not kernels.HAS_NUMBA:
        print("numba is not importable; timing the numpy path only")

    chain_numba = kernels._chain_link_amplitudes_numba if kernels.HAS_NUMBA else None
    curve_numba = kernels._connection_terms_numba if kernels.HAS_NUMBA else None

    run_section(
        "chain_link_amplitudes",
        CHAIN_CASES,
        kernels._chain_link_amplitudes_numpy,
        chain_numba,
        lambda count, dim: random_inputs(rng, count, dim),
    )

    def curve_args(count, dim):
        states, obs = random_inputs(rng, count, dim)
        params = np.linspace(0.0, 1.0, count)
        return params, states, obs

    run_section(
        "connection_terms",
        CURVE_CASES,
        kernels._connection_terms_numpy,
        curve_numba,
        curve_args,
    )


if __name__ == "__main__":
    main()
