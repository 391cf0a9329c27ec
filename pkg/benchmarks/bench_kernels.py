#!/usr/bin/env python3
"""Benchmark the JIT kernels against the pure-Python/NumPy fallback.

Runs the timing loop twice in subprocesses: once as-is and once with
ATOMOPTOMECH_NO_NUMBA=1, then prints both columns.  Usage:

    python benchmarks/bench_kernels.py
"""

import json
import os
import subprocess
import sys

_TIMER = r"""
import json
import time

import numpy as np

import atomoptomech as am
from atomoptomech import _kernels


def timeit(fn, *args, repeat=200, warmup=3):
    for _ in range(warmup):
        fn(*args)
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - t0) / repeat


rng = np.random.default_rng(0)
a6 = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
b6 = rng.normal(size=6) + 1j * rng.normal(size=6)
j6 = rng.normal(size=(6, 6))
j6 -= (np.abs(j6).sum() + 1.0) * np.eye(6)
d6 = np.diag(rng.uniform(0.5, 2.0, size=6))

p = am.SystemParams()
ss = am.fixed_point(p)
cpl = am.derive_couplings(p, ss)

res = {
    "numba": am.NUMBA_ENABLED,
    "solve_complex 6x6 [us]": 1e6 * timeit(lambda: am.solve_complex(a6, b6)),
    "char_poly 6x6 [us]": 1e6 * timeit(lambda: am.char_poly(j6)),
    "lyapunov_solve 6x6 [us]": 1e6 * timeit(lambda: am.lyapunov_solve(j6, d6)),
    "beta roots [ms]": 1e3
    * timeit(lambda: am.solve_beta.__wrapped__(1.0, 1.0), repeat=20),
    "transfer pair [us]": 1e6
    * timeit(
        lambda: (
            am.transfer_direct(p, cpl, ss, 0.9 * p.omega_m),
            am.transfer_closed_form(p, cpl, ss, 0.9 * p.omega_m),
        )
    ),
    "spectrum point [us]": 1e6
    * timeit(lambda: am.output_spectrum(p, cpl, ss, 0.9 * p.omega_m)),
    "entanglement point [us]": 1e6
    * timeit(lambda: am.entanglement_at(p.replace(delta=1.1 * p.omega_m)), repeat=50),
}
print(json.dumps(res))
"""


def run(no_numba: bool) -> dict:
    env = dict(os.environ)
    if no_numba:
        env["ATOMOPTOMECH_NO_NUMBA"] = "1"
    else:
        env.pop("ATOMOPTOMECH_NO_NUMBA", None)
    out = subprocess.run(
        [sys.executable, "-c", _TIMER], env=env, capture_output=True, text=True, check=True
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    jit = run(no_numba=False)
    plain = run(no_numba=True)
    assert jit.pop("numba") is True, "numba path did not engage; is numba installed?"
    plain.pop("numba")
    width = max(len(k) for k in jit)
    print(f"{'kernel':{width}s}  {'jit':>12s}  {'fallback':>12s}  {'speedup':>8s}")
    for key in jit:
        a, b = jit[key], plain[key]
        print(f"{key:{width}s}  {a:12.2f}  {b:12.2f}  {b / a:7.1f}x")


if __name__ == "__main__":
    main()
