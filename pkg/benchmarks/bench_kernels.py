"""Compare the compiled kernels against the pure-Python fallback.

Runs each workload twice in subprocesses, once with KHDETECT_PURE=1 and
once without, so each process picks its backend at import time the same
way user code does.

Usage: python3 benchmarks/bench_kernels.py
"""

from __future__ import annotations

import os
import subprocess
import sys

DRIVER = r"""
import random, time
from khdetect._kernels import backend_name, f2_rank, f2_sparse_rank

which = backend_name()

rng = random.Random(2026)
nc = 600
rows = [rng.getrandbits(nc) for _ in range(600)]
t0 = time.perf_counter()
r = f2_rank(rows, nc)
t_dense = time.perf_counter() - t0

# Banded sparsity keeps fill-in low, like the grid-block differentials
# this kernel exists for; uniformly random positions would not.
nr2 = nc2 = 12000
band = 60
rs, cs = [], []
for i in range(nr2):
    for _ in range(6):
        j = i + rng.randrange(-band, band + 1)
        if 0 <= j < nc2:
            rs.append(i)
            cs.append(j)
t0 = time.perf_counter()
r2 = f2_sparse_rank(nr2, nc2, rs, cs)
t_sparse = time.perf_counter() - t0

from khdetect.linkdiag import BraidSpec
from khdetect.gridfloer import grid_from_braid, tilde_homology
G = grid_from_braid(BraidSpec(2, (1, 1, 1), axis=True))
t0 = time.perf_counter()
til = tilde_homology(G)
t_grid = time.perf_counter() - t0

print("%s dense_rank=%d %.3fs sparse_rank=%d %.3fs grid_tilde(dim %d) %.3fs"
      % (which, r, t_dense, r2, t_sparse, sum(til.values()), t_grid))
"""


def run(pure: bool) -> None:
    env = dict(os.environ)
    env.pop("KHDETECT_PURE", None)
    if pure:
        env["KHDETECT_PURE"] = "1"
    subprocess.run([sys.executable, "-c", DRIVER], env=env, check=True)


if __name__ == "__main__":
    run(pure=True)
    run(pure=False)
