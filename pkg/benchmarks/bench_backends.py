"""Time the same workloads under the gmpy2 and pure-Fraction coefficient backends.

Each backend runs in its own subprocess because the backend is fixed at import
time by the CANRING_PURE environment variable.

    python benchmarks/bench_backends.py [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, time
from fractions import Fraction
from canring import BACKEND, quotient_dims, ideal_equal
from canring import families as fam

def timed(fn, repeat):
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best

repeat = int(__import__("sys").argv[1])
data = fam.sample_family_data(1)
x = fam.derive_extrasym(data)
rolling = fam.build_rolling(data).ideal
A, M = fam.build_amta(data)
out = {
    "backend": BACKEND,
    "hilbert_dims_deg6": timed(lambda: quotient_dims(rolling, fam.R, 6), repeat),
    "format_equality": timed(lambda: ideal_equal(rolling, fam.amta_ideal(A, M)), repeat),
    "deformation_t_half": timed(lambda: fam.verify_deformation(x, Fraction(1, 2)), repeat),
    "septic_limit": timed(lambda: fam.septic_limit(x, data), repeat),
}
print(json.dumps(out))
"""


def run(pure: bool, repeat: int) -> dict:
    env = dict(os.environ, CANRING_PURE="1" if pure else "0")
    res = subprocess.run([sys.executable, "-c", WORKLOAD, str(repeat)], env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast, pure = run(False, args.repeat), run(True, args.repeat)
    print(f"{'workload':<22}{fast['backend']:>12}{pure['backend']:>12}{'speedup':>10}")
    for key in fast:
        if key == "backend":
            continue
        print(f"{key:<22}{fast[key]:>11.3f}s{pure[key]:>11.3f}s{pure[key] / fast[key]:>9.2f}x")


if __name__ == "__main__":
    main()
