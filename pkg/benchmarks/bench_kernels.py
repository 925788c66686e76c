"""Compare the compiled kernels with the pure-Python ones.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each kernel runs on the same seeded inputs under both backends; the outputs
must match exactly.  The last row times a whole basis computation in a
subprocess with DIFFPOWERS_PURE=1 against the default backend.
"""

import argparse
import os
import random
import subprocess
import sys
import timeit

from diffpowers import _kernels_py as py

try:
    from diffpowers import _ckernels as cy
except ImportError:
    sys.exit("compiled kernels are not built; run pip install -e . --no-build-isolation")


def random_terms(rng, nvars, nterms, deg, coeff):
    out = {}
    for _ in range(nterms):
        e = tuple(rng.randint(0, deg) for _ in range(nvars))
        out[e] = rng.randint(-coeff, coeff) or 1
    return out


def mul_case(rng):
    a = random_terms(rng, 3, 40, 6, 50)
    b = random_terms(rng, 3, 40, 6, 50)
    return lambda k: k.mul_terms(a, b, 0)


def reduce_case(rng):
    # divide by x - y^2, y - z^3 (monic, lex-like weights)
    weights = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    basis = [((1, 0, 0), 1, {(0, 2, 0): -1}), ((0, 1, 0), 1, {(0, 0, 3): -1})]
    f = random_terms(rng, 3, 25, 5, 20)
    return lambda k: k.reduce_terms(dict(f), basis, weights, 0, False, 10 ** 8)[0]


def hnf_case(rng):
    rows = [[rng.randint(-30, 30) for _ in range(24)] for _ in range(30)]
    return lambda k: k.hnf_rows([list(r) for r in rows], 24, True)


END_TO_END = (
    "from diffpowers import Polynomial, PolynomialRing, ZZ;"
    "from diffpowers.groebner import Ideal;"
    "R = PolynomialRing(ZZ, ['x','y','z']);"
    "Q = Ideal.parse(R, '2, x^3 - y*z, y^2 - x*z, z^2 - x^2*y');"
    "(Q**3).groebner()"
)


def end_to_end(pure):
    env = dict(os.environ)
    env.pop("DIFFPOWERS_PURE", None)
    if pure:
        env["DIFFPOWERS_PURE"] = "1"
    stmt = f"import subprocess, sys; subprocess.run([sys.executable, '-c', {END_TO_END!r}], env={env!r}, check=True)"
    return min(timeit.repeat(stmt, number=1, repeat=3))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = random.Random(0)
    print(f"{'kernel':<14}{'python (ms)':>14}{'cython (ms)':>14}{'speedup':>10}")
    for name, make in (("mul_terms", mul_case), ("reduce_terms", reduce_case), ("hnf_rows", hnf_case)):
        case = make(rng)
        if case(py) != case(cy):
            sys.exit(f"{name}: backends disagree")
        tp = min(timeit.repeat(lambda: case(py), number=10, repeat=args.repeat)) / 10 * 1000
        tc = min(timeit.repeat(lambda: case(cy), number=10, repeat=args.repeat)) / 10 * 1000
        print(f"{name:<14}{tp:>14.3f}{tc:>14.3f}{tp / tc:>9.2f}x")
    tp, tc = end_to_end(True) * 1000, end_to_end(False) * 1000
    print(f"{'basis (Q^3)':<14}{tp:>14.1f}{tc:>14.1f}{tp / tc:>9.2f}x")


if __name__ == "__main__":
    main()
