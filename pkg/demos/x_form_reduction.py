"""Reduce R-normal matrices to X-form and show where their entries end up.

A generic R-normal matrix comes out diagonal apart from its real-spectrum
part; a per-Hermitian matrix with real eigenvalues fills the anti-diagonal.

    python3 demos/x_form_reduction.py [n] [seed]
"""
import sys

import numpy as np

from canonform import GeneratorSpec, ScalarProduct, classify, normal_to_x, random_structured
from canonform.testkit import oracle_verify_reduction


def main(n=7, seed=0):
    reduce_and_show(random_structured(GeneratorSpec("r-normal", n, seed)))
    print()
    reduce_and_show(random_structured(
        GeneratorSpec("per-hermitian", n, seed, spectrum=tuple(range(1, n + 1)))))


def reduce_and_show(a):
    n = a.shape[0]
    b = ScalarProduct.perplectic(n)
    print("input flags:", classify(a, b).flags)

    res = normal_to_x(a)
    np.set_printoptions(precision=2, suppress=True, linewidth=120)
    # '#' marks entries above rounding level; they sit on the two diagonals only
    for row in np.abs(res.X) > 1e-10 * np.linalg.norm(a):
        print(" ".join("#" if v else "." for v in row))
    print(f"corner blocks: {res.corner}, cond(P) = {res.residuals['cond_P']:.2e}")

    verdict = oracle_verify_reduction(a, res.P, res.X, b, "x")
    for name, (r, thr, ok) in verdict.checks.items():
        print(f"  {name:13s} {r:.2e}  (threshold {thr:.1e})  {'ok' if ok else 'FAILED'}")


if __name__ == "__main__":
    main(*(int(v) for v in sys.argv[1:3]))
