"""Repeated eigenvalues are rare: a tiny structured perturbation separates them.

    python3 demos/genericity.py [samples]
"""
import sys

import numpy as np

from canonform import (GeneratorSpec, commuting_distinct_witness, eigenvalues, min_gap,
                       perturb_to_distinct, random_structured)
from canonform.genericity import genericity_experiment


def main(samples=60):
    # an R-normal matrix with 1 + 2i as a double eigenvalue
    a = random_structured(GeneratorSpec("r-normal", 5, 1, spectrum=(1 + 2j, 1 + 2j, -1, 3j, 2)))
    print(f"min eigenvalue gap of A: {min_gap(eigenvalues(a)):.1e}")

    m = commuting_distinct_witness(a)
    print(f"witness M: ||AM - MA|| = {np.linalg.norm(a @ m - m @ a):.1e}, "
          f"gap of M = {min_gap(eigenvalues(m)):.3f}")

    cert = perturb_to_distinct(a, epsilon=1e-4, seed=7)
    print(f"A + c M: distance {cert.distance_fro:.1e}, gap {cert.min_gap:.1e}, "
          f"normality residual {cert.normal_residual:.1e}, draws {cert.draws}")

    for product in ("perplectic", "symplectic"):
        s = genericity_experiment(samples=samples, product=product)
        print(f"{product}: {s.direct} direct + {s.after_perturbation} after one perturbation "
              f"of {s.samples} (worst residual {s.worst_residual:.1e})")


if __name__ == "__main__":
    main(*(int(v) for v in sys.argv[1:2]))
