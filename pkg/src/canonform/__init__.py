"""Structure-preserving canonical forms for matrices that are normal with
respect to the perplectic form ``x^H R y`` or the symplectic form ``x^H J y``.

A diagonalizable R-normal matrix is perplectically similar to a matrix in
X-form (nonzero entries on the diagonal and anti-diagonal only); a
diagonalizable J-normal matrix is symplectically similar to a matrix in
four-diagonal form. The package computes both reductions with a
self-contained complex Schur kernel, and ships generators, independent
checks and a small command-line tool.
"""
from .core import (DEFAULT_TOL, ScalarProduct, StructureReport, adjoint_star, build_special,
                   classify, direct_sum, perplectic_sum, perplectic_sum_n, split_perplectic_sum,
                   unshuffle_permutation)
from .eigen import (EigenCluster, EigenDecomposition, check_diagonalizable, eig, eigenvalues,
                    inertia_congruence, matrix_exp, min_gap, schur, simultaneous_diagonalize)
from .errors import *  # noqa: F401,F403
from .genericity import (PerturbationCertificate, commuting_distinct_witness, discriminant,
                         genericity_experiment, perturb_to_distinct)
from .perplectic import (XFormResult, normal_to_x, peel_nonreal, peel_nonreal_pair,
                         real_pair_to_x)
from .symplectic import FourDiagResult, normal_to_four_diagonal, to_perplectic_frame
from .testkit import (GeneratorSpec, check_pattern, oracle_verify_reduction,
                      random_structured)

__version__ = "0.1.0"
