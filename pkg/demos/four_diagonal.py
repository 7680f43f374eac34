"""Symplectic reduction of a Hamiltonian and of a J-normal matrix to four-diagonal form.

    python3 demos/four_diagonal.py [m] [seed]
"""
import sys

import numpy as np

from canonform import GeneratorSpec, normal_to_four_diagonal, random_structured


def show(title, a):
    s, d4 = normal_to_four_diagonal(a)
    print(f"{title}: ||S^H J S - J|| = {np.linalg.norm(s.conj().T @ jm(a) @ s - jm(a)):.1e}")
    for row in np.abs(d4) > 1e-10 * np.linalg.norm(a):
        print("  " + " ".join("#" if v else "." for v in row))


def jm(a):
    m = a.shape[0] // 2
    return np.block([[np.zeros((m, m)), np.eye(m)], [-np.eye(m), np.zeros((m, m))]])


def main(m=3, seed=0):
    show("hamiltonian", random_structured(GeneratorSpec("hamiltonian", 2 * m, seed)))
    show("j-normal", random_structured(GeneratorSpec("j-normal", 2 * m, seed, route="xform")))


if __name__ == "__main__":
    main(*(int(v) for v in sys.argv[1:3]))
