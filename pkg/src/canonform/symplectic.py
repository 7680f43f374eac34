"""Symplectic side: the unitary frame change ``U`` and the four-diagonal form.

With ``U = diag(I_m, -i R_m)`` one has ``U^H (i R) U = J``, so ``A -> U A U^H``
carries skew-Hamiltonian, Hamiltonian, symplectic and J-normal matrices onto
per-Hermitian, perskew-Hermitian, perplectic and R-normal ones. Every
reduction here runs the perplectic pipeline in that frame and maps back.
"""
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_TOL, ScalarProduct, as_matrix, build_special, classify, frobenius
from .eigen import CLUSTER_TOL
from .errors import NotNormal, ParityError
from .perplectic import normal_to_x

__all__ = ["FourDiagResult", "four_diagonal_mask", "normal_to_four_diagonal",
           "symplectic_residual", "to_perplectic_frame"]


def _require_even(a):
    n = a.shape[0]
    if n % 2:
        raise ParityError(f"symplectic side needs an even size, got {n}")
    return n


def to_perplectic_frame(a, direction="forward"):
    """Conjugate `a` by the frame change ``U``.

    ``"forward"`` returns ``U A U^H`` (symplectic -> perplectic side),
    ``"backward"`` returns ``U^H A U``.
    """
    a = as_matrix(a)
    n = _require_even(a)
    u = build_special("U", n)
    if direction == "forward":
        return u @ a @ u.conj().T
    if direction == "backward":
        return u.conj().T @ a @ u
    raise ValueError(f"direction must be 'forward' or 'backward', got {direction!r}")


def four_diagonal_mask(n):
    """Support of a ``2m x 2m`` four-diagonal matrix: ``(j, j)``, ``(j, j+m)``, ``(j+m, j)``, ``(j+m, j+m)``."""
    if n % 2:
        raise ParityError("four-diagonal form needs an even size")
    m = n // 2
    i = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    return (i == j) | (np.abs(i - j) == m)


def symplectic_residual(s):
    """``||S^H J S - J||_F``."""
    j = build_special("J", s.shape[0])
    return frobenius(s.conj().T @ j @ s - j)


@dataclass
class FourDiagResult:
    """Symplectic `S` with ``S^-1 A S = D4`` four-diagonal.

    Attributes
    ----------
    S : ndarray
    D4 : ndarray
    residuals : dict
        ``symplectic`` is ``||S^H J S - J||_F``. ``similarity``
        (``||S D4 - A S||_F``) and ``off_pattern`` (largest entry off the
        four diagonals) are relative to ``max(1, ||A||_F)``. The X-form
        stage residuals follow under ``x_`` prefixes, then ``cond_S``.
    X : ndarray
        The X-form of ``U A U^H`` that `D4` was mapped from.
    """

    S: np.ndarray
    D4: np.ndarray
    residuals: dict
    X: np.ndarray = None

    def __iter__(self):
        return iter((self.S, self.D4))


def normal_to_four_diagonal(a, tol=DEFAULT_TOL, cluster_tol=CLUSTER_TOL):
    """Symplectic similarity of a diagonalizable J-normal matrix to four-diagonal form.

    Parameters
    ----------
    a : array_like, shape (2m, 2m)
    tol : float
        Relative tolerance for the normality test and the inner reductions.
    cluster_tol : float
        Relative distance below which eigenvalues are treated as equal.

    Returns
    -------
    FourDiagResult

    Raises
    ------
    ParityError
        Odd size.
    NotNormal, Defective
        As for the perplectic reduction.
    """
    a = as_matrix(a)
    n = _require_even(a)
    if not classify(a, ScalarProduct.symplectic(n), tol).normal:
        raise NotNormal("matrix is not J-normal")
    if n == 0:
        e = np.zeros((0, 0), dtype=np.complex128)
        return FourDiagResult(e, e.copy(), {"symplectic": 0.0, "similarity": 0.0,
                                            "off_pattern": 0.0, "cond_S": 1.0}, e.copy())
    u = build_special("U", n)
    xr = normal_to_x(u @ a @ u.conj().T, tol, cluster_tol)
    s = u.conj().T @ xr.P @ u
    d4 = u.conj().T @ xr.X @ u
    scale = max(1.0, frobenius(a))
    residuals = {
        "symplectic": symplectic_residual(s),
        "similarity": frobenius(s @ d4 - a @ s) / scale,
        "off_pattern": float(np.abs(np.where(four_diagonal_mask(n), 0, d4)).max()) / scale,
        "cond_S": float(np.linalg.cond(s)),
    }
    residuals.update({f"x_{k}": v for k, v in xr.residuals.items()})
    return FourDiagResult(s, d4, residuals, xr.X)
