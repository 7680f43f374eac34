"""Scalar products, star-adjoint, structure classification and the perplectic sum.

Matrices are plain complex :class:`numpy.ndarray` objects. Functions never
modify their arguments.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, ParityError

__all__ = [
    "DEFAULT_TOL",
    "ScalarProduct",
    "StructureReport",
    "adjoint_star",
    "as_matrix",
    "build_special",
    "classify",
    "direct_sum",
    "frobenius",
    "perplectic_sum",
    "perplectic_sum_n",
    "spectral_norm",
    "split_perplectic_sum",
    "unshuffle_permutation",
]

#: relative tolerance used when a caller passes ``tol=None``
DEFAULT_TOL = 1e-10

PERPLECTIC = "perplectic"
SYMPLECTIC = "symplectic"


def as_matrix(a, square=True, name="A"):
    """Return a complex128 copy of `a`, validated as a finite 2-D array."""
    m = np.array(a, dtype=np.complex128, copy=True)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {m.shape}")
    if square and m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return m


def frobenius(a):
    return float(np.linalg.norm(a)) if np.size(a) else 0.0


def spectral_norm(a, iters=50):
    """Estimate ``||a||_2`` by power iteration on ``a^H a``.

    The start vector is fixed so the estimate is deterministic; it is a lower
    bound that is typically accurate to a few digits.
    """
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    n = a.shape[1]
    x = np.ones(n, dtype=np.complex128) + 0.5j * np.cos(np.arange(n))
    x /= np.linalg.norm(x)
    sigma = 0.0
    for _ in range(iters):
        y = a.conj().T @ (a @ x)
        ny = np.linalg.norm(y)
        if ny == 0.0:
            return 0.0
        x = y / ny
        new = float(np.sqrt(ny))
        if abs(new - sigma) <= 1e-12 * new:
            sigma = new
            break
        sigma = new
    return float(np.linalg.norm(a @ x))


# --------------------------------------------------------------------------
# special matrices

def _reversal(n):
    return np.eye(n, dtype=np.complex128)[::-1].copy()


def _symplectic_unit(n):
    if n % 2:
        raise ParityError(f"J needs an even size, got {n}")
    m = n // 2
    j = np.zeros((n, n), dtype=np.complex128)
    j[:m, m:] = np.eye(m)
    j[m:, :m] = -np.eye(m)
    return j


def _rotation_z(n):
    m = n // 2
    eye, rev = np.eye(m), _reversal(m)
    z = np.block([[eye, rev], [-rev, eye]]) / np.sqrt(2.0)
    if n % 2:
        z = perplectic_sum(z, np.ones((1, 1)))
    return z.astype(np.complex128)


def _frame_u(n):
    if n % 2:
        raise ParityError(f"U needs an even size, got {n}")
    m = n // 2
    u = np.zeros((n, n), dtype=np.complex128)
    u[:m, :m] = np.eye(m)
    u[m:, m:] = -1j * _reversal(m)
    return u


_SPECIAL = {"R": _reversal, "J": _symplectic_unit, "Z": _rotation_z, "U": _frame_u}


def build_special(kind, n):
    """Build one of the fixed matrices of size ``n``.

    Parameters
    ----------
    kind : {"R", "J", "Z", "U"}
        ``R`` is the anti-identity, ``J`` the symplectic unit
        ``[[0, I], [-I, 0]]``, ``Z`` the orthogonal rotation
        ``[[I, R], [-R, I]] / sqrt(2)`` (for odd ``n`` the centre is padded
        with a single 1), and ``U = diag(I, -i R)`` maps the symplectic form
        onto ``i R``.
    n : int
        Matrix size. Must be even for ``J`` and ``U``.
    """
    if n < 0:
        raise ValueError("size must be nonnegative")
    try:
        return _SPECIAL[kind](int(n))
    except KeyError:
        raise ValueError(f"unknown special matrix {kind!r}") from None


# --------------------------------------------------------------------------
# scalar products

@dataclass(frozen=True)
class ScalarProduct:
    """The indefinite form ``[x, y] = x^H B y`` with ``B = R_n`` or ``B = J_2m``."""

    kind: str
    dim: int

    def __post_init__(self):
        if self.kind not in (PERPLECTIC, SYMPLECTIC):
            raise ValueError(f"unknown scalar product {self.kind!r}")
        if self.dim < 0:
            raise ValueError("dimension must be nonnegative")
        if self.kind == SYMPLECTIC and self.dim % 2:
            raise ParityError(f"symplectic product needs an even dimension, got {self.dim}")

    @classmethod
    def perplectic(cls, n):
        return cls(PERPLECTIC, n)

    @classmethod
    def symplectic(cls, n):
        return cls(SYMPLECTIC, n)

    @property
    def matrix(self):
        if self.kind == PERPLECTIC:
            return _reversal(self.dim)
        return _symplectic_unit(self.dim)

    @property
    def inverse(self):
        # R^-1 = R, J^-1 = -J
        return self.matrix if self.kind == PERPLECTIC else -self.matrix

    def check(self, a, name="A"):
        if a.shape != (self.dim, self.dim):
            raise DimensionMismatch(
                f"{name} has shape {a.shape}, {self.kind} product has dimension {self.dim}")


def adjoint_star(a, b):
    """Return the adjoint ``B^-1 A^H B`` of `a` with respect to `b`."""
    a = as_matrix(a)
    b.check(a)
    return b.inverse @ a.conj().T @ b.matrix


@dataclass
class StructureReport:
    """Residuals of a matrix against the four structure classes of a scalar product.

    ``residuals`` holds Frobenius norms, ``spectral`` the matching power
    iteration estimates of the 2-norm. A flag is set when the Frobenius
    residual is below its threshold: ``tol * s`` for the linear conditions
    (self/skew-adjoint) and ``tol * s**2`` for the quadratic ones (unitary,
    normal), where ``s = max(1, ||A||_F)``.
    """

    kind: str
    dim: int
    tol: float
    scale: float
    residuals: dict
    spectral: dict
    thresholds: dict
    norm: str = "frobenius"
    flags: dict = field(default_factory=dict)

    @property
    def selfadjoint(self):
        return self.flags["selfadjoint"]

    @property
    def skewadjoint(self):
        return self.flags["skewadjoint"]

    @property
    def unitary(self):
        return self.flags["unitary"]

    @property
    def normal(self):
        return self.flags["normal"]

    def as_dict(self):
        return {
            "kind": self.kind,
            "dim": self.dim,
            "norm": self.norm,
            "tol": self.tol,
            "scale": self.scale,
            "residuals": dict(self.residuals),
            "spectral": dict(self.spectral),
            "thresholds": dict(self.thresholds),
            "flags": dict(self.flags),
        }


def classify(a, b, tol=None):
    """Measure how far `a` is from each structure class of the product `b`.

    Parameters
    ----------
    a : array_like, shape (n, n)
    b : ScalarProduct
    tol : float, optional
        Relative tolerance, default :data:`DEFAULT_TOL`.

    Returns
    -------
    StructureReport
    """
    a = as_matrix(a)
    b.check(a)
    tol = DEFAULT_TOL if tol is None else float(tol)
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    star = adjoint_star(a, b)
    bm = b.matrix
    diffs = {
        "selfadjoint": a - star,
        "skewadjoint": a + star,
        "unitary": a.conj().T @ bm @ a - bm,
        "normal": a @ star - star @ a,
    }
    scale = max(1.0, frobenius(a))
    thresholds = {
        "selfadjoint": tol * scale,
        "skewadjoint": tol * scale,
        "unitary": tol * scale**2,
        "normal": tol * scale**2,
    }
    residuals = {k: frobenius(v) for k, v in diffs.items()}
    spectral = {k: spectral_norm(v) for k, v in diffs.items()}
    flags = {k: residuals[k] <= thresholds[k] for k in diffs}
    return StructureReport(b.kind, b.dim, tol, scale, residuals, spectral, thresholds,
                           flags=flags)


# --------------------------------------------------------------------------
# perplectic sum

def direct_sum(*mats):
    """Block diagonal ``M_1 ⊕ M_2 ⊕ ...`` (square blocks, empty blocks allowed)."""
    mats = [np.atleast_2d(np.asarray(m, dtype=np.complex128)) if np.size(m) else
            np.zeros((0, 0), dtype=np.complex128) for m in mats]
    n = sum(m.shape[0] for m in mats)
    out = np.zeros((n, n), dtype=np.complex128)
    i = 0
    for m in mats:
        k = m.shape[0]
        out[i:i + k, i:i + k] = m
        i += k
    return out


def perplectic_sum(p, q):
    """Nest `q` in the centre of the 2x2-partitioned `p`.

    For ``p = [[P11, P12], [P21, P22]]`` with ``l x l`` blocks the result is
    ``[[P11, 0, P12], [0, q, 0], [P21, 0, P22]]``.
    """
    p = np.atleast_2d(np.asarray(p, dtype=np.complex128)) if np.size(p) else \
        np.zeros((0, 0), dtype=np.complex128)
    q = np.atleast_2d(np.asarray(q, dtype=np.complex128)) if np.size(q) else \
        np.zeros((0, 0), dtype=np.complex128)
    if p.shape[0] != p.shape[1] or q.shape[0] != q.shape[1]:
        raise DimensionMismatch("perplectic sum needs square operands")
    if p.shape[0] % 2:
        raise ParityError(f"left operand of a perplectic sum must be even-sized, got {p.shape[0]}")
    l, k = p.shape[0] // 2, q.shape[0]
    n = 2 * l + k
    out = np.zeros((n, n), dtype=np.complex128)
    out[:l, :l] = p[:l, :l]
    out[:l, l + k:] = p[:l, l:]
    out[l + k:, :l] = p[l:, :l]
    out[l + k:, l + k:] = p[l:, l:]
    out[l:l + k, l:l + k] = q
    return out


def perplectic_sum_n(*mats):
    """Left-associative ``((M_1 ⊡ M_2) ⊡ M_3) ⊡ ...``."""
    if not mats:
        return np.zeros((0, 0), dtype=np.complex128)
    out = np.asarray(mats[0], dtype=np.complex128)
    for m in mats[1:]:
        out = perplectic_sum(out, m)
    return out


def split_perplectic_sum(a, l):
    """Inverse of :func:`perplectic_sum`: return ``(P, Q)`` with ``P`` of size ``2l``.

    Entries of `a` outside the perplectic-sum pattern are discarded.
    """
    a = np.asarray(a)
    n = a.shape[0]
    k = n - 2 * l
    if k < 0:
        raise DimensionMismatch(f"cannot split {n}x{n} with outer size {2 * l}")
    idx = np.r_[0:l, l + k:n]
    return a[np.ix_(idx, idx)].copy(), a[l:l + k, l:l + k].copy()


def unshuffle_permutation(l, k):
    """Permutation matrix ``R`` with ``R^-1 (P ⊡ Q) R = P ⊕ Q``.

    `P` is ``2l x 2l`` and `Q` is ``k x k``.
    """
    if l < 0 or k < 0:
        raise ValueError("block sizes must be nonnegative")
    n = 2 * l + k
    # position a of P ⊕ Q comes from position order[a] of P ⊡ Q
    order = np.r_[0:l, l + k:n, l:l + k].astype(int)
    return np.eye(n, dtype=np.complex128)[:, order]
