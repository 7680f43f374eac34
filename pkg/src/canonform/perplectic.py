"""Perplectic reductions of per-Hermitian pairs and R-normal matrices to X-form.

The pipeline mirrors the constructive argument step by step:

1. split ``A = S - iK`` into commuting per-Hermitian parts,
2. peel the nonreal eigenvalues of `S` and then of `K` off to diagonal
   corner blocks (:func:`peel_nonreal_pair`),
3. rotate the remaining real-spectrum pair to real bisymmetric X-form
   (:func:`real_pair_to_x`),
4. glue both transformations with a perplectic sum.

All transformations are perplectic (``P^H R P = R``), so ``P^-1 = R P^H R``.
"""
from dataclasses import dataclass, field

import numpy as np

from .core import (ScalarProduct, as_matrix, build_special, classify, direct_sum, frobenius,
                   perplectic_sum)
from .eigen import (CLUSTER_TOL, check_diagonalizable, eig, inertia_congruence,
                    simultaneous_basis)
from .errors import (ConjugatePairMismatch, Defective, NonRealSpectrum, NotCommuting, NotNormal,
                     NotPerHermitian)

__all__ = [
    "PeelPairResult",
    "PeelResult",
    "RealPairResult",
    "XFormResult",
    "normal_to_x",
    "peel_nonreal",
    "peel_nonreal_pair",
    "perplectic_residual",
    "real_pair_to_x",
    "split_self_skew",
    "x_form_mask",
]

TOL = 1e-10


def _rev(n):
    return np.eye(n, dtype=np.complex128)[::-1]


def _star(m):
    """Perplectic adjoint ``R m^H R`` with `R` of the size of `m`."""
    r = _rev(m.shape[0])
    return r @ m.conj().T @ r


def _inv_star(m):
    """``(m^-1)^*`` as used in ``(S ⊕ S^-*) ⊡ Q``."""
    r = _rev(m.shape[0])
    return r @ np.linalg.inv(m).conj().T @ r


def _similar(p, a):
    return np.linalg.solve(p, a @ p)


def perplectic_residual(p):
    """``||P^H R P - R||_F``."""
    r = _rev(p.shape[0])
    return frobenius(p.conj().T @ r @ p - r)


def x_form_mask(n):
    """Boolean support of an ``n x n`` X-form: diagonal and anti-diagonal."""
    i = np.arange(n)
    return (i[:, None] == i[None, :]) | (i[:, None] + i[None, :] == n - 1)


def _off_pattern(a, mask):
    off = np.abs(np.where(mask, 0, a))
    return float(off.max()) if off.size else 0.0


def _require_per_hermitian(a, tol, name="A"):
    scale = max(1.0, frobenius(a))
    res = frobenius(a - _star(a))
    if res > tol * scale:
        raise NotPerHermitian(f"{name} is not per-Hermitian: ||{name} - {name}*||_F = {res:.3e}")


def _to_reversal(q):
    """Congruence `W` with ``W^H q W = R_k`` for Hermitian `q` of inertia (ceil, floor).

    Inertia normalisation followed by the rotation `Z` (padded by ``[1]`` for
    odd `k`), which carries ``diag(+I, -I)`` onto ``R_k``.
    """
    k = q.shape[0]
    if k == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    ic = inertia_congruence(0.5 * (q + q.conj().T), "hermitian", tol=np.inf,
                            singular_tol=1e-12)
    if ic.signature != ((k + 1) // 2, k // 2):
        raise Defective(f"Gram block has inertia {ic.signature}, expected {((k + 1) // 2, k // 2)}")
    return ic.Q @ build_special("Z", k)


def _diag_blocks(values, threshold):
    """Split a sequence into maximal runs of values within `threshold` of the run start."""
    blocks, start = [], 0
    for i in range(1, len(values) + 1):
        if i == len(values) or abs(values[i] - values[start]) > threshold:
            blocks.append(list(range(start, i)))
            start = i
    return blocks


# --------------------------------------------------------------------------

def split_self_skew(a):
    """Return the per-Hermitian parts ``S = (A + A*)/2`` and ``K = (i/2)(A - A*)``.

    ``A = S - iK`` and, when `A` is R-normal, ``SK = KS``.
    """
    a = as_matrix(a)
    star = _star(a)
    return 0.5 * (a + star), 0.5j * (a - star)


@dataclass
class PeelResult:
    """``P^-1 A P = (D ⊕ D*) ⊡ A_hat`` with perplectic `P`."""

    P: np.ndarray
    D: np.ndarray
    A_hat: np.ndarray
    residuals: dict = field(default_factory=dict)

    @property
    def size(self):
        return self.D.shape[0]


def peel_nonreal(a, tol=TOL, cluster_tol=CLUSTER_TOL):
    """Move the nonreal eigenvalues of a per-Hermitian matrix to the corners.

    One cluster at a time, in order of decreasing imaginary part: the
    cluster of ``lambda`` and the cluster of ``conj(lambda)`` are placed at
    the two ends of an eigenvector basis, the Gram matrix ``U^H R U`` is
    normalised (``R_m ⊕ I ⊕ S^-1`` followed by an inertia congruence of the
    middle block) and the procedure recurses on the middle block.

    Returns
    -------
    PeelResult
        ``D`` is diagonal with the eigenvalues of positive imaginary part;
        ``A_hat`` is per-Hermitian with real spectrum.

    Raises
    ------
    Defective, ConjugatePairMismatch, NotPerHermitian
    """
    a = as_matrix(a)
    n = a.shape[0]
    _require_per_hermitian(a, tol)
    scale = max(1.0, frobenius(a))
    p = np.eye(n, dtype=np.complex128)
    cur = a
    outer = 0
    gram_cond = []
    while cur.shape[0] > 0:
        k = cur.shape[0]
        ed = eig(cur, cluster_tol, scale=scale)
        thr = ed.threshold
        if not check_diagonalizable(cur, decomposition=ed):
            raise Defective("per-Hermitian matrix is not diagonalizable")
        upper = [c for c in ed.clusters if c.value.imag > thr]
        if not upper:
            break
        first = upper[0]
        lower = [c for c in ed.clusters if c.value.imag < -thr]
        target = np.conj(first.value)
        partner = min(lower, key=lambda c: abs(c.value - target), default=None)
        if (partner is None or abs(partner.value - target) > 10 * thr
                or partner.multiplicity != first.multiplicity):
            raise ConjugatePairMismatch(
                f"eigenvalue {first.value:.6g} (multiplicity {first.multiplicity}) has no "
                f"matching conjugate cluster")
        m1 = first.multiplicity
        rest = [i for c in ed.clusters if c is not first and c is not partner
                for i in c.column_indices]
        u0 = ed.vectors[:, first.column_indices + rest + partner.column_indices]
        g = u0.conj().T @ _rev(k) @ u0
        s = g[:m1, k - m1:]
        gram_cond.append(float(np.linalg.cond(s)))
        mid = k - 2 * m1
        u1 = direct_sum(_rev(m1), np.eye(mid), np.linalg.solve(s, np.eye(m1)))
        u2 = direct_sum(np.eye(m1), _to_reversal(g[m1:k - m1, m1:k - m1]), np.eye(m1))
        u3 = u0 @ u1 @ u2
        p = p @ perplectic_sum(np.eye(2 * outer), u3)
        cur = _similar(u3, cur)[m1:k - m1, m1:k - m1]
        outer += m1

    f = _similar(p, a)
    d = np.diag(np.diag(f[:outer, :outer]))
    a_hat = f[outer:n - outer, outer:n - outer].copy()
    target = perplectic_sum(direct_sum(d, _star(d)), a_hat)
    residuals = {
        "perplectic": perplectic_residual(p),
        "pattern": frobenius(f - target) / scale,
        "gram_cond": max(gram_cond, default=1.0),
    }
    return PeelResult(p, d, a_hat, residuals)


@dataclass
class PeelPairResult:
    """Simultaneous peel of two commuting per-Hermitian matrices (shared size `s`)."""

    P: np.ndarray
    D_A: np.ndarray
    D_B: np.ndarray
    A_hat: np.ndarray
    B_hat: np.ndarray
    residuals: dict = field(default_factory=dict)

    @property
    def size(self):
        return self.D_A.shape[0]

    def __iter__(self):
        return iter((self.P, self.D_A, self.D_B, self.A_hat, self.B_hat))


def _diagonalize_blocks(m, blocks, cluster_tol, scale):
    """Diagonalize the diagonal blocks of `m`; return the block-diagonal eigenbasis."""
    bases = []
    for idx in blocks:
        sub = m[np.ix_(idx, idx)]
        ed = eig(sub, cluster_tol, scale=scale)
        if not check_diagonalizable(sub, decomposition=ed):
            raise Defective("restriction to a common eigenspace is not diagonalizable")
        bases.append(ed.vectors)
    return direct_sum(*bases)


def _fix_corners(p, m, blocks, middle, cluster_tol, scale):
    """Compose `p` with ``(W ⊕ W^-*) ⊡ I`` diagonalizing the blocks of `m`."""
    if not blocks:
        return p
    w = _diagonalize_blocks(m, blocks, cluster_tol, scale)
    return p @ perplectic_sum(direct_sum(w, _inv_star(w)), np.eye(middle))


def peel_nonreal_pair(a, b, tol=TOL, cluster_tol=CLUSTER_TOL):
    """Peel the nonreal eigenvalues of two commuting per-Hermitian matrices at once.

    `a` is peeled first. Commutativity makes the top-left block of the
    transformed `b` block diagonal along the eigenvalue clusters of `a`;
    those blocks are diagonalized by ``(Q ⊕ Q^-*) ⊡ I`` which leaves `a`
    untouched. The remaining middle of `b` is then peeled and `a`'s new
    corner blocks fixed the same way.

    Returns
    -------
    PeelPairResult
        ``P^-1 A P = (D_A ⊕ D_A*) ⊡ A_hat`` and
        ``P^-1 B P = (D_B ⊕ D_B*) ⊡ B_hat``.
    """
    a = as_matrix(a)
    b = as_matrix(b, name="B")
    if a.shape != b.shape:
        raise NotCommuting(f"shapes differ: {a.shape} vs {b.shape}")
    n = a.shape[0]
    _require_per_hermitian(b, tol, "B")
    scale_a = max(1.0, frobenius(a))
    scale_b = max(1.0, frobenius(b))
    comm = frobenius(a @ b - b @ a)
    if comm > tol * scale_a * scale_b:
        raise NotCommuting(f"||AB - BA||_F = {comm:.3e}")

    first = peel_nonreal(a, tol, cluster_tol)
    m = first.size
    thr_a = cluster_tol * scale_a
    b1 = _similar(first.P, b)
    p2 = _fix_corners(first.P, b1[:m, :m], _diag_blocks(np.diag(first.D), thr_a), n - 2 * m,
                      cluster_tol, scale_b)
    b_mid = _similar(p2, b)[m:n - m, m:n - m]

    second = peel_nonreal(b_mid, 10 * tol, cluster_tol)
    r = second.size
    thr_b = cluster_tol * scale_b
    a_mid = _similar(second.P, first.A_hat)
    p2_mid = _fix_corners(second.P, a_mid[:r, :r], _diag_blocks(np.diag(second.D), thr_b),
                          n - 2 * m - 2 * r, cluster_tol, scale_a)

    p = p2 @ perplectic_sum(np.eye(2 * m), p2_mid)
    s = m + r
    fa, fb = _similar(p, a), _similar(p, b)
    d_a = np.diag(np.diag(fa[:s, :s]))
    d_b = np.diag(np.diag(fb[:s, :s]))
    a_hat = fa[s:n - s, s:n - s].copy()
    b_hat = fb[s:n - s, s:n - s].copy()
    res_a = frobenius(fa - perplectic_sum(direct_sum(d_a, _star(d_a)), a_hat)) / scale_a
    res_b = frobenius(fb - perplectic_sum(direct_sum(d_b, _star(d_b)), b_hat)) / scale_b
    residuals = {"perplectic": perplectic_residual(p), "pattern_a": res_a, "pattern_b": res_b}
    return PeelPairResult(p, d_a, d_b, a_hat, b_hat, residuals)


@dataclass
class RealPairResult:
    P: np.ndarray
    X_A: np.ndarray
    X_B: np.ndarray
    residuals: dict = field(default_factory=dict)

    def __iter__(self):
        return iter((self.P, self.X_A, self.X_B))


def real_pair_to_x(a, b, tol=TOL, cluster_tol=CLUSTER_TOL):
    """Simultaneous perplectic reduction of a real-spectrum pair to bisymmetric X-form.

    A common eigenbasis `T` (grouped by eigenvalue of `a`, then of `b`) makes
    ``T^H R T`` block diagonal with Hermitian blocks; each block is
    normalised to ``diag(+I, -I)``, a stable permutation moves all ``+1``
    first and the rotation `Z` turns the result into ``R``. The transformed
    matrices are real bisymmetric in X-form up to rounding.

    Raises
    ------
    NotCommuting, Defective, NonRealSpectrum, NotPerHermitian
    """
    a = as_matrix(a)
    b = as_matrix(b, name="B")
    n = a.shape[0]
    _require_per_hermitian(a, tol)
    _require_per_hermitian(b, tol, "B")
    t, a_lab, b_lab, a_val, b_val = simultaneous_basis(a, b, tol, cluster_tol)
    for name, vals, sc in (("A", a_val, a), ("B", b_val, b)):
        thr = cluster_tol * max(1.0, frobenius(sc))
        if vals.size and np.max(np.abs(vals.imag)) > thr:
            raise NonRealSpectrum(f"{name} has eigenvalues off the real axis "
                                  f"(max |Im| = {np.max(np.abs(vals.imag)):.3e})")
    g = t.conj().T @ _rev(n) @ t
    blocks, signs = [], []
    start = 0
    for i in range(1, n + 1):
        if i == n or a_lab[i] != a_lab[start] or b_lab[i] != b_lab[start]:
            idx = slice(start, i)
            ic = inertia_congruence(0.5 * (g[idx, idx] + g[idx, idx].conj().T), "hermitian",
                                    tol=np.inf, singular_tol=1e-12)
            blocks.append(ic.Q)
            signs.extend([1] * ic.n_plus + [-1] * ic.n_minus)
            start = i
    signs = np.array(signs)
    if int(np.sum(signs > 0)) != (n + 1) // 2:
        raise Defective("common eigenbasis has the wrong inertia against R")
    perm = np.r_[np.nonzero(signs > 0)[0], np.nonzero(signs < 0)[0]].astype(int)
    p = (t @ direct_sum(*blocks))[:, perm] @ build_special("Z", n)
    xa, xb = _similar(p, a), _similar(p, b)
    mask = x_form_mask(n)
    residuals = {
        "perplectic": perplectic_residual(p),
        "off_pattern_a": _off_pattern(xa, mask),
        "off_pattern_b": _off_pattern(xb, mask),
        "bisymmetry_a": _bisymmetry(xa),
        "bisymmetry_b": _bisymmetry(xb),
    }
    return RealPairResult(p, xa, xb, residuals)


def _bisymmetry(x):
    r = _rev(x.shape[0])
    return max(frobenius(x - x.T), frobenius(x - r @ x.T @ r), frobenius(x.imag))


@dataclass
class XFormResult:
    """``P^-1 A P = X`` with perplectic `P` and `X` in X-form."""

    P: np.ndarray
    X: np.ndarray
    residuals: dict = field(default_factory=dict)
    corner: int = 0

    def __iter__(self):
        return iter((self.P, self.X))


def normal_to_x(a, tol=TOL, cluster_tol=CLUSTER_TOL):
    """Reduce a diagonalizable R-normal matrix to X-form by perplectic similarity.

    The result has diagonal corner blocks of size ``corner`` (from the
    nonreal eigenvalues of the per-Hermitian parts) around an X-form middle
    block, so the anti-diagonal is only populated inside the middle.

    Parameters
    ----------
    a : array_like, shape (n, n)
    tol : float
        Relative tolerance for the normality test of the input; inner stages
        validate their inputs at ten times the tolerance of the stage before.

    Returns
    -------
    XFormResult

    Raises
    ------
    NotNormal
        If `a` is not R-normal within `tol`.
    Defective
        If `a` is not diagonalizable.
    """
    a = as_matrix(a)
    n = a.shape[0]
    prod = ScalarProduct.perplectic(n)
    if not classify(a, prod, tol).normal:
        raise NotNormal("matrix is not R-normal")
    if not check_diagonalizable(a, cluster_tol=cluster_tol):
        raise Defective("matrix is not diagonalizable")
    s, k = split_self_skew(a)
    pair = peel_nonreal_pair(s, k, 10 * tol, cluster_tol)
    c = pair.size
    rest = real_pair_to_x(pair.A_hat, pair.B_hat, 100 * tol, cluster_tol)
    p = pair.P @ perplectic_sum(np.eye(2 * c), rest.P)
    x = _similar(p, a)
    scale = max(1.0, frobenius(a))
    residuals = {
        "perplectic": perplectic_residual(p),
        "similarity": frobenius(a @ p - p @ x) / scale,
        "off_pattern": _off_pattern(x, x_form_mask(n)) / scale,
        "peel_perplectic": pair.residuals["perplectic"],
        "peel_pattern": max(pair.residuals["pattern_a"], pair.residuals["pattern_b"]),
        "real_pair_perplectic": rest.residuals["perplectic"],
        "real_pair_off_pattern": max(rest.residuals["off_pattern_a"],
                                     rest.residuals["off_pattern_b"]),
        "cond_P": float(np.linalg.cond(p)) if n else 1.0,
    }
    return XFormResult(p, x, residuals, c)
