"""Dense complex eigen-kernel.

Householder reduction to Hessenberg form, implicitly shifted complex QR to
Schur form, eigenvectors by back-substitution, clustering of nearby
eigenvalues, a numerical diagonalizability verdict, simultaneous
diagonalization of commuting pairs and Hermitian inertia congruences.
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import as_matrix, direct_sum, frobenius
from .errors import Defective, NonConvergence, NotCommuting, NotHermitian, Singular

__all__ = [
    "CLUSTER_TOL",
    "DiagonalizabilityVerdict",
    "EigenCluster",
    "EigenDecomposition",
    "InertiaCongruence",
    "SchurDecomposition",
    "check_diagonalizable",
    "eig",
    "eigenvalues",
    "hessenberg",
    "inertia_congruence",
    "matrix_exp",
    "min_gap",
    "schur",
    "simultaneous_basis",
    "simultaneous_diagonalize",
]

EPS = np.finfo(float).eps

#: relative distance below which eigenvalues are treated as one
CLUSTER_TOL = 1e-7
#: relative drop tolerance for eigenvector residuals and ranks
DROP_TOL = 1e-8
#: largest eigenvector condition number accepted as diagonalizable
COND_CAP = 1e8


@dataclass
class SchurDecomposition:
    """``A = Q T Q^H`` with `T` upper triangular and `Q` unitary."""

    T: np.ndarray
    Q: np.ndarray
    iterations: int = 0


@dataclass
class EigenCluster:
    value: complex
    multiplicity: int
    column_indices: list


@dataclass
class EigenDecomposition:
    """Eigenvalues, unit eigenvectors (columns) and their clusters.

    Columns are ordered cluster by cluster; clusters are sorted by imaginary
    part (descending) and then real part (ascending).
    """

    values: np.ndarray
    vectors: np.ndarray
    clusters: list
    threshold: float

    def cluster_of(self):
        """Array mapping each column to the index of its cluster."""
        lab = np.empty(len(self.values), dtype=int)
        for c, cl in enumerate(self.clusters):
            lab[cl.column_indices] = c
        return lab


@dataclass
class DiagonalizabilityVerdict:
    diagonalizable: bool
    cond_estimate: float
    max_residual: float
    rank_deficit: int

    def __bool__(self):
        return self.diagonalizable


@dataclass
class InertiaCongruence:
    """``Q^H A Q = diag(+I, -I)`` (or ``diag(+iI, -iI)`` for skew-Hermitian `A`)."""

    Q: np.ndarray
    n_plus: int
    n_minus: int
    kind: str = "hermitian"

    @property
    def signature(self):
        return self.n_plus, self.n_minus

    def target(self):
        d = np.r_[np.ones(self.n_plus), -np.ones(self.n_minus)].astype(np.complex128)
        if self.kind == "skew":
            d = 1j * d
        return np.diag(d)


# --------------------------------------------------------------------------
# Schur form

def hessenberg(a):
    """Householder reduction ``a = Q H Q^H`` with `H` upper Hessenberg.

    Returns
    -------
    H, Q : ndarray
    """
    h = as_matrix(a)
    n = h.shape[0]
    q = np.eye(n, dtype=np.complex128)
    for k in range(n - 2):
        x = h[k + 1:, k]
        tail = np.linalg.norm(x[1:])
        if tail == 0.0:
            continue
        x0 = x[0]
        alpha = -np.exp(1j * np.angle(x0)) * np.linalg.norm(x)
        v = x.copy()
        v[0] -= alpha
        v /= np.linalg.norm(v)
        h[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, :])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        q[:, k + 1:] -= 2.0 * np.outer(q[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h, q


def _givens(x, y):
    """Return ``(c, s)`` with ``[[c, s], [-conj(s), c]] @ [x, y] = [r, 0]``."""
    ax = abs(x)
    if y == 0:
        return 1.0, 0j
    if ax == 0.0:
        return 0.0, complex(np.conj(y) / abs(y))
    r = np.hypot(ax, abs(y))
    return ax / r, (x / ax) * np.conj(y) / r


def _wilkinson(a, b, c, d):
    # eigenvalue of [[a, b], [c, d]] closer to d
    half = 0.5 * (a - d)
    disc = np.sqrt(half * half + b * c)
    mu1, mu2 = 0.5 * (a + d) + disc, 0.5 * (a + d) - disc
    return mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2


def schur(a, max_iter=None):
    """Complex Schur decomposition ``a = Q T Q^H``.

    Hessenberg reduction followed by implicitly shifted single-shift QR
    sweeps (Wilkinson shift, an exceptional shift every 10 stalled sweeps)
    with deflation of negligible subdiagonal entries.

    Parameters
    ----------
    a : array_like, shape (n, n)
    max_iter : int, optional
        Total sweep budget, at least ``30 * n`` (the default).

    Raises
    ------
    NonConvergence
        If the budget is exhausted. Retrying after a random unitary
        similarity usually helps.
    """
    h, q = hessenberg(a)
    n = h.shape[0]
    if max_iter is None:
        max_iter = 30 * max(n, 1)
    anorm = max(frobenius(h), np.finfo(float).tiny)
    total = 0
    stall = 0
    hi = n - 1
    while hi > 0:
        l = hi
        while l > 0:
            s = abs(h[l, l - 1])
            ref = abs(h[l - 1, l - 1]) + abs(h[l, l])
            if ref == 0.0:
                ref = anorm
            if s <= EPS * ref:
                h[l, l - 1] = 0.0
                break
            l -= 1
        if l == hi:
            hi -= 1
            stall = 0
            continue
        if total >= max_iter:
            raise NonConvergence(max_iter)
        total += 1
        stall += 1
        if stall % 10 == 0:
            shift = h[hi, hi] + 0.75 * abs(h[hi, hi - 1].real) + 0.75j * abs(h[hi, hi - 1].imag)
        else:
            shift = _wilkinson(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi])
        # bulge chase on the active window l..hi
        x, y = h[l, l] - shift, h[l + 1, l]
        for k in range(l, hi):
            if k > l:
                x, y = h[k, k - 1], h[k + 1, k - 1]
            c, s = _givens(x, y)
            g = np.array([[c, s], [-np.conj(s), c]])
            lo = l if k == l else k - 1
            h[k:k + 2, lo:] = g @ h[k:k + 2, lo:]
            top = min(k + 3, hi + 1)
            gh = g.conj().T
            h[:top, k:k + 2] = h[:top, k:k + 2] @ gh
            q[:, k:k + 2] = q[:, k:k + 2] @ gh
            if k > l:
                h[k + 1, k - 1] = 0.0
    t = np.triu(h)
    return SchurDecomposition(t, q, total)


# --------------------------------------------------------------------------
# eigenvalues and eigenvectors

def _clusters(values, threshold):
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        close = np.nonzero(np.abs(values[i + 1:] - values[i]) <= threshold)[0]
        for j in close + i + 1:
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[rj] = ri
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _sort_key(value, threshold):
    im = 0.0 if abs(value.imag) <= threshold else value.imag
    return (-im, value.real)


def eig(a, cluster_tol=CLUSTER_TOL, max_iter=None, scale=None):
    """Eigen-decomposition of a square matrix with clustered eigenvalues.

    Eigenvalues come from the Schur diagonal; eigenvectors from
    back-substitution on ``T - lambda I`` lifted by `Q`. Eigenvalues closer
    than ``cluster_tol * max(1, ||A||_F)`` (or ``cluster_tol * scale`` when
    `scale` is given) are linked (single linkage) into
    clusters; inside a cluster the coupled unknowns are set to zero, so a
    semisimple multiple eigenvalue receives independent eigenvectors.

    Returns
    -------
    EigenDecomposition
    """
    a = as_matrix(a)
    n = a.shape[0]
    if scale is None:
        scale = max(1.0, frobenius(a))
    threshold = cluster_tol * scale
    if n == 0:
        return EigenDecomposition(np.zeros(0, complex), np.zeros((0, 0), complex), [], threshold)
    sd = schur(a, max_iter=max_iter)
    t, q = sd.T, sd.Q
    lam = np.diag(t).copy()
    groups = _clusters(lam, threshold)
    label = np.empty(n, dtype=int)
    for g, members in enumerate(groups):
        label[members] = g

    y = np.zeros((n, n), dtype=np.complex128)
    for j in range(n):
        y[j, j] = 1.0
        if j == 0:
            continue
        m = t[:j, :j] - lam[j] * np.eye(j)
        rhs = -t[:j, j].copy()
        same = label[:j] == label[j]
        m[same, :] = 0.0
        m[same, same] = 1.0
        rhs[same] = 0.0
        y[:j, j] = scipy.linalg.solve_triangular(m, rhs, check_finite=False)
    v = q @ y
    v /= np.linalg.norm(v, axis=0)

    reps = [lam[g].mean() for g in groups]
    order = sorted(range(len(groups)), key=lambda g: _sort_key(reps[g], threshold))
    cols, clusters = [], []
    for g in order:
        members = sorted(groups[g])
        start = len(cols)
        cols.extend(members)
        clusters.append(EigenCluster(complex(reps[g]), len(members),
                                     list(range(start, start + len(members)))))
    cols = np.array(cols, dtype=int)
    return EigenDecomposition(lam[cols], v[:, cols], clusters, threshold)


def eigenvalues(a, max_iter=None):
    """Eigenvalues of `a` (the Schur diagonal), in no particular order."""
    a = as_matrix(a)
    if a.shape[0] == 0:
        return np.zeros(0, dtype=np.complex128)
    return np.diag(schur(a, max_iter=max_iter).T).copy()


def min_gap(values):
    """Smallest distance between two entries of `values` (``inf`` for fewer than two)."""
    w = np.asarray(values, dtype=np.complex128).ravel()
    if w.size < 2:
        return float("inf")
    d = np.abs(w[:, None] - w[None, :])
    d[np.diag_indices_from(d)] = np.inf
    return float(d.min())


def check_diagonalizable(a, cond_cap=COND_CAP, cluster_tol=CLUSTER_TOL, drop_tol=DROP_TOL,
                         decomposition=None):
    """Numerical diagonalizability verdict.

    `a` counts as diagonalizable when the eigenvector matrix has condition
    number at most `cond_cap` and, in every cluster, the assembled columns
    are genuine eigenvectors (residual below ``drop_tol * max(1, ||A||_F)``)
    whose rank under column-pivoted QR equals the cluster multiplicity.
    """
    a = as_matrix(a)
    n = a.shape[0]
    if n == 0:
        return DiagonalizabilityVerdict(True, 1.0, 0.0, 0)
    ed = decomposition if decomposition is not None else eig(a, cluster_tol)
    scale = max(1.0, frobenius(a))
    v = ed.vectors
    cond = float(np.linalg.cond(v))
    if not np.isfinite(cond):
        cond = np.inf
    worst = 0.0
    deficit = 0
    for cl in ed.clusters:
        idx = cl.column_indices
        vc = v[:, idx]
        res = a @ vc - vc * ed.values[idx]
        worst = max(worst, frobenius(res) / scale)
        r = scipy.linalg.qr(vc, mode="r", pivoting=True)[0]
        d = np.abs(np.diag(r))
        rank = int(np.sum(d > drop_tol * d[0])) if d.size and d[0] > 0 else 0
        deficit += cl.multiplicity - rank
    ok = cond <= cond_cap and worst <= drop_tol and deficit == 0
    return DiagonalizabilityVerdict(bool(ok), cond, worst, deficit)


def _commutes(a, b, tol):
    comm = frobenius(a @ b - b @ a)
    return comm <= tol * max(1.0, frobenius(a)) * max(1.0, frobenius(b)), comm


def simultaneous_basis(a, b, tol=1e-10, cluster_tol=CLUSTER_TOL):
    """Common eigenbasis of commuting diagonalizable `a` and `b`.

    Returns
    -------
    T : ndarray
        Unit columns, grouped by eigenvalue cluster of `a` and inside each
        group by eigenvalue cluster of `b` restricted to it.
    a_label, b_label : ndarray of int
        For every column, the index of its `a`-cluster and of its `b`-cluster
        within that `a`-cluster.
    a_values, b_values : ndarray
        The matching eigenvalues.
    """
    a = as_matrix(a)
    b = as_matrix(b, name="B")
    if a.shape != b.shape:
        raise NotCommuting(f"shapes differ: {a.shape} vs {b.shape}")
    ok, comm = _commutes(a, b, tol)
    if not ok:
        raise NotCommuting(f"||AB - BA||_F = {comm:.3e}")
    n = a.shape[0]
    if n == 0:
        empty = np.zeros(0, complex)
        return np.zeros((0, 0), complex), np.zeros(0, int), np.zeros(0, int), empty, empty
    ed = eig(a, cluster_tol)
    if not check_diagonalizable(a, decomposition=ed):
        raise Defective("first matrix is not diagonalizable")
    x = ed.vectors
    c = np.linalg.solve(x, b @ x)
    blocks, a_label, b_label, b_values = [], [], [], []
    for k, cl in enumerate(ed.clusters):
        idx = cl.column_indices
        cb = c[np.ix_(idx, idx)]
        sub = eig(cb, cluster_tol, scale=max(1.0, frobenius(b)))
        if not check_diagonalizable(cb, decomposition=sub):
            raise Defective("second matrix is not diagonalizable on an eigenspace of the first")
        blocks.append(sub.vectors)
        a_label.extend([k] * len(idx))
        b_label.extend(sub.cluster_of())
        b_values.extend(sub.values)
    t = x @ direct_sum(*blocks)
    t /= np.linalg.norm(t, axis=0)
    return (t, np.array(a_label, int), np.array(b_label, int), ed.values.copy(),
            np.array(b_values, complex))


def simultaneous_diagonalize(a, b, tol=1e-10, cluster_tol=CLUSTER_TOL):
    """Return `T` with ``T^-1 a T`` and ``T^-1 b T`` both diagonal.

    `a` is diagonalized first; `b` is then diagonalized on each eigenvalue
    cluster of `a` (where it is block diagonal because the two commute).

    Raises
    ------
    NotCommuting
        If ``||ab - ba||_F > tol max(1, ||a||_F) max(1, ||b||_F)``.
    Defective
        If either matrix is not diagonalizable.
    """
    return simultaneous_basis(a, b, tol, cluster_tol)[0]


# --------------------------------------------------------------------------
# inertia

def hermitian_eigh(h):
    """Eigenpairs of a Hermitian matrix through the Schur kernel.

    Returns real eigenvalues and orthonormal eigenvectors.
    """
    h = as_matrix(h)
    h = 0.5 * (h + h.conj().T)
    sd = schur(h)
    return np.diag(sd.T).real.copy(), sd.Q


def inertia_congruence(a, kind="hermitian", tol=1e-10, singular_tol=None):
    """Sylvester congruence of a nonsingular (skew-)Hermitian matrix.

    Returns `Q` with ``Q^H A Q = diag(+I_{n+}, -I_{n-})``; for
    ``kind="skew"`` the target is ``diag(+i I_{n+}, -i I_{n-})``. Columns
    are eigenvectors scaled by ``1 / sqrt(|lambda|)``, positive ones first.

    `tol` bounds the relative (skew-)Hermitian defect; an eigenvalue below
    ``singular_tol`` (default `tol`) times ``max(1, ||A||_F)`` counts as zero.
    """
    a = as_matrix(a)
    if kind not in ("hermitian", "skew"):
        raise ValueError(f"kind must be 'hermitian' or 'skew', got {kind!r}")
    scale = max(1.0, frobenius(a))
    sign = 1.0 if kind == "hermitian" else -1.0
    if frobenius(a - sign * a.conj().T) > tol * scale:
        raise NotHermitian(f"matrix is not {'skew-' if sign < 0 else ''}Hermitian")
    h = a if kind == "hermitian" else -1j * a
    w, v = hermitian_eigh(h)
    stol = tol if singular_tol is None else singular_tol
    if w.size and np.min(np.abs(w)) <= max(stol * scale, 1e3 * EPS * scale):
        raise Singular("matrix is singular")
    pos = np.nonzero(w > 0)[0]
    neg = np.nonzero(w < 0)[0]
    order = np.r_[pos, neg].astype(int)
    q = v[:, order] / np.sqrt(np.abs(w[order]))
    return InertiaCongruence(q, len(pos), len(neg), kind)


def matrix_exp(k):
    """Matrix exponential (scaling and squaring with Padé approximants)."""
    k = as_matrix(k, name="K")
    if k.shape[0] == 0:
        return k.copy()
    with np.errstate(over="ignore", invalid="ignore"):
        e = scipy.linalg.expm(k)
    if not np.all(np.isfinite(e)):
        raise OverflowError("matrix exponential overflowed")
    return e
