"""Random structured matrices, sparsity-pattern checks and an independent reduction oracle.

Generators are deterministic functions of their :class:`GeneratorSpec`; the
random stream is numpy's counter-based Philox generator so the same seed
gives the same matrix on every platform.
"""
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .core import build_special, perplectic_sum, perplectic_sum_n
from .errors import DimensionMismatch, InvalidSpectrumPairing, ParityError

__all__ = [
    "CLASS_KINDS",
    "GeneratorSpec",
    "PatternCheck",
    "ReductionVerdict",
    "check_pattern",
    "oracle_verify_reduction",
    "pattern_mask",
    "random_structured",
    "rng_from_seed",
]

R_KINDS = ("per-hermitian", "perskew-hermitian", "perplectic", "r-normal")
J_KINDS = ("skew-hamiltonian", "hamiltonian", "symplectic", "j-normal")
CLASS_KINDS = R_KINDS + J_KINDS
#: J-side kind -> R-side kind it is carried to by ``U A U^H``
J_TO_R = dict(zip(J_KINDS, R_KINDS))
#: structure flag of each kind in a classification report
CLASS_FLAG = {
    "per-hermitian": "selfadjoint", "skew-hamiltonian": "selfadjoint",
    "perskew-hermitian": "skewadjoint", "hamiltonian": "skewadjoint",
    "perplectic": "unitary", "symplectic": "unitary",
    "r-normal": "normal", "j-normal": "normal",
}

ROUTES = ("polynomial", "xform")
PAIRING_TOL = 1e-8
MAX_DRAWS = 200


def rng_from_seed(seed):
    return np.random.Generator(np.random.Philox(int(seed)))


@dataclass(frozen=True)
class GeneratorSpec:
    """What :func:`random_structured` should produce.

    Parameters
    ----------
    class_kind : str
        One of :data:`CLASS_KINDS`.
    dim : int
        Matrix size (even for the symplectic-side kinds).
    seed : int
    spectrum : sequence of complex, optional
        Exact eigenvalues (with multiplicity). Must respect the pairing of
        the class: ``(l, conj l)`` for (skew-)Hamiltonian-like selfadjoint
        kinds, ``(l, -conj l)`` for skewadjoint kinds, ``(l, 1/conj l)`` for
        unitary kinds.
    min_gap : float, optional
        Smallest admissible distance between eigenvalues when no spectrum is
        prescribed (default ``1e-3``).
    route : {"polynomial", "xform"}, optional
        Construction used for the normal kinds: ``S - i q(S)`` with a real
        cubic `q`, or ``P X P^-1`` with a random X-form `X`.
    """

    class_kind: str
    dim: int
    seed: int = 0
    spectrum: tuple = None
    min_gap: float = None
    route: str = "polynomial"

    def __post_init__(self):
        if self.class_kind not in CLASS_KINDS:
            raise ValueError(f"unknown class {self.class_kind!r}; choose from {CLASS_KINDS}")
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if self.class_kind in J_KINDS and self.dim % 2:
            raise ParityError(f"{self.class_kind} needs an even dimension, got {self.dim}")
        if self.spectrum is not None:
            object.__setattr__(self, "spectrum", tuple(complex(z) for z in self.spectrum))
            if len(self.spectrum) != self.dim:
                raise InvalidSpectrumPairing(
                    f"spectrum has {len(self.spectrum)} values for dimension {self.dim}")
        if self.route not in ROUTES:
            raise ValueError(f"unknown route {self.route!r}")


def _complex_normal(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _rstar(m):
    r = np.eye(m.shape[0])[::-1]
    return r @ m.conj().T @ r


def _per_hermitian(rng, n):
    m = _complex_normal(rng, (n, n))
    h = 0.5 * (m + _rstar(m))
    return h * (np.sqrt(n) / np.linalg.norm(h))


def _perskew(rng, n):
    m = _complex_normal(rng, (n, n))
    return 0.5 * (m - _rstar(m))


def _perplectic(rng, n):
    k = _perskew(rng, n)
    nk = np.linalg.norm(k)
    if nk == 0.0:
        return np.eye(n, dtype=np.complex128)
    k *= rng.uniform(0.5, 2.0) / nk
    return scipy.linalg.expm(k)


def _per_hermitian_2x2(rng):
    a = complex(_complex_normal(rng, ()))
    b, c = rng.standard_normal(2)
    return np.array([[a, b], [c, np.conj(a)]])


def _r_normal_polynomial(rng, n):
    s = _per_hermitian(rng, n)
    coef = rng.standard_normal(4) * np.array([1.0, 1.0, 0.5, 0.25])
    k = coef[0] * np.eye(n) + coef[1] * s + coef[2] * (s @ s) + coef[3] * (s @ s @ s)
    return s - 1j * k


def _r_normal_xform(rng, n):
    blocks = []
    for _ in range(n // 2):
        c1, c2 = _complex_normal(rng, 2)
        blocks.append(c1 * _per_hermitian_2x2(rng) + c2 * np.eye(2))
    if n % 2:
        blocks.append(_complex_normal(rng, (1, 1)))
    x0 = perplectic_sum_n(*blocks)
    p0 = _perplectic(rng, n)
    return p0 @ x0 @ np.linalg.solve(p0, np.eye(n))


def _min_gap(a):
    w = np.linalg.eigvals(a)
    if w.size < 2:
        return np.inf
    d = np.abs(w[:, None] - w[None, :])
    d[np.diag_indices_from(d)] = np.inf
    return float(d.min())


# --------------------------------------------------------------------------
# prescribed spectra

def _match(values, partner, tol):
    """Greedily pair each value with ``partner(value)``; return pairs and self-paired leftovers."""
    values = list(values)
    selfish = [z for z in values if abs(partner(z) - z) <= tol * max(1.0, abs(z))]
    rest = [z for z in values if abs(partner(z) - z) > tol * max(1.0, abs(z))]
    pairs = []
    while rest:
        z = rest.pop(0)
        want = partner(z)
        dist = [abs(w - want) for w in rest]
        if not dist or min(dist) > tol * max(1.0, abs(want)):
            raise InvalidSpectrumPairing(f"eigenvalue {z} has no partner {want}")
        pairs.append((z, rest.pop(int(np.argmin(dist)))))
    return pairs, selfish


def _spectrum_blocks(kind, spectrum):
    """2x2 (and one 1x1) X-form blocks of the class `kind` with the given eigenvalues."""
    z2 = build_special("Z", 2)
    rot = lambda u, v: z2.conj().T @ np.diag([u, v]) @ z2  # noqa: E731
    if kind == "r-normal":
        vals = list(spectrum)
        blocks = [vals[i] * np.eye(2) + (vals[i + 1] - vals[i]) * rot(0, 1)
                  for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            blocks.append(np.array([[vals[-1]]]))
        return blocks
    if kind == "per-hermitian":
        partner, own = np.conj, lambda u, v: rot(u.real, v.real)
    elif kind == "perskew-hermitian":
        partner, own = (lambda z: -np.conj(z)), lambda u, v: 1j * rot(u.imag, v.imag)
    else:
        if any(z == 0 for z in spectrum):
            raise InvalidSpectrumPairing("a perplectic matrix cannot have eigenvalue 0")
        partner, own = (lambda z: 1.0 / np.conj(z)), lambda u, v: rot(u / abs(u), v / abs(v))
    pairs, selfish = _match(spectrum, partner, PAIRING_TOL)
    blocks = [np.diag([u, partner(u)]) for u, _ in pairs]
    blocks += [own(selfish[i], selfish[i + 1]) for i in range(0, len(selfish) - 1, 2)]
    if len(selfish) % 2:
        z = selfish[-1]
        if kind == "per-hermitian":
            z = z.real
        elif kind == "perskew-hermitian":
            z = 1j * z.imag
        else:
            z = z / abs(z)
        blocks.append(np.array([[z]]))
    return blocks


def _from_spectrum(rng, kind, spectrum):
    n = len(spectrum)
    x0 = perplectic_sum_n(*_spectrum_blocks(kind, spectrum))
    p0 = _perplectic(rng, n)
    return p0 @ x0 @ np.linalg.solve(p0, np.eye(n))


def _draw(rng, kind, n, route):
    if kind == "per-hermitian":
        return _per_hermitian(rng, n)
    if kind == "perskew-hermitian":
        return _perskew(rng, n)
    if kind == "perplectic":
        return _perplectic(rng, n)
    if route == "xform":
        return _r_normal_xform(rng, n)
    return _r_normal_polynomial(rng, n)


def random_structured(spec):
    """Draw a random matrix of the structure class described by `spec`.

    Selfadjoint and skewadjoint kinds are ``(M +- M*)/2`` for a Gaussian
    `M`; unitary kinds are exponentials of skewadjoint generators of
    Frobenius norm in ``[0.5, 2]``; normal kinds follow ``spec.route``.
    Symplectic-side kinds are the perplectic-side ones conjugated by
    ``U^H . U``. Without a prescribed spectrum, draws are repeated until
    the eigenvalues are at least ``min_gap`` apart.

    Returns
    -------
    ndarray, shape (dim, dim)
    """
    rng = rng_from_seed(spec.seed)
    kind = J_TO_R.get(spec.class_kind, spec.class_kind)
    n = spec.dim
    if spec.spectrum is not None:
        a = _from_spectrum(rng, kind, spec.spectrum)
    else:
        gap = 1e-3 if spec.min_gap is None else spec.min_gap
        for _ in range(MAX_DRAWS):
            a = _draw(rng, kind, n, spec.route)
            if _min_gap(a) >= gap:
                break
        else:
            raise RuntimeError(f"no draw reached eigenvalue gap {gap} in {MAX_DRAWS} attempts")
    if spec.class_kind in J_KINDS:
        u = build_special("U", n)
        a = u.conj().T @ a @ u
    return np.ascontiguousarray(a, dtype=np.complex128)


# --------------------------------------------------------------------------
# patterns

PATTERNS = ("x", "fourdiag", "diagonal", "bisymmetric")
_ALIASES = {"xform": "x", "x-form": "x", "four-diagonal": "fourdiag", "four_diagonal": "fourdiag",
            "fourdiagonal": "fourdiag"}


def pattern_mask(pattern, n):
    """Boolean support mask of an ``n x n`` matrix with the given pattern."""
    pattern = _ALIASES.get(pattern.lower(), pattern.lower())
    i = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    if pattern == "x":
        return (i == j) | (i + j == n - 1)
    if pattern == "diagonal":
        return np.broadcast_to(i == j, (n, n)).copy()
    if pattern == "fourdiag":
        if n % 2:
            raise ParityError("four-diagonal form needs an even size")
        m = n // 2
        return (i == j) | (i - j == m) | (j - i == m)
    if pattern == "bisymmetric":
        return np.ones((n, n), dtype=bool)
    raise ValueError(f"unknown pattern {pattern!r}; choose from {PATTERNS}")


@dataclass
class PatternCheck:
    ok: bool
    max_off_pattern: float

    def __bool__(self):
        return self.ok


def check_pattern(a, pattern, tol=0.0):
    """Largest entry of `a` outside the support of `pattern`.

    ``"bisymmetric"`` instead measures the largest entry of ``A - A^T``,
    ``A - R A^T R`` and ``Im A``.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch("pattern checks need a square matrix")
    n = a.shape[0]
    key = _ALIASES.get(pattern.lower(), pattern.lower())
    if n == 0:
        return PatternCheck(True, 0.0)
    if key == "bisymmetric":
        r = np.eye(n)[::-1]
        worst = max(np.abs(a - a.T).max(), np.abs(a - r @ a.T @ r).max(), np.abs(a.imag).max())
    else:
        off = np.abs(np.where(pattern_mask(key, n), 0, a))
        worst = off.max()
    worst = float(worst)
    return PatternCheck(worst <= tol, worst)


# --------------------------------------------------------------------------
# oracle

@dataclass
class ReductionVerdict:
    """Outcome of :func:`oracle_verify_reduction`.

    ``checks`` maps each criterion to ``(residual, threshold, passed)``.
    """

    checks: dict
    flags_A: dict = field(default_factory=dict)
    flags_C: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(passed for _, _, passed in self.checks.values())

    def __bool__(self):
        return self.ok

    def as_dict(self):
        return {
            "ok": self.ok,
            "checks": {k: {"residual": r, "threshold": t, "passed": p}
                       for k, (r, t, p) in self.checks.items()},
            "flags_A": dict(self.flags_A),
            "flags_C": dict(self.flags_C),
        }


def _class_flags(m, b, tol):
    # recomputed from scratch: B^-1 by a general solve, no structure shortcuts
    star = np.linalg.solve(b, m.conj().T @ b)
    s = max(1.0, np.linalg.norm(m))
    return {
        "selfadjoint": bool(np.linalg.norm(m - star) <= tol * s),
        "skewadjoint": bool(np.linalg.norm(m + star) <= tol * s),
        "unitary": bool(np.linalg.norm(m.conj().T @ b @ m - b) <= tol * s * s),
        "normal": bool(np.linalg.norm(m @ star - star @ m) <= tol * s * s),
    }


def oracle_verify_reduction(a, t, c, b, pattern, tol=1e-8):
    """Independently confirm that `c` is a structure-preserving canonical form of `a`.

    Checks, each against ``tol * max(1, ||A||_F)``:

    * ``structure``: ``||T^H B T - B||_F`` (the transformation is B-unitary),
    * ``similarity``: ``||T^-1 A T - C||_F`` with an LU solve,
    * ``intertwining``: ``||A T - T C||_F``, against the threshold times ``||T||_F``,
    * ``pattern``: the largest entry of `c` outside `pattern`,
    * ``classes``: the four structure flags of `a` and `c` agree.

    Parameters
    ----------
    a, t, c : array_like
    b : ScalarProduct or array_like
        The scalar product (or its matrix ``B``).
    pattern : str
        ``"x"``, ``"fourdiag"``, ``"diagonal"`` or ``"bisymmetric"``.
    """
    a = np.asarray(a, dtype=np.complex128)
    t = np.asarray(t, dtype=np.complex128)
    c = np.asarray(c, dtype=np.complex128)
    bm = np.asarray(getattr(b, "matrix", b), dtype=np.complex128)
    n = a.shape[0]
    if not (a.shape == t.shape == c.shape == bm.shape == (n, n)):
        raise DimensionMismatch("A, T, C and B must be square of one size")
    thr = tol * max(1.0, float(np.linalg.norm(a)))
    checks = {}
    structure = float(np.linalg.norm(t.conj().T @ bm @ t - bm))
    checks["structure"] = (structure, thr, structure <= thr)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            lu = scipy.linalg.lu_factor(t, check_finite=True)
        if np.any(np.diag(lu[0]) == 0):
            raise np.linalg.LinAlgError("singular transformation")
        sim = float(np.linalg.norm(scipy.linalg.lu_solve(lu, a @ t) - c))
    except (ValueError, np.linalg.LinAlgError):
        sim = np.inf
    if not np.isfinite(sim):
        sim = float("inf")
    checks["similarity"] = (sim, thr, sim <= thr)
    # inverse-free cross-check, independent of how the reduction formed T^-1 A T
    tn = float(np.linalg.norm(t))
    inter = float(np.linalg.norm(a @ t - t @ c))
    checks["intertwining"] = (inter, thr * tn, inter <= thr * tn)
    pat = check_pattern(c, pattern, thr)
    checks["pattern"] = (pat.max_off_pattern, thr, pat.ok)
    fa, fc = _class_flags(a, bm, tol), _class_flags(c, bm, tol)
    mismatch = float(sum(fa[k] != fc[k] for k in fa))
    checks["classes"] = (mismatch, 0.0, mismatch == 0.0)
    return ReductionVerdict(checks, fa, fc)
