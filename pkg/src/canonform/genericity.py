"""Distinct-eigenvalue machinery for structured normal matrices.

A diagonalizable B-normal matrix can be moved to one with pairwise distinct
eigenvalues by an arbitrarily small B-normal perturbation ``A + c N``: take
for `N` a matrix that commutes with `A` and ``A*`` and has distinct
eigenvalues itself. This module builds such a witness from the X-form,
samples the coefficient `c`, and offers the discriminant test for multiple
eigenvalues on small matrices.
"""
from dataclasses import dataclass, field

import numpy as np

from .core import (DEFAULT_TOL, PERPLECTIC, SYMPLECTIC, ScalarProduct, as_matrix, build_special,
                   classify, frobenius, perplectic_sum_n, spectral_norm)
from .eigen import CLUSTER_TOL, _clusters, check_diagonalizable, eigenvalues, min_gap
from .errors import (AlphaSearchFailed, Defective, DimensionMismatch, NotNormal, ParityError,
                     SearchExhausted, SizeCapExceeded)
from .perplectic import normal_to_x

__all__ = [
    "DISCRIMINANT_SIZE_CAP",
    "ExperimentSummary",
    "PerturbationCertificate",
    "characteristic_polynomial",
    "commuting_distinct_witness",
    "discriminant",
    "genericity_experiment",
    "perturb_to_distinct",
]

DISCRIMINANT_SIZE_CAP = 12
MAX_DRAWS = 32
#: relative size below which an X-form block counts as a multiple of I
SCALAR_BLOCK_TOL = 1e-8


def _default_gap(a):
    return 1e-6 * max(1.0, frobenius(a))


def _product(b, n):
    if isinstance(b, str):
        b = ScalarProduct(b, n)
    b.check(np.empty((n, n)))
    return b


def _unframe(a):
    """``U A U^H``: carry a symplectic-side matrix to the perplectic side."""
    if a.shape[0] % 2:
        raise ParityError(f"symplectic side needs an even size, got {a.shape[0]}")
    u = build_special("U", a.shape[0])
    return u @ a @ u.conj().T, u


# --------------------------------------------------------------------------
# commuting witness

def _blocks(x):
    """Split an X-form matrix into its 2x2 blocks (outermost first) and optional centre."""
    n = x.shape[0]
    out = []
    for k in range(n // 2):
        idx = [k, n - 1 - k]
        out.append(x[np.ix_(idx, idx)])
    centre = x[n // 2, n // 2] if n % 2 else None
    return out, centre


def _is_scalar(block, scale):
    return frobenius(block - 0.5 * np.trace(block) * np.eye(2)) <= SCALAR_BLOCK_TOL * scale


def _literal_witness(blocks, centre, alphas):
    parts, mu = [], []
    for nk, al in zip(blocks, alphas):
        if nk["scalar"]:
            parts.append(np.diag([al, 1.0 + al]))
            mu += [al, 1.0 + al]
        else:
            parts.append(al * nk["N"])
            mu += list(al * nk["values"])
    if centre is not None:
        parts.append(np.array([[alphas[-1]]]))
        mu.append(alphas[-1])
    return parts, np.array(mu, dtype=np.complex128)


def _placed_witness(blocks, centre, scale, cluster_tol):
    """Blocks whose eigenvalues sit on a fixed grid chosen from the clusters of X.

    Eigenvalue slots of one cluster of X get real parts ``j - (m - 1) / 2``
    (unit spacing), clusters are told apart by their imaginary parts. A
    block with a single repeated eigenvalue becomes ``diag(a, 1 + a)``;
    any other block becomes ``a N + b I`` with the two targets as
    eigenvalues, which still commutes with ``N`` and ``N*``.
    """
    slots = []
    for nk in blocks:
        slots += list(nk["values"])
    if centre is not None:
        slots.append(centre)
    slots = np.array(slots, dtype=np.complex128)
    groups = _clusters(slots, cluster_tol * scale)
    count = len(groups)
    target = np.empty(len(slots), dtype=np.complex128)
    for c, members in enumerate(sorted(groups, key=min)):
        m = len(members)
        for j, s in enumerate(sorted(members)):
            target[s] = (j - 0.5 * (m - 1)) + 1j * (c - 0.5 * (count - 1)) / count
    parts = []
    for k, nk in enumerate(blocks):
        t1, t2 = target[2 * k], target[2 * k + 1]
        if nk["scalar"]:
            parts.append(np.diag([t1, t2]))
        else:
            mu1, mu2 = nk["values"]
            a = (t2 - t1) / (mu2 - mu1)
            parts.append(a * nk["N"] + (t1 - a * mu1) * np.eye(2))
    if centre is not None:
        parts.append(np.array([[target[-1]]]))
    return parts, target


def _witness_perplectic(a, alphas, gap, tol, cluster_tol):
    xr = normal_to_x(a, tol, cluster_tol)
    x = xr.X
    scale = max(1.0, frobenius(x))
    raw, centre = _blocks(x)
    blocks = []
    for nk in raw:
        if _is_scalar(nk, scale):
            v = 0.5 * np.trace(nk)
            blocks.append({"N": nk, "scalar": True, "values": np.array([v, v])})
        else:
            blocks.append({"N": nk, "scalar": False, "values": eigenvalues(nk)})
    if alphas is None:
        parts, mu = _placed_witness(blocks, centre, scale, cluster_tol)
    else:
        alphas = [complex(z) for z in alphas]
        need = len(blocks) + (centre is not None)
        if len(alphas) != need:
            raise DimensionMismatch(f"expected {need} coefficients, got {len(alphas)}")
        parts, mu = _literal_witness(blocks, centre, alphas)
    if min_gap(mu) < gap:
        raise AlphaSearchFailed(
            f"witness eigenvalues are only {min_gap(mu):.3e} apart (need {gap:.3e})")
    m_prime = perplectic_sum_n(*parts) if parts else np.zeros((0, 0), dtype=np.complex128)
    p = xr.P
    m = np.linalg.solve(p.T, (p @ m_prime).T).T if a.shape[0] else m_prime
    return m, mu


def commuting_distinct_witness(a, b=None, alphas=None, gap_threshold=None, tol=DEFAULT_TOL,
                               cluster_tol=CLUSTER_TOL):
    """A matrix with distinct eigenvalues that commutes with `a` and ``a*``.

    `a` is brought to X-form ``X = P^-1 A P = N_1 ⊡ N_2 ⊡ ...``. With
    explicit `alphas` (one per 2x2 block, plus one for an odd centre) each
    block is replaced by ``diag(alpha, 1 + alpha)`` when it is a multiple of
    the identity and by ``alpha N_k`` otherwise. Without `alphas` the block
    eigenvalues are placed on a well separated grid instead (see Notes).
    The result is ``P M' P^-1``, which is again B-normal.

    Parameters
    ----------
    a : array_like, shape (n, n)
        Diagonalizable and B-normal.
    b : ScalarProduct or {"perplectic", "symplectic"}, optional
        Defaults to the perplectic product. Symplectic input is handled in
        the frame ``U A U^H``.
    alphas : sequence of complex, optional
    gap_threshold : float, optional
        Required separation of the witness eigenvalues, default
        ``1e-6 * max(1, ||A||_F)``.

    Returns
    -------
    ndarray, shape (n, n)

    Raises
    ------
    NotNormal, Defective
        From the X-form reduction.
    AlphaSearchFailed
        The eigenvalues of the witness are not `gap_threshold` apart.

    Notes
    -----
    The default grid keeps ``||M||`` small compared with the separation of
    eigenvalues that share a cluster of `a`, which is what governs how far a
    perturbation along `M` has to go.
    """
    m, _ = _witness(a, b, alphas, gap_threshold, tol, cluster_tol)
    return m


def _witness(a, b, alphas, gap_threshold, tol, cluster_tol):
    a = as_matrix(a)
    n = a.shape[0]
    b = _product(b or PERPLECTIC, n)
    gap = _default_gap(a) if gap_threshold is None else float(gap_threshold)
    if b.kind == SYMPLECTIC:
        a_r, u = _unframe(a)
        m, mu = _witness_perplectic(a_r, alphas, gap, tol, cluster_tol)
        return u.conj().T @ m @ u, mu
    return _witness_perplectic(a, alphas, gap, tol, cluster_tol)


# --------------------------------------------------------------------------
# discriminant

def characteristic_polynomial(a):
    """Coefficients ``[1, c_{n-1}, ..., c_0]`` of ``det(x I - A)`` (Faddeev-LeVerrier)."""
    a = as_matrix(a)
    n = a.shape[0]
    coef = np.zeros(n + 1, dtype=np.complex128)
    coef[0] = 1.0
    m = np.zeros_like(a)
    eye = np.eye(n)
    for k in range(1, n + 1):
        m = a @ m + coef[k - 1] * eye
        coef[k] = -np.trace(a @ m) / k
    return coef


def _sylvester(p, q):
    dp, dq = len(p) - 1, len(q) - 1
    size = dp + dq
    s = np.zeros((size, size), dtype=np.complex128)
    for i in range(dq):
        s[i, i:i + dp + 1] = p
    for i in range(dp):
        s[dq + i, i:i + dq + 1] = q
    return s


def discriminant(a, size_cap=DISCRIMINANT_SIZE_CAP):
    """Discriminant of the characteristic polynomial, ``prod_{i<j} (l_i - l_j)^2``.

    Computed as ``(-1)^(n(n-1)/2) Res(p, p')`` with the resultant taken as the
    determinant of the Sylvester matrix. It vanishes exactly when `a` has a
    multiple eigenvalue; a Sylvester matrix that is singular to working
    precision (smallest singular value below ``size * eps`` times the
    largest) is reported as an exact zero, since its determinant then has
    no correct digits.

    Raises
    ------
    SizeCapExceeded
        For ``n > size_cap``; the resultant is too ill-conditioned there and
        the smallest eigenvalue gap should be used instead.
    """
    a = as_matrix(a)
    n = a.shape[0]
    if n > size_cap:
        raise SizeCapExceeded(f"discriminant limited to n <= {size_cap}, got {n}")
    if n < 2:
        return 1.0 + 0.0j
    p = characteristic_polynomial(a)
    dp = p[:-1] * np.arange(n, 0, -1)
    syl = _sylvester(p, dp)
    sv = np.linalg.svd(syl, compute_uv=False)
    if sv[-1] <= syl.shape[0] * np.finfo(float).eps * sv[0]:
        return 0j
    res = np.linalg.det(syl)
    sign = -1.0 if (n * (n - 1) // 2) % 2 else 1.0
    return complex(sign * res)


# --------------------------------------------------------------------------
# perturbation

@dataclass
class PerturbationCertificate:
    """Result of :func:`perturb_to_distinct`.

    ``A_hat = A + c0 * N`` with ``N`` the commuting witness; ``min_gap`` is
    the smallest distance between eigenvalues of ``A_hat``.
    """

    A_hat: np.ndarray
    distance_fro: float
    distance_spectral: float
    min_gap: float
    c0: complex
    epsilon: float
    gap_threshold: float
    normal_residual: float
    draws: int
    product: str = PERPLECTIC

    @property
    def distance(self):
        return self.distance_fro

    @property
    def ok(self):
        return (self.distance_fro < self.epsilon or self.c0 == 0) and \
            self.min_gap >= self.gap_threshold

    def as_dict(self):
        return {
            "product": self.product,
            "epsilon": self.epsilon,
            "c0": [self.c0.real, self.c0.imag],
            "distance_fro": self.distance_fro,
            "distance_spectral": self.distance_spectral,
            "min_gap": self.min_gap,
            "gap_threshold": self.gap_threshold,
            "normal_residual": self.normal_residual,
            "draws": self.draws,
        }


def _normal_residual(a, b):
    rep = classify(a, b, tol=0.0)
    return rep.residuals["normal"] / rep.scale**2


def perturb_to_distinct(a, b=None, epsilon=1e-6, seed=0, gap_threshold=None,
                        max_draws=MAX_DRAWS, tol=DEFAULT_TOL, cluster_tol=CLUSTER_TOL):
    """Nearby B-normal matrix with pairwise distinct eigenvalues.

    Draws ``c`` uniformly from the disk of radius ``epsilon / (2 ||N||_F)``
    until ``A + c N`` has eigenvalues at least `gap_threshold` apart.

    Parameters
    ----------
    a : array_like, shape (n, n)
        Diagonalizable and B-normal.
    b : ScalarProduct or {"perplectic", "symplectic"}, optional
    epsilon : float
        Upper bound for ``||A - A_hat||_F``.
    seed : int
        Seed of the Philox stream the coefficients are drawn from.
    gap_threshold : float, optional
        Default ``1e-6 * max(1, ||A||_F)``. Perturbations of size `epsilon`
        move eigenvalues by at most about `epsilon`, so the threshold has to
        be well below it.
    max_draws : int

    Returns
    -------
    PerturbationCertificate

    Raises
    ------
    NotNormal, Defective
        Input outside the supported class. Non-diagonalizable input needs a
        preliminary approximation that is not provided here.
    SearchExhausted
        No draw reached the gap threshold.
    """
    a = as_matrix(a)
    n = a.shape[0]
    b = _product(b or PERPLECTIC, n)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    gap = _default_gap(a) if gap_threshold is None else float(gap_threshold)
    if not classify(a, b, tol).normal:
        raise NotNormal(f"matrix is not {b.kind}-normal")
    if not check_diagonalizable(a, cluster_tol=cluster_tol):
        raise Defective("matrix is not diagonalizable")
    g0 = min_gap(eigenvalues(a))
    if g0 >= gap:
        return PerturbationCertificate(a.copy(), 0.0, 0.0, g0, 0j, float(epsilon), gap,
                                       _normal_residual(a, b), 0, b.kind)
    # the witness only has to separate eigenvalues, any positive gap will do
    w = _witness(a, b, None, 0.0, tol, cluster_tol)[0]
    radius = epsilon / (2.0 * frobenius(w))
    rng = np.random.Generator(np.random.Philox(int(seed)))
    best = None
    for draw in range(1, max_draws + 1):
        r, phi = rng.random(2)
        c = radius * np.sqrt(r) * np.exp(2j * np.pi * phi)
        a_hat = a + c * w
        g = min_gap(eigenvalues(a_hat))
        if best is None or g > best[0]:
            best = (g, c)
        if g >= gap:
            return PerturbationCertificate(
                a_hat, frobenius(a_hat - a), spectral_norm(a_hat - a), g, complex(c),
                float(epsilon), gap, _normal_residual(a_hat, b), draw, b.kind)
    raise SearchExhausted(
        f"{max_draws} draws reached eigenvalue gap {best[0]:.3e} < {gap:.3e}")


# --------------------------------------------------------------------------
# experiment

@dataclass
class ExperimentSummary:
    """Tally of :func:`genericity_experiment`."""

    samples: int
    direct: int
    after_perturbation: int
    failures: list = field(default_factory=list)
    #: largest relative similarity/structure residual among successful reductions
    worst_residual: float = 0.0

    @property
    def success_rate(self):
        return (self.direct + self.after_perturbation) / self.samples if self.samples else 1.0


def genericity_experiment(samples=100, dims=range(2, 9), product=PERPLECTIC, epsilon=1e-6,
                          seed=0, gap_threshold=1e-9, double_every=2):
    """Reduce random B-normal matrices, perturbing those with repeated eigenvalues first.

    Every `double_every`-th sample is drawn with a forced double eigenvalue.
    A sample counts as a success when either it has distinct eigenvalues
    (gap above `gap_threshold`) and reduces directly, or one call of
    :func:`perturb_to_distinct` with `epsilon` yields a matrix that does.
    Perturbed matrices are reduced with a clustering tolerance below their
    certified eigenvalue gap; their eigenvectors are correspondingly less
    well conditioned, which ``worst_residual`` makes visible.

    Returns
    -------
    ExperimentSummary
    """
    from .symplectic import normal_to_four_diagonal
    from .testkit import GeneratorSpec, random_structured, rng_from_seed

    dims = [d for d in dims if product == PERPLECTIC or d % 2 == 0]
    kind = "r-normal" if product == PERPLECTIC else "j-normal"
    reduce = normal_to_x if product == PERPLECTIC else normal_to_four_diagonal
    rng = rng_from_seed(seed)
    summary = ExperimentSummary(samples, 0, 0)
    for k in range(samples):
        n = dims[k % len(dims)]
        s = int(rng.integers(2**31))
        if double_every and k % double_every == 0:
            vals = _complex_values(rng, n - 1)
            spec = GeneratorSpec(kind, n, s, spectrum=(vals[0],) + tuple(vals))
        else:
            spec = GeneratorSpec(kind, n, s, route="xform" if k % 3 else "polynomial")
        a = random_structured(spec)
        try:
            if min_gap(eigenvalues(a)) >= gap_threshold:
                res = reduce(a).residuals
                summary.direct += 1
            else:
                cert = perturb_to_distinct(a, product, epsilon, seed=s,
                                           gap_threshold=gap_threshold)
                ct = min(CLUSTER_TOL, 0.1 * cert.min_gap / max(1.0, frobenius(a)))
                res = reduce(cert.A_hat, cluster_tol=ct).residuals
                summary.after_perturbation += 1
        except Exception as exc:  # tallied, not raised
            summary.failures.append((k, n, type(exc).__name__, str(exc)))
            continue
        worst = max(v for key, v in res.items() if key in ("perplectic", "symplectic",
                                                            "similarity", "off_pattern"))
        summary.worst_residual = max(summary.worst_residual, worst)
    return summary


def _complex_values(rng, count):
    """`count` random complex numbers at least 1e-2 apart."""
    while True:
        v = rng.standard_normal(count) + 1j * rng.standard_normal(count)
        if min_gap(v) >= 1e-2:
            return tuple(complex(z) for z in v)
