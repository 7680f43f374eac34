"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -s`` (or ``-v``) to see the lines; they
are written straight to the terminal, bypassing output capture.
"""
import time

import numpy as np
import pytest

from canonform import (GeneratorSpec, ScalarProduct, build_special, classify,
                       commuting_distinct_witness, discriminant, eig, eigenvalues,
                       inertia_congruence, min_gap, normal_to_four_diagonal, normal_to_x,
                       oracle_verify_reduction, peel_nonreal, peel_nonreal_pair,
                       perplectic_sum, perturb_to_distinct, random_structured, real_pair_to_x,
                       schur, unshuffle_permutation)
from canonform.cli import run
from canonform.mmio import read_matrix, write_matrix
from canonform.perplectic import split_self_skew
from canonform.testkit import CLASS_KINDS, J_KINDS, rng_from_seed

from conftest import crandn, pairing_distance, rev


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance {number:2d}] {'PASS' if ok else 'FAIL'}  {title}: {detail}")
        assert ok, f"criterion {number} failed: {detail}"
    return emit


def fro(a):
    return float(np.linalg.norm(a))


def rel(res, a):
    return res / max(1.0, fro(a))


# 1 -------------------------------------------------------------------------

def test_01_exact_identities(report):
    rng = np.random.default_rng(1)
    worst = 0.0
    for m in range(1, 9):
        z, jm = build_special("Z", 2 * m), build_special("J", 2 * m)
        d = np.diag(np.r_[np.ones(m), -np.ones(m)])
        worst = max(worst, np.abs(z.conj().T @ d @ z - rev(2 * m)).max())
        u = build_special("U", 2 * m)
        worst = max(worst, np.abs(u.conj().T @ (1j * rev(2 * m)) @ u - jm).max())
        worst = max(worst, np.abs(jm @ jm + np.eye(2 * m)).max())
    for n in range(1, 13):
        r = build_special("R", n)
        worst = max(worst, np.abs(r @ r - np.eye(n)).max())
    for _ in range(50):
        l, k = rng.integers(1, 5), rng.integers(0, 5)
        p, q = crandn(rng, 2 * l, 2 * l), crandn(rng, k, k)
        w = unshuffle_permutation(l, k)
        direct = np.zeros((2 * l + k,) * 2, dtype=complex)
        direct[:2 * l, :2 * l], direct[2 * l:, 2 * l:] = p, q
        worst = max(worst, np.abs(np.linalg.inv(w) @ perplectic_sum(p, q) @ w - direct).max())
    report(1, "exact structural identities", worst <= 1e-14, f"max abs error {worst:.1e}")


# 2 -------------------------------------------------------------------------

def test_02_perplectic_sum_algebra(report):
    rng = np.random.default_rng(2)
    worst = {"transpose": 0.0, "inverse": 0.0, "product": 0.0, "structure": 0.0}
    for i in range(200):
        l, k = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        p, q = crandn(rng, 2 * l, 2 * l), crandn(rng, k, k)
        s, w = crandn(rng, 2 * l, 2 * l), crandn(rng, k, k)
        pq = perplectic_sum(p, q)
        norms = fro(p) + fro(q)
        worst["transpose"] = max(worst["transpose"], fro(
            pq.conj().T - perplectic_sum(p.conj().T, q.conj().T)) / norms)
        pi, qi = np.linalg.inv(p), np.linalg.inv(q)
        worst["inverse"] = max(worst["inverse"], fro(
            pq @ perplectic_sum(pi, qi) - np.eye(2 * l + k)) / (fro(p) * fro(pi) + fro(q) * fro(qi)))
        worst["product"] = max(worst["product"], fro(
            pq @ perplectic_sum(s, w) - perplectic_sum(p @ s, q @ w)) /
            (fro(p) * fro(s) + fro(q) * fro(w)))
        for kind, flag in (("per-hermitian", "selfadjoint"), ("perskew-hermitian", "skewadjoint")):
            h1 = random_structured(GeneratorSpec(kind, 2 * l, 2 * i))
            h2 = random_structured(GeneratorSpec(kind, k, 2 * i + 1))
            b = ScalarProduct.perplectic(2 * l + k)
            worst["structure"] = max(worst["structure"], classify(
                perplectic_sum(h1, h2), b).residuals[flag] / (fro(h1) + fro(h2)))
    ok = all(v <= 1e-12 for v in worst.values())
    report(2, "perplectic-sum algebra (200 each)", ok,
           ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))


# 3, 4 ----------------------------------------------------------------------

def _pipeline(kinds_dims, reduce, product, pattern):
    worst = {"structure": 0.0, "similarity": 0.0, "intertwining": 0.0, "pattern": 0.0}
    fails = 0
    count = 0
    for n in kinds_dims:
        for s in range(100):
            route = "polynomial" if s % 2 else "xform"
            kind = "r-normal" if product == "perplectic" else "j-normal"
            a = random_structured(GeneratorSpec(kind, n, 1000 * n + s, route=route))
            res = reduce(a)
            t, c = res[0], res[1]
            b = getattr(ScalarProduct, product)(n)
            v = oracle_verify_reduction(a, t, c, b, pattern, tol=1e-8)
            fails += not v.ok
            count += 1
            for key in worst:
                norm = max(1.0, fro(a)) * (fro(t) if key == "intertwining" else 1.0)
                worst[key] = max(worst[key], v.checks[key][0] / norm)
    return count, fails, worst


def test_03_x_form_pipeline(report):
    t0 = time.perf_counter()
    count, fails, worst = _pipeline(range(2, 11), lambda a: tuple(normal_to_x(a)),
                                    "perplectic", "x")
    dt = time.perf_counter() - t0
    report(3, "R-normal -> X-form", fails == 0 and dt < 60,
           f"{count - fails}/{count} pass, worst rel residuals "
           + ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + f", {dt:.1f}s")


def test_04_four_diagonal_pipeline(report):
    t0 = time.perf_counter()
    count, fails, worst = _pipeline((2, 4, 6, 8, 10), lambda a: tuple(normal_to_four_diagonal(a)),
                                    "symplectic", "fourdiag")
    dt = time.perf_counter() - t0
    report(4, "J-normal -> four-diagonal", fails == 0 and dt < 60,
           f"{count - fails}/{count} pass, worst rel residuals "
           + ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + f", {dt:.1f}s")


# 5 -------------------------------------------------------------------------

def test_05_stage_contracts(report):
    worst_im, worst_bisym = 0.0, 0.0
    for s in range(50):
        n = 2 + s % 9
        a = random_structured(GeneratorSpec("per-hermitian", n, 500 + s))
        a_hat = peel_nonreal(a).A_hat
        if a_hat.size:
            worst_im = max(worst_im, np.abs(eigenvalues(a_hat).imag).max())
        sk, kk = split_self_skew(random_structured(GeneratorSpec("r-normal", n, 600 + s)))
        _, _, _, ah, bh = peel_nonreal_pair(sk, kk)
        if ah.size:
            r = real_pair_to_x(ah, bh).residuals
            worst_bisym = max(worst_bisym, r["bisymmetry_a"], r["bisymmetry_b"])
    report(5, "peel / real-pair stage contracts", worst_im <= 1e-7 and worst_bisym <= 1e-8,
           f"max |Im| after peel {worst_im:.1e}, bisymmetry {worst_bisym:.1e}")


# 6 -------------------------------------------------------------------------

def test_06_conjugate_spectrum_and_gram(report):
    worst_pair, worst_gram = 0.0, 0.0
    for s in range(100):
        n = 2 + s % 11
        a = random_structured(GeneratorSpec("per-hermitian", n, 700 + s))
        ev = eig(a)
        worst_pair = max(worst_pair, pairing_distance(ev.values, np.conj))
        g = ev.vectors.conj().T @ rev(n) @ ev.vectors
        far = np.abs(ev.values[None, :] - ev.values.conj()[:, None]) > 1e-3
        worst_gram = max(worst_gram, np.abs(g[far]).max(initial=0.0))
    report(6, "per-Hermitian spectra and R-orthogonality",
           worst_pair <= 1e-8 and worst_gram <= 1e-8,
           f"pairing {worst_pair:.1e}, Gram {worst_gram:.1e}")


# 7 -------------------------------------------------------------------------

def test_07_inertia_of_reversal(report):
    bad, worst = [], 0.0
    for n in range(1, 13):
        ic = inertia_congruence(rev(n))
        if ic.signature != ((n + 1) // 2, n // 2):
            bad.append(n)
        worst = max(worst, fro(ic.Q.conj().T @ rev(n) @ ic.Q - ic.target()))
    report(7, "inertia of R_n", not bad and worst <= 1e-10,
           f"wrong signatures {bad or 'none'}, congruence residual {worst:.1e}")


# 8 -------------------------------------------------------------------------

def test_08_commuting_witness(report):
    rng = rng_from_seed(8)
    worst_comm, worst_gap = 0.0, np.inf
    for s in range(100):
        n = 2 + s % 7
        if s % 2:
            a = random_structured(GeneratorSpec("r-normal", n, 800 + s, route="xform"))
        else:
            v = rng.standard_normal(n - 1) + 1j * rng.standard_normal(n - 1)
            a = random_structured(GeneratorSpec("r-normal", n, 800 + s,
                                                spectrum=(v[0],) + tuple(v)))
        m = commuting_distinct_witness(a)
        star = rev(n) @ a.conj().T @ rev(n)
        scale = max(1.0, fro(a)) * max(1.0, fro(m))
        worst_comm = max(worst_comm, fro(a @ m - m @ a) / scale, fro(star @ m - m @ star) / scale)
        worst_gap = min(worst_gap, min_gap(eigenvalues(m)))
    report(8, "commuting witness with distinct eigenvalues",
           worst_comm <= 1e-8 and worst_gap >= 1e-6,
           f"commutators {worst_comm:.1e}, min gap {worst_gap:.2e}")


# 9 -------------------------------------------------------------------------

def test_09_perturbation_certificate(report):
    rng = rng_from_seed(9)
    ok, worst = 0, {"distance": 0.0, "gap": np.inf, "normal": 0.0, "draws": 0}
    for s in range(100):
        product = "perplectic" if s % 2 else "symplectic"
        n = 2 * (1 + s % 4) if product == "symplectic" else 2 + s % 7
        v = rng.standard_normal(n - 1) + 1j * rng.standard_normal(n - 1)
        kind = "r-normal" if product == "perplectic" else "j-normal"
        a = random_structured(GeneratorSpec(kind, n, 900 + s, spectrum=(v[0],) + tuple(v)))
        cert = perturb_to_distinct(a, product, epsilon=1e-4, seed=s, gap_threshold=1e-6)
        worst["distance"] = max(worst["distance"], cert.distance_fro)
        worst["gap"] = min(worst["gap"], cert.min_gap)
        worst["normal"] = max(worst["normal"], cert.normal_residual)
        worst["draws"] = max(worst["draws"], cert.draws)
        ok += (cert.distance_fro < 1e-4 and cert.min_gap >= 1e-6 and cert.normal_residual <= 1e-8
               and cert.draws <= 32)
    report(9, "perturbation to distinct eigenvalues", ok == 100,
           f"{ok}/100, max distance {worst['distance']:.1e}, min gap {worst['gap']:.1e}, "
           f"normality {worst['normal']:.1e}, max draws {worst['draws']}")


# 10 ------------------------------------------------------------------------

def test_10_discriminant(report):
    rng = np.random.default_rng(10)
    worst = 0.0
    for s in range(100):
        n = 1 + s % 6
        a = crandn(rng, n, n)
        lam = np.linalg.eigvals(a)
        ref = np.prod([(lam[i] - lam[j]) ** 2 for i in range(n) for j in range(i + 1, n)])
        worst = max(worst, abs(discriminant(a) - ref) / abs(ref))
    jordan = [np.eye(k) * c + np.eye(k, k=1) for k in (2, 3, 4, 5) for c in (0.0, 1.0, 2.0, -3.0)]
    zeros = sum(discriminant(j) == 0 for j in jordan)
    report(10, "discriminant", worst <= 1e-6 and zeros == len(jordan),
           f"max rel error {worst:.1e}, exact zeros {zeros}/{len(jordan)}")


# 11 ------------------------------------------------------------------------

def test_11_eigen_kernel(report):
    rng = np.random.default_rng(11)
    worst_rec, worst_unit, worst_eig = 0.0, 0.0, 0.0
    for n in (1, 2, 3, 5, 8, 13, 21, 34, 50, 64):
        for _ in range(3):
            a = crandn(rng, n, n)
            sd = schur(a)
            worst_rec = max(worst_rec, fro(sd.Q @ sd.T @ sd.Q.conj().T - a) / fro(a))
            worst_unit = max(worst_unit, fro(sd.Q.conj().T @ sd.Q - np.eye(n)) / fro(a))
            ev = eig(a)
            res = np.linalg.norm(a @ ev.vectors - ev.vectors * ev.values, axis=0).max()
            worst_eig = max(worst_eig, res / fro(a))
    report(11, "Schur / eigen kernel up to n = 64",
           worst_rec <= 1e-12 and worst_unit <= 1e-12 and worst_eig <= 1e-10,
           f"reconstruction {worst_rec:.1e}, unitarity {worst_unit:.1e}, eig {worst_eig:.1e}")


# 12 ------------------------------------------------------------------------

def test_12_structure_transport(report):
    changed = []
    for c, kind in enumerate(CLASS_KINDS):
        n = 6
        symp = kind in J_KINDS
        b = (ScalarProduct.symplectic if symp else ScalarProduct.perplectic)(n)
        a = random_structured(GeneratorSpec(kind, n, 1200 + c))
        flags = classify(a, b).flags
        for s in range(50):
            t = random_structured(GeneratorSpec("symplectic" if symp else "perplectic", n,
                                                5000 * (c + 1) + s))
            if classify(np.linalg.solve(t, a @ t), b).flags != flags:
                changed.append((kind, s))
    report(12, "classification invariant under structured similarity (8 x 50)", not changed,
           f"{len(changed)} flag changes")


# 13 ------------------------------------------------------------------------

def test_13_cli(report, tmp_path, capsys):
    def cli(*argv):
        code = run([str(x) for x in argv])
        capsys.readouterr()
        return code

    a, x, p = tmp_path / "a.mtx", tmp_path / "x.mtx", tmp_path / "p.mtx"
    codes = {"gen": cli("gen", "--class", "r-normal", "--dim", 8, "--seed", 13, "--out", a)}
    codes["reduce"] = cli("reduce", "--product", "perplectic", "--in", a, "--out-form", x,
                          "--out-transform", p)
    codes["verify"] = cli("verify", "--product", "perplectic", "--in", a, "--transform", p,
                          "--canonical", x, "--pattern", "x")
    j = tmp_path / "jordan.mtx"
    write_matrix(j, [[2, 1], [0, 2]])
    codes["jordan"] = cli("reduce", "--product", "perplectic", "--in", j, "--out-form",
                          tmp_path / "jx.mtx", "--out-transform", tmp_path / "jp.mtx")
    t = read_matrix(p)
    t[0, 0] *= 1.001
    write_matrix(p, t)
    codes["corrupt"] = cli("verify", "--product", "perplectic", "--in", a, "--transform", p,
                           "--canonical", x, "--pattern", "x")
    expected = {"gen": 0, "reduce": 0, "verify": 0, "jordan": 2, "corrupt": 1}
    report(13, "CLI round trip and exit codes", codes == expected,
           ", ".join(f"{k} -> {v}" for k, v in codes.items()))
