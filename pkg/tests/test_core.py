import numpy as np
import pytest

from canonform import core
from canonform.core import (ScalarProduct, adjoint_star, build_special, classify, direct_sum,
                            perplectic_sum, perplectic_sum_n, split_perplectic_sum,
                            unshuffle_permutation)
from canonform.errors import DimensionMismatch, ParityError

from conftest import crandn, jmat, rev


class TestSpecialMatrices:
    def test_reversal(self):
        assert np.array_equal(build_special("R", 1), [[1]])
        assert np.array_equal(build_special("R", 3), rev(3))

    def test_j(self):
        assert np.array_equal(build_special("J", 4), jmat(4))
        with pytest.raises(ParityError):
            build_special("J", 3)

    def test_z_two(self):
        z = build_special("Z", 2)
        np.testing.assert_allclose(z, np.array([[1, 1], [-1, 1]]) / np.sqrt(2), atol=0)
        np.testing.assert_allclose(z.conj().T @ np.diag([1, -1]) @ z, rev(2), atol=1e-15)

    def test_z_odd_is_padded(self):
        z5 = build_special("Z", 5)
        expected = perplectic_sum(build_special("Z", 4), [[1]])
        assert np.array_equal(z5, expected)
        d = perplectic_sum(np.diag([1, 1, -1, -1]), [[1]])
        np.testing.assert_allclose(z5.conj().T @ d @ z5, rev(5), atol=1e-15)

    def test_u_two(self):
        u = build_special("U", 2)
        np.testing.assert_array_equal(u, np.diag([1, -1j]))
        np.testing.assert_allclose(u.conj().T @ (1j * rev(2)) @ u, jmat(2), atol=0)

    @pytest.mark.parametrize("n", [2, 4, 6, 10])
    def test_u_maps_ir_to_j(self, n):
        u = build_special("U", n)
        assert np.abs(u.conj().T @ (1j * rev(n)) @ u - jmat(n)).max() == 0
        assert np.abs(u.conj().T @ u - np.eye(n)).max() <= 1e-15 * np.sqrt(n)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            build_special("Q", 2)


class TestAdjoint:
    def test_real_2x2(self):
        a = np.array([[1, 2], [3, 4]])
        np.testing.assert_array_equal(adjoint_star(a, ScalarProduct.perplectic(2)),
                                      [[4, 2], [3, 1]])

    def test_diagonal_reverses_and_conjugates(self):
        d = np.array([1 + 2j, 3 - 1j, -2j, 5])
        got = adjoint_star(np.diag(d), ScalarProduct.perplectic(4))
        np.testing.assert_array_equal(got, np.diag(d[::-1].conj()))

    def test_identity_symplectic(self):
        np.testing.assert_array_equal(adjoint_star(np.eye(4), ScalarProduct.symplectic(4)),
                                      np.eye(4))

    @pytest.mark.parametrize("kind,n", [("perplectic", 5), ("symplectic", 6)])
    def test_involution(self, rng, kind, n):
        b = ScalarProduct(kind, n)
        a = crandn(rng, n, n)
        np.testing.assert_allclose(adjoint_star(adjoint_star(a, b), b), a, atol=1e-14)

    def test_matches_general_formula(self, rng):
        b = ScalarProduct.symplectic(4)
        a = crandn(rng, 4, 4)
        oracle = np.linalg.solve(jmat(4), a.conj().T @ jmat(4))
        np.testing.assert_allclose(adjoint_star(a, b), oracle, atol=1e-14)

    def test_shape_checked(self):
        with pytest.raises(DimensionMismatch):
            adjoint_star(np.eye(3), ScalarProduct.perplectic(4))


class TestScalarProduct:
    def test_symplectic_needs_even(self):
        with pytest.raises(ParityError):
            ScalarProduct.symplectic(3)

    def test_matrix_identities(self):
        r, j = ScalarProduct.perplectic(5).matrix, ScalarProduct.symplectic(6).matrix
        np.testing.assert_array_equal(r @ r, np.eye(5))
        np.testing.assert_array_equal(j @ j, -np.eye(6))
        np.testing.assert_array_equal(ScalarProduct.symplectic(6).inverse @ j, np.eye(6))


class TestClassify:
    def test_reversal_itself(self):
        rep = classify(rev(4), ScalarProduct.perplectic(4))
        assert rep.selfadjoint and rep.unitary and rep.normal and not rep.skewadjoint

    def test_j_itself(self):
        rep = classify(jmat(4), ScalarProduct.symplectic(4))
        assert rep.skewadjoint and rep.unitary and rep.normal and not rep.selfadjoint

    def test_jordan_block_is_per_hermitian(self):
        # R J^H R = J for the 2x2 Jordan block: normal, though not diagonalizable
        rep = classify([[1, 1], [0, 1]], ScalarProduct.perplectic(2))
        assert rep.selfadjoint and rep.normal

    def test_not_normal(self):
        rep = classify([[1, 1], [0, 2]], ScalarProduct.perplectic(2))
        assert not rep.normal
        assert rep.residuals["normal"] > 1.0

    def test_report_contents(self, rng):
        rep = classify(crandn(rng, 3, 3), ScalarProduct.perplectic(3), tol=1e-9)
        d = rep.as_dict()
        assert d["norm"] == "frobenius"
        assert set(d["residuals"]) == {"selfadjoint", "skewadjoint", "unitary", "normal"}
        for k in d["residuals"]:
            # the power-iteration estimate never exceeds the Frobenius norm
            assert d["spectral"][k] <= d["residuals"][k] * (1 + 1e-12)

    def test_negative_tol(self):
        with pytest.raises(ValueError):
            classify(np.eye(2), ScalarProduct.perplectic(2), tol=-1)

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            classify([[np.nan, 0], [0, 1]], ScalarProduct.perplectic(2))


class TestPerplecticSum:
    def test_layout(self):
        got = perplectic_sum([[1, 2], [3, 4]], [[9]])
        np.testing.assert_array_equal(got, [[1, 0, 2], [0, 9, 0], [3, 0, 4]])

    def test_identities(self):
        np.testing.assert_array_equal(perplectic_sum(np.eye(2), np.eye(1)), np.eye(3))
        np.testing.assert_array_equal(perplectic_sum(rev(2), rev(1)), rev(3))

    def test_empty_parts(self, rng):
        q = crandn(rng, 3, 3)
        np.testing.assert_array_equal(perplectic_sum(np.zeros((0, 0)), q), q)
        p = crandn(rng, 4, 4)
        np.testing.assert_array_equal(perplectic_sum(p, np.zeros((0, 0))), p)

    def test_odd_left_rejected(self):
        with pytest.raises(ParityError):
            perplectic_sum(np.eye(3), np.eye(1))

    def test_left_associative(self, rng):
        a, b, c = crandn(rng, 2, 2), crandn(rng, 2, 2), crandn(rng, 1, 1)
        got = perplectic_sum_n(a, b, c)
        np.testing.assert_array_equal(got, perplectic_sum(perplectic_sum(a, b), c))
        # outermost block on the corners, innermost in the centre
        assert got[0, 4] == a[0, 1] and got[2, 2] == c[0, 0] and got[1, 3] == b[0, 1]

    def test_split_inverts(self, rng):
        p, q = crandn(rng, 4, 4), crandn(rng, 3, 3)
        p2, q2 = split_perplectic_sum(perplectic_sum(p, q), 2)
        np.testing.assert_array_equal(p2, p)
        np.testing.assert_array_equal(q2, q)

    def test_direct_sum(self):
        np.testing.assert_array_equal(direct_sum([[1]], np.zeros((0, 0)), [[2, 3], [4, 5]]),
                                      [[1, 0, 0], [0, 2, 3], [0, 4, 5]])


class TestUnshuffle:
    def test_l_zero(self):
        np.testing.assert_array_equal(unshuffle_permutation(0, 3), np.eye(3))

    def test_order_three(self):
        perm = unshuffle_permutation(1, 1)
        np.testing.assert_array_equal(perm, np.eye(3)[:, [0, 2, 1]])

    def test_exact_identity(self, rng):
        p, q = crandn(rng, 4, 4), crandn(rng, 3, 3)
        perm = unshuffle_permutation(2, 3)
        got = perm.T @ perplectic_sum(p, q) @ perm
        assert np.array_equal(got, direct_sum(p, q))


def test_module_exports_resolve():
    for name in core.__all__:
        assert hasattr(core, name)
