import numpy as np
import pytest
from conftest import haar_unitary, random_hermitian

from pencilrange import linalg
from pencilrange.errors import InvalidInput, NotPositiveDefinite


def char_poly_roots_3x3(H):
    """Independent eigenvalue oracle: roots of the characteristic cubic,
    with coefficients from trace, principal minors and determinant."""
    t = np.trace(H).real
    m = 0.0
    for i in range(3):
        for j in range(i + 1, 3):
            m += (H[i, i] * H[j, j] - H[i, j] * H[j, i]).real
    d = np.linalg.det(H).real
    roots = np.roots([1.0, -t, m, -d])
    return np.sort(roots.real)


class TestHermitianEig:
    def test_diagonal(self):
        ed = linalg.hermitian_eig(np.diag([2.0, -1.0]))
        assert np.allclose(ed.eigenvalues, [-1.0, 2.0])

    def test_2x2_closed_form(self):
        ed = linalg.hermitian_eig(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert np.allclose(ed.eigenvalues, [-1.0, 1.0])

    def test_matches_characteristic_cubic(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            H = random_hermitian(rng, 3)
            ed = linalg.hermitian_eig(H)
            assert np.allclose(ed.eigenvalues, char_poly_roots_3x3(H),
                               atol=1e-8)

    def test_decomposition_invariants(self):
        rng = np.random.default_rng(3)
        for n in (2, 5, 11):
            H = random_hermitian(rng, n)
            ed = linalg.hermitian_eig(H)
            nrm = np.linalg.norm(H)
            assert np.linalg.norm(H @ ed.eigenvectors
                                  - ed.eigenvectors * ed.eigenvalues) <= 1e-10 * nrm
            assert np.linalg.norm(ed.eigenvectors.conj().T @ ed.eigenvectors
                                  - np.eye(n)) <= 1e-10
            assert np.all(np.diff(ed.eigenvalues) >= 0)

    def test_unitary_conjugation_invariance(self):
        rng = np.random.default_rng(11)
        H = random_hermitian(rng, 6)
        U = haar_unitary(rng, 6)
        w1 = linalg.hermitian_eig(H).eigenvalues
        w2 = linalg.hermitian_eig(U @ H @ U.conj().T).eigenvalues
        assert np.allclose(w1, w2, atol=1e-9)

    def test_rejects_nonfinite(self):
        with pytest.raises(InvalidInput):
            linalg.hermitian_eig(np.array([[np.nan, 0], [0, 1.0]]))

    def test_rejects_non_hermitian(self):
        with pytest.raises(InvalidInput):
            linalg.as_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestCartesianSplit:
    def test_shift_matrix(self):
        H, K = linalg.cartesian_split([[0, 0], [2, 0]])
        assert np.allclose(H, [[0, 1], [1, 0]])
        assert np.allclose(K, [[0, 1j], [-1j, 0]])

    def test_hermitian_input(self):
        M = random_hermitian(np.random.default_rng(0), 4)
        H, K = linalg.cartesian_split(M)
        assert np.allclose(H, M)
        assert np.allclose(K, 0)

    def test_skew_input(self):
        M = np.array([[0.0, 1.0], [-1.0, 0.0]])
        H, K = linalg.cartesian_split(M)
        assert np.allclose(H, 0)
        assert np.allclose(K, [[0, -1j], [1j, 0]])

    def test_reassembles(self):
        rng = np.random.default_rng(5)
        M = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        H, K = linalg.cartesian_split(M)
        assert np.allclose(H + 1j * K, M, atol=1e-15 * np.linalg.norm(M))
        assert np.allclose(H, H.conj().T)
        assert np.allclose(K, K.conj().T)


class TestRayleigh:
    def test_symmetric_cancellation(self):
        assert linalg.rayleigh(np.diag([1.0, -1.0]), [1, 1]) == 0

    def test_shift_matrix_family(self):
        M = np.array([[0, 0], [2, 0]], dtype=complex)
        for r, phi in [(0.5, 0.3), (2.0, -1.1), (1.0, 2.5)]:
            x = np.array([r * np.exp(-1j * phi), 1.0])
            expect = 2 * r * np.exp(-1j * phi) / (r * r + 1)
            assert abs(linalg.rayleigh(M, x) - expect) < 1e-12

    def test_identity(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=4) + 1j * rng.normal(size=4)
        assert abs(linalg.rayleigh(np.eye(4), x) - 1.0) < 1e-12

    def test_zero_vector_rejected(self):
        with pytest.raises(InvalidInput):
            linalg.rayleigh(np.eye(2), [0, 0])

    def test_bounded_by_extremes(self):
        rng = np.random.default_rng(13)
        H = random_hermitian(rng, 5)
        lo, hi = linalg.lambda_extremes(H)
        X = rng.normal(size=(10_000, 5)) + 1j * rng.normal(size=(10_000, 5))
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        vals = np.real(np.einsum("ij,jk,ik->i", X.conj(), H, X))
        assert vals.min() >= lo - 1e-12
        assert vals.max() <= hi + 1e-12


class TestInvSqrtPd:
    def test_identity(self):
        assert np.allclose(linalg.inv_sqrt_pd(np.eye(3)), np.eye(3))

    def test_diagonal(self):
        S = linalg.inv_sqrt_pd(np.diag([4.0, 9.0]))
        assert np.allclose(S, np.diag([0.5, 1.0 / 3.0]))

    def test_random_pd_whitens(self):
        rng = np.random.default_rng(21)
        G = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        H = G @ G.conj().T + 0.5 * np.eye(3)
        S = linalg.inv_sqrt_pd(H)
        assert np.linalg.norm(S @ H @ S - np.eye(3)) < 1e-9 * np.linalg.norm(H)
        assert np.linalg.eigvalsh(S)[0] > 0

    def test_rejects_indefinite(self):
        with pytest.raises(NotPositiveDefinite):
            linalg.inv_sqrt_pd(np.diag([1.0, -1.0]))


class TestLambdaExtremes:
    def test_trivial(self):
        assert linalg.lambda_extremes(np.diag([1.0, 2.0])) == (1.0, 2.0)
        assert linalg.lambda_extremes(np.array([[0.0, 1.0], [1.0, 0.0]])) == (-1.0, 1.0)

    def test_consistent_with_eig(self):
        rng = np.random.default_rng(2)
        H = random_hermitian(rng, 7)
        ed = linalg.hermitian_eig(H)
        lo, hi = linalg.lambda_extremes(H)
        assert np.isclose(lo, ed.eigenvalues[0], rtol=1e-13, atol=1e-14)
        assert np.isclose(hi, ed.eigenvalues[-1], rtol=1e-13, atol=1e-14)
