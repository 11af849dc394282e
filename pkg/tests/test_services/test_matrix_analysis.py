import numpy as np
import pytest

from netgood.core.exceptions import DimensionTooLarge, ValidationError
from netgood.services.matrix_analysis import (
    Existence,
    Uniqueness,
    classify,
    is_l_matrix,
    is_p_matrix,
    is_positive_definite,
    is_s_matrix,
    is_strictly_diagonally_dominant,
    is_z_matrix,
    min_real_eigenvalue,
    spectral_radius,
)


def _random_zero_diag(rng, n, low, high):
    g = rng.uniform(low, high, size=(n, n))
    np.fill_diagonal(g, 0.0)
    return g


class TestMembership:
    @pytest.mark.parametrize("m, expected", [
        (np.eye(2), True),
        ([[1, 0.5], [0.5, 1]], True),
        ([[1, 2], [2, 1]], False),
        (np.zeros((2, 2)), False),
    ])
    def test_p_matrix(self, m, expected):
        assert is_p_matrix(m) is expected

    def test_p_matrix_cap(self):
        with pytest.raises(DimensionTooLarge) as info:
            is_p_matrix(np.eye(5), cap=4)
        assert info.value.n == 5 and info.value.cap == 4

    def test_p_matrix_relative_tolerance(self):
        # scaling every entry does not change the sign pattern of the minors
        m = np.array([[1.0, 0.5], [0.5, 1.0]])
        assert is_p_matrix(1e-6 * m) and is_p_matrix(1e6 * m)

    @pytest.mark.parametrize("m, expected", [
        (np.eye(3), True),
        ([[1, -2], [-2, 1]], True),
        ([[1, 0.5], [0.5, 1]], False),
    ])
    def test_z_matrix(self, m, expected):
        assert is_z_matrix(m) is expected

    @pytest.mark.parametrize("m, expected", [
        (np.eye(2), True),
        ([[0, -1], [-1, 0]], False),
        ([[1, -2], [-2, 1]], True),
    ])
    def test_l_matrix(self, m, expected):
        assert is_l_matrix(m) is expected

    @pytest.mark.parametrize("m, expected", [
        (np.eye(3), True),
        ([[1, -0.5], [-0.5, 1]], True),
        ([[1, -2], [-2, 1]], False),
    ])
    def test_s_matrix(self, m, expected):
        assert is_s_matrix(m) is expected

    @pytest.mark.parametrize("m, expected", [
        (np.eye(2), True),
        ([[1, 0.5], [0.5, 1]], True),
        ([[1, 2], [2, 1]], False),
    ])
    def test_strict_diagonal_dominance(self, m, expected):
        assert is_strictly_diagonally_dominant(m) is expected

    def test_rejects_non_square(self):
        with pytest.raises(ValidationError):
            is_z_matrix(np.ones((2, 3)))

    def test_rejects_non_finite(self):
        with pytest.raises(ValidationError):
            is_p_matrix([[1.0, np.nan], [0.0, 1.0]])


class TestSpectrum:
    @pytest.mark.parametrize("m, expected", [
        ([[0, 0.5], [0.5, 0]], 0.5),
        ([[0, 2], [2, 0]], 2.0),
        (np.zeros((3, 3)), 0.0),
    ])
    def test_spectral_radius(self, m, expected):
        assert spectral_radius(m) == pytest.approx(expected, abs=1e-12)

    def test_spectral_radius_accuracy_floor(self):
        # eigenvalues +-1e-10 on a matrix of unit norm
        m = [[0.0, 1.0], [1e-20, 0.0]]
        assert spectral_radius(m, tol=1e-9) == 0.0
        assert spectral_radius(m, tol=1e-12) == pytest.approx(1e-10, rel=1e-6)

    def test_min_real_eigenvalue(self):
        assert min_real_eigenvalue([[0, 0.5], [0.5, 0]]) == pytest.approx(-0.5)
        assert min_real_eigenvalue([[0, -2], [-2, 0]]) == pytest.approx(-2.0)

    def test_min_real_eigenvalue_absent(self):
        assert min_real_eigenvalue([[0, 1], [-1, 0]]) is None


class TestClassify:
    def test_substitutes(self):
        report = classify(np.array([[0, 0.5], [0.5, 0]]))
        assert report.uniqueness_verdict is Uniqueness.UNIQUE
        assert report.existence_verdict is Existence.ALWAYS
        assert report.is_p and report.is_sdd and report.is_pd
        assert report.min_eigenvalue_uniqueness is True
        assert "p-matrix-uniqueness" in report.citations

    def test_multiple(self):
        report = classify(np.array([[0, 2.0], [2.0, 0]]))
        assert report.uniqueness_verdict is Uniqueness.NOT_UNIQUE
        assert report.existence_verdict is Existence.ALWAYS
        assert report.min_eigenvalue_uniqueness is False

    def test_complements(self):
        report = classify(np.array([[0, -2.0], [-2.0, 0]]))
        assert report.uniqueness_verdict is Uniqueness.NOT_UNIQUE
        assert report.existence_verdict is Existence.IFF_SPECTRAL_RADIUS_LT_ONE
        assert report.existence_holds is False
        assert report.spectral_radius == pytest.approx(2.0)
        assert report.is_z and report.is_l and not report.is_s

    def test_zero_matrix(self):
        report = classify(np.zeros((3, 3)))
        assert report.uniqueness_verdict is Uniqueness.UNIQUE
        assert report.existence_verdict is Existence.ALWAYS

    def test_mixed_signs_without_p(self):
        g = np.array([[0, 2.0], [-2.0, 0]])
        report = classify(g)
        # det(I + G) = 5 > 0 so I + G is still P
        assert report.is_p
        assert report.existence_verdict is Existence.ALWAYS

        g = np.array([[0, 3.0, 0], [0, 0, -3.0], [3.0, 0, 0]])
        report = classify(g)
        assert not report.is_p
        assert report.existence_verdict is Existence.INCONCLUSIVE
        assert report.existence_holds is None

    def test_flag_invariants(self, rng):
        for _ in range(50):
            n = int(rng.integers(2, 6))
            g = _random_zero_diag(rng, n, -1.0, 1.0)
            report = classify(g)
            if report.is_l:
                assert report.is_z
            if report.is_sdd or report.is_pd:
                assert report.is_p
            assert (report.uniqueness_verdict is Uniqueness.UNIQUE) == report.is_p


class TestProperties:
    def test_symmetric_min_eigenvalue_criterion(self, rng):
        checked = 0
        while checked < 200:
            n = int(rng.integers(2, 9))
            g = _random_zero_diag(rng, n, -2.0, 2.0)
            g = np.triu(g) + np.triu(g, 1).T
            lam = min_real_eigenvalue(g)
            if abs(lam + 1.0) < 1e-2:
                continue
            assert is_p_matrix(np.eye(n) + g) == (abs(lam) < 1.0)
            checked += 1

    def test_z_matrix_equivalences(self, rng):
        checked = 0
        while checked < 200:
            n = int(rng.integers(2, 9))
            w = rng.uniform(0.5, 3.5) / (n - 1)
            g = _random_zero_diag(rng, n, -w, 0.0)
            rho = spectral_radius(g)
            if abs(rho - 1.0) < 1e-2:
                continue
            m = np.eye(n) + g
            p = is_p_matrix(m)
            assert p == is_s_matrix(m) == (rho < 1.0)
            assert p == (abs(min_real_eigenvalue(g)) < 1.0)
            assert rho == pytest.approx(abs(min_real_eigenvalue(g)), abs=1e-8)
            checked += 1

    def test_diagonal_dominance_implies_p(self, rng):
        dominant = 0
        for _ in range(300):
            n = int(rng.integers(2, 8))
            g = _random_zero_diag(rng, n, -0.4, 0.4)
            m = np.eye(n) + g
            if is_strictly_diagonally_dominant(m):
                dominant += 1
                assert is_p_matrix(m)
        assert dominant > 0

    def test_dominance_is_not_necessary(self):
        m = np.array([[1.0, 0.9, 0.9], [0.9, 1.0, 0.9], [0.9, 0.9, 1.0]])
        assert not is_strictly_diagonally_dominant(m)
        assert is_p_matrix(m)

    def test_transpose_invariance(self, rng):
        for _ in range(100):
            n = int(rng.integers(2, 6))
            m = np.eye(n) + _random_zero_diag(rng, n, -1.5, 1.5)
            assert is_p_matrix(m) == is_p_matrix(m.T)

    def test_spectral_radius_sign_symmetry(self, rng):
        for _ in range(50):
            g = _random_zero_diag(rng, 5, -1.0, 1.0)
            assert spectral_radius(g) == pytest.approx(spectral_radius(-g), rel=1e-10)

    def test_positive_definite_symmetric_matches_p(self, rng):
        for _ in range(50):
            g = _random_zero_diag(rng, 4, -1.0, 1.0)
            g = (g + g.T) / 2
            m = np.eye(4) + g
            if abs(min_real_eigenvalue(g) + 1.0) > 1e-2:
                assert is_positive_definite(m) == is_p_matrix(m)
