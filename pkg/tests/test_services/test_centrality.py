import numpy as np
import pytest

from netgood.core.exceptions import NotInterior, SingularSystem, ValidationError
from netgood.models.game import CoalitionPartition, EffortProfile, OutcomeKind
from netgood.services import centrality, equilibrium
from netgood.services.equilibrium import SolveMode
from netgood.services.matrix_analysis import spectral_radius
from tests.conftest import example2, isolated, star, symmetric_pair

HALF = np.array([[0.0, 0.5], [0.5, 0.0]])


def _random_symmetric(rng, n):
    a = rng.uniform(-1.0, 1.0, size=(n, n))
    a = np.triu(a, 1)
    return a + a.T


class TestAlpha:
    def test_zero_alpha_returns_exogenous(self):
        e = np.array([1.0, 2.0])
        assert np.array_equal(centrality.alpha_centrality(HALF, 0.0, e).values, e)

    def test_nash_profile(self):
        result = centrality.alpha_centrality(HALF, -1.0, [1.0, 1.0])
        assert result.values == pytest.approx([2 / 3, 2 / 3])
        assert result.convergence.closed

    def test_singular(self):
        with pytest.raises(SingularSystem):
            centrality.alpha_centrality([[0.0, 1.0], [1.0, 0.0]], -1.0, [1.0, 1.0])

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            centrality.alpha_centrality(HALF, 0.5, [1.0, 1.0, 1.0])


class TestKatz:
    def test_single_term(self):
        result = centrality.katz_centrality(HALF, 0.5, [1.0, 1.0], depth=1)
        assert result.values == pytest.approx([0.25, 0.25])
        assert not result.convergence.closed
        assert result.convergence.depth == 1

    def test_series_matches_closed_form(self):
        series = centrality.katz_centrality(HALF, 0.5, [1.0, 1.0], depth=50)
        closed = centrality.katz_closed_form(HALF, 0.5, [1.0, 1.0])
        assert series.values == pytest.approx([1 / 3, 1 / 3], abs=1e-9)
        assert closed.values == pytest.approx([1 / 3, 1 / 3], abs=1e-12)

    def test_divergent_series_residual(self):
        g = np.array([[0.0, 2.0], [2.0, 0.0]])
        short = centrality.katz_centrality(g, 1.0, [1.0, 1.0], depth=5)
        long = centrality.katz_centrality(g, 1.0, [1.0, 1.0], depth=10)
        assert long.convergence.residual > short.convergence.residual > 1.0

    def test_depth_must_be_positive(self):
        with pytest.raises(ValidationError):
            centrality.katz_centrality(HALF, 0.5, [1.0, 1.0], depth=0)

    def test_resolvent_identity(self, rng):
        for _ in range(50):
            n = int(rng.integers(2, 7))
            g = rng.uniform(-1.0, 1.0, size=(n, n))
            np.fill_diagonal(g, 0.0)
            alpha = 0.8 / spectral_radius(g)
            e = rng.uniform(0.0, 2.0, size=n)
            closed = centrality.katz_closed_form(g, alpha, e).values
            direct = centrality.alpha_centrality(g, alpha, e).values - e
            assert np.max(np.abs(closed - direct)) <= 1e-9

    def test_residual_shrinks_geometrically(self, rng):
        g = rng.uniform(0.0, 1.0, size=(5, 5))
        np.fill_diagonal(g, 0.0)
        alpha = 0.5 / spectral_radius(g)
        residuals = [centrality.katz_centrality(g, alpha, np.ones(5), d).convergence.residual
                     for d in range(20, 40)]
        assert all(b < a for a, b in zip(residuals, residuals[1:]))
        assert residuals[-1] < residuals[0] * 0.5 ** 10


class TestBonacich:
    def test_row_sums_at_zero_alpha(self):
        r = np.array([[0.0, 1.0, 2.0], [0.5, 0.0, 0.0], [0.0, 3.0, 0.0]])
        assert centrality.bonacich_centrality(r, 0.0, 1.0).values == pytest.approx([3.0, 0.5, 3.0])

    def test_symmetric_pair(self):
        assert centrality.bonacich_centrality(HALF, 0.5, 1.0).values == pytest.approx([2 / 3, 2 / 3])

    def test_zero_beta(self):
        assert np.array_equal(centrality.bonacich_centrality(HALF, 0.5, 0.0).values, [0.0, 0.0])

    def test_rejects_diagonal(self):
        with pytest.raises(ValidationError):
            centrality.bonacich_centrality(np.eye(2), 0.5, 1.0)


class TestMeasureIdentity:
    def test_zero_matrix(self):
        assert centrality.verify_measure_identity(np.zeros((3, 3)), 0.5)

    def test_symmetric_pair(self):
        assert centrality.verify_measure_identity(HALF, 0.5, tol=1e-10)

    def test_preconditions(self):
        assert not centrality.verify_measure_identity([[0.0, 1.0], [0.0, 0.0]], 0.5)
        assert not centrality.verify_measure_identity(HALF, 2.5)

    def test_random_symmetric(self, rng):
        for _ in range(50):
            n = int(rng.integers(2, 7))
            a = _random_symmetric(rng, n)
            alpha = 0.9 / spectral_radius(a)
            assert centrality.verify_measure_identity(a, alpha, tol=1e-9)
            residuals = centrality.measure_identity_residuals(a, alpha)
            assert max(residuals.values()) <= 1e-9

    def test_truncated_katz_depth_sixty(self, rng):
        for _ in range(50):
            n = int(rng.integers(2, 7))
            a = _random_symmetric(rng, n)
            # |alpha| rho = 0.5 keeps the depth-60 tail far below 1e-8
            alpha = 0.5 / spectral_radius(a)
            series = centrality.katz_centrality(a, alpha, np.ones(n), 60).values
            closed = centrality.katz_closed_form(a, alpha, np.ones(n)).values
            assert np.max(np.abs(series - closed)) <= 1e-8


class TestWalkSigns:
    def test_alternating_increments(self, rng):
        checked = 0
        while checked < 30:
            n = int(rng.integers(2, 6))
            g = rng.uniform(0.0, 0.4, size=(n, n))
            np.fill_diagonal(g, 0.0)
            if spectral_radius(g) >= 1.0:
                continue
            terms = centrality.alternating_walk_terms(g, np.ones(n), depth=8)
            for k, term in enumerate(terms, start=1):
                if k % 2:
                    assert np.all(term <= 0)
                else:
                    assert np.all(term >= 0)
            checked += 1


class TestCentralityEffort:
    def test_nash_profile(self, substitutes_game):
        profile = equilibrium.solve_nash(substitutes_game).profiles[0]
        assert centrality.centrality_effort_check(substitutes_game, profile, tol=1e-8)

    def test_without_externalities(self):
        game = isolated(3)
        for report in (equilibrium.solve_nash(game), equilibrium.solve_pareto(game),
                       equilibrium.solve_semicoop(game, CoalitionPartition.grand(3))):
            assert centrality.centrality_effort_check(game, report.profiles[0])

    def test_star_social_optimum(self, star_game):
        profile = equilibrium.solve_pareto(star_game).profiles[0]
        assert centrality.centrality_effort_check(star_game, profile, tol=1e-8)

    def test_boundary_profile_rejected(self, multiple_game):
        corner = EffortProfile(np.array([0.0, 1.0]), OutcomeKind.NASH)
        with pytest.raises(NotInterior):
            centrality.centrality_effort_check(multiple_game, corner)

    def test_wrong_profile(self, substitutes_game):
        off = EffortProfile(np.array([0.7, 0.6]), OutcomeKind.NASH)
        with pytest.raises(NotInterior):
            centrality.centrality_effort_check(substitutes_game, off)

    def test_every_interior_profile(self):
        games = [symmetric_pair(0.5), symmetric_pair(2.0), example2(0.2), example2(0.4),
                 star(0.2), star(0.3)]
        checked = 0
        for game in games:
            nash = equilibrium.solve_nash(game, SolveMode.ALL)
            profiles = [p for p, interior in zip(nash.profiles, nash.interiority) if interior]
            profiles += equilibrium.solve_pareto(game).profiles
            for partition in (CoalitionPartition.singletons(game.n),
                              CoalitionPartition(((0,), tuple(range(1, game.n))))):
                profiles += equilibrium.solve_semicoop(game, partition).profiles
            for profile in profiles:
                assert centrality.centrality_effort_check(game, profile, tol=1e-8)
                checked += 1
        assert checked >= 20
