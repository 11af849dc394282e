import math

import numpy as np
import pytest

from netgood.core.exceptions import (
    CostOutOfRange,
    DomainError,
    PerceivedCostOutOfRange,
    SingularSystem,
    ValidationError,
)
from netgood.models.game import (
    BenefitFunction,
    CoalitionPartition,
    DependenceMatrix,
    Exponential,
    GameSpec,
    Logarithmic,
    WelfareWeights,
)
from netgood.services import game_model
from netgood.services.lcp import LCPSolution, verify_solution
from tests.conftest import INV_E, example2, isolated, star, symmetric_pair


class TestModels:
    def test_nonzero_diagonal_rejected(self):
        with pytest.raises(ValidationError):
            DependenceMatrix(np.array([[0.1, 0.0], [0.0, 0.0]]))

    def test_edges_round_trip(self):
        dep = DependenceMatrix.from_edges(3, [(0, 2, 0.4), (1, 0, -0.3)])
        assert dep.edges() == [(0, 2, 0.4), (1, 0, -0.3)]
        assert DependenceMatrix.from_edges(3, dep.edges()) == dep

    def test_self_loop_rejected(self):
        with pytest.raises(ValidationError):
            DependenceMatrix.zeros(2).with_weight(1, 1, 0.5)

    def test_costs_must_be_positive(self):
        with pytest.raises(ValidationError):
            GameSpec.uniform(np.zeros((2, 2)), Exponential(), 0.0)

    def test_partition_validation(self):
        with pytest.raises(ValidationError):
            CoalitionPartition(((0, 1), (1, 2))).validate(3)
        with pytest.raises(ValidationError):
            CoalitionPartition(((0,),)).validate(2)
        assert CoalitionPartition.grand(3).labels(3).tolist() == [0, 0, 0]

    def test_weights_positive(self):
        with pytest.raises(ValidationError):
            WelfareWeights(np.array([1.0, 0.0]))

    def test_unknown_family(self):
        with pytest.raises(ValidationError):
            BenefitFunction.from_spec("quadratic", {})

    @pytest.mark.parametrize("family, params", [
        ("logarithmic", {"saturation": 5.0}),
        ("exponential", {"a": 2.0}),
        ("exponential", {"saturaton": 2.0}),
    ])
    def test_foreign_parameter_rejected(self, family, params):
        with pytest.raises(ValidationError):
            BenefitFunction.from_spec(family, params)


class TestBenefits:
    @pytest.mark.parametrize("benefit", [Exponential(1.0), Exponential(2.5),
                                         Logarithmic(1.0), Logarithmic(3.0)])
    def test_derivative_contract(self, benefit, rng):
        for y in rng.uniform(0.0, 5.0, size=25):
            h = 1e-5
            fd = (benefit.value(y + h) - benefit.value(y - h)) / (2 * h)
            assert fd == pytest.approx(benefit.derivative(y), rel=1e-6)
            assert benefit.inverse_derivative(benefit.derivative(y)) == pytest.approx(y, abs=1e-9)

    def test_logarithmic_domain(self):
        with pytest.raises(DomainError):
            Logarithmic(1.0).value(-1.5)

    def test_exponential_negative_aggregate(self):
        assert Exponential(1.0).value(-1.0) == pytest.approx(1 - math.e)

    def test_inverse_outside_range(self):
        with pytest.raises(DomainError):
            Exponential(1.0).inverse_derivative(0.0)


class TestPayoffs:
    def test_utility_at_equilibrium(self, substitutes_game):
        x = [2 / 3, 2 / 3]
        expected = 1 - INV_E - (2 / 3) * INV_E
        assert game_model.utility(substitutes_game, x, 0) == pytest.approx(expected)
        assert game_model.utility(substitutes_game, x, 1) == pytest.approx(expected)

    def test_utility_zero_profile(self, substitutes_game):
        assert game_model.utility(substitutes_game, [0.0, 0.0], 0) == 0.0

    def test_single_agent(self):
        game = isolated(1)
        assert game_model.utility(game, [1.0], 0) == pytest.approx(1 - 2 / math.e)

    def test_utility_rejects_negative_effort(self, substitutes_game):
        with pytest.raises(ValidationError):
            game_model.utility(substitutes_game, [-0.1, 0.0], 0)

    def test_social_welfare(self, substitutes_game):
        x = [2 / 3, 2 / 3]
        total = game_model.social_welfare(substitutes_game, x)
        assert total == pytest.approx(2 * game_model.utility(substitutes_game, x, 0))


class TestTargets:
    def test_standalone_target(self):
        assert game_model.standalone_target(isolated(1))[0] == pytest.approx(1.0)
        assert game_model.standalone_target(isolated(1, cost=1.0))[0] == pytest.approx(0.0)
        game = GameSpec.uniform(np.zeros((1, 1)), Logarithmic(2.0), 1.0)
        assert game_model.standalone_target(game)[0] == pytest.approx(1.0)

    def test_best_response(self, substitutes_game, multiple_game):
        assert game_model.best_response(substitutes_game, 0, [0.0, 2 / 3]) == pytest.approx(2 / 3)
        assert game_model.best_response(substitutes_game, 0, [0.0, 0.0]) == pytest.approx(1.0)
        assert game_model.best_response(multiple_game, 0, [0.0, 1.0]) == 0.0

    def test_nash_lcp(self, substitutes_game, complements_game):
        inst = game_model.nash_lcp(substitutes_game)
        assert np.allclose(inst.m, [[1, 0.5], [0.5, 1]])
        assert np.allclose(inst.q, [-1, -1])
        inst = game_model.nash_lcp(complements_game)
        assert np.allclose(inst.m, [[1, -2], [-2, 1]])

    def test_fixed_point_characterization(self, multiple_game):
        inst = game_model.nash_lcp(multiple_game)
        for x in ([0.0, 1.0], [1.0, 0.0], [1 / 3, 1 / 3]):
            sol = LCPSolution.from_x(inst, np.array(x), 1e-9)
            assert verify_solution(inst, sol)
            for i in range(2):
                assert game_model.best_response(multiple_game, i, x) == pytest.approx(x[i])
        assert game_model.best_response(multiple_game, 0, [1.0, 1.0]) != 1.0

    @pytest.mark.parametrize("g_in, expected", [
        (0.2, [0.1672, 0.3344, 0.3344, 0.3344]),
        (0.3, [0.04486, 0.3589, 0.3589, 0.3589]),
    ])
    def test_star_perceived_costs(self, g_in, expected):
        costs = game_model.perceived_costs(star(g_in))
        assert costs == pytest.approx(expected, abs=1e-3)

    def test_perceived_costs_without_externalities(self):
        game = isolated(3)
        assert np.array_equal(game_model.perceived_costs(game, [1.0, 2.0, 3.0]), game.costs)

    def test_perceived_costs_singular(self):
        game = symmetric_pair(1.0)
        with pytest.raises(SingularSystem):
            game_model.perceived_costs(game)

    def test_pareto_target(self, substitutes_game, star_game):
        assert game_model.pareto_target(substitutes_game) == pytest.approx(
            [1 + math.log(1.5)] * 2)
        assert game_model.pareto_target(star_game)[0] == pytest.approx(
            -math.log(0.1672), abs=1e-2)
        assert np.allclose(game_model.pareto_target(isolated(3), [1.0, 5.0, 2.0]), 1.0)

    def test_pareto_target_out_of_range(self):
        # strong substitution pushes a perceived cost below zero
        game = star(0.5, g_out=0.9)
        with pytest.raises(PerceivedCostOutOfRange) as info:
            game_model.pareto_target(game)
        assert info.value.agents

    def test_costs_above_unit_marginal(self):
        # c > b'(0) puts the standalone target below zero
        game = GameSpec.uniform(np.zeros((2, 2)), Exponential(), math.e)
        assert game_model.standalone_target(game) == pytest.approx([-1.0, -1.0])
        assert game_model.best_response(game, 0, [0.0, 0.0]) == 0.0

    def test_out_of_range_carries_agents(self):
        exc = PerceivedCostOutOfRange("perceived cost", agents=[2], values=[-0.1])
        assert isinstance(exc, CostOutOfRange)
        assert exc.agents == [2] and exc.values == [-0.1]

    def test_lambda_scaling_invariance(self, star_game, rng):
        lam = rng.uniform(0.5, 2.0, size=4)
        base = game_model.perceived_costs(star_game, lam)
        assert game_model.perceived_costs(star_game, 7.5 * lam) == pytest.approx(base, rel=1e-12)


class TestCoalitions:
    def test_modified_matrix(self, star_game):
        g = star_game.dependence
        assert game_model.coalition_modified_matrix(g, CoalitionPartition.grand(4)) == g
        singles = game_model.coalition_modified_matrix(g, CoalitionPartition.singletons(4))
        assert np.array_equal(singles.g, np.zeros((4, 4)))
        split = game_model.coalition_modified_matrix(g, CoalitionPartition(((0,), (1, 2, 3))))
        assert np.array_equal(split.g, np.zeros((4, 4)))

    def test_modified_matrix_keeps_intra_edges(self):
        game = example2(0.2)
        g_c = game_model.coalition_modified_matrix(game.dependence,
                                                   CoalitionPartition(((0, 1), (2,))))
        assert g_c.g[0, 1] == 0.2 and g_c.g[1, 0] == 0.2 and g_c.g[0, 2] == 0.0

    def test_degenerate_partitions(self, star_game):
        qbar = game_model.standalone_target(star_game)
        singles = game_model.semicoop_target(star_game, CoalitionPartition.singletons(4))
        assert np.array_equal(singles, qbar)
        grand = game_model.semicoop_target(star_game, CoalitionPartition.grand(4))
        assert np.array_equal(grand, game_model.pareto_target(star_game))
        split = game_model.semicoop_target(star_game, CoalitionPartition(((0,), (1, 2, 3))))
        assert np.array_equal(split, qbar)


class TestFirstOrderResidual:
    def test_zero_without_externalities(self):
        game = isolated(3)
        qbar = game_model.standalone_target(game)
        assert np.allclose(game_model.pareto_foc_residual(game, [1.0, 2.0, 0.5], qbar), 0.0)

    def test_underprovision_at_zero(self, substitutes_game):
        residual = game_model.pareto_foc_residual(substitutes_game, None, [0.0, 0.0])
        assert residual == pytest.approx([1.5 - INV_E] * 2)

    def test_star_social_optimum(self, star_game):
        target = game_model.pareto_target(star_game)
        x = game_model.interior_profile(star_game, target)
        assert np.max(np.abs(game_model.pareto_foc_residual(star_game, None, x))) < 1e-6
