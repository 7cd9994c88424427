"""Contribution game, matrix games, and the matrix file format."""

import numpy as np
import pytest

from anonlearn import (
    CONTRIBUTION_LEVELS,
    ActionDistribution,
    ContributionGame,
    DimensionError,
    MatrixGame,
    builtin_matrix,
    climbing_game,
    contribution_cost,
    contribution_utility,
    load_matrix,
    prisoners_dilemma,
    utility,
)


# ---------------------------------------------------------------------------
# contribution game


@pytest.mark.parametrize(
    "x,cost",
    [(0, 0.0), (1, 1.0), (2, 1.0), (3, 4.0), (5, 16.0), (8, 49.0), (9, 121.0), (19, 401.0)],
)
def test_contribution_cost_table(x, cost):
    assert contribution_cost(x, penalty_n=20) == cost


def test_contribution_cost_penalty_scaling():
    # Penalty enters only above the kink and adds 2*penalty_n.
    assert contribution_cost(9, penalty_n=100) == 81 + 200
    assert contribution_cost(8, penalty_n=100) == contribution_cost(8, penalty_n=0)
    with pytest.raises(ValueError):
        contribution_cost(20)
    with pytest.raises(ValueError):
        contribution_cost(-1)


def test_contribution_utility_values():
    assert contribution_utility(8, 8.0) == 79.0
    assert contribution_utility(5, 5.0) == 34.0
    assert contribution_utility(9, 8.0) == pytest.approx(144.0 - 121.0)
    assert contribution_utility(0, 17.0) == 0.0


def test_contribution_game_expected_payoffs():
    game = ContributionGame()
    assert game.k == CONTRIBUTION_LEVELS == 20
    delta8 = ActionDistribution.point_mass(8, 20)
    uniform = ActionDistribution.uniform(20)
    assert game.mean_contribution(uniform) == pytest.approx(9.5)
    assert game.expected_payoff(8, delta8) == pytest.approx(79.0)
    assert game.expected_payoff(8, uniform) == pytest.approx(103.0)
    assert utility(8, delta8, game) == pytest.approx(79.0)


def test_contribution_payoff_bounds():
    lo, hi = ContributionGame(penalty_n=20).payoff_bounds()
    assert lo == -401.0  # contribute 19 against all-zero
    assert hi == 321.0  # contribute 19 against all-19


def test_contribution_payoff_matrix():
    m = ContributionGame(penalty_n=20).payoff_matrix()
    assert m.shape == (20, 20)
    assert m[8, 8] == 79.0
    assert m[0, 13] == 0.0
    x, y = 11, 4
    assert m[x, y] == 2 * x * y - contribution_cost(x, 20)


@pytest.mark.parametrize("penalty", [0, 5, 20, 100, 200])
def test_equilibrium_is_eight_for_any_penalty(penalty):
    game = ContributionGame(penalty_n=penalty)
    delta8 = ActionDistribution.point_mass(8, 20)
    payoffs = [game.expected_payoff(a, delta8) for a in range(20)]
    assert int(np.argmax(payoffs)) == 8
    assert sorted(payoffs)[-1] > sorted(payoffs)[-2]  # strictly unique


def test_contribution_lipschitz_property():
    game = ContributionGame()
    assert game.lipschitz == 361.0
    rng = np.random.default_rng(3)
    for _ in range(50):
        r1 = ActionDistribution(rng.dirichlet(np.ones(20)))
        r2 = ActionDistribution(rng.dirichlet(np.ones(20)))
        gap = np.abs(r1.weights - r2.weights).sum()
        for a in (0, 8, 19):
            diff = abs(game.expected_payoff(a, r1) - game.expected_payoff(a, r2))
            assert diff <= game.lipschitz * gap + 1e-9


def test_contribution_mode_validation():
    with pytest.raises(ValueError):
        ContributionGame(mode="tournament")
    with pytest.raises(DimensionError):
        ContributionGame().expected_payoff(25, ActionDistribution.uniform(20))
    with pytest.raises(DimensionError):
        ContributionGame().expected_payoff(8, ActionDistribution.uniform(3))


# ---------------------------------------------------------------------------
# matrix games


def test_prisoners_dilemma_values():
    game = prisoners_dilemma()
    np.testing.assert_array_equal(game.payoff_matrix(), [[3, 0], [5, 1]])
    assert game.action_set.label(0) == "C"
    assert game.lipschitz == 5.0


def test_matching_channel_is_partner_lottery():
    game = prisoners_dilemma("matching")
    rho = ActionDistribution([0.5, 0.5])
    ch = game.payoff_channel(1, rho)  # defect: 5 vs C, 1 vs D
    np.testing.assert_array_equal(ch.values, [1.0, 5.0])
    np.testing.assert_allclose(ch.probs, [0.5, 0.5])
    assert ch.mean() == pytest.approx(3.0)
    # drop zero-probability outcomes
    ch0 = game.payoff_channel(0, ActionDistribution.point_mass(1, 2))
    np.testing.assert_array_equal(ch0.values, [0.0])


def test_modes_agree_on_expected_payoff():
    rho = ActionDistribution([0.3, 0.7])
    mf = prisoners_dilemma("meanfield")
    mt = prisoners_dilemma("matching")
    for a in range(2):
        assert mf.expected_payoff(a, rho) == pytest.approx(mt.expected_payoff(a, rho))
        assert mt.payoff_channel(a, rho).mean() == pytest.approx(
            mt.expected_payoff(a, rho)
        )


def test_matching_payoff_set():
    game = prisoners_dilemma("matching")
    assert sorted(game.payoff_set.values) == [0.0, 1.0, 3.0, 5.0]
    assert prisoners_dilemma("meanfield").payoff_set is None


def test_climbing_game():
    game = climbing_game()
    m = game.payoff_matrix()
    assert m.shape == (3, 3)
    assert m[0, 0] == 11.0 and m[0, 1] == -30.0
    # joint action (0,0) is the payoff-dominant point
    assert m.max() == 11.0


def test_matrix_game_validation():
    with pytest.raises(DimensionError):
        MatrixGame([[1, 2, 3], [4, 5, 6]])
    with pytest.raises(ValueError):
        MatrixGame([[np.inf, 0], [0, 1]])
    game = MatrixGame([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        game.matrix[0, 0] = 9.0  # read-only


# ---------------------------------------------------------------------------
# matrix file format


def test_load_matrix_roundtrip(tmp_path):
    path = tmp_path / "m.txt"
    path.write_text("# a comment\n\n1 2.5\n-3 4e1\n")
    np.testing.assert_array_equal(load_matrix(path), [[1.0, 2.5], [-3.0, 40.0]])


def test_load_matrix_errors(tmp_path):
    ragged = tmp_path / "ragged.txt"
    ragged.write_text("1 2\n3\n")
    with pytest.raises(ValueError, match="ragged"):
        load_matrix(ragged)

    rect = tmp_path / "rect.txt"
    rect.write_text("1 2 3\n4 5 6\n")
    with pytest.raises(ValueError, match="square"):
        load_matrix(rect)

    junk = tmp_path / "junk.txt"
    junk.write_text("1 x\n2 3\n")
    with pytest.raises(ValueError, match="junk.txt:1"):
        load_matrix(junk)

    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing here\n")
    with pytest.raises(ValueError, match="no matrix rows"):
        load_matrix(empty)

    with pytest.raises(OSError):
        load_matrix(tmp_path / "missing.txt")


def test_builtin_matrices():
    np.testing.assert_array_equal(builtin_matrix("prisoners_dilemma"), [[3, 0], [5, 1]])
    assert builtin_matrix("climbing").shape == (3, 3)
    with pytest.raises(ValueError):
        builtin_matrix("chicken")
