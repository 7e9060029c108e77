from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest

from ptesolver import (
    EMPTY,
    GeneratorParams,
    build_game,
    embed_normal_form,
    game_has_ties,
    naive_solve,
    normal_form_maximin,
    pareto_frontier,
    random_game,
    random_matrix,
    search_empty_pte,
    solve,
    validate_game,
)

from conftest import PD_ACTIONS, PD_MATRIX, PD_PLAYERS


class TestParetoFrontier:
    def test_pd(self, pd_game):
        assert pareto_frontier(pd_game) == {"C,c", "C,d", "D,c"}

    def test_single_outcome(self):
        game = embed_normal_form({("x",): (1,)}, ("A",), (("x",),))
        assert pareto_frontier(game) == {"x"}

    def test_all_payoffs_equal(self):
        matrix = {(a, b): (1, 1) for a in ("x", "y") for b in ("u", "v")}
        game = embed_normal_form(matrix, ("A", "B"), (("x", "y"), ("u", "v")))
        assert pareto_frontier(game) == frozenset(game.outcomes)


class TestNormalFormMaximin:
    def test_pd_row(self):
        assert normal_form_maximin(PD_MATRIX, PD_PLAYERS, PD_ACTIONS, "Row") == 1
        assert normal_form_maximin(PD_MATRIX, PD_PLAYERS, PD_ACTIONS, "Col") == 1

    def test_single_player_takes_the_max(self):
        matrix = {("a",): (2,), ("b",): (9,), ("c",): (4,)}
        assert normal_form_maximin(matrix, ("A",), (("a", "b", "c"),), "A") == 9

    def test_constant_matrix(self):
        matrix = {(a, b): (5, 5) for a in ("x", "y") for b in ("u", "v")}
        assert normal_form_maximin(matrix, ("A", "B"), (("x", "y"), ("u", "v")), "A") == 5


class TestNaiveSolve:
    def test_pd_identical_trace(self, pd_game):
        assert naive_solve(pd_game) == solve(pd_game)

    def test_hexa_game(self, hexa_setup):
        game = build_game(hexa_setup)
        assert naive_solve(game) == solve(game)

    def test_five_hundred_random_games(self):
        shapes = ("normal_form", "perfect_info", "general_imperfect", "spacetime")
        for seed in range(500):
            params = GeneratorParams(seed=seed, shape=shapes[seed % 4], max_outcomes=20)
            game = random_game(params)
            assert naive_solve(game) == solve(game), (seed, params.shape)

    def test_agrees_on_tied_games_too(self):
        for seed in range(100):
            game = random_game(GeneratorParams(seed=seed, no_ties=False, max_outcomes=12))
            assert naive_solve(game) == solve(game)


class TestRandomGame:
    def test_deterministic_per_seed(self):
        for shape in ("normal_form", "perfect_info", "general_imperfect", "spacetime"):
            params = GeneratorParams(seed=42, shape=shape)
            assert random_game(params) == random_game(params)

    def test_normal_form_structure(self):
        for seed in range(40):
            game = random_game(GeneratorParams(seed=seed, shape="normal_form", max_players=3))
            assert validate_game(game).errors == ()
            assert len(game.infosets) == len(game.players)
            sizes = 1
            for player in game.players:
                cell = game.infosets[player]
                assert len(cell) == sizes
                sizes *= len(game.action_map[cell[0]])
            assert len(game.outcomes) == sizes

    def test_perfect_info_cells_are_singletons(self):
        for seed in range(40):
            game = random_game(GeneratorParams(seed=seed, shape="perfect_info"))
            assert all(len(members) == 1 for members in game.infosets.values())

    def test_no_ties_is_honored(self):
        for seed in range(60):
            game = random_game(GeneratorParams(seed=seed, no_ties=True))
            assert not game_has_ties(game)

    def test_outcome_budget_respected(self):
        for seed in range(60):
            game = random_game(GeneratorParams(seed=seed, max_outcomes=9))
            assert 1 <= len(game.outcomes) <= 9

    def test_bad_params(self):
        with pytest.raises(ValueError):
            random_game(GeneratorParams(seed=1, max_actions=0))
        with pytest.raises(ValueError):
            random_game(GeneratorParams(seed=1, shape="mystery"))


class TestSearchEmptyPte:
    def test_witness_exists_in_two_by_two(self):
        witness = search_empty_pte(2, 2)
        assert witness is not None
        assert not game_has_ties(witness)
        assert solve(witness).status == EMPTY
        assert naive_solve(witness).status == EMPTY

    def test_witness_is_reproducible(self):
        first = search_empty_pte(2, 2)
        second = search_empty_pte(2, 2)
        assert first == second

    def test_symmetric_pd_orderings_have_no_witness(self):
        def symmetric_pd(matrix) -> bool:
            rows = sorted({r for r, _ in matrix})
            cols = sorted({c for _, c in matrix})
            if len(rows) != 2 or len(cols) != 2:
                return False
            symmetric = all(
                matrix[(rows[i], cols[j])][0] == matrix[(rows[j], cols[i])][1]
                for i in range(2)
                for j in range(2)
            )
            if not symmetric:
                return False
            for coop, defect in ((0, 1), (1, 0)):
                reward = matrix[(rows[coop], cols[coop])][0]
                sucker = matrix[(rows[coop], cols[defect])][0]
                temptation = matrix[(rows[defect], cols[coop])][0]
                punishment = matrix[(rows[defect], cols[defect])][0]
                if temptation > reward > punishment > sucker:
                    return True
            return False

        assert search_empty_pte(2, 2, accept=symmetric_pd) is None

    def test_one_by_one_space_is_empty(self):
        assert search_empty_pte(1, 1) is None
