from __future__ import annotations

from fractions import Fraction

import pytest

from ptesolver import (
    EMPTY,
    MULTIPLE_WITH_TIES,
    UNIQUE,
    Game,
    NotCanonicalError,
    action_toward,
    build_game,
    embed_normal_form,
    maximin,
    preempted,
    reached_infosets,
    solve,
)

from conftest import entangle, random_tree_game

PD_OUTCOMES = frozenset({"C,c", "C,d", "D,c", "D,d"})


def one_outcome_game() -> Game:
    return Game(
        players=("P",),
        actions=(),
        choice_nodes=(),
        outcomes=("end",),
        action_map={},
        player_map={},
        successor_map={},
        utility_map={("P", "end"): Fraction(7)},
        infosets={},
        root="end",
    )


class TestReachedInfosets:
    def test_all_outcomes_reach_the_root_cell(self, pd_game):
        reached = reached_infosets(pd_game, PD_OUTCOMES)
        assert "Row" in reached

    def test_pd_reaches_both_cells_at_step_zero(self, pd_game):
        assert reached_infosets(pd_game, PD_OUTCOMES) == {"Row", "Col"}

    def test_singleton_reaches_every_cell_on_its_path(self, hexa_setup):
        game = build_game(hexa_setup)
        reached = reached_infosets(game, frozenset({"2,_,5,7,10,12"}))
        assert reached == {"a", "c", "d", "e", "f"}

    def test_empty_surviving_set_is_rejected(self, pd_game):
        with pytest.raises(ValueError):
            reached_infosets(pd_game, frozenset())

    def test_partial_survivors_in_hexa_game(self, hexa_setup):
        game = build_game(hexa_setup)
        survivors = frozenset({"1,3,_,8,_,_", "2,_,6,8,_,_"})
        assert reached_infosets(game, survivors) == {"a", "d"}


class TestMaximin:
    def test_pd_step_zero_row(self, pd_game):
        assert maximin(pd_game, PD_OUTCOMES, "Row") == (Fraction(1), "D")

    def test_pd_step_one_row(self, pd_game):
        survivors = frozenset({"C,c", "D,d"})
        assert maximin(pd_game, survivors, "Row") == (Fraction(3), "C")

    def test_single_action_cell(self):
        game = embed_normal_form(
            {("only", "l"): (5, 1), ("only", "r"): (2, 3)},
            ("A", "B"),
            (("only",), ("l", "r")),
        )
        value, action = maximin(game, frozenset(game.outcomes), "A")
        assert (value, action) == (Fraction(2), "only")

    def test_actions_without_survivors_are_skipped(self, pd_game):
        survivors = frozenset({"D,c", "D,d"})
        value, action = maximin(pd_game, survivors, "Row")
        assert (value, action) == (Fraction(1), "D")


class TestPreempted:
    def test_pd_step_zero(self, pd_game):
        reached = reached_infosets(pd_game, PD_OUTCOMES)
        assert preempted(pd_game, PD_OUTCOMES, reached) == {"C,d", "D,c"}

    def test_pd_step_one(self, pd_game):
        survivors = frozenset({"C,c", "D,d"})
        reached = reached_infosets(pd_game, survivors)
        assert preempted(pd_game, survivors, reached) == {"D,d"}

    def test_lone_survivor_is_never_preempted(self, pd_game):
        survivors = frozenset({"D,c"})
        reached = reached_infosets(pd_game, survivors)
        assert preempted(pd_game, survivors, reached) == frozenset()


class TestSolve:
    def test_pd_full_trace(self, pd_game):
        result = solve(pd_game)
        assert result.status == UNIQUE
        assert result.fixpoint == {"C,c"}
        assert len(result.steps) == 3
        assert result.steps[0].preempted == {"C,d", "D,c"}
        assert result.steps[1].preempted == {"D,d"}
        assert result.steps[2].preempted == frozenset()
        assert not result.has_ties

    def test_one_outcome_game(self):
        result = solve(one_outcome_game())
        assert result.status == UNIQUE
        assert result.fixpoint == {"end"}
        assert len(result.steps) == 1

    def test_non_canonical_input_names_the_cell(self):
        for seed in range(50):
            game = entangle(random_tree_game(seed), seed)
            if game.infosets == random_tree_game(seed).infosets:
                continue
            with pytest.raises(NotCanonicalError, match="information set"):
                solve(game)
            return
        pytest.fail("no entangled game produced")

    def test_tied_game_still_runs(self):
        matrix = {("a", "x"): (1, 1), ("a", "y"): (1, 1), ("b", "x"): (1, 1), ("b", "y"): (1, 1)}
        game = embed_normal_form(matrix, ("P", "Q"), (("a", "b"), ("x", "y")))
        result = solve(game)
        assert result.has_ties
        assert result.status == MULTIPLE_WITH_TIES
        assert result.fixpoint == frozenset(game.outcomes)

    def test_empty_fixpoint_keeps_last_nonempty_step(self):
        # Each player prefers a different diagonal outcome once the
        # off-diagonal ones are gone, so the last two die together.
        matrix = {
            ("a", "x"): (4, 3),
            ("a", "y"): (1, 2),
            ("b", "x"): (2, 1),
            ("b", "y"): (3, 4),
        }
        game = embed_normal_form(matrix, ("P", "Q"), (("a", "b"), ("x", "y")))
        result = solve(game)
        assert result.status == EMPTY
        assert result.fixpoint == frozenset()
        last = result.steps[-1]
        assert last.surviving == {"a,x", "b,y"}
        assert last.preempted == {"a,x", "b,y"}

    def test_hexa_game_unique_equilibrium(self, hexa_setup):
        result = solve(build_game(hexa_setup))
        assert result.status == UNIQUE
        assert result.fixpoint == {"2,_,6,7,10,_"}

    def test_monotonicity_and_termination(self):
        for seed in range(120):
            game = random_tree_game(seed)
            result = solve(game)
            assert len(result.steps) <= max(1, len(game.outcomes))
            for earlier, later in zip(result.steps, result.steps[1:]):
                assert later.surviving < earlier.surviving
                assert earlier.reached <= later.reached
                assert later.surviving == earlier.surviving - earlier.preempted
            assert result.steps[-1].preempted == frozenset() or not result.fixpoint

    def test_preemption_witnesses_avoid_own_action(self):
        for seed in range(120):
            game = random_tree_game(seed)
            result = solve(game)
            for state in result.steps:
                for z in state.preempted:
                    for _, cell in state.preempted_by[z]:
                        assert state.maximins[cell][1] != action_toward(game, cell, z)
