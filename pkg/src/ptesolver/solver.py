"""Equilibrium computation by forward-induction outcome elimination.

Starting from all outcomes, each step looks only at information sets the
game is guaranteed to pass through given what survives, computes there
the payoff each deciding player can force (the maximin over live
actions), and simultaneously discards every surviving outcome paying its
player less than that guarantee. A discarded outcome is impossible: were
it known to be the result, its player would profitably deviate at a cell
that is reached no matter what. The surviving set shrinks until nothing
more can be discarded; with tie-free payoffs the fixpoint is a singleton
or empty, never larger.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .game import (
    Game,
    _canonical_violation,
    action_toward,
    game_has_ties,
    infoset_descendants,
    infoset_successors,
    descendants,
)

UNIQUE = "unique"
EMPTY = "empty"
MULTIPLE_WITH_TIES = "multiple_with_ties"


class NotCanonicalError(ValueError):
    """Raised when a game violates canonical form, naming the cell."""


@dataclass(frozen=True)
class SolverState:
    """Snapshot of one elimination step.

    ``maximins`` maps each reached cell to (guaranteed value, first
    maximizing action in the cell's action order); ``preempted_by`` maps
    each outcome eliminated this step to every (player, cell) witness in
    cell declaration order.
    """

    step: int
    surviving: frozenset[str]
    reached: frozenset[str]
    maximins: Mapping[str, tuple[Fraction, str]]
    preempted: frozenset[str]
    preempted_by: Mapping[str, tuple[tuple[str, str], ...]]


@dataclass(frozen=True)
class SolveResult:
    fixpoint: frozenset[str]
    steps: tuple[SolverState, ...]
    has_ties: bool
    status: str


def reached_infosets(game: Game, surviving: frozenset[str]) -> frozenset[str]:
    """Cells the play is certain to cross: every survivor sits below them."""
    if not surviving:
        raise ValueError("the surviving set must be nonempty")
    return frozenset(
        cell for cell in game.infosets if surviving <= infoset_descendants(game, cell)
    )


def maximin(game: Game, surviving: frozenset[str], cell: str) -> tuple[Fraction, str]:
    """Best guaranteed payoff for the cell's player, over live actions.

    Only actions whose subtrees still intersect the surviving set count;
    each is valued by its worst surviving payoff. Ties between actions
    break toward the cell's action declaration order.
    """
    player = game.cell_player(cell)
    best: tuple[Fraction, str] | None = None
    for action in game.cell_actions(cell):
        live = surviving & frozenset(
            z
            for child in infoset_successors(game, cell, action)
            for z in descendants(game, child)
        )
        if not live:
            continue
        worst = min(game.utility(player, z) for z in live)
        if best is None or worst > best[0]:
            best = (worst, action)
    if best is None:
        raise RuntimeError(f"no action at {cell!r} leads to a surviving outcome")
    return best


def _preemption_detail(
    game: Game,
    surviving: frozenset[str],
    reached: frozenset[str],
    maximins: Mapping[str, tuple[Fraction, str]],
) -> tuple[frozenset[str], dict[str, tuple[tuple[str, str], ...]]]:
    witnesses: dict[str, list[tuple[str, str]]] = {}
    for cell in game.infosets:
        if cell not in reached:
            continue
        player = game.cell_player(cell)
        value, argmax = maximins[cell]
        for z in surviving:
            if game.utility(player, z) < value:
                # The maximizing action cannot be the one leading to z:
                # its subtree minimum is at most u(z), which is below the max.
                assert argmax != action_toward(game, cell, z), (
                    f"preemption witness at {cell!r} coincides with the action toward {z!r}"
                )
                witnesses.setdefault(z, []).append((player, cell))
    ordered = {z: tuple(witnesses[z]) for z in game.outcomes if z in witnesses}
    return frozenset(ordered), ordered


def preempted(game: Game, surviving: frozenset[str], reached: frozenset[str]) -> frozenset[str]:
    """Outcomes paying some player less than a reached-cell guarantee."""
    maximins = {cell: maximin(game, surviving, cell) for cell in game.infosets if cell in reached}
    eliminated, _ = _preemption_detail(game, surviving, reached, maximins)
    return eliminated


def solve(game: Game) -> SolveResult:
    """Run the elimination to its fixpoint, keeping every step.

    Eliminations within a step are simultaneous: the step removes the
    union over all players and reached cells. Terminates after at most
    one step per outcome, since every non-final step removes something.
    """
    violation = _canonical_violation(game)
    if violation is not None:
        cell, ancestor, node = violation
        raise NotCanonicalError(
            f"information set {cell!r} contains node {node!r} and its ancestor {ancestor!r}; "
            "canonicalize the game first"
        )
    has_ties = game_has_ties(game)
    surviving = frozenset(game.outcomes)
    steps: list[SolverState] = []
    step = 0
    while surviving:
        reached = reached_infosets(game, surviving)
        maximins = {
            cell: maximin(game, surviving, cell) for cell in game.infosets if cell in reached
        }
        eliminated, by = _preemption_detail(game, surviving, reached, maximins)
        steps.append(SolverState(step, surviving, reached, maximins, eliminated, by))
        if not eliminated:
            break
        surviving = surviving - eliminated
        step += 1
    if len(surviving) == 1:
        status = UNIQUE
    elif not surviving:
        status = EMPTY
    else:
        status = MULTIPLE_WITH_TIES
    return SolveResult(fixpoint=surviving, steps=tuple(steps), has_ties=has_ties, status=status)
