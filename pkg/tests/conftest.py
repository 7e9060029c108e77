from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

import pytest

from ptesolver import (
    DecisionPoint,
    Game,
    GeneratorParams,
    SpacetimeSetup,
    embed_normal_form,
    parse_setup,
    random_game,
)

FIXTURES = Path(__file__).parent / "fixtures"

PD_MATRIX = {
    ("C", "c"): (3, 3),
    ("C", "d"): (0, 5),
    ("D", "c"): (5, 0),
    ("D", "d"): (1, 1),
}
PD_PLAYERS = ("Row", "Col")
PD_ACTIONS = (("C", "D"), ("c", "d"))


@pytest.fixture
def pd_game() -> Game:
    return embed_normal_form(PD_MATRIX, PD_PLAYERS, PD_ACTIONS)


@pytest.fixture(scope="session")
def hexa_setup() -> SpacetimeSetup:
    """The six-point example setup, loaded from the committed fixture."""
    return parse_setup((FIXTURES / "spacetime_example.json").read_text())


@pytest.fixture(scope="session")
def chain_setup(hexa_setup: SpacetimeSetup) -> SpacetimeSetup:
    """Same points and triangle, but each agent's points on a timelike chain."""
    chain_coords = {
        "a": (Fraction(0), Fraction(0)),
        "b": (Fraction(0), Fraction(1)),
        "c": (Fraction(0), Fraction(2)),
        "d": (Fraction(100), Fraction(3)),
        "e": (Fraction(100), Fraction(4)),
        "f": (Fraction(50), Fraction(200)),
    }
    points = tuple(
        DecisionPoint(p.id, p.agent, chain_coords[p.id], p.actions) for p in hexa_setup.points
    )
    return SpacetimeSetup(
        dimension=2,
        agents=hexa_setup.agents,
        actions=hexa_setup.actions,
        points=points,
        contingency=hexa_setup.contingency,
        utilities=hexa_setup.utilities,
    )


def mary_recall_game() -> Game:
    """One player picks 5 or 6, then picks 13 or 14 having forgotten which."""
    return Game(
        players=("Mary",),
        actions=("5", "6", "13", "14"),
        choice_nodes=("m0", "m1", "m2"),
        outcomes=("z1", "z2", "z3", "z4"),
        action_map={"m0": ("5", "6"), "m1": ("13", "14"), "m2": ("13", "14")},
        player_map={"m0": "Mary", "m1": "Mary", "m2": "Mary"},
        successor_map={
            ("m0", "5"): "m1",
            ("m0", "6"): "m2",
            ("m1", "13"): "z1",
            ("m1", "14"): "z2",
            ("m2", "13"): "z3",
            ("m2", "14"): "z4",
        },
        utility_map={("Mary", z): Fraction(i + 1) for i, z in enumerate(("z1", "z2", "z3", "z4"))},
        infosets={"first": ("m0",), "later": ("m1", "m2")},
        root="m0",
    )


def entangle(game: Game, seed: int) -> Game:
    """Merge a node into a same-player, same-action ancestor's cell.

    The result is still a valid game but is no longer canonical (and no
    longer has perfect recall) whenever a merge was possible.
    """
    rng = random.Random(seed)
    parents = {child: node for (node, _), child in game.successor_map.items()}

    def ancestors(node: str) -> list[str]:
        chain = []
        current = node
        while current in parents:
            current = parents[current]
            chain.append(current)
        return chain

    cell_of = {n: label for label, members in game.infosets.items() for n in members}
    candidates = []
    for node in game.choice_nodes:
        for ancestor in ancestors(node):
            if ancestor not in game.player_map:
                continue
            if (
                game.player_map[ancestor] == game.player_map[node]
                and game.action_map[ancestor] == game.action_map[node]
                and cell_of[ancestor] != cell_of[node]
            ):
                candidates.append((ancestor, node))
    if not candidates:
        return game
    ancestor, node = rng.choice(candidates)
    target_cell = cell_of[ancestor]
    infosets: dict[str, tuple[str, ...]] = {}
    for label, members in game.infosets.items():
        if label == target_cell:
            infosets[label] = members + (node,)
        else:
            remaining = tuple(n for n in members if n != node)
            if remaining:
                infosets[label] = remaining
    return Game(
        players=game.players,
        actions=game.actions,
        choice_nodes=game.choice_nodes,
        outcomes=game.outcomes,
        action_map=game.action_map,
        player_map=game.player_map,
        successor_map=game.successor_map,
        utility_map=game.utility_map,
        infosets=infosets,
        root=game.root,
    )


def random_tree_game(seed: int, **overrides) -> Game:
    params = dict(seed=seed, shape="general_imperfect", max_players=3, max_depth=4)
    params.update(overrides)
    return random_game(GeneratorParams(**params))


def follow_profile(game: Game, profile: dict[str, str]) -> str:
    """Outcome reached from the root under one action per cell."""
    cell_of = {n: label for label, members in game.infosets.items() for n in members}
    current = game.root
    while current in game.player_map:
        current = game.successor_map[(current, profile[cell_of[current]])]
    return current


def all_profiles(game: Game):
    """Every pure strategy profile, as {cell: action} dicts."""
    labels = list(game.infosets)
    choices = [game.action_map[game.infosets[label][0]] for label in labels]

    def rec(i: int, acc: dict[str, str]):
        if i == len(labels):
            yield dict(acc)
            return
        for action in choices[i]:
            acc[labels[i]] = action
            yield from rec(i + 1, acc)

    yield from rec(0, {})
