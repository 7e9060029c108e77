"""Extensive-form games with imperfect information.

A game is a finite tree of choice nodes and outcomes. Each choice node
belongs to exactly one information-set cell; all nodes in a cell share a
player and an action set, and a pure strategy picks one action per cell.
Payoffs are exact rationals with ordinal meaning: the solver only ever
compares them, and ties are detected by exact equality.

Everything here is a pure function over an immutable :class:`Game`;
nothing mutates a game after construction, so games can be shared freely
across concurrent solver runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exact import parse_exact


@dataclass(frozen=True)
class Game:
    """The game tuple: players, actions, tree structure, payoffs, cells.

    ``successor_map`` is defined exactly on ``(node, a)`` pairs with
    ``a in action_map[node]`` and must be injective (each node or outcome
    has at most one parent edge). ``infosets`` maps a cell label to the
    member nodes, in declaration order; the cells partition the choice
    nodes. ``root`` may be an outcome, in which case the game has no
    decisions at all.

    Tuples and dict insertion orders follow declaration order in the
    source document; all iteration in this package relies on that for
    deterministic output.
    """

    players: tuple[str, ...]
    actions: tuple[str, ...]
    choice_nodes: tuple[str, ...]
    outcomes: tuple[str, ...]
    action_map: Mapping[str, tuple[str, ...]]
    player_map: Mapping[str, str]
    successor_map: Mapping[tuple[str, str], str]
    utility_map: Mapping[tuple[str, str], Fraction]
    infosets: Mapping[str, tuple[str, ...]]
    root: str

    def is_outcome(self, element: str) -> bool:
        return element in self.outcomes

    def utility(self, player: str, outcome: str) -> Fraction:
        return self.utility_map[(player, outcome)]

    def cell_of(self, node: str) -> str:
        """Label of the information-set cell containing ``node``."""
        for label, members in self.infosets.items():
            if node in members:
                return label
        raise KeyError(f"node {node!r} is not in any information set")

    def cell_player(self, cell: str) -> str:
        members = self.infosets[cell]
        return self.player_map[members[0]]

    def cell_actions(self, cell: str) -> tuple[str, ...]:
        """Common action set of a cell, in the first member's order."""
        members = self.infosets[cell]
        return self.action_map[members[0]]


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str
    ids: tuple[str, ...] = ()


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[ValidationIssue, ...]
    warnings: tuple[ValidationIssue, ...]
    is_canonical: bool
    has_perfect_recall: bool
    has_ties: bool

    @property
    def ok(self) -> bool:
        return not self.errors


def _elements(game: Game) -> set[str]:
    return set(game.choice_nodes) | set(game.outcomes)


def _children(game: Game, element: str) -> list[str]:
    if element not in game.player_map:
        return []
    return [
        game.successor_map[(element, a)]
        for a in game.action_map.get(element, ())
        if (element, a) in game.successor_map
    ]


def _parent_index(game: Game) -> dict[str, tuple[str, str]]:
    """child -> (parent node, action). Assumes a structurally valid game."""
    parents: dict[str, tuple[str, str]] = {}
    for (node, action), child in game.successor_map.items():
        parents[child] = (node, action)
    return parents


def _root_path(parents: Mapping[str, tuple[str, str]], element: str) -> list[tuple[str, str]]:
    """(node, action) pairs from the root down to ``element``, exclusive."""
    path: list[tuple[str, str]] = []
    current = element
    while current in parents:
        node, action = parents[current]
        path.append((node, action))
        current = node
    path.reverse()
    return path


def descendants(game: Game, start: str) -> frozenset[str]:
    """All nodes and outcomes in the subtree rooted at ``start``, itself included."""
    if start not in _elements(game):
        raise KeyError(f"unknown node or outcome: {start!r}")
    seen: set[str] = set()
    stack = [start]
    while stack:
        element = stack.pop()
        if element in seen:
            continue
        seen.add(element)
        stack.extend(_children(game, element))
    return frozenset(seen)


def infoset_descendants(game: Game, cell: str) -> frozenset[str]:
    """Union of the member subtrees of an information-set cell."""
    result: set[str] = set()
    for node in game.infosets[cell]:
        result |= descendants(game, node)
    return frozenset(result)


def successor(game: Game, node: str, action: str) -> str:
    """The child reached by taking ``action`` at ``node``."""
    if node not in game.player_map:
        raise KeyError(f"unknown choice node: {node!r}")
    if action not in game.action_map[node]:
        raise ValueError(f"action {action!r} is not available at node {node!r}")
    return game.successor_map[(node, action)]


def infoset_successors(game: Game, cell: str, action: str) -> frozenset[str]:
    """Children of every member of ``cell`` under one shared action."""
    members = game.infosets[cell]
    if action not in game.cell_actions(cell):
        raise ValueError(f"action {action!r} is not available at information set {cell!r}")
    return frozenset(successor(game, node, action) for node in members)


def action_toward(game: Game, source: str, target: str) -> str:
    """The action at ``source`` whose subtree contains ``target``.

    ``source`` may be a choice node or a cell label. For a cell the game
    must be canonical, so that at most one member is a strict ancestor of
    ``target``; the action is then taken at that member.
    """
    if source in game.player_map:
        for action in game.action_map[source]:
            if target in descendants(game, game.successor_map[(source, action)]):
                return action
        raise ValueError(f"{target!r} is not a strict descendant of node {source!r}")
    if source in game.infosets:
        for member in game.infosets[source]:
            if target != member and target in descendants(game, member):
                return action_toward(game, member, target)
        raise ValueError(f"no member of information set {source!r} is an ancestor of {target!r}")
    raise KeyError(f"unknown node or information set: {source!r}")


def _structural_issues(game: Game) -> list[ValidationIssue]:
    issues: list[ValidationIssue] = []

    def err(code: str, message: str, ids: Iterable[str] = ()) -> None:
        issues.append(ValidationIssue(code, message, tuple(ids)))

    node_set = set(game.choice_nodes)
    outcome_set = set(game.outcomes)
    if len(node_set) != len(game.choice_nodes) or len(outcome_set) != len(game.outcomes):
        err("DUPLICATE_ID", "duplicate node or outcome identifier")
    overlap = node_set & outcome_set
    if overlap:
        err("DUPLICATE_ID", "identifier used for both a node and an outcome", sorted(overlap))
    elements = node_set | outcome_set
    player_set = set(game.players)
    action_set = set(game.actions)

    if game.root not in elements:
        err("UNKNOWN_ROOT", f"root {game.root!r} is not a declared node or outcome", [game.root])

    for node in game.choice_nodes:
        if node not in game.action_map:
            err("MISSING_ACTIONS", f"node {node!r} has no action set", [node])
        if node not in game.player_map:
            err("MISSING_PLAYER", f"node {node!r} has no player", [node])
        elif game.player_map[node] not in player_set:
            err("UNKNOWN_PLAYER", f"node {node!r} names unknown player {game.player_map[node]!r}", [node])
    for node, available in game.action_map.items():
        if node not in node_set:
            err("UNKNOWN_NODE", f"action set declared for unknown node {node!r}", [node])
            continue
        for action in available:
            if action not in action_set:
                err("UNKNOWN_ACTION", f"node {node!r} offers undeclared action {action!r}", [node, action])
        if len(set(available)) != len(available):
            err("DUPLICATE_ACTION", f"node {node!r} lists an action twice", [node])

    seen_children: dict[str, tuple[str, str]] = {}
    for (node, action), child in game.successor_map.items():
        if node not in node_set:
            err("UNKNOWN_NODE", f"successor declared at unknown node {node!r}", [node])
            continue
        if action not in game.action_map.get(node, ()):
            err("MOVE_NOT_AVAILABLE", f"successor at {node!r} uses unavailable action {action!r}", [node, action])
        if child not in elements:
            err("UNKNOWN_TARGET", f"successor of ({node!r}, {action!r}) is unknown: {child!r}", [node, action, child])
            continue
        if child in seen_children:
            other = seen_children[child]
            err(
                "DUPLICATE_SUCCESSOR",
                f"{child!r} is the successor of both {other!r} and {(node, action)!r}",
                [child],
            )
        else:
            seen_children[child] = (node, action)
    for node in game.choice_nodes:
        for action in game.action_map.get(node, ()):
            if (node, action) not in game.successor_map:
                err("MISSING_SUCCESSOR", f"no successor for action {action!r} at node {node!r}", [node, action])

    # Single root, single connected component.
    if not issues:
        with_parent = set(seen_children)
        parentless = elements - with_parent
        if parentless != {game.root}:
            err(
                "FOREST",
                "the tree must have exactly one root, the declared one",
                sorted(parentless.symmetric_difference({game.root})),
            )
        else:
            reachable: set[str] = set()
            stack = [game.root]
            while stack:
                element = stack.pop()
                if element in reachable:
                    continue
                reachable.add(element)
                stack.extend(_children(game, element))
            unreachable = elements - reachable
            if unreachable:
                err("FOREST", "nodes or outcomes unreachable from the root", sorted(unreachable))

    # Information partition.
    assigned: dict[str, str] = {}
    for label, members in game.infosets.items():
        if not members:
            continue
        for node in members:
            if node not in node_set:
                err("UNKNOWN_NODE", f"information set {label!r} lists unknown node {node!r}", [label, node])
                continue
            if node in assigned:
                err("PARTITION_OVERLAP", f"node {node!r} is in cells {assigned[node]!r} and {label!r}", [node])
            assigned[node] = label
        known = [n for n in members if n in node_set]
        if not known:
            continue
        cell_players = {game.player_map[n] for n in known if n in game.player_map}
        if len(cell_players) > 1:
            err("INFOSET_PLAYER_MIX", f"information set {label!r} mixes players", [label])
        action_sets = {frozenset(game.action_map[n]) for n in known if n in game.action_map}
        if len(action_sets) > 1:
            err("INFOSET_ACTION_MIX", f"information set {label!r} mixes action sets", [label])
    for node in game.choice_nodes:
        if node not in assigned:
            err("PARTITION_MISSING", f"node {node!r} is in no information set", [node])

    for player in game.players:
        for outcome in game.outcomes:
            if (player, outcome) not in game.utility_map:
                err("MISSING_UTILITY", f"no payoff for player {player!r} at outcome {outcome!r}", [player, outcome])
    for player, outcome in game.utility_map:
        if player not in player_set or outcome not in outcome_set:
            err("UNKNOWN_UTILITY_KEY", f"payoff declared for unknown ({player!r}, {outcome!r})", [player, outcome])

    return issues


def game_has_ties(game: Game) -> bool:
    """True iff some player gets the same payoff at two distinct outcomes."""
    for player in game.players:
        seen: set[Fraction] = set()
        for outcome in game.outcomes:
            value = game.utility_map.get((player, outcome))
            if value is None:
                continue
            if value in seen:
                return True
            seen.add(value)
    return False


def _canonical_violation(game: Game) -> tuple[str, str, str] | None:
    """First (cell, ancestor, descendant) with both ends in one cell, preorder."""
    cell_by_node: dict[str, str] = {}
    for label, members in game.infosets.items():
        for node in members:
            cell_by_node[node] = label
    order: list[str] = []
    stack = [game.root]
    while stack:
        element = stack.pop()
        if element in game.player_map:
            order.append(element)
            stack.extend(reversed(_children(game, element)))
    for node in order:
        cell = cell_by_node[node]
        below = descendants(game, node)
        for other in game.infosets[cell]:
            if other != node and other in below:
                return cell, node, other
    return None


def is_canonical(game: Game) -> bool:
    """True iff no cell contains a node together with a strict descendant."""
    return _canonical_violation(game) is None


def canonicalize(game: Game) -> Game:
    """Prune subtrees that no pure strategy can reach.

    Whenever a node sits in the same cell as one of its ancestors, any
    strategy reaching it has already fixed the cell's action, so the node
    is replaced by the child under that same action and its other
    subtrees are dropped. Rewrites repeat until no violation remains; the
    reachable outcome of every pure strategy profile is unchanged.
    """
    current = game
    while True:
        violation = _canonical_violation(current)
        if violation is None:
            return current
        _, ancestor, node = violation
        kept_action = None
        for action in current.action_map[ancestor]:
            if node in descendants(current, current.successor_map[(ancestor, action)]):
                kept_action = action
                break
        assert kept_action is not None
        keep = current.successor_map[(node, kept_action)]
        dead = set(descendants(current, node)) - set(descendants(current, keep))
        parents = _parent_index(current)
        parent_node, parent_action = parents[node]

        new_successors: dict[tuple[str, str], str] = {}
        for (n, a), child in current.successor_map.items():
            if n in dead:
                continue
            if (n, a) == (parent_node, parent_action):
                new_successors[(n, a)] = keep
            else:
                new_successors[(n, a)] = child
        new_nodes = tuple(n for n in current.choice_nodes if n not in dead)
        new_outcomes = tuple(z for z in current.outcomes if z not in dead)
        new_infosets = {}
        for label, members in current.infosets.items():
            survivors = tuple(n for n in members if n not in dead)
            if survivors:
                new_infosets[label] = survivors
        current = Game(
            players=current.players,
            actions=current.actions,
            choice_nodes=new_nodes,
            outcomes=new_outcomes,
            action_map={n: acts for n, acts in current.action_map.items() if n not in dead},
            player_map={n: p for n, p in current.player_map.items() if n not in dead},
            successor_map=new_successors,
            utility_map={
                (p, z): v for (p, z), v in current.utility_map.items() if z not in dead
            },
            infosets=new_infosets,
            root=current.root,
        )


def has_perfect_recall(game: Game) -> bool:
    """True iff no player can tell apart two nodes of one of their cells.

    Two nodes in a cell are indistinguishable to the deciding player only
    if the player went through the same cells taking the same actions on
    both root paths. A player who could have reached the cell with
    different own past moves would be able to distinguish, which is a
    recall failure.
    """
    parents = _parent_index(game)
    cell_by_node: dict[str, str] = {}
    for label, members in game.infosets.items():
        for node in members:
            cell_by_node[node] = label

    def experience(node: str, player: str) -> tuple[tuple[str, str], ...]:
        return tuple(
            (cell_by_node[h], action)
            for h, action in _root_path(parents, node)
            if game.player_map[h] == player
        )

    for label, members in game.infosets.items():
        if len(members) < 2:
            continue
        player = game.cell_player(label)
        # A same-cell ancestor also fails here: the descendant's own
        # experience strictly extends the ancestor's.
        sequences = {experience(node, player) for node in members}
        if len(sequences) > 1:
            return False
    return True


def validate_game(game: Game) -> ValidationReport:
    """Check every structural constraint and report all violations.

    Violations are report entries, never exceptions; the flags
    (canonical form, perfect recall, ties) are computed only when the
    structure is sound enough to make them meaningful.
    """
    errors = _structural_issues(game)
    warnings: list[ValidationIssue] = []
    for node in game.choice_nodes:
        if node in game.action_map and not game.action_map[node]:
            warnings.append(
                ValidationIssue("NO_ACTIONS", f"choice node {node!r} offers no actions", (node,))
            )
    structurally_ok = not errors
    return ValidationReport(
        errors=tuple(errors),
        warnings=tuple(warnings),
        is_canonical=is_canonical(game) if structurally_ok else False,
        has_perfect_recall=has_perfect_recall(game) if structurally_ok else False,
        has_ties=game_has_ties(game),
    )


def embed_normal_form(
    matrix: Mapping[tuple[str, ...], Sequence[object]],
    players: Sequence[str],
    action_lists: Sequence[Sequence[str]],
) -> Game:
    """Express a normal-form game as an extensive-form game.

    Players move in the given order, each seeing nothing of the earlier
    moves: player k has a single information-set cell containing every
    node at depth k. Node ids are comma-joined move prefixes (the root is
    ``""``), outcome ids are comma-joined full profiles, and payoff
    vectors follow the order of ``players``. The result is canonical and
    has perfect recall.
    """
    if not players:
        raise ValueError("at least one player is required")
    if len(set(players)) != len(players):
        raise ValueError("duplicate player identifier")
    if len(action_lists) != len(players):
        raise ValueError("need exactly one action list per player")
    for player, acts in zip(players, action_lists):
        if not acts:
            raise ValueError(f"player {player!r} has an empty action list")
        if len(set(acts)) != len(acts):
            raise ValueError(f"player {player!r} lists an action twice")

    profiles: list[tuple[str, ...]] = [()]
    for acts in action_lists:
        profiles = [p + (a,) for p in profiles for a in acts]
    profile_set = set(profiles)
    for profile in profiles:
        if profile not in matrix:
            raise ValueError(f"matrix is missing profile {profile!r}")
    for profile in matrix:
        if tuple(profile) not in profile_set:
            raise ValueError(f"matrix has unknown profile {profile!r}")

    actions: list[str] = []
    for acts in action_lists:
        for a in acts:
            if a not in actions:
                actions.append(a)

    choice_nodes: list[str] = []
    action_map: dict[str, tuple[str, ...]] = {}
    player_map: dict[str, str] = {}
    successor_map: dict[tuple[str, str], str] = {}
    infosets: dict[str, tuple[str, ...]] = {}
    depth = len(players)
    prefixes: list[tuple[str, ...]] = [()]
    for k, player in enumerate(players):
        cell_nodes = []
        next_prefixes = []
        for prefix in prefixes:
            node = ",".join(prefix)
            choice_nodes.append(node)
            cell_nodes.append(node)
            action_map[node] = tuple(action_lists[k])
            player_map[node] = player
            for a in action_lists[k]:
                extended = prefix + (a,)
                successor_map[(node, a)] = ",".join(extended)
                next_prefixes.append(extended)
        infosets[player] = tuple(cell_nodes)
        prefixes = next_prefixes

    outcomes = tuple(",".join(p) for p in profiles)
    utility_map: dict[tuple[str, str], Fraction] = {}
    for profile in profiles:
        payoffs = matrix[profile]
        if len(payoffs) != depth:
            raise ValueError(f"profile {profile!r} has {len(payoffs)} payoffs, expected {depth}")
        outcome = ",".join(profile)
        for player, value in zip(players, payoffs):
            utility_map[(player, outcome)] = parse_exact(value, f"payoff for {player!r} at {outcome!r}")

    return Game(
        players=tuple(players),
        actions=tuple(actions),
        choice_nodes=tuple(choice_nodes),
        outcomes=outcomes,
        action_map=action_map,
        player_map=player_map,
        successor_map=successor_map,
        utility_map=utility_map,
        infosets=infosets,
        root="",
    )
