"""Consecutive-ones ordering via a PQ-tree.

Given subsets of 1..universe_size, find a permutation of the universe under
which every subset occupies consecutive positions, or report that none
exists.  The tree encodes the family of admissible permutations: P nodes
allow any child order, Q nodes fix their child order up to reversal.

The implementation is purely functional: nodes are nested tuples
("L", x) / ("P", children) / ("Q", children), and every constraint pass
rebuilds the affected spine.  Constraining works bottom-up; a node that
contains some but not all of the constraint set reports a *split* — an
ordered chain of subtrees with all out-of-set leaves on one side and all
in-set leaves on the other — which the parent splices into its own chain.
Quadratic in the universe size per constraint, which is fine at the scales
this package recognizes axes for (verification, not bulk solving).
"""

from __future__ import annotations

from typing import Iterable, Sequence

Node = tuple  # ("L", int) | ("P", tuple[Node, ...]) | ("Q", tuple[Node, ...])

_EMPTY = 0
_FULL = 1
_SPLIT = 2


def _leaf(x: int) -> Node:
    return ("L", x)


def _p(children: Sequence[Node]) -> Node:
    if len(children) == 1:
        return children[0]
    return ("P", tuple(children))


def _q(children: Sequence[Node]) -> Node:
    if len(children) <= 2:
        return _p(children)
    return ("Q", tuple(children))


def _leaves(node: Node) -> list[int]:
    if node[0] == "L":
        return [node[1]]
    out: list[int] = []
    for ch in node[1]:
        out.extend(_leaves(ch))
    return out


def _leafset(node: Node) -> frozenset[int]:
    return frozenset(_leaves(node))


def _classify(child: Node, s: frozenset[int]) -> int:
    ls = _leafset(child)
    if ls.isdisjoint(s):
        return _EMPTY
    if ls <= s:
        return _FULL
    return _SPLIT


def _constrain(node: Node, s: frozenset[int]):
    """Constrain a non-root node whose leafset properly intersects s.

    Returns (empty_parts, full_parts) — subtrees in a fixed chain running
    from the empty outer end to the full outer end — or None if the node
    cannot be arranged with its s-leaves consecutive and touching one end.
    """
    if node[0] == "L":
        raise AssertionError("a leaf is never split")
    children = node[1]
    states = [_classify(ch, s) for ch in children]

    if node[0] == "P":
        empties = [ch for ch, st in zip(children, states) if st == _EMPTY]
        fulls = [ch for ch, st in zip(children, states) if st == _FULL]
        splits = [ch for ch, st in zip(children, states) if st == _SPLIT]
        if len(splits) > 1:
            return None
        empty_parts: list[Node] = [_p(empties)] if empties else []
        full_parts: list[Node] = []
        if splits:
            sub = _constrain(splits[0], s)
            if sub is None:
                return None
            empty_parts += sub[0]
            full_parts += sub[1]
        if fulls:
            full_parts.append(_p(fulls))
        return empty_parts, full_parts

    # Q node: in one of the two orientations the states must read
    # empties*, at most one split, fulls* — the full side must reach the end
    # of the chain so the parent can keep building outward from it.
    for ordered in (list(zip(children, states)), list(zip(children, states))[::-1]):
        empty_parts = []
        full_parts = []
        i = 0
        while i < len(ordered) and ordered[i][1] == _EMPTY:
            empty_parts.append(ordered[i][0])
            i += 1
        if i < len(ordered) and ordered[i][1] == _SPLIT:
            sub = _constrain(ordered[i][0], s)
            if sub is None:
                return None
            empty_parts += sub[0]
            full_parts += sub[1]
            i += 1
        if all(st == _FULL for _, st in ordered[i:]):
            full_parts += [ch for ch, _ in ordered[i:]]
            return empty_parts, full_parts
    return None


def _apply_at_root(node: Node, s: frozenset[int]) -> Node | None:
    """Rebuild the deepest node containing all of s so that the s-leaves are
    consecutive in some admissible order."""
    children = node[1]
    states = [_classify(ch, s) for ch in children]
    if all(st == _FULL for st in states):
        return node

    if node[0] == "P":
        empties = [ch for ch, st in zip(children, states) if st == _EMPTY]
        fulls = [ch for ch, st in zip(children, states) if st == _FULL]
        splits = [ch for ch, st in zip(children, states) if st == _SPLIT]
        if len(splits) > 2:
            return None
        if not splits:
            block = _p(fulls)
            return _p(empties + [block]) if empties else block
        first = _constrain(splits[0], s)
        if first is None:
            return None
        chain = list(first[0]) + list(first[1])
        if fulls:
            chain.append(_p(fulls))
        if len(splits) == 2:
            second = _constrain(splits[1], s)
            if second is None:
                return None
            chain += second[1][::-1] + second[0][::-1]
        block = _q(chain)
        return _p(empties + [block]) if empties else block

    # Q root: the chain must read empties*, (split)?, fulls*, (split)?,
    # empties* — the s-zone is contiguous in the middle.  The pattern is
    # reversal-symmetric, so one scan suffices.
    new_children: list[Node] = []
    phase = 0  # 0 = left empties, 1 = s-zone, 2 = right empties
    for ch, st in zip(children, states):
        if st == _EMPTY:
            if phase == 1:
                phase = 2
            new_children.append(ch)
        elif st == _FULL:
            if phase == 2:
                return None
            phase = 1
            new_children.append(ch)
        else:
            sub = _constrain(ch, s)
            if sub is None:
                return None
            if phase == 0:
                new_children += sub[0] + sub[1]
                phase = 1
            elif phase == 1:
                new_children += sub[1][::-1] + sub[0][::-1]
                phase = 2
            else:
                return None
    return _q(new_children)


def _reduce(node: Node, s: frozenset[int]) -> Node | None:
    """Constrain the tree so the leaves of s are consecutive; s ⊆ leafset."""
    if node[0] == "L":
        return node
    children = node[1]
    for i, ch in enumerate(children):
        if s <= _leafset(ch):
            new = _reduce(ch, s)
            if new is None:
                return None
            return (node[0], children[:i] + (new,) + children[i + 1 :])
    return _apply_at_root(node, s)


def consecutive_ones_order(
    universe_size: int, sets: Iterable[Iterable[int]]
) -> tuple[int, ...] | None:
    """A permutation of 1..universe_size making every set consecutive, or
    None when no such permutation exists."""
    if universe_size < 1:
        raise ValueError("universe_size must be positive")
    tree: Node = _p([_leaf(x) for x in range(1, universe_size + 1)])
    seen: set[frozenset[int]] = set()
    for raw in sets:
        s = frozenset(raw)
        if not s <= frozenset(range(1, universe_size + 1)):
            raise ValueError(f"set {sorted(s)} outside universe 1..{universe_size}")
        if len(s) <= 1 or len(s) == universe_size or s in seen:
            continue
        seen.add(s)
        reduced = _reduce(tree, s)
        if reduced is None:
            return None
        tree = reduced
    return tuple(_leaves(tree))
