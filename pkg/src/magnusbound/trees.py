"""Rooted trees with ordered grafts: enumeration, text forms, decomposition.

A tree is either a bare leaf or a root carrying an ordered tuple of child
subtrees (its grafts).  The leaf count satisfies ``leaves = 1 + sum over
grafts``, so the root itself contributes one leaf.  Serialization writes a
leaf as ``L`` and an internal node as its children inside parentheses,
for example ``((L) L)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterator

__all__ = [
    "LEAF",
    "DecompositionError",
    "ParseError",
    "Tree",
    "TreeSet",
    "count",
    "decompose",
    "enumerate_trees",
    "node",
    "parse",
    "serialize",
    "to_commutator_expression",
    "tree_set_json",
]


class ParseError(ValueError):
    """Malformed tree text; ``offset`` is the position of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class DecompositionError(ValueError):
    """Raised when asking for the grafts of a bare leaf."""


@dataclass(frozen=True)
class Tree:
    """Immutable rooted tree; equality and hashing use the graft structure."""

    children: tuple["Tree", ...] = ()
    leaves: int = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "leaves", 1 + sum(c.leaves for c in self.children))

    @property
    def is_leaf(self) -> bool:
        return not self.children


LEAF = Tree()


def node(*children: Tree) -> Tree:
    """Internal node with the given grafts, in order (at least one)."""
    if not children:
        raise ValueError("an internal node needs at least one graft")
    return Tree(tuple(children))


def decompose(tree: Tree) -> tuple[Tree, ...]:
    """The ordered grafts (tau_1, ..., tau_r) of an internal node."""
    if tree.is_leaf:
        raise DecompositionError("a leaf has no graft decomposition")
    return tree.children


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _enumerate(n: int) -> tuple[Tree, ...]:
    if n == 1:
        return (LEAF,)
    found: list[Tree] = []
    for r in range(1, n):
        for comp in _compositions(n - 1, r):
            for grafts in product(*(_enumerate(j) for j in comp)):
                found.append(Tree(tuple(grafts)))
    return tuple(found)


@dataclass(frozen=True)
class TreeSet:
    """All trees with a fixed leaf count, in canonical enumeration order."""

    n: int
    members: tuple[Tree, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Tree]:
        return iter(self.members)


def enumerate_trees(n: int) -> TreeSet:
    """Every tree with n leaves.

    Order is deterministic: graft count r ascending, leaf compositions of the
    grafts in lexicographic order, then each graft slot cycling through its
    own enumeration (rightmost fastest).
    """
    if n < 1:
        raise ValueError(f"leaf count must be >= 1, got {n}")
    return TreeSet(n, _enumerate(n))


@lru_cache(maxsize=None)
def _catalan(m: int) -> int:
    # standard recurrence, deliberately not the closed form
    if m == 0:
        return 1
    return sum(_catalan(i) * _catalan(m - 1 - i) for i in range(m))


def count(n: int) -> int:
    """Number of trees with n leaves (the (n-1)-th Catalan number)."""
    if n < 1:
        raise ValueError(f"leaf count must be >= 1, got {n}")
    return _catalan(n - 1)


def serialize(tree: Tree) -> str:
    """Canonical text form: ``L`` for a leaf, children in parentheses else."""
    if tree.is_leaf:
        return "L"
    return "(" + " ".join(serialize(c) for c in tree.children) + ")"


def parse(text: str) -> Tree:
    """Inverse of :func:`serialize`; failures carry the offending offset."""
    pos = 0

    def parse_tree() -> Tree:
        nonlocal pos
        if pos >= len(text):
            raise ParseError("unexpected end of input", pos)
        ch = text[pos]
        if ch == "L":
            pos += 1
            return LEAF
        if ch == "(":
            pos += 1
            children: list[Tree] = []
            while True:
                if pos >= len(text):
                    raise ParseError("unclosed '('", pos)
                if text[pos] == ")":
                    pos += 1
                    break
                if children:
                    if text[pos] != " ":
                        raise ParseError("expected ' ' or ')'", pos)
                    pos += 1
                children.append(parse_tree())
            if not children:
                raise ParseError("empty node '()'", pos - 1)
            return Tree(tuple(children))
        raise ParseError(f"unexpected character {ch!r}", pos)

    result = parse_tree()
    if pos != len(text):
        raise ParseError("trailing input", pos)
    return result


def to_commutator_expression(tree: Tree) -> str:
    """Nested commutator-of-integrals text for a tree.

    The root evaluates the generator at its own variable; each graft wraps
    the running expression in a commutator with the graft's integral, in
    graft order.  Variables t1, t2, ... are assigned depth-first, so the
    numbering matches the unfolded iterated integral.
    """
    counter = 1

    def render(t: Tree, var: int) -> str:
        nonlocal counter
        acc = f"H(t{var})"
        for child in t.children:
            counter += 1
            inner_var = counter
            inner = render(child, inner_var)
            acc = f"[{acc}, ∫_0^{{t{var}}} dt{inner_var} {inner}]"
        return acc

    return render(tree, 1)


def tree_set_json(tree_set: TreeSet) -> dict:
    """JSON-ready mapping: ``{"n": 3, "trees": ["((L))", "(L L)"]}``."""
    return {"n": tree_set.n, "trees": [serialize(t) for t in tree_set.members]}
