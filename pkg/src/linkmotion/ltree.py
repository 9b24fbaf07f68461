"""Rooted L-trees: the combinatorial types of essential separating systems.

A tree is an immutable nested value. Each vertex carries a label in
``1..n`` or ``None`` (written ``∅``) and a tuple of children kept sorted by
canonical key, so structural equality is isomorphism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InvalidMove, InvalidTree, NotLaminar, SpecMismatch
from .freeprod import FactorElement

EMPTY = "∅"


@dataclass(frozen=True)
class LTree:
    label: int | None
    children: tuple["LTree", ...] = ()

    def __post_init__(self):
        kids = tuple(sorted(self.children, key=lambda c: c.key))
        object.__setattr__(self, "children", kids)

    @cached_property
    def key(self) -> str:
        """Canonical string; equal keys iff label- and root-preserving isomorphic."""
        head = EMPTY if self.label is None else str(self.label)
        if not self.children:
            return f"({head})"
        return f"({head} {' '.join(c.key for c in self.children)})"

    def __str__(self) -> str:
        head = EMPTY if self.label is None else str(self.label)
        body = "".join(" " + c.key for c in self.children)
        return f"(root:{head}{body})"

    def vertices(self) -> list["LTree"]:
        out = [self]
        for c in self.children:
            out.extend(c.vertices())
        return out

    def vertex_count(self) -> int:
        return 1 + sum(c.vertex_count() for c in self.children)

    def edge_count(self) -> int:
        return self.vertex_count() - 1

    def labels(self) -> list[int]:
        return [v.label for v in self.vertices() if v.label is not None]

    def label_set(self) -> frozenset[int]:
        return frozenset(self.labels())

    def at(self, path: Sequence[int]) -> "LTree":
        node = self
        for k in path:
            node = node.children[k]
        return node

    def replace(self, path: Sequence[int], new: "LTree") -> "LTree":
        """Copy with the vertex at ``path`` replaced by ``new``.

        Paths index the sorted children; replacing may reorder siblings.
        """
        if not path:
            return new
        kids = list(self.children)
        kids[path[0]] = kids[path[0]].replace(path[1:], new)
        return LTree(self.label, tuple(kids))


def canonical_form(t: LTree) -> str:
    return t.key


def problems(t: LTree, n: int) -> list[str]:
    out = []
    labels = t.labels()
    if sorted(labels) != list(range(1, n + 1)):
        out.append(f"labels {sorted(labels)} are not 1..{n} each exactly once")
    for v in t.vertices():
        # a non-root vertex of valence d has d - 1 children, so both rules
        # amount to "an ∅-vertex has at least two children"
        if v.label is None and len(v.children) < 2:
            out.append(f"∅-vertex {v.key} has fewer than two children")
    if t.vertex_count() > max(2 * n - 1, 1):
        out.append(f"{t.vertex_count()} vertices exceed the bound {2 * n - 1}")
    return out


def check(t: LTree, n: int) -> LTree:
    found = problems(t, n)
    if found:
        raise InvalidTree("; ".join(found))
    return t


# --------------------------------------------------------------------------
# enumeration


def _set_partitions(items: tuple) -> Iterable[list[tuple]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [(first,)] + part
        for k in range(len(part)):
            yield part[:k] + [(first,) + part[k]] + part[k + 1 :]


def _forests(labels: tuple, min_blocks: int = 0) -> Iterable[tuple[LTree, ...]]:
    """Multisets of valid subtrees whose labels partition ``labels``."""
    for blocks in _set_partitions(labels):
        if len(blocks) < min_blocks:
            continue
        for combo in itertools.product(*(_subtrees(b) for b in blocks)):
            yield combo


_SUBTREE_CACHE: dict[tuple, tuple[LTree, ...]] = {}


def _subtrees(labels: tuple) -> tuple[LTree, ...]:
    """All valid non-root subtrees on exactly these labels."""
    if labels in _SUBTREE_CACHE:
        return _SUBTREE_CACHE[labels]
    found: dict[str, LTree] = {}
    for top in labels:
        rest = tuple(x for x in labels if x != top)
        for kids in _forests(rest):
            t = LTree(top, kids)
            found[t.key] = t
    for kids in _forests(labels, min_blocks=2):
        t = LTree(None, kids)
        found[t.key] = t
    result = tuple(found[k] for k in sorted(found))
    _SUBTREE_CACHE[labels] = result
    return result


def enumerate_trees(n: int) -> list[LTree]:
    """Every rooted L-tree on ``n`` labels, canonical and sorted by key.

    Below the root the rules coincide with those of subtrees, so trees are
    assembled recursively from set partitions of the label set.
    """
    if n < 1:
        raise ValueError("need at least one label")
    labels = tuple(range(1, n + 1))
    found = {t.key: t for t in _subtrees(labels)}
    return [found[k] for k in sorted(found)]


# --------------------------------------------------------------------------
# moves


@dataclass(frozen=True)
class MakeLeaf:
    label: int


@dataclass(frozen=True)
class SplitEmpty:
    """Move the children at indices ``moved`` of the ∅-vertex at ``path`` under a new ∅-vertex."""

    path: tuple[int, ...]
    moved: frozenset[int]


@dataclass(frozen=True)
class SplitRoot:
    moved: frozenset[int]


def _find_label(t: LTree, label: int, path=()) -> tuple[int, ...] | None:
    if t.label == label:
        return tuple(path)
    for k, c in enumerate(t.children):
        found = _find_label(c, label, path + (k,))
        if found is not None:
            return found
    return None


def _split(v: LTree, moved: frozenset[int]) -> LTree:
    moved = frozenset(moved)
    if not moved <= set(range(len(v.children))):
        raise InvalidMove(f"child indices {sorted(moved)} out of range")
    if len(moved) < 2 or len(v.children) - len(moved) < 1:
        raise InvalidMove("a split needs at least two moved children and one staying")
    inner = LTree(None, tuple(v.children[k] for k in sorted(moved)))
    stay = tuple(c for k, c in enumerate(v.children) if k not in moved)
    return LTree(None, stay + (inner,))


def apply_move(t: LTree, move) -> LTree:
    if isinstance(move, MakeLeaf):
        path = _find_label(t, move.label)
        if path is None:
            raise InvalidMove(f"no vertex labelled {move.label}")
        v = t.at(path)
        if not v.children:
            raise InvalidMove(f"vertex {move.label} is already a leaf")
        new = LTree(None, v.children + (LTree(move.label),))
        return t.replace(path, new)
    if isinstance(move, SplitEmpty):
        if not move.path:
            raise InvalidMove("SplitEmpty acts on a non-root vertex; use SplitRoot")
        try:
            v = t.at(move.path)
        except IndexError:
            raise InvalidMove(f"no vertex at path {move.path}") from None
        if v.label is not None or len(v.children) < 3:
            raise InvalidMove("SplitEmpty needs an ∅-vertex of valence at least 4")
        return t.replace(move.path, _split(v, move.moved))
    if isinstance(move, SplitRoot):
        if t.label is not None or len(t.children) < 3:
            raise InvalidMove("SplitRoot needs an ∅-root of valence at least 3")
        return _split(t, move.moved)
    raise InvalidMove(f"unknown move {move!r}")


def _paths(t: LTree, path=()) -> Iterable[tuple[tuple[int, ...], LTree]]:
    yield tuple(path), t
    for k, c in enumerate(t.children):
        yield from _paths(c, path + (k,))


def _proper_subsets(k: int) -> Iterable[frozenset[int]]:
    for size in range(2, k):
        for combo in itertools.combinations(range(k), size):
            yield frozenset(combo)


def legal_moves(t: LTree) -> list:
    out = []
    for path, v in _paths(t):
        if v.label is not None and v.children:
            out.append(MakeLeaf(v.label))
        elif v.label is None and len(v.children) >= 3:
            for moved in _proper_subsets(len(v.children)):
                out.append(SplitEmpty(path, moved) if path else SplitRoot(moved))
    return out


def minimal_trees(n: int) -> list[LTree]:
    """Trees with no ∅-vertex, i.e. ``n`` vertices; every move adds a vertex."""
    return [t for t in enumerate_trees(n) if t.vertex_count() == n]


def move_closure(n: int) -> list[LTree]:
    found = {t.key: t for t in minimal_trees(n)}
    frontier = list(found.values())
    while frontier:
        nxt = []
        for t in frontier:
            for m in legal_moves(t):
                s = apply_move(t, m)
                if s.key not in found:
                    found[s.key] = s
                    nxt.append(s)
        frontier = nxt
    return [found[k] for k in sorted(found)]


# --------------------------------------------------------------------------
# laminar families


def to_laminar(t: LTree) -> list[frozenset[int]]:
    """Label sets of the branches below each non-root vertex, sorted."""
    out = []
    for v in t.vertices()[1:]:
        out.append(v.label_set())
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def is_laminar(family: Iterable[frozenset[int]]) -> bool:
    sets = [frozenset(s) for s in family]
    for a, b in itertools.combinations(sets, 2):
        if a & b and not (a <= b or b <= a):
            return False
    return True


def from_laminar(family: Iterable[Iterable[int]], n: int) -> LTree:
    """Rebuild the tree whose non-root branches have exactly these label sets.

    Each set becomes a vertex below its smallest strict superset (or the
    root). A vertex carries the one label its children do not cover, if any.
    """
    sets = [frozenset(s) for s in family]
    universe = frozenset(range(1, n + 1))
    for s in sets:
        if not s or not s <= universe:
            raise NotLaminar(f"set {sorted(s)} is empty or not inside 1..{n}")
    if len(set(sets)) != len(sets):
        raise NotLaminar("family repeats a set")
    if not is_laminar(sets):
        raise NotLaminar("family contains crossing sets")
    if universe in sets:
        raise NotLaminar("the whole label set belongs to the root")

    def build(region: frozenset[int], members: list[frozenset[int]]) -> LTree:
        tops = [s for s in members if not any(s < o for o in members)]
        kids = []
        for top in tops:
            kids.append(build(top, [s for s in members if s < top]))
        covered = frozenset().union(*tops) if tops else frozenset()
        free = sorted(region - covered)
        if len(free) > 1:
            raise NotLaminar(f"labels {free} share a vertex")
        return LTree(free[0] if free else None, tuple(kids))

    return build(universe, sets)


def compatible(t1: LTree, t2: LTree) -> bool:
    """Can both families sit in one nested system (duplicates across families allowed)?"""
    return is_laminar(to_laminar(t1) + to_laminar(t2))


# --------------------------------------------------------------------------
# tree motion groups


def tree_motion_generators(t: LTree, group) -> list:
    """``chi(s, L(v))`` for children ``v`` of each labelled vertex, plus G_i generators."""
    spec = group.spec
    n = spec.n
    if sorted(t.labels()) != list(range(1, n + 1)):
        raise SpecMismatch(f"tree labels {sorted(t.labels())} do not match {n} pieces")
    out = []
    for v in t.vertices():
        if v.label is None:
            continue
        i = v.label - 1
        H = spec.pieces[i].complement
        for child in v.children:
            support = [j - 1 for j in sorted(child.label_set())]
            for k in range(H.rank):
                out.append(group.chi_set(FactorElement(i, H.generator(k)), support))
    for i, piece in enumerate(spec.pieces):
        for k in range(piece.motion.rank):
            out.append(group.motion_generator(i, k))
    return out


# --------------------------------------------------------------------------
# serialization


def parse_tree(text: str) -> LTree:
    """Inverse of ``str``: ``(root:∅ (1) (2))``; ``-`` is accepted for ``∅``."""
    pos = 0
    s = text.strip()

    def skip():
        nonlocal pos
        while pos < len(s) and s[pos].isspace():
            pos += 1

    def node(top: bool) -> LTree:
        nonlocal pos
        skip()
        if pos >= len(s) or s[pos] != "(":
            raise InvalidTree(f"expected '(' at position {pos}")
        pos += 1
        skip()
        if top and s.startswith("root:", pos):
            pos += len("root:")
        start = pos
        while pos < len(s) and not s[pos].isspace() and s[pos] not in "()":
            pos += 1
        head = s[start:pos]
        if head in (EMPTY, "-"):
            label = None
        elif head.isdigit():
            label = int(head)
        else:
            raise InvalidTree(f"bad vertex label {head!r} at position {start}")
        kids = []
        skip()
        while pos < len(s) and s[pos] == "(":
            kids.append(node(False))
            skip()
        if pos >= len(s) or s[pos] != ")":
            raise InvalidTree(f"expected ')' at position {pos}")
        pos += 1
        return LTree(label, tuple(kids))

    t = node(True)
    skip()
    if pos != len(s):
        raise InvalidTree(f"trailing text at position {pos}")
    return t
