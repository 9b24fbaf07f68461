import pytest

from linkmotion.catalog import unlink
from linkmotion.errors import InvalidMove, InvalidTree, NotLaminar, SpecMismatch
from linkmotion.grammar import format_element
from linkmotion.ltree import (
    LTree,
    MakeLeaf,
    SplitEmpty,
    SplitRoot,
    apply_move,
    canonical_form,
    check,
    compatible,
    enumerate_trees,
    from_laminar,
    legal_moves,
    minimal_trees,
    move_closure,
    parse_tree,
    problems,
    to_laminar,
    tree_motion_generators,
)
from linkmotion.motion import MotionGroup
from oracles import brute_force_ltrees


def leaf(k):
    return LTree(k)


def E(*kids):
    return LTree(None, kids)


def test_single_label():
    trees = enumerate_trees(1)
    assert len(trees) == 1 and trees[0] == LTree(1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_enumeration_matches_brute_force(n):
    assert len(enumerate_trees(n)) == len(brute_force_ltrees(n))


def test_small_counts():
    assert [len(enumerate_trees(n)) for n in (1, 2, 3, 4)] == [1, 3, 22, 262]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_vertex_bound_and_validity(n):
    for t in enumerate_trees(n):
        assert t.vertex_count() <= 2 * n - 1
        assert problems(t, n) == []


def test_canonical_form():
    assert canonical_form(LTree(1)) == "(1)"
    assert canonical_form(E(leaf(1), leaf(2))) == canonical_form(E(leaf(2), leaf(1)))
    assert canonical_form(LTree(1, (leaf(2),))) != canonical_form(LTree(2, (leaf(1),)))


def test_invalid_trees_rejected():
    with pytest.raises(InvalidTree):
        check(E(leaf(1)), 1)
    with pytest.raises(InvalidTree):
        check(LTree(1, (E(leaf(2)),)), 2)
    with pytest.raises(InvalidTree):
        check(LTree(1, (leaf(1),)), 1)


def test_make_leaf():
    t = LTree(1, (leaf(2),))
    s = apply_move(t, MakeLeaf(1))
    assert s == E(leaf(1), leaf(2))
    assert s.vertex_count() == t.vertex_count() + 1 and s.edge_count() == t.edge_count() + 1
    with pytest.raises(InvalidMove):
        apply_move(s, MakeLeaf(2))


def test_splits():
    root = E(leaf(1), leaf(2), leaf(3))
    s = apply_move(root, SplitRoot(frozenset({0, 1})))
    assert s == E(E(leaf(1), leaf(2)), leaf(3))
    with pytest.raises(InvalidMove):
        apply_move(s, SplitRoot(frozenset({0, 1})))
    inner = LTree(4, (E(leaf(1), leaf(2), leaf(3)),))
    s = apply_move(inner, SplitEmpty((0,), frozenset({1, 2})))
    assert s == LTree(4, (E(leaf(1), E(leaf(2), leaf(3))),))
    with pytest.raises(InvalidMove):
        apply_move(inner, SplitEmpty((0,), frozenset({0, 1, 2})))
    with pytest.raises(InvalidMove):
        apply_move(inner, SplitEmpty((), frozenset({0, 1})))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_every_move_adds_one_vertex_and_edge(n):
    for t in enumerate_trees(n):
        for m in legal_moves(t):
            s = apply_move(t, m)
            assert s.vertex_count() == t.vertex_count() + 1
            assert s.edge_count() == t.edge_count() + 1
            assert problems(s, n) == []


@pytest.mark.parametrize("n", [1, 2, 3])
def test_move_closure_reaches_everything(n):
    assert [t.key for t in move_closure(n)] == [t.key for t in enumerate_trees(n)]


def test_move_closure_gap_for_four_labels():
    reached = {t.key for t in move_closure(4)}
    assert len(reached) == 250 and len(minimal_trees(4)) == 4**3
    assert E(LTree(1, (leaf(2),)), LTree(3, (leaf(4),))).key not in reached


def test_laminar_examples():
    assert to_laminar(E(leaf(1), leaf(2))) == [frozenset({1}), frozenset({2})]
    assert to_laminar(LTree(1, (leaf(2),))) == [frozenset({2})]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_laminar_round_trip(n):
    for t in enumerate_trees(n):
        fam = to_laminar(t)
        assert len(set(fam)) == len(fam)
        assert from_laminar(fam, n) == t


def test_from_laminar_errors():
    with pytest.raises(NotLaminar):
        from_laminar([{1, 2}, {2, 3}], 3)
    with pytest.raises(NotLaminar):
        from_laminar([{1}, {1}], 2)
    with pytest.raises(NotLaminar):
        from_laminar([{1}], 3)  # 2 and 3 would share the root


def test_compatible():
    t = E(E(leaf(1), leaf(2)), leaf(3))
    assert compatible(t, t)
    a = from_laminar([{1, 2}, {1}, {2}, {3}], 3)
    b = from_laminar([{2, 3}, {1}, {2}, {3}], 3)
    assert not compatible(a, b)
    trees = enumerate_trees(2)
    assert all(compatible(x, y) for x in trees for y in trees)


def test_tree_generators_root_to_leaf():
    M = MotionGroup(unlink(2))
    gens = [format_element(g) for g in tree_motion_generators(LTree(1, (leaf(2),)), M)]
    assert gens == ["X(a1,2)", "G[1]:t", "G[2]:t"]


def test_tree_generators_without_labelled_parents():
    M = MotionGroup(unlink(3))
    gens = tree_motion_generators(E(E(leaf(1), leaf(2)), leaf(3)), M)
    assert [format_element(g) for g in gens] == ["G[1]:t", "G[2]:t", "G[3]:t"]
    assert len(tree_motion_generators(E(leaf(1), leaf(2), leaf(3)), M)) == 3


def test_tree_generators_use_whole_branches():
    M = MotionGroup(unlink(3))
    gens = tree_motion_generators(LTree(1, (E(leaf(2), leaf(3)),)), M)
    assert format_element(gens[0]) == "X(a1,2) X(a1,3)"


def test_tree_generators_size_mismatch():
    with pytest.raises(SpecMismatch):
        tree_motion_generators(LTree(1), MotionGroup(unlink(2)))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_serialization_round_trip(n):
    for t in enumerate_trees(n):
        assert parse_tree(str(t)) == t
    assert parse_tree("(root:- (1) (2))") == E(leaf(1), leaf(2))
    with pytest.raises(InvalidTree):
        parse_tree("(root:∅ (1)")
