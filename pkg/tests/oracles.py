"""Slow, independent reference implementations used only by the tests."""

from __future__ import annotations

import itertools

import networkx as nx

from linkmotion.freeprod import FINITE, FREE, FREE_ABELIAN


def _free_mul(x, y):
    # concatenate, then cancel one adjacent pair at a time until none is left
    w = list(x) + list(y)
    changed = True
    while changed:
        changed = False
        for k in range(len(w) - 1):
            if w[k] == -w[k + 1]:
                del w[k : k + 2]
                changed = True
                break
    return tuple(w)


def factor_mul(G, x, y):
    if G.kind == FREE:
        return _free_mul(x, y)
    if G.kind == FREE_ABELIAN:
        return tuple(a + b for a, b in zip(x, y))
    return G.table[x][y]


def factor_is_identity(G, x):
    if G.kind == FINITE:
        return x == G.identity_index
    return not any(x)


def naive_normalize(raw, factors):
    """Apply one rewriting step at a time: drop a trivial syllable or merge a pair."""
    w = [(i, tuple(p) if isinstance(p, list) else p) for i, p in raw]
    while True:
        for k, (i, p) in enumerate(w):
            if factor_is_identity(factors[i], p):
                del w[k]
                break
        else:
            for k in range(len(w) - 1):
                if w[k][0] == w[k + 1][0]:
                    i = w[k][0]
                    w[k : k + 2] = [(i, factor_mul(factors[i], w[k][1], w[k + 1][1]))]
                    break
            else:
                return w


# -- rooted L-trees --------------------------------------------------------


def _valid(parent, labels, n):
    V = len(parent) + 1
    children = [[] for _ in range(V)]
    for child, par in enumerate(parent, start=1):
        children[par].append(child)
    for v in range(V):
        if labels[v] is None and len(children[v]) < 2:
            return False
    return True


def _graph(parent, labels):
    g = nx.DiGraph()
    for v, lab in enumerate(labels):
        g.add_node(v, label=lab if lab is not None else 0, root=v == 0)
    for child, par in enumerate(parent, start=1):
        g.add_edge(par, child)
    return g


def brute_force_ltrees(n):
    """Count rooted L-trees by filtering every labelled rooted tree on at most 2n-1 vertices.

    Trees are parent arrays with parent[v] < v (vertex 0 is the root); each
    label 1..n goes to a distinct vertex and the rest are empty. Isomorphism
    classes are separated with networkx.
    """
    reps = []
    for V in range(n, 2 * n):
        for parent in itertools.product(*[range(v) for v in range(1, V)]):
            for slots in itertools.permutations(range(V), n):
                labels = [None] * V
                for lab, v in enumerate(slots, start=1):
                    labels[v] = lab
                if not _valid(parent, labels, n):
                    continue
                g = _graph(parent, labels)
                match = nx.algorithms.isomorphism.categorical_node_match(["label", "root"], [0, False])
                if not any(
                    h.number_of_nodes() == V and nx.is_isomorphic(g, h, node_match=match) for h in reps
                ):
                    reps.append(g)
    return reps
