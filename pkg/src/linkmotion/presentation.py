"""Presentations of motion groups read off the semidirect decomposition.

Generators are the partial conjugations ``X(s, j)`` for generators ``s`` of
each ``H_i`` (``i != j``), the generators of each ``G_i`` and the adjacent
transpositions generating ``P_L``. Relators come in families: the three
FR relations, defining relators of each ``G_i``, Coxeter relators of
``P_L`` and the relators describing how ``G_L`` and ``P_L`` act.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .catalog import LinkSpec
from .freeprod import FINITE, FREE, FREE_ABELIAN, FactorGroup
from .grammar import (
    chi_tokens,
    format_tokens,
    g_symbol,
    invert_tokens,
    merge_tokens,
    p_symbol,
    parse_tokens,
    x_symbol,
)

COMPLETE = "complete"
SOUND_ONLY = "sound, completeness unverified"


@dataclass(frozen=True)
class Relator:
    family: str
    tokens: tuple[tuple[str, int], ...]

    def __str__(self) -> str:
        return format_tokens(self.tokens)


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Relator, ...]
    completeness: str

    @property
    def complete(self) -> bool:
        return self.completeness == COMPLETE

    def to_text(self) -> str:
        lines = [f"gen: {g}" for g in self.generators]
        lines += [f"rel: {r}" for r in self.relators]
        lines.append(f"completeness: {self.completeness}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "relators": [
                {"family": r.family, "word": [[s, e] for s, e in r.tokens], "text": str(r)}
                for r in self.relators
            ],
            "metadata": {
                "completeness": self.completeness,
                "complete": self.complete,
                "generator_count": len(self.generators),
                "relator_count": len(self.relators),
            },
        }


def _commutator(a, b) -> list[tuple[str, int]]:
    return list(a) + list(b) + invert_tokens(a) + invert_tokens(b)


def _schreier(G: FactorGroup, symbol) -> list[list[tuple[str, int]]]:
    """Defining relators of a factor in terms of ``symbol(k)`` for generator ``k``.

    Finite: ``word(e) s word(e s)^-1`` for every non-tree edge of a BFS
    spanning tree of the Cayley graph. Free abelian: commutators.
    """
    if G.kind == FREE:
        return []
    if G.kind == FREE_ABELIAN:
        return [
            _commutator([(symbol(a), 1)], [(symbol(b), 1)])
            for a, b in itertools.combinations(range(G.rank), 2)
        ]
    out = []
    for e in G.elements():
        we = G.word_for(e)
        for k, s in enumerate(G.generator_elements):
            target = G.mul(e, s)
            wt = G.word_for(target)
            if list(wt) == list(we) + [(k, 1)]:
                continue
            toks = [(symbol(a), x) for a, x in we] + [(symbol(k), 1)]
            toks += invert_tokens([(symbol(a), x) for a, x in wt])
            out.append(toks)
    return out


def present(spec: LinkSpec) -> Presentation:
    n = spec.n
    pieces = spec.pieces
    gens: list[str] = []
    rels: list[Relator] = []

    def add(family, toks):
        toks = merge_tokens(toks)
        if toks:
            rels.append(Relator(family, tuple(toks)))

    x_gens = [
        (i, k, j)
        for i in range(n)
        for k in range(pieces[i].complement.rank)
        for j in range(n)
        if j != i
    ]
    gens += [x_symbol(spec, i, k, j) for i, k, j in x_gens]
    for i, p in enumerate(pieces):
        gens += [g_symbol(spec, i, k) for k in range(p.motion.rank)]
    trans = spec.transpositions()
    gens += [p_symbol(a, b) for a, b in trans]

    def xt(i, k, j):
        return [(x_symbol(spec, i, k, j), 1)]

    # FR relation (1): chi(-, L_j) turns relators of H_i into relators,
    # reversed because chi(gh, L_j) = chi(h, L_j) chi(g, L_j)
    for i, p in enumerate(pieces):
        for j in range(n):
            if j != i:
                for toks in _schreier(p.complement, lambda k: x_symbol(spec, i, k, j)):
                    add("fr1", list(reversed(toks)))
    # FR relation (2)
    for (i, k, j), (i2, k2, j2) in itertools.combinations(x_gens, 2):
        if j != j2 and not {i, i2} & {j, j2}:
            add("fr2", _commutator(xt(i, k, j), xt(i2, k2, j2)))
    # FR relation (3)
    for i, j, kk in itertools.permutations(range(n), 3):
        for s in range(pieces[i].complement.rank):
            for t in range(pieces[kk].complement.rank):
                add("fr3", _commutator(xt(i, s, j) + xt(i, s, kk), xt(kk, t, j)))
    # defining relators of each G_i
    for i, p in enumerate(pieces):
        for toks in _schreier(p.motion, lambda k: g_symbol(spec, i, k)):
            add("motion", toks)
    # Coxeter relators of P_L
    for (a, b), (c, d) in itertools.combinations_with_replacement(trans, 2):
        ta, tc = [(p_symbol(a, b), 1)], [(p_symbol(c, d), 1)]
        if (a, b) == (c, d):
            add("perm", ta + ta)
        elif len({a, b} & {c, d}) == 1:
            add("perm", (ta + tc) * 3)
        else:
            add("perm", (ta + tc) * 2)
    # G_L acting on FR_0 and on itself
    for i, p in enumerate(pieces):
        for y in range(p.motion.rank):
            ty = [(g_symbol(spec, i, y), 1)]
            phi = p.dahm_action[y]
            for i2, k, j in x_gens:
                lhs = ty + xt(i2, k, j) + invert_tokens(ty)
                if i2 == i:
                    image = phi(p.complement.generator(k))
                    add("g-action", lhs + invert_tokens(chi_tokens(spec, i, image, j)))
                else:
                    add("g-action", lhs + invert_tokens(xt(i2, k, j)))
            for i2 in range(i + 1, n):
                for y2 in range(pieces[i2].motion.rank):
                    add("g-commute", _commutator(ty, [(g_symbol(spec, i2, y2), 1)]))
    # P_L acting on FR_0 and G_L
    for a, b in trans:
        tau = [(p_symbol(a, b), 1)]
        swap = {a: b, b: a}
        for i, k, j in x_gens:
            moved = xt(swap.get(i, i), k, swap.get(j, j))
            add("p-action", tau + xt(i, k, j) + tau + invert_tokens(moved))
        for i, p in enumerate(pieces):
            for y in range(p.motion.rank):
                moved = [(g_symbol(spec, swap.get(i, i), y), 1)]
                add("p-action", tau + [(g_symbol(spec, i, y), 1)] + tau + invert_tokens(moved))

    # completeness is only claimed when every H_i is abelian or finite
    tame = all(p.complement.is_abelian or p.complement.kind == FINITE for p in pieces)
    return Presentation(tuple(gens), tuple(rels), COMPLETE if tame else SOUND_ONLY)


def evaluate(relator: Relator, group):
    """The motion element a relator spells out; sound relators give the identity."""
    return parse_tokens(relator.tokens, group)

