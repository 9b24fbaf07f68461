"""Shared constructions for the test modules."""

from __future__ import annotations

from linkmotion.catalog import cyclic_table, quaternion_table
from linkmotion.fpauto import (
    FactorAut,
    PartialConjugation,
    compose,
    factor_aut,
    identity_aut,
    make_generator_aut,
    permutation_aut,
)
from linkmotion.freeprod import FactorElement, FactorGroup, FreeProduct


def z_star_z() -> FreeProduct:
    return FreeProduct((FactorGroup.free(["a"]), FactorGroup.free(["b"])))


def z3() -> FreeProduct:
    return FreeProduct((FactorGroup.free(["a"]), FactorGroup.free(["b"]), FactorGroup.free(["c"])))


def mixed() -> FreeProduct:
    """Z * Z^2 * Q8 * F_2 * Z/3: every factor kind at once."""
    return FreeProduct(
        (
            FactorGroup.free(["a"]),
            FactorGroup.free_abelian(["x", "y"]),
            FactorGroup.finite(quaternion_table(), {"i": 2, "j": 4}),
            FactorGroup.free(["u", "v"]),
            FactorGroup.finite(cyclic_table(3), {"r": 1}),
        )
    )


def random_raw(P: FreeProduct, rng, max_syllables: int = 12):
    raw = []
    for _ in range(rng.randint(0, max_syllables)):
        i = rng.randrange(P.n)
        raw.append((i, P.factors[i].random_element(rng, max_length=3)))
    return raw


def twin_context() -> FreeProduct:
    """F(a) * F(b) * Z^2 * Z^2 * Q8, so that some factors can be swapped."""
    return FreeProduct(
        (
            FactorGroup.free(["a"]),
            FactorGroup.free(["b"]),
            FactorGroup.free_abelian(["x", "y"]),
            FactorGroup.free_abelian(["z", "w"]),
            FactorGroup.finite(quaternion_table(), {"i": 2, "j": 4}),
        )
    )


def q8_rotation(G):
    # i -> j -> k -> i on units, signs kept
    unit = {0: 0, 1: 2, 2: 3, 3: 1}
    return FactorAut.permutation(G, [2 * unit[x // 2] + x % 2 for x in range(8)])


def random_aut(P, rng, steps=5):
    """Random composite of partial conjugations, factor automorphisms and swaps."""
    out = identity_aut(P)
    for _ in range(steps):
        r = rng.random()
        if r < 0.6:
            i, j = rng.randrange(P.n), rng.randrange(P.n)
            g = FactorElement(i, P.factors[i].random_element(rng, nontrivial=True))
            step = make_generator_aut(P, PartialConjugation(g, j, rng.choice((1, -1))))
        elif r < 0.85:
            i = rng.randrange(P.n)
            G = P.factors[i]
            if G.kind == "free":
                phi = FactorAut.free(G, [(-1,)])
            elif G.kind == "free_abelian":
                phi = FactorAut.matrix(G, rng.choice([[[0, 1], [1, 0]], [[1, 1], [0, 1]], [[1, 0], [0, -1]]]))
            else:
                phi = q8_rotation(G)
            step = factor_aut(P, i, phi)
        else:
            perm = list(range(P.n))
            a, b = rng.choice([(0, 1), (2, 3)])
            perm[a], perm[b] = b, a
            step = permutation_aut(P, perm)
        out = compose(out, step)
    return out
