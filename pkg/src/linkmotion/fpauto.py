"""Symmetric automorphisms of a free product H_1 * ... * H_n.

An automorphism in the symmetric class sends each factor onto a conjugate
of a factor. It is stored as a permutation ``perm``, factor isomorphisms
``phi_i : H_i -> H_perm(i)`` and conjugators ``w_i``, acting by

    x in H_i  |->  w_i * phi_i(x) * w_i^-1        (image placed in H_perm(i))

In canonical form no ``w_i`` ends with a syllable of ``H_perm(i)``; such a
syllable is folded into ``phi_i`` as an inner twist. The normalizer of a
factor in a free product is the factor itself, so canonical forms of equal
automorphisms coincide and equality is syntactic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    ContextMismatch,
    IndexOutOfRange,
    KindMismatch,
    MalformedPayload,
    NotAnAutomorphism,
    Unsupported,
)
from .freeprod import (
    FINITE,
    FREE,
    FREE_ABELIAN,
    FactorElement,
    FactorGroup,
    FreeProduct,
    Word,
    free_inverse,
    free_reduce,
)


# --------------------------------------------------------------------------
# automorphisms of a single factor


def _substitute(images: Sequence[tuple[int, ...]], word: Sequence[int]) -> tuple[int, ...]:
    out: list[int] = []
    for a in word:
        img = images[a - 1] if a > 0 else free_inverse(images[-a - 1])
        out.extend(img)
    return free_reduce(out)


def _mat_mul(a, b):
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0])))
        for i in range(len(a))
    )


def _mat_vec(m, v):
    return tuple(sum(m[i][k] * v[k] for k in range(len(v))) for i in range(len(m)))


def _identity_matrix(r):
    return tuple(tuple(int(i == j) for j in range(r)) for i in range(r))


def _integer_inverse(m) -> tuple[tuple[int, ...], ...]:
    r = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(r)] for i, row in enumerate(m)]
    for col in range(r):
        pivot = next((i for i in range(col, r) if aug[i][col] != 0), None)
        if pivot is None:
            raise NotAnAutomorphism(f"matrix {m} is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for i in range(r):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    inv = [row[r:] for row in aug]
    if any(x.denominator != 1 for row in inv for x in row):
        raise NotAnAutomorphism(f"matrix {m} has determinant other than +-1")
    return tuple(tuple(int(x) for x in row) for row in inv)


def _nielsen_inverse(images: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
    """Invert a free-group endomorphism by greedy Nielsen length reduction.

    Elementary moves ``u_k -> u_k u_j^e`` / ``u_j^e u_k`` are applied while they
    shorten the tuple; the same moves are mirrored on a tracker ``N`` so that
    ``phi o N`` ends as a signed letter permutation ``sigma``, and then
    ``phi^-1 = N o sigma^-1``.
    """
    r = len(images)
    u = [tuple(x) for x in images]
    track = [(k + 1,) for k in range(r)]
    while True:
        best = None
        total = sum(map(len, u))
        for k in range(r):
            for j in range(r):
                if j == k:
                    continue
                for e in (1, -1):
                    uj = u[j] if e == 1 else free_inverse(u[j])
                    for left in (False, True):
                        cand = free_reduce(uj + u[k]) if left else free_reduce(u[k] + uj)
                        gain = len(u[k]) - len(cand)
                        if gain > 0 and (best is None or gain > best[0]):
                            best = (gain, k, j, e, left, cand)
        if best is None:
            break
        _, k, j, e, left, cand = best
        u[k] = cand
        tj = track[j] if e == 1 else free_inverse(track[j])
        track[k] = free_reduce(tj + track[k]) if left else free_reduce(track[k] + tj)
        if sum(map(len, u)) >= total:
            break
    if any(len(x) != 1 for x in u) or sorted(abs(x[0]) for x in u) != list(range(1, r + 1)):
        raise NotAnAutomorphism(
            f"could not invert free-factor map {images}; supply inverse images explicitly"
        )
    # phi(N(x_k)) = u_k = letter s_k, so phi^-1(s_k) = N(x_k)
    inverse = [None] * r
    for k, (s,) in enumerate(u):
        img = track[k] if s > 0 else free_inverse(track[k])
        inverse[abs(s) - 1] = img
    return tuple(inverse)


@dataclass(frozen=True)
class FactorAut:
    """An isomorphism between factors with identical structure.

    ``data`` holds generator images (free), an integer matrix acting on
    column exponent vectors (free abelian) or an element permutation
    (finite). ``inverse_data`` is the matching inverse.
    """

    kind: str
    data: tuple
    inverse_data: tuple = field(compare=False, repr=False)

    @classmethod
    def identity(cls, group: FactorGroup) -> "FactorAut":
        if group.kind == FREE:
            d = tuple((k + 1,) for k in range(group.rank))
        elif group.kind == FREE_ABELIAN:
            d = _identity_matrix(group.rank)
        else:
            d = tuple(range(group.order))
        return cls(group.kind, d, d)

    @classmethod
    def free(cls, group: FactorGroup, images, inverse_images=None) -> "FactorAut":
        if group.kind != FREE:
            raise KindMismatch("free images given for a non-free factor")
        imgs = tuple(group.check(tuple(w)) for w in images)
        if len(imgs) != group.rank:
            raise MalformedPayload(f"need {group.rank} generator images, got {len(imgs)}")
        if inverse_images is None:
            inv = _nielsen_inverse(imgs)
        else:
            inv = tuple(group.check(tuple(w)) for w in inverse_images)
        for k in range(group.rank):
            if _substitute(imgs, _substitute(inv, (k + 1,))) != (k + 1,) or _substitute(
                inv, _substitute(imgs, (k + 1,))
            ) != (k + 1,):
                raise NotAnAutomorphism("supplied inverse images do not invert the map")
        return cls(FREE, imgs, inv)

    @classmethod
    def matrix(cls, group: FactorGroup, m) -> "FactorAut":
        if group.kind != FREE_ABELIAN:
            raise KindMismatch("matrix given for a non-abelian factor")
        m = tuple(tuple(int(x) for x in row) for row in m)
        r = group.rank
        if len(m) != r or any(len(row) != r for row in m):
            raise MalformedPayload(f"need a {r}x{r} matrix")
        return cls(FREE_ABELIAN, m, _integer_inverse(m))

    @classmethod
    def permutation(cls, group: FactorGroup, perm) -> "FactorAut":
        if group.kind != FINITE:
            raise KindMismatch("element permutation given for an infinite factor")
        perm = tuple(int(x) for x in perm)
        k = group.order
        if sorted(perm) != list(range(k)):
            raise NotAnAutomorphism("not a permutation of the elements")
        t = group.table
        for a in range(k):
            for b in range(k):
                if perm[t[a][b]] != t[perm[a]][perm[b]]:
                    raise NotAnAutomorphism(f"permutation is not a homomorphism at ({a}, {b})")
        inv = [0] * k
        for a, b in enumerate(perm):
            inv[b] = a
        return cls(FINITE, perm, tuple(inv))

    @classmethod
    def conjugation(cls, group: FactorGroup, c) -> "FactorAut":
        """Inner automorphism ``x -> c x c^-1`` of one factor."""
        if group.kind == FREE:
            ci = free_inverse(c)
            imgs = tuple(free_reduce(c + (k + 1,) + ci) for k in range(group.rank))
            invs = tuple(free_reduce(ci + (k + 1,) + c) for k in range(group.rank))
            return cls(FREE, imgs, invs)
        if group.kind == FREE_ABELIAN:
            return cls.identity(group)
        t, ci = group.table, group.inv(c)
        perm = tuple(t[t[c][x]][ci] for x in range(group.order))
        inv = tuple(t[t[ci][x]][c] for x in range(group.order))
        return cls(FINITE, perm, inv)

    def __call__(self, x):
        if self.kind == FREE:
            return _substitute(self.data, x)
        if self.kind == FREE_ABELIAN:
            return _mat_vec(self.data, x)
        return self.data[x]

    def compose(self, inner: "FactorAut") -> "FactorAut":
        """``self o inner``."""
        if self.kind == FREE:
            d = tuple(_substitute(self.data, w) for w in inner.data)
            inv = tuple(_substitute(inner.inverse_data, w) for w in self.inverse_data)
        elif self.kind == FREE_ABELIAN:
            d = _mat_mul(self.data, inner.data)
            inv = _mat_mul(inner.inverse_data, self.inverse_data)
        else:
            d = tuple(self.data[x] for x in inner.data)
            inv = tuple(inner.inverse_data[x] for x in self.inverse_data)
        return FactorAut(self.kind, d, inv)

    def inverse(self) -> "FactorAut":
        return FactorAut(self.kind, self.inverse_data, self.data)

    def is_identity(self) -> bool:
        if self.kind == FREE:
            return all(w == (k + 1,) for k, w in enumerate(self.data))
        if self.kind == FREE_ABELIAN:
            return self.data == _identity_matrix(len(self.data))
        return all(x == k for k, x in enumerate(self.data))

    def key(self) -> tuple:
        return (self.kind, self.data)


def inner_twist_root(group: FactorGroup, phi: FactorAut):
    """Some ``c`` with ``phi`` equal to conjugation by ``c``, or ``None``."""
    if phi.is_identity():
        return group.identity()
    if group.kind == FREE_ABELIAN or (group.kind == FREE and group.rank == 1):
        return None
    if group.kind == FINITE:
        for c in group.elements():
            if FactorAut.conjugation(group, c) == phi:
                return c
        return None
    # free of rank >= 2: phi(x_1) = c x_1 c^-1 forces c to be a prefix of phi(x_1)
    img = phi.data[0]
    for k in range(len(img) + 1):
        c = img[:k]
        if FactorAut.conjugation(group, c) == phi:
            return c
    return None


# --------------------------------------------------------------------------
# symmetric automorphisms of the free product


@dataclass(frozen=True)
class PartialConjugation:
    """``X(g, H_j)^sign``: conjugate the support factor ``j`` by ``g``."""

    acting: FactorElement
    support: int
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def self_acting(self) -> bool:
        return self.acting.factor == self.support


@dataclass(frozen=True)
class SymmetricFPAut:
    product: FreeProduct = field(repr=False)
    perm: tuple[int, ...]
    factor_auts: tuple[FactorAut, ...]
    conjugators: tuple[Word, ...]

    def __call__(self, u: Word) -> Word:
        return apply(self, u)

    def __matmul__(self, other: "SymmetricFPAut") -> "SymmetricFPAut":
        return compose(self, other)

    def key(self) -> tuple:
        """Hashable fingerprint; equal keys iff equal automorphisms."""
        return (
            self.perm,
            tuple(phi.data for phi in self.factor_auts),
            tuple(w.key() for w in self.conjugators),
        )

    def __hash__(self):
        return hash(self.key())

    def is_identity(self) -> bool:
        return (
            all(p == i for i, p in enumerate(self.perm))
            and all(phi.is_identity() for phi in self.factor_auts)
            and all(not w.syllables for w in self.conjugators)
        )

    def generator_images(self) -> list[list[Word]]:
        """Images of every factor generator, grouped by factor."""
        P = self.product
        return [
            [apply(self, P.generator_word(i, k)) for k in range(P.factors[i].rank)]
            for i in range(P.n)
        ]


def _canonical(product: FreeProduct, perm, auts, conjugators) -> SymmetricFPAut:
    auts = list(auts)
    ws = list(conjugators)
    for i, w in enumerate(ws):
        target = perm[i]
        prefix, c = product.strip_trailing(w, target)
        if prefix is not w:
            group = product.factors[target]
            auts[i] = FactorAut.conjugation(group, c).compose(auts[i])
            ws[i] = prefix
    return SymmetricFPAut(product, tuple(perm), tuple(auts), tuple(ws))


def make_aut(product: FreeProduct, perm, factor_auts, conjugators) -> SymmetricFPAut:
    """Build and canonicalize an automorphism from raw data."""
    n = product.n
    perm = tuple(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm} is not a permutation of {n} factors")
    for i in range(n):
        if not product.factors[i].same_structure(product.factors[perm[i]]):
            raise KindMismatch(f"factor {i + 1} and factor {perm[i] + 1} have different data")
    factor_auts = tuple(factor_auts)
    conjugators = tuple(conjugators)
    if len(factor_auts) != n or len(conjugators) != n:
        raise ValueError("need one factor automorphism and one conjugator per factor")
    for i, phi in enumerate(factor_auts):
        if phi.kind != product.factors[i].kind:
            raise KindMismatch(f"factor automorphism {i + 1} has the wrong kind")
    for w in conjugators:
        product._own(w)
    return _canonical(product, perm, factor_auts, conjugators)


def identity_aut(product: FreeProduct) -> SymmetricFPAut:
    return SymmetricFPAut(
        product,
        tuple(range(product.n)),
        tuple(FactorAut.identity(g) for g in product.factors),
        (product.identity(),) * product.n,
    )


def partial_conjugation_aut(product: FreeProduct, pc: PartialConjugation) -> SymmetricFPAut:
    """The automorphism ``X(g, H_j)^sign``."""
    g = pc.acting
    if not 0 <= pc.support < product.n:
        raise IndexOutOfRange(f"support {pc.support} out of range")
    word = product.letter(g.factor, g.payload)
    if pc.sign == -1:
        word = product.invert(word)
    if not word.syllables:
        raise ValueError("acting element of a partial conjugation must be nontrivial")
    base = identity_aut(product)
    ws = list(base.conjugators)
    ws[pc.support] = word
    return _canonical(product, base.perm, base.factor_auts, ws)


def factor_aut(product: FreeProduct, i: int, phi: FactorAut) -> SymmetricFPAut:
    base = identity_aut(product)
    auts = list(base.factor_auts)
    if phi.kind != product.factors[i].kind:
        raise KindMismatch(f"factor {i + 1} has kind {product.factors[i].kind}")
    auts[i] = phi
    return SymmetricFPAut(product, base.perm, tuple(auts), base.conjugators)


def permutation_aut(product: FreeProduct, perm: Sequence[int]) -> SymmetricFPAut:
    """Move ``H_i`` onto ``H_perm(i)`` by the identity on underlying data."""
    base = identity_aut(product)
    return make_aut(product, perm, base.factor_auts, base.conjugators)


def inner_aut(product: FreeProduct, w: Word) -> SymmetricFPAut:
    base = identity_aut(product)
    return _canonical(product, base.perm, base.factor_auts, (w,) * product.n)


def make_generator_aut(product: FreeProduct, gen) -> SymmetricFPAut:
    """Dispatch on a partial conjugation, ``(i, FactorAut)`` pair or permutation."""
    if isinstance(gen, PartialConjugation):
        return partial_conjugation_aut(product, gen)
    if isinstance(gen, tuple) and len(gen) == 2 and isinstance(gen[1], FactorAut):
        return factor_aut(product, gen[0], gen[1])
    return permutation_aut(product, gen)


def _check_same(a: SymmetricFPAut, b) -> None:
    if a.product is not b.product and a.product != b.product:
        raise ContextMismatch("automorphism and argument live over different free products")


def apply(aut: SymmetricFPAut, u: Word) -> Word:
    _check_same(aut, u)
    P = aut.product
    out = P.identity()
    for s in u.syllables:
        i = s.factor
        w = aut.conjugators[i]
        img = P.letter(aut.perm[i], aut.factor_auts[i](s.payload))
        out = P.multiply(out, P.conjugate(w, img))
    return out


def compose(outer: SymmetricFPAut, inner: SymmetricFPAut) -> SymmetricFPAut:
    """``outer o inner`` (apply ``inner`` first)."""
    _check_same(outer, inner)
    P = outer.product
    perm = tuple(outer.perm[inner.perm[i]] for i in range(P.n))
    auts = tuple(outer.factor_auts[inner.perm[i]].compose(inner.factor_auts[i]) for i in range(P.n))
    ws = tuple(
        P.multiply(apply(outer, inner.conjugators[i]), outer.conjugators[inner.perm[i]])
        for i in range(P.n)
    )
    return _canonical(P, perm, auts, ws)


def _factorwise_inverse(aut: SymmetricFPAut) -> SymmetricFPAut:
    """Inverse of the conjugator-free part (perm and factor maps only)."""
    P = aut.product
    n = P.n
    inv_perm = [0] * n
    for i, t in enumerate(aut.perm):
        inv_perm[t] = i
    auts = tuple(aut.factor_auts[inv_perm[k]].inverse() for k in range(n))
    return SymmetricFPAut(P, tuple(inv_perm), auts, (P.identity(),) * n)


def inverse(aut: SymmetricFPAut) -> SymmetricFPAut:
    """Invert by peeling off partial conjugations that shorten the conjugators.

    Write ``aut = A o F`` with ``F`` conjugator-free. ``A`` has identity
    permutation; while some conjugator ``v_k`` begins with ``v_i y`` for a
    syllable ``y`` of ``H_i``, right-composing with ``X(c, H_k)``, where
    ``phi_i(c) = y^-1``, shortens ``v_k``. When all conjugators are empty
    the remainder is conjugator-free and inverts factorwise.
    """
    P = aut.product
    F = SymmetricFPAut(P, aut.perm, aut.factor_auts, (P.identity(),) * P.n)
    F_inv = _factorwise_inverse(F)
    current = compose(aut, F_inv)
    peeled: list[SymmetricFPAut] = []
    while any(w.syllables for w in current.conjugators):
        step = _peel_step(current)
        if step is None:
            raise Unsupported("could not invert automorphism by conjugator peeling")
        peeled.append(step)
        current = compose(current, step)
    result = _factorwise_inverse(current)
    for step in reversed(peeled):
        result = compose(step, result)
    return compose(F_inv, result)


def _peel_step(aut: SymmetricFPAut) -> SymmetricFPAut | None:
    P = aut.product
    vs = aut.conjugators
    best = None
    for k, vk in enumerate(vs):
        syl = vk.syllables
        for i, vi in enumerate(vs):
            if i == k:
                continue
            m = len(vi.syllables)
            if len(syl) > m and syl[:m] == vi.syllables and syl[m].factor == i:
                y = syl[m].payload
                group = P.factors[i]
                c = aut.factor_auts[i].inverse()(group.inv(y))
                cand = partial_conjugation_aut(P, PartialConjugation(FactorElement(i, c), k))
                gain = len(syl)
                if best is None or gain > best[0]:
                    best = (gain, cand)
    return None if best is None else best[1]


def is_inner(aut: SymmetricFPAut) -> Word | None:
    """Return ``w`` with ``aut`` equal to conjugation by ``w``, else ``None``."""
    P = aut.product
    if P.n < 2:
        raise Unsupported("inner-ness test needs at least two factors")
    if any(p != i for i, p in enumerate(aut.perm)):
        return None
    targets = []
    for i in range(P.n):
        # w^-1 w_i must lie in H_i and phi_i must be conjugation by an element of H_i
        if inner_twist_root(P.factors[i], aut.factor_auts[i]) is None:
            return None
        targets.append((aut.conjugators[i], i))
    w = P.solve_common_coset(targets)
    if w is None:
        return None
    return w if inner_aut(P, w) == aut else None


# --------------------------------------------------------------------------
# Fouxe-Rabinovitch relations


@dataclass
class RelationReport:
    checked: dict[str, int] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def X(product: FreeProduct, g: FactorElement, j: int) -> SymmetricFPAut:
    return partial_conjugation_aut(product, PartialConjugation(g, j))


def relation_one(P: FreeProduct, g: FactorElement, g2: FactorElement, j: int) -> bool:
    """``X(g,H_j) X(g',H_j) = X(gg',H_j)`` with the product read left to right.

    ``compose`` applies its right argument first, so the relation is checked
    as ``X(g',H_j) o X(g,H_j) = X(gg',H_j)``; for abelian ``H_i`` the order
    does not matter.
    """
    lhs = compose(X(P, g2, j), X(P, g, j))
    gg = P.factors[g.factor].mul(g.payload, g2.payload)
    if P.factors[g.factor].is_identity(gg):
        return lhs.is_identity()
    return lhs == X(P, FactorElement(g.factor, gg), j)


def relation_two(P: FreeProduct, g: FactorElement, j: int, g2: FactorElement, j2: int) -> bool:
    """``[X(g,H_j), X(g',H_j')] = 1`` for ``j != j'`` and ``{i,i'}`` disjoint from ``{j,j'}``."""
    a, b = X(P, g, j), X(P, g2, j2)
    return compose(a, b) == compose(b, a)


def relation_three(P: FreeProduct, g: FactorElement, j: int, g2: FactorElement) -> bool:
    """``[X(g,H_j) X(g,H_k), X(g',H_j)] = 1`` for ``g in H_i``, ``g' in H_k``, distinct ``i,j,k``."""
    k = g2.factor
    a = compose(X(P, g, j), X(P, g, k))
    b = X(P, g2, j)
    return compose(a, b) == compose(b, a)


def check_fr_relations(product: FreeProduct, trials: int = 200, seed: int = 0) -> RelationReport:
    """Randomly instantiate the three families and compare both sides."""
    rng = random.Random(seed)
    P = product
    n = P.n
    report = RelationReport()

    def elem(i):
        return FactorElement(i, P.factors[i].random_element(rng, nontrivial=True))

    if n >= 2:
        for _ in range(trials):
            i, j = rng.sample(range(n), 2)
            g, g2 = elem(i), elem(i)
            if not relation_one(P, g, g2, j):
                report.violations.append(f"relation 1 fails: g={g}, g'={g2}, j={j + 1}")
        report.checked["1"] = trials
    if n >= 3:
        for _ in range(trials):
            j, j2 = rng.sample(range(n), 2)
            rest = [x for x in range(n) if x not in (j, j2)]
            i, i2 = rng.choice(rest), rng.choice(rest)
            g, g2 = elem(i), elem(i2)
            if not relation_two(P, g, j, g2, j2):
                report.violations.append(f"relation 2 fails: g={g}, j={j + 1}, g'={g2}, j'={j2 + 1}")
        report.checked["2"] = trials
        for _ in range(trials):
            i, j, k = rng.sample(range(n), 3)
            g, g2 = elem(i), elem(k)
            if not relation_three(P, g, j, g2):
                report.violations.append(f"relation 3 fails: g={g}, j={j + 1}, g'={g2}")
        report.checked["3"] = trials
    return report
