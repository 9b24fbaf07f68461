"""The motion group of a split link as ``(FR_0(L) x| G_L) x| P_L``.

Elements are triples ``f . g . p``: a word ``f`` of partial conjugations
``chi(h, L_j)`` with ``h`` in ``H_i``, ``i != j``; a tuple ``g`` holding one
motion-group payload per piece; and a permutation ``p`` of isotopic pieces,
stored as ``p[i] = image of i``. With ``beta`` relabelling by ``p``,
``alpha`` permuting coordinates and ``gamma`` applying the per-piece action
to acting elements, the product is

    (f_x gamma_{g_x}(beta_{p_x}(f_y)), g_x alpha_{p_x}(g_y), p_x o p_y).

Equality of the FR_0 part is decided through the Dahm image, which is
faithful on FR_0.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import fpauto
from .catalog import LinkSpec, validate
from .errors import InvalidSpec, MissingSelfConjugation, SpecMismatch, Unsupported
from .fpauto import PartialConjugation, SymmetricFPAut
from .freeprod import FactorElement, Word

R3 = "r3"
S3 = "s3"


@dataclass(frozen=True, eq=False)
class MotionElement:
    group: "MotionGroup" = field(repr=False)
    fr: tuple[PartialConjugation, ...]
    g: tuple
    p: tuple[int, ...]
    _dahm: list = field(default_factory=list, repr=False, compare=False)

    def __mul__(self, other: "MotionElement") -> "MotionElement":
        return self.group.multiply(self, other)

    def inverse(self) -> "MotionElement":
        return self.group.inverse(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MotionElement):
            return NotImplemented
        return self.group.equals(self, other)

    def __hash__(self) -> int:
        return hash(self.group.key(self))

    def __str__(self) -> str:
        from .grammar import format_element

        return format_element(self)


@dataclass(frozen=True)
class ProbeResult:
    closed: bool
    order: int
    elements: tuple[MotionElement, ...] = field(repr=False, default=())

    @property
    def status(self) -> str:
        return "Closed" if self.closed else "ExceededBound"

    def __str__(self) -> str:
        if self.closed:
            return f"Closed order={self.order}"
        return f"ExceededBound bound={self.order}"


def _perm_compose(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """``a o b``."""
    return tuple(a[b[i]] for i in range(len(b)))


def _perm_inverse(a: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(a)
    for i, t in enumerate(a):
        out[t] = i
    return tuple(out)


class MotionGroup:
    """Arithmetic in the motion group of a validated :class:`LinkSpec`."""

    def __init__(self, spec: LinkSpec, check: bool = True):
        if check:
            problems = validate(spec)
            if problems:
                raise InvalidSpec(problems)
        self.spec = spec
        self.product = spec.product
        self.n = spec.n
        self._id_perm = tuple(range(self.n))

    # -- construction ----------------------------------------------------

    def _own(self, x: MotionElement):
        if x.group is not self and x.group.spec != self.spec:
            raise SpecMismatch("motion elements belong to different link specifications")

    def make(self, fr: Iterable[PartialConjugation] = (), g=None, p=None) -> MotionElement:
        fr = tuple(fr)
        for pc in fr:
            if pc.self_acting:
                raise ValueError("FR_0 entries need acting factor different from support")
            self.product.element(pc.acting.factor, pc.acting.payload)
            if not 0 <= pc.support < self.n:
                raise SpecMismatch(f"support {pc.support + 1} out of range")
        if g is None:
            g = tuple(piece.motion.identity() for piece in self.spec.pieces)
        else:
            g = tuple(piece.motion.check(x) for piece, x in zip(self.spec.pieces, g, strict=True))
        p = self._id_perm if p is None else tuple(p)
        if not self.spec.allows(p):
            raise SpecMismatch(f"permutation {p} does not preserve isotopy classes")
        # drop trivial partial conjugations so they never reach the Dahm map
        fr = tuple(pc for pc in fr if not self.product.factors[pc.acting.factor].is_identity(pc.acting.payload))
        return MotionElement(self, fr, g, p)

    def identity(self) -> MotionElement:
        return self.make()

    def chi(self, h: FactorElement, j: int, sign: int = 1) -> MotionElement:
        """``chi(h, L_j)``; pieces are 0-based here."""
        return self.make([PartialConjugation(h, j, sign)])

    def chi_set(self, h: FactorElement, support: Iterable[int]) -> MotionElement:
        """``chi(h, A)``, the product of ``chi(h, L_j)`` over ``j`` in ``A``."""
        return self.make([PartialConjugation(h, j) for j in sorted(support)])

    def motion_element(self, i: int, payload) -> MotionElement:
        g = list(self.identity().g)
        g[i] = payload
        return self.make(g=g)

    def motion_generator(self, i: int, k: int, exponent: int = 1) -> MotionElement:
        return self.motion_element(i, self.spec.pieces[i].motion.generator(k, exponent))

    def permutation(self, perm: Sequence[int]) -> MotionElement:
        return self.make(p=perm)

    def transposition(self, a: int, b: int) -> MotionElement:
        perm = list(self._id_perm)
        perm[a], perm[b] = b, a
        return self.make(p=perm)

    # -- group law ---------------------------------------------------------

    def _move(self, pc: PartialConjugation, g, p) -> PartialConjugation:
        """``gamma_g(beta_p(pc))``."""
        i = p[pc.acting.factor]
        payload = self.spec.pieces[i].psi(g[i])(pc.acting.payload)
        return PartialConjugation(FactorElement(i, payload), p[pc.support], pc.sign)

    def multiply(self, x: MotionElement, y: MotionElement) -> MotionElement:
        self._own(x)
        self._own(y)
        fr = x.fr + tuple(self._move(pc, x.g, x.p) for pc in y.fr)
        g_moved = [None] * self.n
        for i in range(self.n):
            g_moved[x.p[i]] = y.g[i]
        g = tuple(
            piece.motion.mul(a, b) for piece, a, b in zip(self.spec.pieces, x.g, g_moved)
        )
        z = MotionElement(self, fr, g, _perm_compose(x.p, y.p))
        if x._dahm and y._dahm:
            z._dahm.append(fpauto.compose(x._dahm[0], y._dahm[0]))
        return z

    def inverse(self, x: MotionElement) -> MotionElement:
        self._own(x)
        p_inv = _perm_inverse(x.p)
        g_inv = tuple(piece.motion.inv(a) for piece, a in zip(self.spec.pieces, x.g))
        f_inv = tuple(PartialConjugation(pc.acting, pc.support, -pc.sign) for pc in reversed(x.fr))
        parts = [
            MotionElement(self, (), self.identity().g, p_inv),
            MotionElement(self, (), g_inv, self._id_perm),
            MotionElement(self, f_inv, self.identity().g, self._id_perm),
        ]
        return self.multiply(self.multiply(parts[0], parts[1]), parts[2])

    def product_of(self, elements: Iterable[MotionElement]) -> MotionElement:
        out = self.identity()
        for e in elements:
            out = self.multiply(out, e)
        return out

    def power(self, x: MotionElement, k: int) -> MotionElement:
        base = x if k >= 0 else self.inverse(x)
        out = self.identity()
        for _ in range(abs(k)):
            out = self.multiply(out, base)
        return out

    def retraction(self, x: MotionElement) -> tuple:
        """The G_L coordinate of ``x``."""
        return x.g

    # -- Dahm homomorphism ---------------------------------------------------

    def dahm(self, x: MotionElement) -> SymmetricFPAut:
        self._own(x)
        if not x._dahm:
            P = self.product
            out = fpauto.identity_aut(P)
            for pc in x.fr:
                out = fpauto.compose(out, fpauto.partial_conjugation_aut(P, pc))
            for i, piece in enumerate(self.spec.pieces):
                if not piece.motion.is_identity(x.g[i]):
                    out = fpauto.compose(out, fpauto.factor_aut(P, i, piece.psi(x.g[i])))
            if x.p != self._id_perm:
                out = fpauto.compose(out, fpauto.permutation_aut(P, x.p))
            x._dahm.append(out)
        return x._dahm[0]

    def key(self, x: MotionElement) -> tuple:
        """Hashable key; equal keys iff equal elements.

        ``D(x) = D(f) o D(g) o D(p)`` with the last two determined by ``g``
        and ``p``, so ``D(x)`` together with ``(g, p)`` pins down ``D(f)``.
        """
        return (x.p, x.g, self.dahm(x).key())

    def equals(self, x: MotionElement, y: MotionElement) -> bool:
        self._own(x)
        self._own(y)
        return self.key(x) == self.key(y)

    # -- inner automorphisms and the S^3 quotient ----------------------------

    def _require_iota(self):
        for piece in self.spec.pieces:
            if piece.self_conjugation is None:
                raise MissingSelfConjugation(f"piece {piece.id} has no self_conjugation data")

    def iota(self, w: Word) -> MotionElement:
        """The motion dragging the basepoint along ``w``; its Dahm image is conjugation by ``w``."""
        self._require_iota()
        if w.product is not self.product and w.product != self.product:
            raise SpecMismatch("word lives over a different free product")
        out = self.identity()
        for s in w.syllables:
            i = s.factor
            fr = [PartialConjugation(s, j) for j in range(self.n) if j != i]
            g = list(self.identity().g)
            g[i] = self.spec.pieces[i].iota(s.payload)
            out = self.multiply(out, MotionElement(self, tuple(fr), tuple(g), self._id_perm))
        return out

    def equals_in_s3(self, x: MotionElement, y: MotionElement) -> bool:
        self._own(x)
        self._own(y)
        self._require_iota()
        if self.n < 2:
            raise Unsupported("the S^3 comparison needs at least two pieces")
        if x.p != y.p:
            return False
        z = self.multiply(x, self.inverse(y))
        w = fpauto.is_inner(self.dahm(z))
        if w is None:
            return False
        return self.equals(z, self.iota(w))

    def s3_representative(self, x: MotionElement) -> MotionElement:
        """Canonical member of the coset ``iota(H_L) x``.

        Multiplying by ``iota(u)`` turns the conjugators ``w_k`` of ``D(x)``
        into ``u w_k`` before re-canonicalization. Choosing ``u`` so that
        ``u w_0`` is as short as the coset allows, with the ambiguity in
        ``H_{pi(0)}`` fixed by ``w_1``, gives one representative per coset.
        """
        self._require_iota()
        if self.n < 2:
            raise Unsupported("the S^3 comparison needs at least two pieces")
        P = self.product
        d = self.dahm(x)
        w0, w1 = d.conjugators[0], d.conjugators[1]
        q = P.multiply(P.invert(w0), w1)
        t = d.perm[0]
        c = P.identity()
        if q.syllables and q.syllables[0].factor == t:
            c = P.invert(P.letter(t, q.syllables[0].payload))
        u = P.multiply(c, P.invert(w0))
        if not u.syllables:
            return x
        rep = self.multiply(self.iota(u), x)
        if not rep._dahm:
            rep._dahm.append(fpauto.compose(fpauto.inner_aut(P, u), d))
        return rep

    def s3_key(self, x: MotionElement) -> tuple:
        return self.key(self.s3_representative(x))

    # -- finiteness probe ----------------------------------------------------

    def generators(self) -> list[MotionElement]:
        """chi(s, L_j) for factor generators s of H_i (i != j), G_i generators, transposition lifts."""
        out = []
        for i, piece in enumerate(self.spec.pieces):
            H = piece.complement
            for k in range(H.rank):
                s = FactorElement(i, H.generator(k))
                for j in range(self.n):
                    if j != i:
                        out.append(self.chi(s, j))
        for i, piece in enumerate(self.spec.pieces):
            for k in range(piece.motion.rank):
                out.append(self.motion_generator(i, k))
        for a, b in self.spec.transpositions():
            out.append(self.transposition(a, b))
        return out

    def finiteness_probe(self, mode: str = R3, bound: int = 10000) -> ProbeResult:
        """Breadth-first closure of the identity under left multiplication by generators."""
        if bound < 1:
            raise ValueError("bound must be positive")
        if mode == S3:
            self._require_iota()
            if self.n < 2:
                raise Unsupported("the S^3 comparison needs at least two pieces")
            keyfn = self.s3_key
        elif mode == R3:
            keyfn = self.key
        else:
            raise ValueError(f"unknown mode {mode!r}")
        gens = self.generators()
        for gen in gens:
            self.dahm(gen)
        start = self.identity()
        self.dahm(start)
        seen = {keyfn(start): start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for gen in gens:
                y = self.multiply(gen, x)
                k = keyfn(y)
                if k in seen:
                    continue
                if len(seen) >= bound:
                    return ProbeResult(False, bound)
                seen[k] = y
                queue.append(y)
        return ProbeResult(True, len(seen), tuple(seen.values()))


def finiteness_probe(spec: LinkSpec, mode: str = R3, bound: int = 10000) -> ProbeResult:
    return MotionGroup(spec).finiteness_probe(mode, bound)
