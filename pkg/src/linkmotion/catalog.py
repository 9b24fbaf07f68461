"""Link pieces, link specifications and their validation.

A piece carries its complement group ``H_i``, its motion group ``G_i``, the
action of ``G_i`` on ``H_i`` induced by motions (given on generators of
``G_i``) and optionally the self-conjugation map sending generators of
``H_i`` to the element of ``G_i`` that realises conjugation by them.
"""

from __future__ import annotations

import itertools
from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .errors import EmptyLink, MotionGroupError, UnknownPiece
from .fpauto import FactorAut
from .freeprod import FINITE, FREE, FREE_ABELIAN, FactorGroup, FreeProduct

# quaternion units 1, i, j, k; element index = 2 * unit + (1 if negative)
_UNIT_PRODUCTS = {
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}  # fmt: skip

Q8_NAMES = ("1", "-1", "i", "-i", "j", "-j", "k", "-k")


def quaternion_table() -> list[list[int]]:
    table = []
    for a in range(8):
        row = []
        for b in range(8):
            sign_ab, unit = _UNIT_PRODUCTS[(a // 2, b // 2)]
            sign = sign_ab * (-1 if a % 2 else 1) * (-1 if b % 2 else 1)
            row.append(2 * unit + (1 if sign < 0 else 0))
        table.append(row)
    return table


def cyclic_table(k: int) -> list[list[int]]:
    return [[(a + b) % k for b in range(k)] for a in range(k)]


@dataclass(frozen=True)
class PieceSpec:
    """One piece ``L_i`` of a split link together with its group data.

    ``dahm_action`` is aligned with the generators of ``motion`` and
    ``self_conjugation`` (when given) with the generators of ``complement``.
    """

    id: str
    isotopy_class: str
    components: int
    complement: FactorGroup
    motion: FactorGroup
    dahm_action: tuple[FactorAut, ...]
    self_conjugation: tuple | None = None

    def structure_key(self) -> tuple:
        return (
            self.complement.structure_key(),
            self.motion.structure_key(),
            tuple(phi.key() for phi in self.dahm_action),
            self.self_conjugation,
        )

    def problems(self) -> list[str]:
        out = []
        if self.motion.kind == FREE:
            out.append(f"piece {self.id}: motion group must be free abelian or finite")
            return out
        if len(self.dahm_action) != self.motion.rank:
            out.append(f"piece {self.id}: dahm_action needs one automorphism per motion generator")
            return out
        for phi in self.dahm_action:
            if phi.kind != self.complement.kind:
                out.append(f"piece {self.id}: dahm_action entry of kind {phi.kind} for a {self.complement.kind} complement")
                return out
        try:
            self._psi_table
        except MotionGroupError as exc:
            out.append(f"piece {self.id}: {exc}")
            return out
        if self.self_conjugation is not None:
            try:
                self._check_self_conjugation()
            except MotionGroupError as exc:
                out.append(f"piece {self.id}: {exc}")
        return out

    # -- motion action psi: G_i -> Aut(H_i) ----------------------------

    @cached_property
    def _psi_table(self) -> dict:
        G, H = self.motion, self.complement
        gens = list(self.dahm_action)
        if G.kind == FREE_ABELIAN:
            for a, b in itertools.combinations(gens, 2):
                if a.compose(b) != b.compose(a):
                    raise MotionGroupError("dahm_action images of motion generators do not commute")
            return {}
        psi = {G.identity_index: FactorAut.identity(H)}
        queue = deque([G.identity_index])
        while queue:
            a = queue.popleft()
            for k, s in enumerate(G.generator_elements):
                b = G.mul(a, s)
                img = psi[a].compose(gens[k])
                if b not in psi:
                    psi[b] = img
                    queue.append(b)
        for a in G.elements():
            for k, s in enumerate(G.generator_elements):
                if psi[G.mul(a, s)] != psi[a].compose(gens[k]):
                    raise MotionGroupError(
                        "dahm_action does not extend to a homomorphism "
                        f"(fails at element {a}, generator {G.generator_names[k]})"
                    )
        return psi

    def psi(self, g) -> FactorAut:
        """Automorphism of the complement induced by the motion ``g``."""
        G = self.motion
        if G.kind == FINITE:
            return self._psi_table[g]
        self._psi_table
        result = FactorAut.identity(self.complement)
        for k, e in enumerate(g):
            step = self.dahm_action[k] if e > 0 else self.dahm_action[k].inverse()
            for _ in range(abs(e)):
                result = result.compose(step)
        return result

    # -- self-conjugation iota: H_i -> G_i -------------------------------

    @cached_property
    def _iota_table(self) -> dict | None:
        if self.self_conjugation is None:
            return None
        H, G = self.complement, self.motion
        imgs = [G.check(x) for x in self.self_conjugation]
        if len(imgs) != H.rank:
            raise MotionGroupError("self_conjugation needs one image per complement generator")
        if H.kind == FREE_ABELIAN:
            for a, b in itertools.combinations(imgs, 2):
                if G.mul(a, b) != G.mul(b, a):
                    raise MotionGroupError("self_conjugation images of commuting generators do not commute")
            return {}
        if H.kind == FREE:
            return {}
        table = {H.identity_index: G.identity()}
        queue = deque([H.identity_index])
        while queue:
            a = queue.popleft()
            for k, s in enumerate(H.generator_elements):
                b = H.mul(a, s)
                if b not in table:
                    table[b] = G.mul(table[a], imgs[k])
                    queue.append(b)
        for a in H.elements():
            for k, s in enumerate(H.generator_elements):
                if table[H.mul(a, s)] != G.mul(table[a], imgs[k]):
                    raise MotionGroupError("self_conjugation does not extend to a homomorphism")
        return table

    def iota(self, h):
        """Element of ``G_i`` realising conjugation of ``H_i`` by ``h``."""
        table = self._iota_table
        if table is None:
            return None
        H, G = self.complement, self.motion
        if H.kind == FINITE:
            return table[h]
        result = G.identity()
        for k, e in H.word_for(h):
            result = G.mul(result, G.power(self.self_conjugation[k], e))
        return result

    def _check_self_conjugation(self):
        H = self.complement
        self._iota_table
        for k in range(H.rank):
            h = H.generator(k)
            if self.psi(self.iota(h)) != FactorAut.conjugation(H, h):
                raise MotionGroupError(
                    f"self_conjugation of {H.generator_names[k]} does not act as conjugation by it"
                )


@dataclass(frozen=True)
class LinkSpec:
    pieces: tuple[PieceSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if not self.pieces:
            raise EmptyLink("a link needs at least one piece")

    @property
    def n(self) -> int:
        return len(self.pieces)

    @cached_property
    def product(self) -> FreeProduct:
        return FreeProduct(tuple(p.complement for p in self.pieces))

    @cached_property
    def classes(self) -> dict[str, list[int]]:
        out: dict[str, list[int]] = defaultdict(list)
        for i, p in enumerate(self.pieces):
            out[p.isotopy_class].append(i)
        return dict(out)

    def class_of(self, i: int) -> str:
        return self.pieces[i].isotopy_class

    def allows(self, perm: Sequence[int]) -> bool:
        """Is ``perm`` in P_L (only permutes isotopic pieces)?"""
        return sorted(perm) == list(range(self.n)) and all(
            self.class_of(i) == self.class_of(t) for i, t in enumerate(perm)
        )

    def transpositions(self) -> list[tuple[int, int]]:
        """Adjacent transpositions within each isotopy class; they generate P_L."""
        out = []
        for members in self.classes.values():
            out.extend(zip(members, members[1:]))
        return sorted(out)

    def p_order(self) -> int:
        result = 1
        for members in self.classes.values():
            for k in range(2, len(members) + 1):
                result *= k
        return result

    @property
    def has_self_conjugation(self) -> bool:
        return all(p.self_conjugation is not None for p in self.pieces)

    def generator_lookup(self) -> dict[str, tuple[int, int]]:
        """Complement generator name -> (piece, generator index)."""
        out = {}
        for i, p in enumerate(self.pieces):
            for k, name in enumerate(p.complement.generator_names):
                out[name] = (i, k)
        return out


def validate(spec: LinkSpec) -> list[str]:
    """All violated piece and link invariants; empty when valid."""
    problems = []
    for p in spec.pieces:
        problems.extend(p.problems())
    seen: dict[str, str] = {}
    for p in spec.pieces:
        for name in p.complement.generator_names:
            if name in seen:
                problems.append(f"complement generator {name!r} used by pieces {seen[name]} and {p.id}")
            seen[name] = p.id
    ids = [p.id for p in spec.pieces]
    if len(set(ids)) != len(ids):
        problems.append("piece ids are not distinct")
    for cls, members in spec.classes.items():
        first = spec.pieces[members[0]]
        for i in members[1:]:
            other = spec.pieces[i]
            if other.structure_key() != first.structure_key():
                problems.append(
                    f"pieces {first.id} and {other.id} share isotopy class {cls!r} but carry different data"
                )
            if other.motion.generator_names != first.motion.generator_names:
                problems.append(f"pieces {first.id} and {other.id} name their motion generators differently")
    return problems


# --------------------------------------------------------------------------
# built-in pieces


def builtin_piece(name: str, suffix: str = "", self_conjugation=None) -> PieceSpec:
    """``"unknot"`` or ``"hopf"``; complement generator names get ``suffix``.

    ``self_conjugation`` may be ``None`` (unset), ``"trivial"`` or an explicit
    tuple of motion-group payloads.
    """
    if name == "unknot":
        H = FactorGroup.free([f"a{suffix}"])
        G = FactorGroup.finite(cyclic_table(2), {"t": 1}, element_names=("1", "t"))
        action = (FactorAut.free(H, [(-1,)]),)
        components = 1
    elif name == "hopf":
        H = FactorGroup.free_abelian([f"a{suffix}", f"b{suffix}"])
        # Q8 cannot act faithfully on Z^2; this action factors through Q8/{+-1}
        G = FactorGroup.finite(quaternion_table(), {"i": 2, "j": 4}, element_names=Q8_NAMES)
        action = (
            FactorAut.matrix(H, [[0, 1], [1, 0]]),
            FactorAut.matrix(H, [[-1, 0], [0, -1]]),
        )
        components = 2
    else:
        raise UnknownPiece(f"no built-in piece named {name!r}")
    if self_conjugation == "trivial":
        self_conjugation = (G.identity(),) * H.rank
    elif self_conjugation is not None:
        self_conjugation = tuple(self_conjugation)
    return PieceSpec(
        id=f"{name}{suffix}",
        isotopy_class=name,
        components=components,
        complement=H,
        motion=G,
        dahm_action=action,
        self_conjugation=self_conjugation,
    )


def htrivial(n: int, m: int, self_conjugation=None) -> LinkSpec:
    """Disjoint union of an ``n``-component unlink and ``m`` Hopf links."""
    if n < 0 or m < 0 or n + m < 1:
        raise EmptyLink(f"htrivial({n}, {m}) has no pieces")
    pieces = [builtin_piece("unknot", str(k + 1), self_conjugation) for k in range(n)]
    pieces += [builtin_piece("hopf", str(n + k + 1), self_conjugation) for k in range(m)]
    return LinkSpec(tuple(pieces))


def unlink(n: int, self_conjugation=None) -> LinkSpec:
    return htrivial(n, 0, self_conjugation)
