"""Word arithmetic in free products H_1 * ... * H_n of factor groups.

Three factor kinds are supported, all with a trivially solvable word
problem:

* ``free``          payload is a freely reduced tuple of nonzero letters,
                    letter ``k+1`` is generator ``k`` and ``-(k+1)`` its inverse;
* ``free_abelian``  payload is an integer exponent vector of length r;
* ``finite``        payload is an element index into a multiplication table.

Factors are indexed from 0 internally; user-facing text is 1-based.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Sequence

from .errors import (
    ContextMismatch,
    IndexOutOfRange,
    InvalidFactor,
    MalformedPayload,
)

FREE = "free"
FREE_ABELIAN = "free_abelian"
FINITE = "finite"
KINDS = (FREE, FREE_ABELIAN, FINITE)


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def free_inverse(letters: Sequence[int]) -> tuple[int, ...]:
    return tuple(-x for x in reversed(letters))


@dataclass(frozen=True)
class FactorGroup:
    """One free factor of the link-complement group (or a motion factor).

    Use the :meth:`free`, :meth:`free_abelian` and :meth:`finite`
    constructors rather than the raw initializer.
    """

    kind: str
    generator_names: tuple[str, ...]
    table: tuple[tuple[int, ...], ...] | None = None
    identity_index: int = 0
    generator_elements: tuple[int, ...] = ()
    element_names: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidFactor(f"unknown factor kind {self.kind!r}")
        names = self.generator_names
        if len(set(names)) != len(names):
            raise InvalidFactor(f"generator names are not distinct: {names}")
        if self.kind == FINITE:
            self._check_table()
        elif not names:
            raise InvalidFactor(f"{self.kind} factor needs rank >= 1")

    @classmethod
    def free(cls, names: Sequence[str]) -> "FactorGroup":
        return cls(FREE, tuple(names))

    @classmethod
    def free_abelian(cls, names: Sequence[str]) -> "FactorGroup":
        return cls(FREE_ABELIAN, tuple(names))

    @classmethod
    def finite(
        cls,
        table: Sequence[Sequence[int]],
        generators: dict[str, int] | Sequence[tuple[str, int]],
        identity: int | None = None,
        element_names: Sequence[str] | None = None,
    ) -> "FactorGroup":
        table = tuple(tuple(int(x) for x in row) for row in table)
        if identity is None:
            identity = _find_identity(table)
        gens = list(generators.items()) if isinstance(generators, dict) else list(generators)
        return cls(
            FINITE,
            tuple(name for name, _ in gens),
            table=table,
            identity_index=identity,
            generator_elements=tuple(int(e) for _, e in gens),
            element_names=tuple(element_names) if element_names is not None else None,
        )

    # -- validation -----------------------------------------------------

    def _check_table(self):
        t = self.table
        if t is None or not t:
            raise InvalidFactor("finite factor needs a nonempty multiplication table")
        k = len(t)
        if any(len(row) != k for row in t):
            raise InvalidFactor("multiplication table is not square")
        if any(not 0 <= x < k for row in t for x in row):
            raise InvalidFactor("multiplication table entry out of range")
        e = self.identity_index
        if not 0 <= e < k:
            raise InvalidFactor("identity index out of range")
        if any(t[e][a] != a or t[a][e] != a for a in range(k)):
            raise InvalidFactor(f"element {e} is not a two-sided identity")
        for a in range(k):
            if e not in t[a]:
                raise InvalidFactor(f"element {a} has no inverse")
        for a, b, c in itertools.product(range(k), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise InvalidFactor(f"associativity fails at ({a}, {b}, {c})")
        if len(self.generator_elements) != len(self.generator_names):
            raise InvalidFactor("generator names and elements differ in length")
        if any(not 0 <= g < k for g in self.generator_elements):
            raise InvalidFactor("generator element out of range")
        if len(self._spanning_words) != k:
            raise InvalidFactor("listed generators do not generate the group")

    # -- basic structure ------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.generator_names)

    @property
    def order(self) -> int | None:
        return len(self.table) if self.kind == FINITE else None

    @property
    def is_abelian(self) -> bool:
        if self.kind == FREE_ABELIAN:
            return True
        if self.kind == FREE:
            return self.rank == 1
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(len(t)) for b in range(a))

    def structure_key(self) -> tuple:
        """Group data with generator names stripped off."""
        if self.kind == FINITE:
            return (FINITE, self.table, self.identity_index, self.generator_elements)
        return (self.kind, self.rank)

    def same_structure(self, other: "FactorGroup") -> bool:
        return self.structure_key() == other.structure_key()

    @cached_property
    def _inverses(self) -> tuple[int, ...]:
        t, e = self.table, self.identity_index
        return tuple(row.index(e) for row in t)

    @cached_property
    def _spanning_words(self) -> dict[int, tuple[tuple[int, int], ...]]:
        # BFS spanning tree of the Cayley graph; word is a tuple of (generator, +-1)
        t, e = self.table, self.identity_index
        words = {e: ()}
        queue = deque([e])
        while queue:
            a = queue.popleft()
            for k, g in enumerate(self.generator_elements):
                b = t[a][g]
                if b not in words:
                    words[b] = words[a] + ((k, 1),)
                    queue.append(b)
        return words

    # -- element arithmetic --------------------------------------------

    def identity(self) -> Any:
        if self.kind == FREE:
            return ()
        if self.kind == FREE_ABELIAN:
            return (0,) * self.rank
        return self.identity_index

    def is_identity(self, x) -> bool:
        if self.kind == FREE:
            return not x
        if self.kind == FREE_ABELIAN:
            return not any(x)
        return x == self.identity_index

    def mul(self, x, y):
        if self.kind == FREE:
            if x and y and x[-1] == -y[0]:
                return free_reduce(x + y)
            return x + y
        if self.kind == FREE_ABELIAN:
            return tuple(a + b for a, b in zip(x, y))
        return self.table[x][y]

    def inv(self, x):
        if self.kind == FREE:
            return free_inverse(x)
        if self.kind == FREE_ABELIAN:
            return tuple(-a for a in x)
        return self._inverses[x]

    def power(self, x, k: int):
        if k < 0:
            x, k = self.inv(x), -k
        result = self.identity()
        for _ in range(k):
            result = self.mul(result, x)
        return result

    def generator(self, k: int, exponent: int = 1):
        """Payload of generator ``k`` raised to ``exponent``."""
        if not 0 <= k < self.rank:
            raise IndexOutOfRange(f"generator index {k} out of range")
        if self.kind == FREE:
            letter = k + 1 if exponent > 0 else -(k + 1)
            return (letter,) * abs(exponent)
        if self.kind == FREE_ABELIAN:
            v = [0] * self.rank
            v[k] = exponent
            return tuple(v)
        return self.power(self.generator_elements[k], exponent)

    def generators(self) -> list:
        return [self.generator(k) for k in range(self.rank)]

    def check(self, x):
        """Validate a payload and return it in canonical representation."""
        if self.kind == FREE:
            if not isinstance(x, (tuple, list)) or any(
                not isinstance(a, int) or a == 0 or abs(a) > self.rank for a in x
            ):
                raise MalformedPayload(f"bad free-group payload {x!r} for rank {self.rank}")
            return free_reduce(x)
        if self.kind == FREE_ABELIAN:
            if (
                not isinstance(x, (tuple, list))
                or len(x) != self.rank
                or any(not isinstance(a, int) for a in x)
            ):
                raise MalformedPayload(f"bad exponent vector {x!r} for rank {self.rank}")
            return tuple(x)
        if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < len(self.table):
            raise MalformedPayload(f"bad element index {x!r} for order {len(self.table)}")
        return x

    def elements(self) -> list:
        if self.kind != FINITE:
            raise InvalidFactor("only finite factors can list their elements")
        return list(range(len(self.table)))

    def word_for(self, x) -> list[tuple[int, int]]:
        """Express ``x`` as a list of ``(generator index, exponent)`` pairs."""
        if self.kind == FREE:
            out: list[tuple[int, int]] = []
            for a in x:
                k, s = abs(a) - 1, 1 if a > 0 else -1
                if out and out[-1][0] == k and (out[-1][1] > 0) == (s > 0):
                    out[-1] = (k, out[-1][1] + s)
                else:
                    out.append((k, s))
            return out
        if self.kind == FREE_ABELIAN:
            return [(k, e) for k, e in enumerate(x) if e]
        return list(self._spanning_words[x])

    def from_word(self, word: Iterable[tuple[int, int]]):
        result = self.identity()
        for k, e in word:
            result = self.mul(result, self.generator(k, e))
        return result

    def format(self, x) -> str:
        if self.is_identity(x):
            return "1"
        return "*".join(
            self.generator_names[k] if e == 1 else f"{self.generator_names[k]}^{e}"
            for k, e in self.word_for(x)
        )

    def random_element(self, rng, max_length: int = 4, nontrivial: bool = False):
        while True:
            if self.kind == FREE:
                n = rng.randint(0, max_length)
                x = free_reduce(rng.choice((1, -1)) * rng.randint(1, self.rank) for _ in range(n))
            elif self.kind == FREE_ABELIAN:
                x = tuple(rng.randint(-2, 2) for _ in range(self.rank))
            else:
                x = rng.randrange(len(self.table))
            if not (nontrivial and self.is_identity(x)):
                return x


def _find_identity(table) -> int:
    k = len(table)
    for e in range(k):
        if all(table[e][a] == a and table[a][e] == a for a in range(k)):
            return e
    raise InvalidFactor("multiplication table has no identity element")


@dataclass(frozen=True)
class FactorElement:
    """An element of the factor with index ``factor``."""

    factor: int
    payload: Any


@dataclass(frozen=True)
class FreeProduct:
    """The free product of an ordered list of factor groups."""

    factors: tuple[FactorGroup, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    @property
    def n(self) -> int:
        return len(self.factors)

    def identity(self) -> "Word":
        return Word(self, ())

    def element(self, factor: int, payload) -> FactorElement:
        if not 0 <= factor < self.n:
            raise IndexOutOfRange(f"factor index {factor} out of range 0..{self.n - 1}")
        return FactorElement(factor, self.factors[factor].check(payload))

    def letter(self, factor: int, payload) -> "Word":
        """The one-syllable word (or identity) for a factor element."""
        return self.normalize([(factor, payload)])

    def generator_word(self, factor: int, k: int, exponent: int = 1) -> "Word":
        return self.letter(factor, self.factors[factor].generator(k, exponent))

    def normalize(self, raw: Iterable[FactorElement | tuple[int, Any]]) -> "Word":
        stack: list[FactorElement] = []
        for item in raw:
            if isinstance(item, FactorElement):
                i, x = item.factor, item.payload
            else:
                i, x = item
            if not 0 <= i < self.n:
                raise IndexOutOfRange(f"syllable references factor {i}, have {self.n}")
            group = self.factors[i]
            x = group.check(x)
            if stack and stack[-1].factor == i:
                x = group.mul(stack.pop().payload, x)
            if not group.is_identity(x):
                stack.append(FactorElement(i, x))
        return Word(self, tuple(stack))

    def _own(self, w: "Word"):
        if w.product is not self and w.product != self:
            raise ContextMismatch("word belongs to a different free product")

    def multiply(self, u: "Word", v: "Word") -> "Word":
        self._own(u)
        self._own(v)
        if not u.syllables:
            return v
        if not v.syllables:
            return u
        a, b = list(u.syllables), list(v.syllables)
        # cancel across the junction only; both halves are already reduced
        while a and b and a[-1].factor == b[0].factor:
            i = a[-1].factor
            group = self.factors[i]
            x = group.mul(a.pop().payload, b[0].payload)
            b.pop(0)
            if not group.is_identity(x):
                a.append(FactorElement(i, x))
                break
        return Word(self, tuple(a) + tuple(b))

    def invert(self, u: "Word") -> "Word":
        self._own(u)
        return Word(
            self,
            tuple(
                FactorElement(s.factor, self.factors[s.factor].inv(s.payload))
                for s in reversed(u.syllables)
            ),
        )

    def product_of(self, words: Iterable["Word"]) -> "Word":
        result = self.identity()
        for w in words:
            result = self.multiply(result, w)
        return result

    def conjugate(self, w: "Word", x: "Word") -> "Word":
        """Return ``w x w^-1``."""
        return self.multiply(self.multiply(w, x), self.invert(w))

    def strip_trailing(self, w: "Word", factor: int) -> tuple["Word", Any]:
        """Split ``w = prefix * c`` with ``c`` in ``factor`` and ``prefix`` not ending there."""
        syl = w.syllables
        if syl and syl[-1].factor == factor:
            return Word(self, syl[:-1]), syl[-1].payload
        return w, self.factors[factor].identity()

    def solve_common_coset(self, targets: Sequence[tuple["Word", int]]) -> "Word | None":
        """Find ``w`` lying in every coset ``w_j H_j``, or ``None``.

        Each coset ``w_j H_j`` is ``p_j H_j`` with ``p_j`` the word stripped of a
        trailing ``H_j`` syllable. With two or more distinct ``j``, a common
        element must equal one of the ``p_j`` (otherwise its last syllable would
        lie in two different factors), so the candidates are checked directly.
        """
        if not targets:
            return self.identity()
        seen = set()
        prefixes = []
        for w, j in targets:
            self._own(w)
            if not 0 <= j < self.n:
                raise IndexOutOfRange(f"factor index {j} out of range")
            if j in seen:
                raise ValueError(f"factor {j} listed twice")
            seen.add(j)
            prefixes.append((self.strip_trailing(w, j)[0], j))
        for cand, _ in prefixes:
            if all(self.in_coset(cand, p, j) for p, j in prefixes):
                return cand
        return None

    def in_coset(self, x: "Word", rep: "Word", factor: int) -> bool:
        """Is ``x`` in ``rep * H_factor``?"""
        q = self.multiply(self.invert(rep), x).syllables
        return not q or (len(q) == 1 and q[0].factor == factor)

    def random_word(self, rng, max_syllables: int = 6, max_length: int = 3) -> "Word":
        raw = []
        for _ in range(rng.randint(0, max_syllables)):
            i = rng.randrange(self.n)
            raw.append((i, self.factors[i].random_element(rng, max_length, nontrivial=True)))
        return self.normalize(raw)

    def format(self, w: "Word") -> str:
        if not w.syllables:
            return "1"
        return "*".join(self.factors[s.factor].format(s.payload) for s in w.syllables)


@dataclass(frozen=True)
class Word:
    """Normal-form element of a free product.

    Adjacent syllables lie in different factors and no syllable is trivial.
    Build words through :class:`FreeProduct`, which maintains this.
    """

    product: FreeProduct = field(repr=False)
    syllables: tuple[FactorElement, ...]

    def __mul__(self, other: "Word") -> "Word":
        return self.product.multiply(self, other)

    def inverse(self) -> "Word":
        return self.product.invert(self)

    def __len__(self) -> int:
        return len(self.syllables)

    def key(self) -> tuple:
        return tuple((s.factor, s.payload) for s in self.syllables)

    def __str__(self) -> str:
        return self.product.format(self)


def normalize(raw, ctx: Sequence[FactorGroup] | FreeProduct) -> Word:
    product = ctx if isinstance(ctx, FreeProduct) else FreeProduct(tuple(ctx))
    return product.normalize(raw)


def multiply(u: Word, v: Word) -> Word:
    return u.product.multiply(u, v)


def invert(u: Word) -> Word:
    return u.product.invert(u)
