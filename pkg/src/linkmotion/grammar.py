"""Text form of motion-group elements.

An expression is a whitespace-separated product of terms, read left to
right. Each term is one of

    X(a1,2)       chi(a1, L_2); the first slot is a word such as a1*b1^-1
    G[1]:t        generator t of the motion group of piece 1
    P(1 2)        lift of the transposition of pieces 1 and 2
    1             the identity

optionally followed by ``^k`` for an integer ``k``. Pieces are 1-based.
"""

from __future__ import annotations

import re

from .errors import ParseError, UnknownGenerator
from .fpauto import PartialConjugation
from .freeprod import FactorElement

_X = re.compile(r"X\(([^()]*?),\s*(\d+)\s*\)")
_G = re.compile(r"G\[(\d+)\]:([A-Za-z_][A-Za-z0-9_]*)")
_P = re.compile(r"P\(\s*(\d+)\s*[\s,]\s*(\d+)\s*\)")
_ONE = re.compile(r"1(?![\d\w])")
_EXP = re.compile(r"\^\s*(-?\d+)")
_FACTOR_TERM = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\^\s*(-?\d+))?\s*$")


def token_text(symbol: str, exponent: int) -> str:
    return symbol if exponent == 1 else f"{symbol}^{exponent}"


def format_tokens(tokens) -> str:
    return " ".join(token_text(s, e) for s, e in tokens) if tokens else "1"


def merge_tokens(tokens) -> list[tuple[str, int]]:
    """Combine equal neighbours and cancel; a free reduction on symbols."""
    out: list[tuple[str, int]] = []
    for sym, e in tokens:
        if out and out[-1][0] == sym:
            total = out[-1][1] + e
            out.pop()
            if total:
                out.append((sym, total))
        elif e:
            out.append((sym, e))
    return out


def invert_tokens(tokens) -> list[tuple[str, int]]:
    return [(s, -e) for s, e in reversed(tokens)]


def x_symbol(spec, i: int, k: int, j: int) -> str:
    return f"X({spec.pieces[i].complement.generator_names[k]},{j + 1})"


def g_symbol(spec, i: int, k: int) -> str:
    return f"G[{i + 1}]:{spec.pieces[i].motion.generator_names[k]}"


def p_symbol(a: int, b: int) -> str:
    return f"P({a + 1} {b + 1})"


def chi_tokens(spec, i: int, payload, j: int, sign: int = 1) -> list[tuple[str, int]]:
    """``chi(h, L_j)^sign`` as generator tokens.

    Automorphisms compose right to left, so ``chi(gh, L_j) = chi(h, L_j) chi(g, L_j)``
    and the letters of ``h`` come out in reverse order.
    """
    H = spec.pieces[i].complement
    toks = [(x_symbol(spec, i, k, j), e) for k, e in reversed(H.word_for(payload))]
    return toks if sign == 1 else invert_tokens(toks)


def motion_tokens(spec, i: int, payload) -> list[tuple[str, int]]:
    G = spec.pieces[i].motion
    return [(g_symbol(spec, i, k), e) for k, e in G.word_for(payload)]


def perm_transpositions(p) -> list[tuple[int, int]]:
    """Transpositions ``t_1, ..., t_m`` of equal-class pieces with ``p = t_1 o ... o t_m``."""
    rest = list(p)
    out = []
    for i in range(len(rest)):
        while rest[i] != i:
            j = rest[i]
            out.append((min(i, j), max(i, j)))
            # compose with (i j) on the left; afterwards i is fixed
            rest = [i if v == j else j if v == i else v for v in rest]
    return out


def element_tokens(x) -> list[tuple[str, int]]:
    spec = x.group.spec
    toks = []
    for pc in x.fr:
        toks += chi_tokens(spec, pc.acting.factor, pc.acting.payload, pc.support, pc.sign)
    for i, g in enumerate(x.g):
        toks += motion_tokens(spec, i, g)
    for a, b in perm_transpositions(x.p):
        toks.append((p_symbol(a, b), 1))
    return merge_tokens(toks)


def format_element(x) -> str:
    return format_tokens(element_tokens(x))


def _parse_acting(text: str, offset: int, group):
    spec = group.spec
    lookup = spec.generator_lookup()
    piece = None
    word = []
    for part in text.split("*"):
        m = _FACTOR_TERM.match(part)
        if not m:
            raise ParseError(f"bad factor word {text!r}", offset)
        name, exp = m.group(1), int(m.group(2) or 1)
        if name not in lookup:
            raise UnknownGenerator(f"unknown complement generator {name!r}", offset)
        i, k = lookup[name]
        if piece is not None and piece != i:
            raise ParseError(f"acting word {text!r} mixes pieces", offset)
        piece = i
        word.append((k, exp))
        offset += len(part) + 1
    H = spec.pieces[piece].complement
    return piece, H.from_word(word)


def parse_element(expr: str, group):
    """Left-to-right product of the terms of ``expr`` in ``group``."""
    spec = group.spec
    n = spec.n
    pos = 0
    factors = []
    s = expr
    while True:
        while pos < len(s) and (s[pos].isspace() or s[pos] == "*"):
            pos += 1
        if pos >= len(s):
            break
        start = pos
        if m := _X.match(s, pos):
            j = int(m.group(2))
            if not 1 <= j <= n:
                raise ParseError(f"piece {j} out of range 1..{n}", start)
            i, payload = _parse_acting(m.group(1), m.start(1), group)
            if i == j - 1:
                raise ParseError("X(g,j) needs g outside piece j", start)
            elem = group.make([PartialConjugation(FactorElement(i, payload), j - 1)])
        elif m := _G.match(s, pos):
            i = int(m.group(1))
            if not 1 <= i <= n:
                raise ParseError(f"piece {i} out of range 1..{n}", start)
            names = spec.pieces[i - 1].motion.generator_names
            if m.group(2) not in names:
                raise UnknownGenerator(f"piece {i} has no motion generator {m.group(2)!r}", start)
            elem = group.motion_generator(i - 1, names.index(m.group(2)))
        elif m := _P.match(s, pos):
            a, b = int(m.group(1)), int(m.group(2))
            if not (1 <= a <= n and 1 <= b <= n) or a == b:
                raise ParseError(f"bad transposition ({a} {b})", start)
            if spec.class_of(a - 1) != spec.class_of(b - 1):
                raise ParseError(f"pieces {a} and {b} are not isotopic", start)
            elem = group.transposition(a - 1, b - 1)
        elif m := _ONE.match(s, pos):
            elem = group.identity()
        else:
            raise ParseError(f"unexpected text {s[pos:pos + 12]!r}", pos)
        pos = m.end()
        if e := _EXP.match(s, pos):
            elem = group.power(elem, int(e.group(1)))
            pos = e.end()
        factors.append(elem)
    return group.product_of(factors)


def parse_tokens(tokens, group):
    return parse_element(format_tokens(tokens), group)
