"""Words in free groups, presentations, and syntactic relator tests.

A word is a tuple of nonzero ints: the letter ``k+1`` is generator ``k``
and ``-(k+1)`` is its inverse.  All functions keep words freely reduced,
so tuples can be compared and hashed directly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

Word = tuple  # tuple[int, ...], freely reduced

EMPTY: Word = ()


class ParseError(ValueError):
    """Presentation text does not conform to the grammar."""

    def __init__(self, message, line=1, col=1):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class SearchCapExceeded(RuntimeError):
    """A bounded combinatorial search hit its cap before deciding."""


def letter(gen: int, sign: int = 1) -> int:
    """Letter for 0-based generator ``gen`` with sign +1 or -1."""
    return (gen + 1) * sign


def gen_of(lt: int) -> int:
    """0-based generator index of a letter."""
    return abs(lt) - 1


def free_reduce(letters: Iterable[int]) -> Word:
    """Cancel adjacent inverse pairs until no more remain.

    >>> free_reduce((1, -1, 2))
    (2,)
    >>> free_reduce((1, 2, -2, 1))
    (1, 1)
    """
    out = []
    for lt in letters:
        if lt == 0:
            raise ValueError("letter 0 is not a generator")
        if out and out[-1] == -lt:
            out.pop()
        else:
            out.append(lt)
    return tuple(out)


def inverse(w: Word) -> Word:
    return tuple(-lt for lt in reversed(w))


def concat(*ws: Word) -> Word:
    """Freely reduced product of already-reduced words."""
    out = []
    for w in ws:
        for lt in w:
            if out and out[-1] == -lt:
                out.pop()
            else:
                out.append(lt)
    return tuple(out)


def power(w: Word, k: int) -> Word:
    if k < 0:
        return power(inverse(w), -k)
    return concat(*([w] * k))


def conjugate(w: Word, g: Word) -> Word:
    """g w g^-1, freely reduced."""
    return concat(g, w, inverse(g))


def commutator(u: Word, v: Word) -> Word:
    return concat(u, v, inverse(u), inverse(v))


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Split ``w = conjugator . core . conjugator^-1`` with core cyclically reduced.

    >>> cyclic_reduce((2, 1, -2))
    ((1,), (2,))
    """
    k = 0
    n = len(w)
    while 2 * k < n - 1 and w[k] == -w[n - 1 - k]:
        k += 1
    return w[k:n - k], w[:k]


def rotate(w: Word, k: int) -> Word:
    """Cyclic rotation; only meaningful for cyclically reduced words."""
    if not w:
        return w
    k %= len(w)
    return w[k:] + w[:k]


def exponent_sum(w: Word, gen: int) -> int:
    return sum(1 if lt == gen + 1 else -1 if lt == -(gen + 1) else 0 for lt in w)


def max_gen(w: Word) -> int:
    """Largest 0-based generator index used, or -1 for the empty word."""
    return max((abs(lt) for lt in w), default=0) - 1


def substitute(w: Word, images: Sequence[Word]) -> Word:
    """Image of ``w`` under the homomorphism sending generator i to images[i].

    Inverse letters map to inverse images; the result is freely reduced.
    """
    out = []
    for lt in w:
        g = gen_of(lt)
        if g >= len(images):
            raise ValueError(f"no image for generator {g}")
        img = images[g] if lt > 0 else inverse(images[g])
        for x in img:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def conjugator_between(a: Word, b: Word) -> Optional[Word]:
    """A word g with ``a = g b g^-1``, or None if a and b are not conjugate."""
    ca, ga = cyclic_reduce(a)
    cb, gb = cyclic_reduce(b)
    if len(ca) != len(cb):
        return None
    if not ca:
        return EMPTY if not cb else None
    for k in range(len(cb)):
        if rotate(cb, k) == ca:
            # rotate(cb, k) = p^-1 cb p for p = cb[:k]
            return concat(ga, inverse(cb[:k]), inverse(gb))
    return None


def is_proper_power(w: Word) -> Optional[tuple[Word, int]]:
    """Maximal root/exponent of the cyclic reduction, up to conjugacy.

    Returns ``(root, e)`` with e >= 2 such that the cyclic reduction of w is
    conjugate to root**e, or None when w is not a proper power.
    """
    if not w:
        raise ValueError("empty word has no root")
    core, _ = cyclic_reduce(w)
    n = len(core)
    if n == 0:
        return None
    for d in range(1, n // 2 + 1):
        if n % d == 0 and core == rotate(core, d):
            return core[:d], n // d
    return None


@dataclass(frozen=True)
class CommutatorWitness:
    u: Word
    v: Word


def is_commutator(w: Word, max_len: int = 64) -> Optional[CommutatorWitness]:
    """Search for u, v with [u, v] conjugate to ``w``.

    Works on the cyclic reduction: a cyclically reduced word is a commutator
    exactly when some rotation splits as A B C A^-1 B^-1 C^-1 (C may be
    empty), and then u = A.B, v = C.A^-1 satisfy [u, v] = that rotation.

    Raises SearchCapExceeded beyond ``max_len`` letters; that outcome is
    "undetermined", not "no".
    """
    core, _ = cyclic_reduce(w)
    n = len(core)
    if n == 0:
        return CommutatorWitness(EMPTY, EMPTY)
    if n % 2 or any(exponent_sum(core, g) for g in range(max_gen(core) + 1)):
        return None
    if n > max_len:
        raise SearchCapExceeded(f"commutator search cap {max_len} exceeded ({n} letters)")
    h = n // 2
    for k in range(n):
        r = rotate(core, k)
        for a in range(h + 1):
            A = r[:a]
            if r[h:h + a] != tuple(-x for x in reversed(A)):
                continue
            for b in range(h - a + 1):
                B = r[a:a + b]
                if r[h + a:h + a + b] != tuple(-x for x in reversed(B)):
                    continue
                C = r[a + b:h]
                if r[h + a + b:] == tuple(-x for x in reversed(C)):
                    # r = A B C A^-1 B^-1 C^-1 = [A.B, C.A^-1]
                    return CommutatorWitness(r[:a + b], free_reduce(C + inverse(A)))
    return None


def zxz_relator_check(w: Word) -> bool:
    """True when a 2-generator 1-relator group with relator ``w`` is Z x Z.

    ``w`` must be freely and cyclically reduced and use exactly 2 generators;
    the test is whether w is a cyclic conjugate of [a,b] or [b,a].
    """
    gens = sorted({gen_of(lt) for lt in w})
    if len(gens) != 2:
        raise ValueError("relator must use exactly 2 generators")
    a, b = letter(gens[0]), letter(gens[1])
    targets = {rotate(commutator((a,), (b,)), k) for k in range(4)}
    targets |= {rotate(commutator((b,), (a,)), k) for k in range(4)}
    return w in targets


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class Presentation:
    """Generator names plus freely reduced relator words."""

    generators: tuple
    relators: tuple

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator name")
        for r in self.relators:
            if r != free_reduce(r):
                raise ValueError("relator not freely reduced")
            if r and max_gen(r) >= len(self.generators):
                raise ValueError("relator letter out of range")

    @property
    def ngens(self) -> int:
        return len(self.generators)

    @property
    def nrels(self) -> int:
        return len(self.relators)

    @property
    def deficiency(self) -> int:
        return self.ngens - self.nrels

    def __str__(self):
        rels = ", ".join(word_to_text(r, self.generators) for r in self.relators)
        return f"< {', '.join(self.generators)} | {rels} >"


def presentation(gen_names: Sequence[str], relators: Iterable[Word]) -> Presentation:
    return Presentation(tuple(gen_names), tuple(free_reduce(r) for r in relators))


_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_INT_RE = re.compile(r"-?\d+")


def word_to_text(w: Word, names: Sequence[str]) -> str:
    """Readable text form; round-trips through parse_word."""
    if not w:
        return ""
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        name = names[gen_of(w[i])]
        exp = (j - i) * (1 if w[i] > 0 else -1)
        parts.append(name if exp == 1 else f"{name}^{exp}")
        i = j
    return " ".join(parts)


class _Scanner:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def loc(self, pos=None):
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, message, pos=None):
        line, col = self.loc(pos)
        raise ParseError(message, line, col)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            self.error(f"expected '{ch}'")
        self.pos += 1


def parse_word(text: str, names: Sequence[str], scanner: Optional[_Scanner] = None,
               offset: int = 0) -> Word:
    """Parse whitespace-separated factors over ``names``.

    Factors are ``name``, ``name^int``, or, for single-letter lowercase
    names, the uppercase letter as the inverse.
    """
    sc = scanner or _Scanner(text)
    index = {n: i for i, n in enumerate(names)}
    lower_single = {n.upper(): i for i, n in enumerate(names)
                    if len(n) == 1 and n.islower()}
    out = []
    pos = 0
    for tok in text.split():
        pos = text.find(tok, pos)
        m = re.fullmatch(r"([A-Za-z][A-Za-z0-9_]*)(\^(-?\d+))?", tok)
        if not m:
            sc.error(f"bad factor {tok!r}", offset + pos)
        name, exp = m.group(1), int(m.group(3)) if m.group(3) else 1
        if name in index:
            g, sign = index[name], 1
        elif name in lower_single:
            g, sign = lower_single[name], -1
        else:
            sc.error(f"unknown generator {name!r}", offset + pos)
        out.extend([letter(g, sign if exp > 0 else -sign)] * abs(exp))
        pos += len(tok)
    return free_reduce(out)


def parse_presentation(text: str) -> Presentation:
    """Parse ``< names | relators >`` presentation text.

    Relators are comma-separated; ``u = v`` is stored as u.v^-1.

    >>> p = parse_presentation("< a, b | a b A B >")
    >>> (p.ngens, p.nrels)
    (2, 1)
    """
    sc = _Scanner(text)
    sc.expect("<")
    bar = text.find("|", sc.pos)
    close = text.rfind(">")
    if bar < 0:
        sc.error("expected '|'", len(text) - 1)
    if close < 0 or close < bar:
        sc.error("expected '>'", len(text) - 1)
    names = []
    for chunk in text[sc.pos:bar].split(","):
        name = chunk.strip()
        if not _NAME_RE.fullmatch(name or ""):
            sc.error(f"bad generator name {name!r}", text.find(chunk, sc.pos))
        if name in names:
            sc.error(f"duplicate generator name {name!r}", text.find(chunk, sc.pos))
        names.append(name)
    rel_text = text[bar + 1:close]
    tail = text[close + 1:].strip()
    if tail:
        sc.error(f"trailing input {tail!r}", close + 1)
    relators = []
    if rel_text.strip():
        pos = bar + 1
        for chunk in rel_text.split(","):
            start = text.find(chunk, pos) if chunk else pos
            pos = start + len(chunk)
            if not chunk.strip():
                sc.error("empty relator", start)
            if "=" in chunk:
                lhs, _, rhs = chunk.partition("=")
                u = parse_word(lhs, names, sc, start)
                v = parse_word(rhs, names, sc, start + len(lhs) + 1)
                relators.append(concat(u, inverse(v)))
            else:
                relators.append(parse_word(chunk, names, sc, start))
    return Presentation(tuple(names), tuple(relators))


def parse_words(text: str, names: Sequence[str]) -> Word:
    return parse_word(text, names)


DEFAULT_NAMES = ("x", "y", "z")


def default_names(rank: int) -> tuple:
    if rank <= len(DEFAULT_NAMES):
        return DEFAULT_NAMES[:rank]
    return tuple(f"x{i+1}" for i in range(rank))
