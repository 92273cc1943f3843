"""Reduced words in the free group F_m and lexicographic orders.

Letters are nonzero integers: ``+i`` is the generator ``a_i`` and ``-i``
its inverse.  A word is a plain tuple of letters with no adjacent
cancelling pair; the empty tuple ``E`` is the unit.  Keeping words as
reduced tuples makes them hashable and directly usable as dict keys by
every other module.

A lexicographic order on the group is determined by an ordering of the
2m letters: words are compared first by length, then by the first letter
after their common beginning.  The induced order on the classes
``{s, s^-1}`` drives the step-by-step extension of positive definite
functions, so this module also provides a cursor over those classes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

Word = tuple

#: The unit element (empty word).
E: Word = ()

#: Default cap on ball enumeration, to keep dense Gram matrices desk-scale.
DEFAULT_BALL_CAP = 200_000


class BallSizeError(ValueError):
    """Requested ball exceeds the configured enumeration cap."""


def default_letter_order(m: int) -> tuple[int, ...]:
    """The ordering a_1 < a_1^-1 < a_2 < a_2^-1 < ... on the 2m letters."""
    return tuple(itertools.chain.from_iterable((i, -i) for i in range(1, m + 1)))


@dataclass(frozen=True)
class GroupContext:
    """The free group F_m together with a letter ordering.

    ``letter_order`` is a permutation of ``(+1, -1, ..., +m, -m)`` listing
    the letters in increasing order; it determines the lexicographic order
    on words of equal length.  Instances are immutable and hashable.
    """

    m: int
    letter_order: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"need at least one generator, got m={self.m}")
        order = self.letter_order
        if order is None:
            order = default_letter_order(self.m)
        order = tuple(int(x) for x in order)
        expected = set(range(1, self.m + 1)) | set(range(-self.m, 0))
        if len(order) != 2 * self.m or set(order) != expected:
            raise ValueError(
                f"letter_order must be a permutation of the {2 * self.m} letters "
                f"of F_{self.m}, got {order}"
            )
        object.__setattr__(self, "letter_order", order)
        object.__setattr__(self, "_rank", {letter: i for i, letter in enumerate(order)})

    def rank(self, letter: int) -> int:
        """Position of a letter in the letter ordering (0 = smallest)."""
        return self._rank[letter]

    def sort_key(self, word: Word) -> tuple:
        """Sort key realizing the lexicographic order: length, then letter ranks."""
        return (len(word), tuple(self._rank[x] for x in word))

    def letters(self) -> tuple[int, ...]:
        return self.letter_order

    def generators(self) -> tuple[int, ...]:
        return tuple(range(1, self.m + 1))


def reduce_word(letters: Iterable[int]) -> Word:
    """Reduced form of a letter sequence: all adjacent x, -x pairs cancelled."""
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def make_word(ctx: GroupContext, letters: Sequence[int]) -> Word:
    """Validate letters against the context and return the reduced word.

    Unreduced input is reduced silently, never rejected.
    """
    for x in letters:
        if not isinstance(x, int) or x == 0 or abs(x) > ctx.m:
            raise ValueError(f"invalid letter {x!r} for F_{ctx.m}")
    return reduce_word(letters)


def inverse(s: Word) -> Word:
    """Group inverse: reversed word, every letter negated."""
    return tuple(-x for x in reversed(s))


def mul(s: Word, t: Word) -> Word:
    """Product of two reduced words, with cancellation at the seam.

    >>> mul((1, 2), (-2, -1))
    ()
    >>> mul((1, 2), (-2, 1))
    (1, 1)
    """
    return reduce_word(s + t)


def common_beginning(ws: Sequence[Word]) -> Word:
    """Longest common prefix of one or more reduced words.

    Symmetric in its arguments: it consists of the first letters shared by
    all of them.
    """
    if not ws:
        raise ValueError("common_beginning of an empty collection")
    first = ws[0]
    n = min(len(w) for w in ws)
    for i in range(n):
        x = first[i]
        if any(w[i] != x for w in ws):
            return first[:i]
    return first[:n]


def lex_compare(s: Word, t: Word, ctx: GroupContext) -> int:
    """Compare two reduced words: -1, 0 or +1.

    Shorter words come first; words of equal length are compared by the
    rank of the first letter after their common beginning.
    """
    if len(s) != len(t):
        return -1 if len(s) < len(t) else 1
    for a, b in zip(s, t):
        if a != b:
            return -1 if ctx.rank(a) < ctx.rank(b) else 1
    return 0


def lex_min(s: Word, t: Word, ctx: GroupContext) -> Word:
    return s if lex_compare(s, t, ctx) <= 0 else t


def class_rep(s: Word, ctx: GroupContext) -> Word:
    """The smaller of s and s^-1: canonical representative of the class {s, s^-1}."""
    return lex_min(s, inverse(s), ctx)


def is_class_rep(s: Word, ctx: GroupContext) -> bool:
    return lex_compare(s, inverse(s), ctx) <= 0


def minimal_word(n: int, ctx: GroupContext) -> Word:
    """The smallest reduced word of length n."""
    out: list[int] = []
    for _ in range(n):
        prev = out[-1] if out else None
        for cand in ctx.letter_order:
            if prev is None or cand != -prev:
                out.append(cand)
                break
    return tuple(out)


def maximal_word(n: int, ctx: GroupContext) -> Word:
    """The largest reduced word of length n."""
    out: list[int] = []
    for _ in range(n):
        prev = out[-1] if out else None
        for cand in reversed(ctx.letter_order):
            if prev is None or cand != -prev:
                out.append(cand)
                break
    return tuple(out)


def word_successor(s: Word, ctx: GroupContext) -> Word:
    """The next reduced word in the lexicographic order.

    Works like an odometer over the letter ranks within the current
    length; the last word of length n is followed by the smallest word of
    length n + 1.
    """
    order = ctx.letter_order
    w = list(s)
    for pos in range(len(w) - 1, -1, -1):
        prev = w[pos - 1] if pos > 0 else None
        for r in range(ctx.rank(w[pos]) + 1, len(order)):
            cand = order[r]
            if prev is None or cand != -prev:
                w[pos] = cand
                for q in range(pos + 1, len(w)):
                    for c2 in order:
                        if c2 != -w[q - 1]:
                            w[q] = c2
                            break
                return tuple(w)
    return minimal_word(len(s) + 1, ctx)


def word_predecessor(s: Word, ctx: GroupContext) -> Word:
    """Inverse of :func:`word_successor`; undefined at the empty word."""
    if s == E:
        raise ValueError("the empty word has no predecessor")
    order = ctx.letter_order
    w = list(s)
    for pos in range(len(w) - 1, -1, -1):
        prev = w[pos - 1] if pos > 0 else None
        for r in range(ctx.rank(w[pos]) - 1, -1, -1):
            cand = order[r]
            if prev is None or cand != -prev:
                w[pos] = cand
                for q in range(pos + 1, len(w)):
                    for c2 in reversed(order):
                        if c2 != -w[q - 1]:
                            w[q] = c2
                            break
                return tuple(w)
    return maximal_word(len(s) - 1, ctx)


def sphere_size(m: int, n: int) -> int:
    """Number of reduced words of length exactly n: 2m(2m-1)^(n-1)."""
    if n == 0:
        return 1
    return 2 * m * (2 * m - 1) ** (n - 1)


def ball_size(m: int, n: int) -> int:
    return sum(sphere_size(m, j) for j in range(n + 1))


def sphere(ctx: GroupContext, n: int, cap: int = DEFAULT_BALL_CAP) -> list[Word]:
    """All reduced words of length exactly n, in lexicographic order."""
    if n < 0:
        raise ValueError("sphere radius must be nonnegative")
    if sphere_size(ctx.m, n) > cap:
        raise BallSizeError(
            f"sphere of radius {n} in F_{ctx.m} has {sphere_size(ctx.m, n)} words, "
            f"above the cap of {cap}"
        )
    out: list[Word] = []
    stack: list[int] = []

    def rec():
        if len(stack) == n:
            out.append(tuple(stack))
            return
        prev = stack[-1] if stack else None
        for cand in ctx.letter_order:
            if prev is None or cand != -prev:
                stack.append(cand)
                rec()
                stack.pop()

    rec()
    return out


def ball(ctx: GroupContext, n: int, cap: int = DEFAULT_BALL_CAP) -> list[Word]:
    """All reduced words of length at most n, sorted by the lexicographic order."""
    if n < 0:
        raise ValueError("ball radius must be nonnegative")
    total = ball_size(ctx.m, n)
    if total > cap:
        raise BallSizeError(
            f"ball of radius {n} in F_{ctx.m} has {total} words, above the cap of {cap}"
        )
    out: list[Word] = []
    for j in range(n + 1):
        out.extend(sphere(ctx, j, cap=cap))
    return out


@dataclass(frozen=True)
class ClassCursor:
    """Position in the ordered quotient of F_m by s ~ s^-1.

    ``rep`` is the lexicographically smaller element of the class; any
    word passed in is reduced and canonicalized.  Cursors over the same
    context compare by the order of their representatives.
    """

    rep: Word
    ctx: GroupContext

    def __post_init__(self):
        object.__setattr__(self, "rep", class_rep(reduce_word(self.rep), self.ctx))

    @property
    def length(self) -> int:
        return len(self.rep)

    def members(self) -> tuple[Word, ...]:
        inv = inverse(self.rep)
        return (self.rep,) if inv == self.rep else (self.rep, inv)

    def key(self) -> tuple:
        return self.ctx.sort_key(self.rep)

    def successor(self) -> "ClassCursor":
        """The smallest class strictly greater than this one."""
        w = word_successor(self.rep, self.ctx)
        while not is_class_rep(w, self.ctx):
            w = word_successor(w, self.ctx)
        return ClassCursor(w, self.ctx)

    def predecessor(self) -> "ClassCursor":
        """Inverse of :meth:`successor`; undefined at the unit class."""
        if self.rep == E:
            raise ValueError("the unit class has no predecessor")
        w = word_predecessor(self.rep, self.ctx)
        while not is_class_rep(w, self.ctx):
            w = word_predecessor(w, self.ctx)
        return ClassCursor(w, self.ctx)

    def _check_ctx(self, other: "ClassCursor"):
        if self.ctx != other.ctx:
            raise ValueError("cannot compare cursors over different contexts")

    def __lt__(self, other: "ClassCursor") -> bool:
        self._check_ctx(other)
        return self.key() < other.key()

    def __le__(self, other: "ClassCursor") -> bool:
        self._check_ctx(other)
        return self.key() <= other.key()

    def __gt__(self, other: "ClassCursor") -> bool:
        return other < self

    def __ge__(self, other: "ClassCursor") -> bool:
        return other <= self


def classes_of_length(ctx: GroupContext, n: int) -> Iterator[ClassCursor]:
    """All classes whose representative has length exactly n, in order."""
    if n == 0:
        yield ClassCursor(E, ctx)
        return
    cur = ClassCursor(minimal_word(n, ctx), ctx)
    while cur.length == n:
        yield cur
        cur = cur.successor()


def classes_up_to(ctx: GroupContext, n: int) -> Iterator[ClassCursor]:
    """All classes of length at most n, in increasing order."""
    for j in range(n + 1):
        yield from classes_of_length(ctx, j)
