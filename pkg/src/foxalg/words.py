"""Reduced words of the free group F_n and monomials of the free monoid.

A letter is a pair ``(index, sign)`` with ``sign`` in ``{1, -1}``; ``(2, -1)``
is t2^-1.  A word is a tuple of letters.  Reduced words never contain a
letter next to its inverse.  Free-monoid monomials in x_1..x_n are tuples of
indices.

Words are ordered shortlex: by length, then letter by letter, comparing the
index first and then the sign with +1 before -1.
"""
from __future__ import annotations

from itertools import product
from typing import Iterable, Iterator, Sequence, Tuple

from .errors import IndexOutOfRange, ParseError, RankExceeded, RankMismatch

Letter = Tuple[int, int]
Word = Tuple[Letter, ...]
XMonomial = Tuple[int, ...]

EMPTY: Word = ()


def letter(i: int, sign: int = 1) -> Letter:
    if sign not in (1, -1):
        raise ValueError("letter sign must be +1 or -1")
    return (i, sign)


def inverse_letter(a: Letter) -> Letter:
    return (a[0], -a[1])


def check_rank(seq: Iterable[Letter], rank: int | None) -> None:
    if rank is None:
        return
    for i, _ in seq:
        if not 1 <= i <= rank:
            raise RankExceeded(f"generator index {i} outside 1..{rank}")


def free_reduce(seq: Iterable[Letter], rank: int | None = None) -> Word:
    """Cancel adjacent inverse pairs with a stack; the result is reduced."""
    out: list = []
    for a in seq:
        i, s = a
        if rank is not None and not 1 <= i <= rank:
            raise RankExceeded(f"generator index {i} outside 1..{rank}")
        if out and out[-1][0] == i and out[-1][1] == -s:
            out.pop()
        else:
            out.append((i, s))
    return tuple(out)


def is_reduced(w: Sequence[Letter]) -> bool:
    return all(not (a[0] == b[0] and a[1] == -b[1]) for a, b in zip(w, w[1:]))


def concat_reduce(u: Word, v: Word) -> Word:
    """Product of two reduced words, cancelling only across the seam."""
    k = 0
    m = min(len(u), len(v))
    while k < m and u[-1 - k][0] == v[k][0] and u[-1 - k][1] == -v[k][1]:
        k += 1
    return u[: len(u) - k] + v[k:]


def concat_checked(u: Word, v: Word, rank_u: int, rank_v: int) -> Word:
    if rank_u != rank_v:
        raise RankMismatch(f"rank {rank_u} != rank {rank_v}")
    return concat_reduce(u, v)


def invert(w: Word) -> Word:
    return tuple((i, -s) for i, s in reversed(w))


def split(w: Word, l: int) -> tuple[Word, Word]:
    """Head of length ``l`` and the remaining tail."""
    if not 0 <= l <= len(w):
        raise IndexOutOfRange(f"split position {l} outside 0..{len(w)}")
    return w[:l], w[l:]


def head(w: Word, l: int) -> Word:
    return split(w, l)[0]


def tail(w: Word, l: int) -> Word:
    return split(w, l)[1]


def shortlex_key(w: Word):
    return (len(w), tuple((i, 0 if s == 1 else 1) for i, s in w))


def letters(rank: int) -> list[Letter]:
    """All 2n letters in the fixed order t1, t1^-1, t2, t2^-1, ..."""
    return [(i, s) for i in range(1, rank + 1) for s in (1, -1)]


def reduced_words(rank: int, max_len: int) -> Iterator[Word]:
    """Every reduced word of length <= max_len, in shortlex order."""
    layer: list[Word] = [EMPTY]
    alphabet = letters(rank)
    yield EMPTY
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for a in alphabet:
                if w and w[-1][0] == a[0] and w[-1][1] == -a[1]:
                    continue
                nxt.append(w + (a,))
        nxt.sort(key=shortlex_key)
        yield from nxt
        layer = nxt


def count_reduced_words(rank: int, max_len: int) -> int:
    """Closed form 1 + 2n * sum_{k<L} (2n-1)^k."""
    return 1 + 2 * rank * sum((2 * rank - 1) ** k for k in range(max_len))


def monomials(rank: int, max_deg: int) -> Iterator[XMonomial]:
    """Free-monoid monomials of degree <= max_deg, graded then lexicographic."""
    for d in range(max_deg + 1):
        for m in product(range(1, rank + 1), repeat=d):
            yield m


def word_to_json(w: Word) -> list:
    """Run-length encode into ``[[index, exponent], ...]``."""
    out: list = []
    for i, s in w:
        if out and out[-1][0] == i and (out[-1][1] > 0) == (s > 0):
            out[-1][1] += s
        else:
            out.append([i, s])
    return out


def word_from_json(data, rank: int | None = None) -> Word:
    seq = []
    try:
        for i, e in data:
            i, e = int(i), int(e)
            if e == 0:
                raise ParseError("zero exponent in word JSON")
            s = 1 if e > 0 else -1
            seq.extend([(i, s)] * abs(e))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"malformed word JSON {data!r}") from exc
    return free_reduce(seq, rank)


def format_word(w: Word) -> str:
    """``t1*t2^-1``; powers are collapsed, the empty word prints as ``1``."""
    if not w:
        return "1"
    parts = []
    for i, e in word_to_json(w):
        parts.append(f"t{i}" if e == 1 else f"t{i}^{e}")
    return "*".join(parts)
