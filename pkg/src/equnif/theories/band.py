"""Free band (the AI theory) word problem.

Two words are equal in the free band iff they have the same content, the
same longest prefix missing one letter (recursively), the same letter
completing that prefix, and symmetrically on the right.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Hashable, Sequence

Word = tuple[Hashable, ...]


@lru_cache(maxsize=200_000)
def band_key(w: Word) -> tuple:
    content = tuple(sorted(set(w), key=repr))
    if len(content) <= 1:
        return (content,)
    n = len(content)
    seen: set = set()
    i = 0
    for i, c in enumerate(w):
        seen.add(c)
        if len(seen) == n:
            break
    prefix, a = w[:i], w[i]
    seen = set()
    j = len(w) - 1
    for j in range(len(w) - 1, -1, -1):
        seen.add(w[j])
        if len(seen) == n:
            break
    suffix, b = w[j + 1:], w[j]
    return (content, band_key(prefix), a, b, band_key(suffix))


def _drop_squares(w: list) -> list:
    changed = True
    while changed:
        changed = False
        n = len(w)
        for half in range(1, n // 2 + 1):
            for i in range(0, n - 2 * half + 1):
                if w[i:i + half] == w[i + half:i + 2 * half]:
                    del w[i + half:i + 2 * half]
                    changed = True
                    break
            if changed:
                break
    return w


@lru_cache(maxsize=200_000)
def word_of_key(key: tuple) -> Word:
    content = key[0]
    if len(content) == 0:
        return ()
    if len(content) == 1:
        return (content[0],)
    _, kp, a, b, ks = key
    raw = list(word_of_key(kp)) + [a, b] + list(word_of_key(ks))
    return tuple(_drop_squares(raw))


def band_normal_word(w: Sequence[Hashable]) -> Word:
    return word_of_key(band_key(tuple(w)))


def band_equal(u: Sequence[Hashable], v: Sequence[Hashable]) -> bool:
    return band_key(tuple(u)) == band_key(tuple(v))


@lru_cache(maxsize=64)
def band_elements(letters: tuple) -> tuple[Word, ...]:
    """All elements of the free band over ``letters`` as canonical words."""
    elems: dict[tuple, Word] = {}
    frontier = []
    for c in letters:
        k = band_key((c,))
        elems[k] = (c,)
        frontier.append((c,))
    while frontier:
        new = []
        current = list(elems.values())
        for u in frontier:
            for v in current:
                for w in (u + v, v + u):
                    k = band_key(w)
                    if k not in elems:
                        elems[k] = word_of_key(k)
                        new.append(elems[k])
        frontier = new
    return tuple(sorted(elems.values(), key=lambda w: (len(w), [repr(c) for c in w])))
