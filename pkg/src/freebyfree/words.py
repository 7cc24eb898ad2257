"""Reduced words in finitely generated free groups.

A letter is a nonzero integer: ``i`` is the i-th free generator and ``-i``
its inverse (1-based, Tietze style).  A :class:`Word` is a tuple of letters
that is always freely reduced, so equality of group elements is tuple
equality.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence


class Generator(int):
    """A signed generator letter; ``Generator(2, -1)`` is ``b^-1``."""

    def __new__(cls, index: int, sign: int = 1) -> "Generator":
        if index < 1:
            raise ValueError(f"generator index must be >= 1, got {index}")
        if sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {sign}")
        return super().__new__(cls, index * sign)

    @property
    def index(self) -> int:
        return abs(int(self))

    @property
    def sign(self) -> int:
        return 1 if self > 0 else -1


def _free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        x = int(x)
        if x == 0:
            raise ValueError("0 is not a generator letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


class Word(tuple):
    """Freely reduced word; construction reduces its input."""

    __slots__ = ()

    def __new__(cls, letters: Iterable[int] = ()) -> "Word":
        return super().__new__(cls, _free_reduce(letters))

    @classmethod
    def _trusted(cls, letters: Sequence[int]) -> "Word":
        # caller guarantees the sequence is already reduced
        return super().__new__(cls, letters)

    def __mul__(self, other: Iterable[int]) -> "Word":  # type: ignore[override]
        return concat(self, Word(other) if not isinstance(other, Word) else other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return invert(self) ** (-n)
        result = Word()
        for _ in range(n):
            result = concat(result, self)
        return result

    def __repr__(self) -> str:
        return f"Word({list(self)})"

    def max_index(self) -> int:
        return max((abs(x) for x in self), default=0)


EMPTY = Word()


def reduce(letters: Iterable[int]) -> Word:
    return Word(letters)


def concat(u: Word, v: Word) -> Word:
    """Reduced product ``u*v``; only the seam needs cancelling."""
    i = 0
    n = min(len(u), len(v))
    while i < n and u[len(u) - 1 - i] == -v[i]:
        i += 1
    return Word._trusted(tuple(u[: len(u) - i]) + tuple(v[i:]))


def invert(u: Word) -> Word:
    return Word._trusted(tuple(-x for x in reversed(u)))


def cyclic_reduce(u: Word) -> tuple[Word, Word]:
    """Split ``u`` as ``conjugator * core * conjugator^-1``, core cyclically reduced."""
    i = 0
    n = len(u)
    while 2 * i + 1 < n and u[i] == -u[n - 1 - i]:
        i += 1
    return Word._trusted(u[i : n - i]), Word._trusted(u[:i])


def apply_endo(images: Mapping[int, Word] | Sequence[Word], u: Iterable[int]) -> Word:
    """Image of ``u`` under the endomorphism sending generator i to ``images[i]``.

    ``images`` is either a mapping keyed by positive generator index or a
    sequence where position ``i - 1`` holds the image of generator ``i``.
    """
    out: list[int] = []
    for x in u:
        i = abs(x)
        try:
            img = images[i] if isinstance(images, Mapping) else images[i - 1]
        except (KeyError, IndexError):
            raise KeyError(f"no image for generator {i}") from None
        seq = img if x > 0 else tuple(-y for y in reversed(img))
        for y in seq:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return Word._trusted(tuple(out))


def exponent_vector(u: Iterable[int], m: int) -> list[int]:
    vec = [0] * m
    for x in u:
        i = abs(x)
        if i > m:
            raise IndexError(f"generator {i} exceeds rank {m}")
        vec[i - 1] += 1 if x > 0 else -1
    return vec


def letter_key(x: int) -> tuple[int, int]:
    """Order letters as a, a^-1, b, b^-1, ..."""
    return (abs(x), 0 if x > 0 else 1)


def shortlex_key(u: Sequence[int]) -> tuple:
    return (len(u), tuple(letter_key(x) for x in u))


def alphabet(rank: int) -> list[int]:
    """All letters of a rank-``rank`` free group in :func:`letter_key` order."""
    return [s * i for i in range(1, rank + 1) for s in (1, -1)]


def words_up_to(rank: int, length: int) -> Iterable[Word]:
    """Every reduced word of length <= ``length``, in shortlex order."""
    yield EMPTY
    layer: list[tuple[int, ...]] = [()]
    letters = alphabet(rank)
    for _ in range(length):
        nxt = []
        for w in layer:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        for w in nxt:
            yield Word._trusted(w)
        layer = nxt


def parse_word(text: str, names: Sequence[str]) -> Word:
    """Parse whitespace-separated tokens; a trailing ``-`` marks an inverse.

    ``parse_word("b a b-", ["a", "b"])`` is ``bab^-1``.  ``1`` or an empty
    string denote the identity.
    """
    lookup = {name: i + 1 for i, name in enumerate(names)}
    letters = []
    for tok in text.split():
        if tok in ("1", "e"):
            continue
        inverse = tok.endswith("-")
        name = tok[:-1] if inverse else tok
        if name not in lookup:
            raise ValueError(f"unknown generator {name!r} in word {text!r}")
        letters.append(-lookup[name] if inverse else lookup[name])
    return Word(letters)


def format_word(u: Sequence[int], names: Sequence[str] | None = None) -> str:
    if not u:
        return "1"
    if names is None:
        names = default_names(max(abs(x) for x in u))
    return " ".join(names[abs(x) - 1] + ("" if x > 0 else "-") for x in u)


def default_names(n: int) -> list[str]:
    if n <= 26:
        return [chr(ord("a") + i) for i in range(n)]
    return [f"g{i}" for i in range(1, n + 1)]
