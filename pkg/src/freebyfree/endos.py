"""Endomorphisms and certified automorphisms of free groups."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import stallings
from .words import EMPTY, Word, apply_endo, concat, cyclic_reduce, exponent_vector, invert, parse_word
from .zmat import IntMatrix


class NotSurjective(ValueError):
    pass


class NotPreserved(ValueError):
    pass


@dataclass(frozen=True)
class Endomorphism:
    """Endomorphism of F_rank; ``images[i]`` is the image of generator i+1."""

    ambient_rank: int
    images: tuple[Word, ...]

    def __init__(self, ambient_rank: int, images: Iterable[Iterable[int]]):
        imgs = tuple(Word(w) for w in images)
        if len(imgs) != ambient_rank:
            raise ValueError(f"expected {ambient_rank} images, got {len(imgs)}")
        for w in imgs:
            if w.max_index() > ambient_rank:
                raise ValueError(f"image {w} uses a generator beyond rank {ambient_rank}")
        object.__setattr__(self, "ambient_rank", ambient_rank)
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, rank: int) -> "Endomorphism":
        return cls(rank, [[i] for i in range(1, rank + 1)])

    @classmethod
    def conjugation(cls, rank: int, g: Iterable[int]) -> "Endomorphism":
        """x -> g x g^-1."""
        g = Word(g)
        return cls(rank, [concat(concat(g, Word([i])), invert(g)) for i in range(1, rank + 1)])

    def __call__(self, u: Iterable[int]) -> Word:
        return apply_endo(self.images, u)

    def is_identity(self) -> bool:
        return all(w == (i,) for i, w in enumerate(self.images, start=1))


@dataclass(frozen=True)
class Automorphism:
    forward: Endomorphism
    inverse: Endomorphism

    @property
    def ambient_rank(self) -> int:
        return self.forward.ambient_rank

    def __call__(self, u: Iterable[int]) -> Word:
        return self.forward(u)

    def inverted(self) -> "Automorphism":
        return Automorphism(self.inverse, self.forward)

    @classmethod
    def identity(cls, rank: int) -> "Automorphism":
        e = Endomorphism.identity(rank)
        return cls(e, e)


def compose(f: Endomorphism, g: Endomorphism) -> Endomorphism:
    """f after g: x -> f(g(x))."""
    if f.ambient_rank != g.ambient_rank:
        raise ValueError("rank mismatch")
    return Endomorphism(f.ambient_rank, [f(w) for w in g.images])


def compose_auts(f: Automorphism, g: Automorphism) -> Automorphism:
    return Automorphism(compose(f.forward, g.forward), compose(g.inverse, f.inverse))


def certify_automorphism(f: Endomorphism) -> Automorphism:
    """Certify ``f`` is onto (hence an automorphism) and compute its inverse.

    The images are folded; they generate F_n exactly when the folded graph
    is the one-vertex rose.  Each generator is then rewritten over the
    images, which gives the inverse map.
    """
    n = f.ambient_rank
    g = stallings.fold(f.images, n)
    if g.n_vertices != 1 or not g.is_complete():
        raise NotSurjective("images do not generate the free group")
    tracked = g.with_basis(list(f.images))
    inverse = Endomorphism(n, [tracked.rewrite([i]) for i in range(1, n + 1)])
    assert all(f(inverse.images[i]) == (i + 1,) for i in range(n))
    return Automorphism(f, inverse)


def abelianized(f: Endomorphism) -> IntMatrix:
    """Matrix whose column j is the exponent vector of the j-th image."""
    n = f.ambient_rank
    return IntMatrix.from_columns([exponent_vector(w, n) for w in f.images], n)


def is_inner(f: Automorphism | Endomorphism) -> Word | None:
    """Return g with f(x) = g x g^-1 for every generator x, or None."""
    e = f.forward if isinstance(f, Automorphism) else f
    n = e.ambient_rank
    if n == 1:
        return EMPTY if e.images[0] == (1,) else None
    core, c = cyclic_reduce(e.images[0])
    if core != (1,):
        return None
    # g = c a^k for some k; pin k down with the second generator
    w = concat(concat(invert(c), e.images[1]), c)
    if len(w) % 2 == 0:
        return None
    k2 = (len(w) - 1) // 2
    if w[k2] != 2:
        return None
    head = w[:k2]
    if head and not (all(x == 1 for x in head) or all(x == -1 for x in head)):
        return None
    g = concat(c, Word(head))
    if Endomorphism.conjugation(n, g).images == e.images:
        return g
    return None


def restrict(f: Automorphism | Endomorphism, g: stallings.SubgroupGraph) -> Endomorphism:
    """Action of ``f`` on a preserved subgroup, over the subgroup's basis."""
    e = f.forward if isinstance(f, Automorphism) else f
    if stallings.image_graph(e.images, g) != g:
        raise NotPreserved("the subgroup is not mapped onto itself")
    return Endomorphism(len(g.basis), [g.rewrite(e(b)) for b in g.basis])


def parse_automorphism(lines: Sequence[str], names: Sequence[str]) -> Endomorphism:
    """Parse ``a -> a b`` lines (one per generator) into an endomorphism."""
    images: dict[int, Word] = {}
    for line in lines:
        if "->" not in line:
            raise ValueError(f"expected 'gen -> word', got {line!r}")
        lhs, rhs = line.split("->", 1)
        lhs = lhs.strip()
        if lhs not in names:
            raise ValueError(f"unknown generator {lhs!r}")
        i = names.index(lhs) + 1
        if i in images:
            raise ValueError(f"generator {lhs!r} mapped twice")
        images[i] = parse_word(rhs, names)
    missing = [names[i - 1] for i in range(1, len(names) + 1) if i not in images]
    if missing:
        raise ValueError(f"no image given for {', '.join(missing)}")
    return Endomorphism(len(names), [images[i] for i in range(1, len(names) + 1)])
