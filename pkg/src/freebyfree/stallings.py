"""Stallings graphs of finitely generated subgroups of free groups.

A :class:`SubgroupGraph` is the folded core graph of a subgroup, with
vertices renumbered breadth-first from the base vertex (letters visited in
the order a, a^-1, b, b^-1, ...).  Two graphs are equal exactly when they
represent the same subgroup, so graphs can be used as dictionary keys.

Every graph also carries a free basis of its subgroup together with edge
weights over that basis; :meth:`SubgroupGraph.rewrite` reads the weights
along a path.  By default the basis is the spanning-tree basis; any other
free basis can be attached with :meth:`SubgroupGraph.with_basis`.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Iterable, Mapping, Sequence

from .words import (
    EMPTY,
    Word,
    apply_endo,
    concat,
    format_word,
    invert,
    letter_key,
    shortlex_key,
)


class NotInSubgroup(ValueError):
    pass


class NotABasis(ValueError):
    pass


class _Folder:
    """Incremental folding with optional edge weights in another free group.

    A dead vertex is redirected to a live one with a potential ``p``: arriving
    at the dead vertex with accumulated weight ``W`` is the same as arriving
    at its replacement with weight ``W*p``.
    """

    def __init__(self) -> None:
        self.adj: list[dict[int, tuple[int, Word]] | None] = [{}]
        self.redirect: dict[int, tuple[int, Word]] = {}

    def new_vertex(self) -> int:
        self.adj.append({})
        return len(self.adj) - 1

    def resolve(self, v: int) -> tuple[int, Word]:
        p = EMPTY
        while v in self.redirect:
            v, q = self.redirect[v]
            p = concat(p, q)
        return v, p

    def add_path(self, word: Sequence[int], weight: Word) -> None:
        """Attach a petal reading ``word`` from base to base."""
        if not word:
            return
        v = 0
        for i, x in enumerate(word):
            last = i == len(word) - 1
            w = 0 if last else self.new_vertex()
            self.add_edge(v, x, w, weight if last else EMPTY)
            v = w

    def add_edge(self, u: int, x: int, v: int, w: Word) -> None:
        pending = deque([(u, x, v, w)])
        while pending:
            u, x, v, w = pending.popleft()
            ru, pu = self.resolve(u)
            rv, pv = self.resolve(v)
            w = concat(concat(invert(pu), w), pv)
            adj_u = self.adj[ru]
            adj_v = self.adj[rv]
            if x in adj_u:
                z, wz = adj_u[x]
                self._identify(z, wz, rv, w, pending)
            elif -x in adj_v:
                y, wy = adj_v[-x]
                self._identify(y, wy, ru, invert(w), pending)
            else:
                adj_u[x] = (rv, w)
                adj_v[-x] = (ru, invert(w))

    def _identify(self, v1: int, w1: Word, v2: int, w2: Word, pending: deque) -> None:
        # two edges leave a common vertex with the same letter, landing at
        # v1 (weight w1) and v2 (weight w2); identify their endpoints
        if v1 == v2:
            return
        if v2 == 0:
            v1, w1, v2, w2 = v2, w2, v1, w1
        p = concat(invert(w2), w1)
        edges = self.adj[v2]
        self.adj[v2] = None
        self.redirect[v2] = (v1, p)
        assert edges is not None
        for y, (z, wz) in edges.items():
            if z == v2:
                if y < 0:
                    continue
            else:
                del self.adj[z][-y]
            pending.append((v2, y, z, wz))

    def live_edges(self) -> tuple[int, list[tuple[int, int, int, Word]]]:
        edges = []
        for v, a in enumerate(self.adj):
            if a is None:
                continue
            for x, (z, w) in a.items():
                if x > 0:
                    edges.append((v, x, z, w))
        return len(self.adj), edges


def _core_and_canonical(
    rank: int, edges: Iterable[tuple[int, int, int, Word | None]]
) -> tuple[int, list[dict[int, int]], list[dict[int, Word | None]]]:
    """Prune hanging trees, renumber breadth-first from vertex 0."""
    adj: dict[int, dict[int, tuple[int, Word | None]]] = {0: {}}
    for u, x, v, w in edges:
        adj.setdefault(u, {})[x] = (v, w)
        adj.setdefault(v, {})[-x] = (u, invert(w) if w is not None else None)
    # keep only the component of the base
    seen = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for z, _ in adj[v].values():
            if z not in seen:
                seen.add(z)
                queue.append(z)
    adj = {v: a for v, a in adj.items() if v in seen}
    leaves = [v for v, a in adj.items() if v != 0 and len(a) == 1]
    while leaves:
        v = leaves.pop()
        if v not in adj or len(adj[v]) != 1:
            continue
        (x, (z, _)), = adj[v].items()
        del adj[v]
        del adj[z][-x]
        if z != 0 and len(adj[z]) == 1:
            leaves.append(z)
    order = {0: 0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for x in sorted(adj[v], key=letter_key):
            z = adj[v][x][0]
            if z not in order:
                order[z] = len(order)
                queue.append(z)
    n = len(order)
    out: list[dict[int, int]] = [dict() for _ in range(n)]
    wts: list[dict[int, Word | None]] = [dict() for _ in range(n)]
    for v, a in adj.items():
        for x, (z, w) in a.items():
            out[order[v]][x] = order[z]
            wts[order[v]][x] = w
    return n, out, wts


class SubgroupGraph:
    """Folded, base-pointed core graph of a subgroup of the free group F_rank."""

    __slots__ = ("ambient_rank", "n_vertices", "out", "basis", "_weights", "_key", "_tree")

    def __init__(
        self,
        ambient_rank: int,
        out: list[dict[int, int]],
        weights: list[dict[int, Word]] | None = None,
        basis: Sequence[Word] | None = None,
    ) -> None:
        self.ambient_rank = ambient_rank
        self.n_vertices = len(out)
        self.out = tuple(out)
        self._key = (
            ambient_rank,
            self.n_vertices,
            tuple(tuple(sorted((x, z) for x, z in a.items() if x > 0)) for a in out),
        )
        self._tree = self._spanning_tree()
        if weights is None:
            self.basis, self._weights = self._tree_basis()
        else:
            assert basis is not None
            self.basis = tuple(basis)
            self._weights = tuple(weights)

    # -- construction helpers -------------------------------------------

    def _spanning_tree(self) -> dict[int, Word]:
        """Geodesic label of the BFS tree path from base to each vertex."""
        paths = {0: EMPTY}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for x in sorted(self.out[v], key=letter_key):
                z = self.out[v][x]
                if z not in paths:
                    paths[z] = Word._trusted(paths[v] + (x,))
                    queue.append(z)
        return paths

    def _tree_edges(self) -> set[tuple[int, int]]:
        tree = set()
        for v, p in self._tree.items():
            if p:
                # last letter of the path enters v from its parent
                parent = self.out[v][-p[-1]]
                tree.add((parent, p[-1]))
                tree.add((v, -p[-1]))
        return tree

    def _tree_basis(self) -> tuple[tuple[Word, ...], tuple[dict[int, Word], ...]]:
        tree = self._tree_edges()
        found = []
        for v, a in enumerate(self.out):
            for x, z in a.items():
                if x > 0 and (v, x) not in tree:
                    word = concat(Word._trusted(self._tree[v] + (x,)), invert(self._tree[z]))
                    found.append((word, v, x))
        found.sort(key=lambda t: shortlex_key(t[0]))
        weights: list[dict[int, Word]] = [dict() for _ in self.out]
        for v, a in enumerate(self.out):
            for x in a:
                weights[v][x] = EMPTY
        for j, (_, v, x) in enumerate(found, start=1):
            weights[v][x] = Word._trusted((j,))
            weights[self.out[v][x]][-x] = Word._trusted((-j,))
        return tuple(w for w, _, _ in found), tuple(weights)

    # -- equality ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SubgroupGraph) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        idx = self.index()
        return (
            f"SubgroupGraph(rank={self.rank}, vertices={self.n_vertices}, "
            f"index={'inf' if idx == math.inf else idx}, basis=[{', '.join(format_word(w) for w in self.basis)}])"
        )

    @property
    def key(self) -> tuple:
        return self._key

    # -- queries -----------------------------------------------------------

    @property
    def rank(self) -> int:
        """Rank of the subgroup (edges - vertices + 1)."""
        n_edges = sum(1 for a in self.out for x in a if x > 0)
        return n_edges - self.n_vertices + 1

    def is_complete(self) -> bool:
        return all(len(a) == 2 * self.ambient_rank for a in self.out)

    def index(self) -> int | float:
        return self.n_vertices if self.is_complete() else math.inf

    def endpoint(self, u: Iterable[int], start: int = 0) -> int | None:
        v = start
        for x in u:
            v = self.out[v].get(x)
            if v is None:
                return None
        return v

    def contains(self, u: Iterable[int]) -> bool:
        return self.endpoint(u) == 0

    def rewrite(self, u: Iterable[int]) -> Word:
        """Express ``u`` as a word in :attr:`basis` (letter j = basis[j-1])."""
        v = 0
        acc: list[int] = []
        for x in u:
            z = self.out[v].get(x)
            if z is None:
                raise NotInSubgroup(f"{format_word(tuple(u))} is not in the subgroup")
            acc.extend(self._weights[v][x])
            v = z
        if v != 0:
            raise NotInSubgroup(f"{format_word(tuple(u))} is not in the subgroup")
        return Word(acc)

    def expand(self, w: Iterable[int]) -> Word:
        """Inverse of :meth:`rewrite`: substitute basis words."""
        return apply_endo(self.basis, w)

    def tree_path(self, v: int) -> Word:
        return self._tree[v]

    def with_basis(self, words: Sequence[Word]) -> "SubgroupGraph":
        """The same subgroup, rewriting over the given free basis instead."""
        words = [Word(w) for w in words]
        g = _fold_tracked(words, self.ambient_rank)
        if g != self:
            raise NotABasis("words generate a different subgroup")
        if len(words) != self.rank:
            raise NotABasis(f"{len(words)} words cannot be a basis of a rank {self.rank} subgroup")
        return g

    def canonical_text(self) -> str:
        """Adjacency text, one line per positive edge, for golden comparisons."""
        lines = [f"rank {self.ambient_rank} vertices {self.n_vertices}"]
        for v, a in enumerate(self.out):
            for x in sorted(a):
                if x > 0:
                    lines.append(f"{v} -{x}-> {a[x]}")
        return "\n".join(lines)


def _fold_tracked(generators: Sequence[Word], ambient_rank: int) -> SubgroupGraph:
    folder = _Folder()
    for j, w in enumerate(generators, start=1):
        _check_rank(w, ambient_rank)
        folder.add_path(w, Word._trusted((j,)))
    _, edges = folder.live_edges()
    n, out, wts = _core_and_canonical(ambient_rank, edges)
    return SubgroupGraph(ambient_rank, out, wts, basis=generators)  # type: ignore[arg-type]


def _check_rank(w: Sequence[int], ambient_rank: int) -> None:
    for x in w:
        if abs(x) > ambient_rank:
            raise ValueError(f"generator {abs(x)} exceeds ambient rank {ambient_rank}")


def fold(generators: Iterable[Iterable[int]], ambient_rank: int) -> SubgroupGraph:
    """Stallings graph of the subgroup generated by ``generators``."""
    folder = _Folder()
    for w in generators:
        w = Word(w)
        _check_rank(w, ambient_rank)
        folder.add_path(w, EMPTY)
    _, edges = folder.live_edges()
    n, out, _ = _core_and_canonical(ambient_rank, [(u, x, v, None) for u, x, v, _ in edges])
    return SubgroupGraph(ambient_rank, out)


def from_edges(ambient_rank: int, edges: Iterable[tuple[int, int, int]]) -> SubgroupGraph:
    """Graph of a (possibly unfolded) labelled graph based at vertex 0."""
    folder = _Folder()
    mapping = {0: 0}
    for u, x, v in edges:
        for t in (u, v):
            if t not in mapping:
                mapping[t] = folder.new_vertex()
        if x < 0:
            u, x, v = v, -x, u
        folder.add_edge(mapping[u], x, mapping[v], EMPTY)
    _, fe = folder.live_edges()
    n, out, _ = _core_and_canonical(ambient_rank, [(u, x, v, None) for u, x, v, _ in fe])
    return SubgroupGraph(ambient_rank, out)


def trivial(ambient_rank: int) -> SubgroupGraph:
    return SubgroupGraph(ambient_rank, [{}])


def rose(ambient_rank: int) -> SubgroupGraph:
    return fold([[i] for i in range(1, ambient_rank + 1)], ambient_rank)


def contains(g: SubgroupGraph, u: Iterable[int]) -> bool:
    return g.contains(u)


def index(g: SubgroupGraph, ambient_rank: int | None = None) -> int | float:
    if ambient_rank is not None and ambient_rank != g.ambient_rank:
        raise ValueError("ambient rank mismatch")
    return g.index()


def basis(g: SubgroupGraph) -> list[Word]:
    return list(g.basis)


def rewrite(g: SubgroupGraph, u: Iterable[int]) -> Word:
    return g.rewrite(u)


def intersect(g1: SubgroupGraph, g2: SubgroupGraph) -> SubgroupGraph:
    """Core of the product graph at the pair of base vertices."""
    if g1.ambient_rank != g2.ambient_rank:
        raise ValueError("ambient rank mismatch")
    ids = {(0, 0): 0}
    queue = deque([(0, 0)])
    edges = []
    while queue:
        p = queue.popleft()
        a1, a2 = g1.out[p[0]], g2.out[p[1]]
        for x, z1 in a1.items():
            z2 = a2.get(x)
            if z2 is None:
                continue
            q = (z1, z2)
            if q not in ids:
                ids[q] = len(ids)
                queue.append(q)
            if x > 0:
                edges.append((ids[p], x, ids[q], None))
    n, out, _ = _core_and_canonical(g1.ambient_rank, edges)
    return SubgroupGraph(g1.ambient_rank, out)


def image_graph(images: Mapping[int, Word] | Sequence[Word], g: SubgroupGraph) -> SubgroupGraph:
    """Graph of the image subgroup under the endomorphism given by ``images``."""
    return fold([apply_endo(images, w) for w in g.basis], g.ambient_rank)


def express(generators: Sequence[Iterable[int]], u: Iterable[int], ambient_rank: int) -> Word:
    """Write ``u`` as a word in ``generators`` (letter j = generators[j-1]).

    The generators need not be a basis; the answer is one valid expression.
    """
    gens = [Word(w) for w in generators]
    g = _fold_tracked(gens, ambient_rank)
    return g.rewrite(u)
