"""Finite presentations, extensions H x| F_k, low-index subgroups, Reidemeister-Schreier.

Generators of a semidirect product are numbered fiber first, then base:
letters 1..m are a_1..a_m and m+1..m+k are t_1..t_k.  Conjugation by t_i
acts on the fiber as the i-th automorphism, ``t_i a_j t_i^-1 = phi_i(a_j)``.

Coset tables act on the right: coset ``c`` times generator ``g`` is
``table.action[g-1][c]`` (0-based cosets, coset 0 is the subgroup).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Sequence

from . import stallings
from .endos import Automorphism, Endomorphism, abelianized, certify_automorphism
from .words import (
    EMPTY,
    Word,
    concat,
    cyclic_reduce,
    default_names,
    exponent_vector,
    invert,
    letter_key,
)
from .zmat import AbelianGroupShape, IntMatrix, cokernel, stack_columns


@dataclass(frozen=True)
class Presentation:
    n_generators: int
    relators: tuple[Word, ...] = ()
    names: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        rels = []
        for r in self.relators:
            core, _ = cyclic_reduce(Word(r))
            if core.max_index() > self.n_generators:
                raise ValueError(f"relator {list(core)} uses a generator beyond {self.n_generators}")
            rels.append(core)
        object.__setattr__(self, "relators", tuple(rels))
        if self.names is not None and len(self.names) != self.n_generators:
            raise ValueError("wrong number of generator names")

    def generator_names(self) -> list[str]:
        return list(self.names) if self.names else default_names(self.n_generators)

    def relator_matrix(self) -> IntMatrix:
        """Exponent vectors of the relators, one column each."""
        n = self.n_generators
        return IntMatrix.from_columns([exponent_vector(r, n) for r in self.relators], n)


def abelianization(p: Presentation) -> AbelianGroupShape:
    return cokernel(p.relator_matrix())


# -- extensions -------------------------------------------------------------

FIBER_MODES = ("free", "presented", "abelian")
NONFIBERING = ("free-rank>=2", "surface-genus>=2", "user-asserted", "unknown")


@dataclass(frozen=True)
class ExtensionSpec:
    """The data of G = H x| F_k.

    ``fiber_mode`` is ``"free"`` (H = F_m, actions certified automorphisms),
    ``"presented"`` (H = <a_1..a_m | fiber_relators>, actions given by words
    and trusted) or ``"abelian"`` (only H_1(H) = Z^m / relations and integer
    matrices for the actions are known).
    """

    fiber_mode: str
    fiber_rank: int
    base_rank: int
    actions: tuple[Automorphism | Endomorphism, ...] = ()
    fiber_relators: tuple[Word, ...] = ()
    matrices: tuple[IntMatrix, ...] = ()
    relation_matrix: IntMatrix | None = None
    nonfibering: str = "unknown"
    # display names only; they do not affect equality
    fiber_names: tuple[str, ...] | None = field(default=None, compare=False)
    base_names: tuple[str, ...] | None = field(default=None, compare=False)
    descriptor: dict | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.fiber_mode not in FIBER_MODES:
            raise ValueError(f"unknown fiber mode {self.fiber_mode!r}")
        if self.nonfibering not in NONFIBERING:
            raise ValueError(f"unknown nonfibering provenance {self.nonfibering!r}")
        k = self.base_rank
        if self.fiber_mode == "abelian":
            if len(self.matrices) != k:
                raise ValueError(f"expected {k} action matrices, got {len(self.matrices)}")
            for mat in self.matrices:
                if (mat.rows, mat.cols) != (self.fiber_rank, self.fiber_rank):
                    raise ValueError("action matrix has the wrong size")
        else:
            if len(self.actions) != k:
                raise ValueError(f"expected {k} actions, got {len(self.actions)}")
            for a in self.actions:
                if a.ambient_rank != self.fiber_rank:
                    raise ValueError("action rank does not match the fiber")
            if self.fiber_mode == "free" and not all(isinstance(a, Automorphism) for a in self.actions):
                raise ValueError("free-fiber actions must be certified automorphisms")

    # constructors ------------------------------------------------------

    @classmethod
    def free(
        cls,
        fiber_rank: int,
        actions: Sequence[Endomorphism | Automorphism],
        nonfibering: str | None = None,
        **kw,
    ) -> "ExtensionSpec":
        auts = tuple(a if isinstance(a, Automorphism) else certify_automorphism(a) for a in actions)
        if nonfibering is None:
            nonfibering = "free-rank>=2" if fiber_rank >= 2 else "unknown"
        return cls("free", fiber_rank, len(auts), auts, nonfibering=nonfibering, **kw)

    @classmethod
    def presented(
        cls,
        fiber_rank: int,
        relators: Sequence[Iterable[int]],
        actions: Sequence[Endomorphism | Automorphism],
        nonfibering: str = "unknown",
        **kw,
    ) -> "ExtensionSpec":
        rels = tuple(cyclic_reduce(Word(r))[0] for r in relators)
        return cls("presented", fiber_rank, len(actions), tuple(actions), fiber_relators=rels, nonfibering=nonfibering, **kw)

    @classmethod
    def abelian(
        cls,
        matrices: Sequence[IntMatrix],
        fiber_rank: int | None = None,
        relations: IntMatrix | None = None,
        nonfibering: str = "unknown",
        **kw,
    ) -> "ExtensionSpec":
        mats = tuple(matrices)
        if fiber_rank is None:
            if not mats:
                raise ValueError("fiber rank needed when there are no actions")
            fiber_rank = mats[0].rows
        return cls(
            "abelian", fiber_rank, len(mats), matrices=mats, relation_matrix=relations, nonfibering=nonfibering, **kw
        )

    # derived data ------------------------------------------------------

    def forward(self, i: int) -> Endomorphism:
        a = self.actions[i]
        return a.forward if isinstance(a, Automorphism) else a

    def phi_matrices(self) -> list[IntMatrix]:
        if self.fiber_mode == "abelian":
            return list(self.matrices)
        return [abelianized(self.forward(i)) for i in range(self.base_rank)]

    def fiber_relations(self) -> IntMatrix:
        """Relations of H_1(H) as columns of an m-row matrix."""
        m = self.fiber_rank
        if self.fiber_mode == "abelian":
            return self.relation_matrix if self.relation_matrix is not None else IntMatrix.zeros(m, 0)
        if self.fiber_mode == "presented":
            return IntMatrix.from_columns([exponent_vector(r, m) for r in self.fiber_relators], m)
        return IntMatrix.zeros(m, 0)

    def stacked(self) -> IntMatrix:
        """[relations | Phi_1 - I | ... | Phi_k - I]."""
        m = self.fiber_rank
        ident = IntMatrix.identity(m)
        return stack_columns([self.fiber_relations()] + [p - ident for p in self.phi_matrices()], m)

    def fiber_h1(self) -> AbelianGroupShape:
        return cokernel(self.fiber_relations())

    def all_names(self) -> list[str]:
        fn = list(self.fiber_names) if self.fiber_names else _fiber_default(self.fiber_rank)
        bn = list(self.base_names) if self.base_names else _base_default(self.base_rank)
        return fn + bn


def _fiber_default(m: int) -> list[str]:
    if m <= 4:
        return list("abcd"[:m])
    return [f"a{i}" for i in range(1, m + 1)]


def _base_default(k: int) -> list[str]:
    if k <= 4:
        return list("stuv"[:k])
    return [f"t{i}" for i in range(1, k + 1)]


def semidirect_presentation(e: ExtensionSpec) -> Presentation:
    """<a_1..a_m, t_1..t_k | R, t_i a_j t_i^-1 phi_i(a_j)^-1>."""
    if e.fiber_mode == "abelian":
        raise ValueError("an abelianized-only fiber has no presentation")
    m, k = e.fiber_rank, e.base_rank
    rels = list(e.fiber_relators)
    for i in range(k):
        t = m + i + 1
        f = e.forward(i)
        for j in range(1, m + 1):
            rels.append(Word([t, j, -t]) * invert(f.images[j - 1]))
    return Presentation(m + k, tuple(rels), tuple(e.all_names()))


def extension_h1(e: ExtensionSpec) -> AbelianGroupShape:
    """H_1(G) = Z^k + H_1(H) / <(Phi_i - I) H_1(H)>."""
    return cokernel(e.stacked()).plus_free(e.base_rank)


# -- coset tables -------------------------------------------------------------


def _col(x: int) -> int:
    return 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1


def _col_letter(c: int) -> int:
    return c // 2 + 1 if c % 2 == 0 else -(c // 2 + 1)


@dataclass(frozen=True)
class CosetTable:
    degree: int
    action: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        for perm in self.action:
            if sorted(perm) != list(range(self.degree)):
                raise ValueError("generator action is not a permutation")

    @property
    def n_generators(self) -> int:
        return len(self.action)

    def step(self, c: int, x: int) -> int:
        if x > 0:
            return self.action[x - 1][c]
        return self._inverse[-x - 1][c]

    @cached_property
    def _inverse(self) -> tuple[tuple[int, ...], ...]:
        inv = []
        for perm in self.action:
            q = [0] * self.degree
            for i, j in enumerate(perm):
                q[j] = i
            inv.append(tuple(q))
        return tuple(inv)

    def act(self, c: int, u: Iterable[int]) -> int:
        inv = self._inverse
        for x in u:
            c = self.action[x - 1][c] if x > 0 else inv[-x - 1][c]
        return c

    def contains(self, u: Iterable[int]) -> bool:
        return self.act(0, u) == 0

    def satisfies(self, p: Presentation) -> bool:
        return all(self.act(c, r) == c for r in p.relators for c in range(self.degree))

    def is_transitive(self) -> bool:
        seen = {0}
        queue = deque([0])
        while queue:
            c = queue.popleft()
            for perm in self.action:
                for z in (perm[c], perm.index(c)):
                    if z not in seen:
                        seen.add(z)
                        queue.append(z)
        return len(seen) == self.degree

    def rows(self) -> list[list[int]]:
        """Row-major table with columns x_1, x_1^-1, x_2, ..."""
        inv = self._inverse
        return [
            [v for g in range(self.n_generators) for v in (self.action[g][c], inv[g][c])]
            for c in range(self.degree)
        ]

    def sort_key(self) -> tuple:
        return (self.degree, tuple(tuple(r) for r in self.rows()))

    def subgroup_graph(self, letters: Sequence[int]) -> stallings.SubgroupGraph:
        """Stallings graph of the words over ``letters`` (renumbered 1..) fixing coset 0."""
        edges = []
        for new, g in enumerate(letters, start=1):
            for c in range(self.degree):
                edges.append((c, new, self.action[g - 1][c]))
        return stallings.from_edges(len(letters), edges)

    def to_dict(self) -> dict:
        return {"degree": self.degree, "action": [list(p) for p in self.action]}

    @classmethod
    def from_dict(cls, d: dict) -> "CosetTable":
        return cls(d["degree"], tuple(tuple(p) for p in d["action"]))


class _LowIndex:
    def __init__(self, p: Presentation, d_max: int, conjugacy: bool) -> None:
        self.n = p.n_generators
        self.ncols = 2 * self.n
        self.d_max = d_max
        self.conjugacy = conjugacy
        self.rels = [[_col(x) for x in r] for r in p.relators if r]
        self.results: list[list[list[int]]] = []

    def run(self) -> list[list[list[int]]]:
        table: list[list[int | None]] = [[None] * self.ncols for _ in range(self.d_max)]
        if self._scan(table, 1):
            self._search(table, 1)
        return self.results

    def _scan(self, table: list[list[int | None]], ncosets: int) -> bool:
        changed = True
        while changed:
            changed = False
            for r in self.rels:
                last = len(r) - 1
                for c in range(ncosets):
                    f = c
                    i = 0
                    while i <= last:
                        nxt = table[f][r[i]]
                        if nxt is None:
                            break
                        f = nxt
                        i += 1
                    if i > last:
                        if f != c:
                            return False
                        continue
                    b = c
                    j = last
                    while j >= i:
                        nxt = table[b][r[j] ^ 1]
                        if nxt is None:
                            break
                        b = nxt
                        j -= 1
                    if j < i:
                        return False
                    if j == i:
                        col = r[i]
                        if table[b][col ^ 1] is not None:
                            return False
                        table[f][col] = b
                        table[b][col ^ 1] = f
                        changed = True
        return True

    def _canonical(self, table: list[list[int | None]], ncosets: int) -> bool:
        for start in range(1, ncosets):
            relabel = {start: 0}
            order = [start]
            verdict = 0
            for row in range(ncosets):
                if row >= len(order):
                    break
                src = table[order[row]]
                ref = table[row]
                for col in range(self.ncols):
                    val = src[col]
                    want = ref[col]
                    if val is None or want is None:
                        verdict = 1
                        break
                    if val not in relabel:
                        relabel[val] = len(order)
                        order.append(val)
                    new = relabel[val]
                    if new < want:
                        return False
                    if new > want:
                        verdict = 1
                        break
                if verdict:
                    break
        return True

    def _search(self, table: list[list[int | None]], ncosets: int) -> None:
        if self.conjugacy and not self._canonical(table, ncosets):
            return
        pos = None
        for c in range(ncosets):
            row = table[c]
            for col in range(self.ncols):
                if row[col] is None:
                    pos = (c, col)
                    break
            if pos:
                break
        if pos is None:
            self.results.append([row[:] for row in table[:ncosets]])
            return
        c, col = pos
        targets = list(range(ncosets))
        if ncosets < self.d_max:
            targets.append(ncosets)
        for d in targets:
            if table[d][col ^ 1] is not None:
                continue
            t2 = [row[:] for row in table]
            t2[c][col] = d
            t2[d][col ^ 1] = c
            n2 = max(ncosets, d + 1)
            if self._scan(t2, n2):
                self._search(t2, n2)


# backtracking cost grows factorially; beyond this the search is not desk-scale
MAX_DEGREE = 12


def low_index(p: Presentation, d_max: int, conjugacy: bool = True) -> list[CosetTable]:
    """Transitive coset tables of degree <= d_max satisfying the relators.

    With ``conjugacy`` one table per conjugacy class of subgroups is
    returned, otherwise one per subgroup.  Output is sorted by degree, then
    by the row-major table.
    """
    if not 1 <= d_max <= MAX_DEGREE:
        raise ValueError(f"d_max must be between 1 and {MAX_DEGREE}")
    raw = _LowIndex(p, d_max, conjugacy).run()
    tables = []
    for rows in raw:
        action = tuple(tuple(rows[c][2 * g] for c in range(len(rows))) for g in range(p.n_generators))
        tables.append(CosetTable(len(rows), action))
    tables.sort(key=CosetTable.sort_key)
    return tables


# -- Reidemeister-Schreier ----------------------------------------------------


@dataclass(frozen=True)
class SchreierData:
    presentation: Presentation
    words: tuple[Word, ...]  # each Schreier generator as a word in the parent group
    transversal: tuple[Word, ...]


def _transversal(t: CosetTable, method: str) -> tuple[list[Word], set[tuple[int, int]]]:
    n = t.n_generators
    letters = sorted((s * g for g in range(1, n + 1) for s in (1, -1)), key=letter_key)
    paths: list[Word | None] = [None] * t.degree
    paths[0] = EMPTY
    tree: set[tuple[int, int]] = set()  # (coset, positive generator) edges used by the tree
    if method == "bfs":
        queue = deque([0])
        while queue:
            c = queue.popleft()
            for x in letters:
                z = t.step(c, x)
                if paths[z] is None:
                    paths[z] = Word._trusted(paths[c] + (x,))
                    tree.add((c, x) if x > 0 else (z, -x))
                    queue.append(z)
    elif method == "dfs":
        def visit(c: int) -> None:
            for x in reversed(letters):
                z = t.step(c, x)
                if paths[z] is None:
                    paths[z] = Word._trusted(paths[c] + (x,))
                    tree.add((c, x) if x > 0 else (z, -x))
                    visit(z)
        visit(0)
    else:
        raise ValueError(f"unknown transversal method {method!r}")
    return paths, tree  # type: ignore[return-value]


def schreier(p: Presentation, t: CosetTable, transversal: str = "bfs") -> SchreierData:
    paths, tree = _transversal(t, transversal)
    index: dict[tuple[int, int], int] = {}
    words = []
    for c in range(t.degree):
        for g in range(1, p.n_generators + 1):
            if (c, g) in tree:
                continue
            index[(c, g)] = len(words) + 1
            words.append(concat(Word._trusted(paths[c] + (g,)), invert(paths[t.step(c, g)])))
    rels: list[Word] = []
    seen = set()
    for r in p.relators:
        for c in range(t.degree):
            out = []
            v = c
            for x in r:
                if x > 0:
                    s = index.get((v, x))
                    if s:
                        out.append(s)
                    v = t.step(v, x)
                else:
                    z = t.step(v, x)
                    s = index.get((z, -x))
                    if s:
                        out.append(-s)
                    v = z
            core, _ = cyclic_reduce(Word(out))
            if not core:
                continue
            key = _cyclic_key(core)
            if key in seen:
                continue
            seen.add(key)
            rels.append(core)
    return SchreierData(Presentation(len(words), tuple(rels)), tuple(words), tuple(paths))


def _cyclic_key(r: Word) -> tuple:
    cands = []
    for w in (tuple(r), tuple(invert(r))):
        for i in range(len(w)):
            cands.append(w[i:] + w[:i])
    return min(cands)


def reidemeister_schreier(p: Presentation, t: CosetTable, transversal: str = "bfs") -> Presentation:
    return schreier(p, t, transversal).presentation


# -- sub-extensions --------------------------------------------------------


def conjugate_fiber(e: ExtensionSpec, g: Iterable[int], w: Word) -> Word:
    """The fiber word g w g^-1 for g in G and w in the (free) fiber."""
    m = e.fiber_rank
    for y in reversed(tuple(g)):
        if abs(y) <= m:
            w = concat(concat(Word._trusted((y,)), w), Word._trusted((-y,)))
        else:
            a = e.actions[abs(y) - m - 1]
            if y > 0:
                w = e.forward(abs(y) - m - 1)(w)
            else:
                if not isinstance(a, Automorphism):
                    raise ValueError("inverse action unavailable")
                w = a.inverse(w)
    return w


def project_base(e: ExtensionSpec, g: Iterable[int]) -> Word:
    m = e.fiber_rank
    return Word(x - m if x > 0 else x + m for x in g if abs(x) > m)


def sub_extension(e: ExtensionSpec, t: CosetTable) -> ExtensionSpec:
    """K = the finite-index subgroup of ``t``, written as (K n H) x| pi(K)."""
    if e.fiber_mode != "free":
        raise ValueError("sub_extension needs a free fiber")
    p = semidirect_presentation(e)
    if t.n_generators != p.n_generators or not t.satisfies(p):
        raise ValueError("coset table does not belong to this extension")
    m, k = e.fiber_rank, e.base_rank
    fiber = t.subgroup_graph(list(range(1, m + 1)))
    data = schreier(p, t)
    base = stallings.fold([project_base(e, w) for w in data.words], k)
    lifts = []
    for pw in base.basis:
        shifted = Word(x + m if x > 0 else x - m for x in pw)
        c = t.act(0, shifted)
        lifts.append(concat(shifted, _fiber_path(t, c, m)))
    actions = []
    for g in lifts:
        images = [fiber.rewrite(conjugate_fiber(e, g, b)) for b in fiber.basis]
        actions.append(certify_automorphism(Endomorphism(len(fiber.basis), images)))
    descriptor = {
        "kind": "coset-table",
        "index": t.degree,
        "fiber_index": fiber.index(),
        "base_index": base.index(),
        "fiber_basis": [list(w) for w in fiber.basis],
        "base_basis": [list(w) for w in base.basis],
        "lifts": [list(g) for g in lifts],
    }
    return ExtensionSpec.free(
        len(fiber.basis), actions, descriptor=descriptor, **subgroup_names(len(fiber.basis), len(lifts))
    )


def subgroup_names(m: int, k: int) -> dict:
    """Generator names for a sub-extension, kept apart from the parent's a, b, s, t."""
    fiber = list("xyz"[:m]) if m <= 3 else [f"x{i}" for i in range(1, m + 1)]
    return {"fiber_names": tuple(fiber), "base_names": tuple(f"T{i}" for i in range(1, k + 1))}


def _fiber_path(t: CosetTable, start: int, m: int) -> Word:
    """Shortest fiber word taking coset ``start`` to coset 0."""
    letters = sorted((s * g for g in range(1, m + 1) for s in (1, -1)), key=letter_key)
    prev: dict[int, tuple[int, int] | None] = {start: None}
    queue = deque([start])
    while queue:
        c = queue.popleft()
        if c == 0:
            break
        for x in letters:
            z = t.step(c, x)
            if z not in prev:
                prev[z] = (c, x)
                queue.append(z)
    if 0 not in prev:
        raise ValueError("coset table is not compatible with the fiber")
    out = []
    c = 0
    while prev[c] is not None:
        c, x = prev[c]  # type: ignore[misc]
        out.append(x)
    return Word(reversed(out))


def base_image(e: ExtensionSpec, t: CosetTable) -> stallings.SubgroupGraph:
    """pi(K) inside F_k for the subgroup K of the coset table."""
    data = schreier(semidirect_presentation(e), t)
    return stallings.fold([project_base(e, w) for w in data.words], e.base_rank)


def with_descriptor(e: ExtensionSpec, **extra) -> ExtensionSpec:
    d = dict(e.descriptor or {})
    d.update(extra)
    return replace(e, descriptor=d)
