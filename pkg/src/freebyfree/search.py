"""Search for finite-index subgroups with excessive homology.

Two strategies:

* orbit: for each finite-index subgroup S of a free fiber, compute the orbit
  of S under the base actions; its stabilizer in F_k is finite index and
  S x| Stab(S) is a finite-index subgroup of G.
* lowindex: enumerate finite-index subgroups K of G itself and write each
  as (K n H) x| pi(K).

A subgroup with rk H_1 >= (base rank) + 1 certifies virtual fibering and,
with a non-fibering fiber, incoherence.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from . import stallings
from .certificate import Certificate, extension_to_dict
from .criterion import (
    Bounds,
    Character,
    amalgam_witness,
    base_action,
    excessive_characters,
    fibration_plan,
    nonfibering_assumptions,
    normalize,
    rank_one_descent,
)
from .endos import Automorphism, certify_automorphism, restrict
from .fpgroups import (
    ExtensionSpec,
    Presentation,
    abelianization,
    base_image,
    extension_h1,
    low_index,
    schreier,
    semidirect_presentation,
    sub_extension,
    subgroup_names,
)
from .words import EMPTY, Word, concat, invert
from .zmat import left_annihilator


class OrbitTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class OrbitData:
    orbit: tuple[stallings.SubgroupGraph, ...]
    transversal: tuple[Word, ...]  # phi_{transversal[i]}(root) = orbit[i]
    stabilizer_words: tuple[Word, ...]

    @property
    def root(self) -> stallings.SubgroupGraph:
        return self.orbit[0]


def orbit_stabilizer(
    actions: Sequence[Automorphism], root: stallings.SubgroupGraph, cap: int = 64
) -> OrbitData:
    """Breadth-first orbit of ``root`` with Schreier generators of its stabilizer.

    A base word w = y1...yn acts as phi_{y1} o ... o phi_{yn}, so the image
    of orbit[i] under generator j is reached by the word t_j u_i.
    """
    orbit = [root]
    where = {root: 0}
    transversal = [EMPTY]
    stab: list[Word] = []
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j, a in enumerate(actions, start=1):
            img = stallings.image_graph(a.forward.images, orbit[i])
            u = concat(Word([j]), transversal[i])
            if img not in where:
                if len(orbit) >= cap:
                    raise OrbitTooLarge(f"orbit exceeds {cap} subgroups")
                where[img] = len(orbit)
                orbit.append(img)
                transversal.append(u)
                queue.append(len(orbit) - 1)
            else:
                s = concat(invert(transversal[where[img]]), u)
                if s and s not in stab:
                    stab.append(s)
    return OrbitData(tuple(orbit), tuple(transversal), tuple(stab))


def orbit_sub_extension(e: ExtensionSpec, root: stallings.SubgroupGraph, data: OrbitData | None = None,
                        base_words: Sequence[Word] | None = None) -> ExtensionSpec:
    """The finite-index subgroup root x| Stab(root) as an extension."""
    if base_words is None:
        assert data is not None
        base = stallings.fold(data.stabilizer_words, e.base_rank)
        base_words = list(base.basis)
    else:
        base = stallings.fold(base_words, e.base_rank)
    actions = [certify_automorphism(restrict(base_action(e, w), root)) for w in base_words]
    return ExtensionSpec.free(
        len(root.basis),
        actions,
        **subgroup_names(len(root.basis), len(base_words)),
        descriptor={
            "kind": "orbit",
            "fiber_basis": [list(w) for w in root.basis],
            "base_basis": [list(w) for w in base_words],
            "fiber_index": root.index(),
            "base_index": base.index(),
            "index": root.index() * base.index(),
        },
    )


@dataclass
class SearchHit:
    strategy: str
    index: int
    fiber_index: int
    base_rank: int
    h1: str
    h1_free_rank: int
    character: Character | list
    extension: ExtensionSpec | None
    descriptor: dict

    def summary(self) -> dict:
        return {
            "strategy": self.strategy,
            "index": self.index,
            "fiber_index": self.fiber_index,
            "base_rank": self.base_rank,
            "h1": self.h1,
        }


def _fiber_subgroups(m: int, d: int) -> list[stallings.SubgroupGraph]:
    tables = low_index(Presentation(m), d, conjugacy=False)
    return [t.subgroup_graph(list(range(1, m + 1))) for t in tables]


def preserved_subgroup_search(e: ExtensionSpec, fiber_index_bound: int, cap: int = 64) -> SearchHit | None:
    if e.fiber_mode != "free":
        raise ValueError("the orbit strategy needs a free fiber")
    seen: set[stallings.SubgroupGraph] = set()
    for root in _fiber_subgroups(e.fiber_rank, fiber_index_bound):
        if root in seen:
            # conjugate in G to a subgroup tried before
            continue
        try:
            data = orbit_stabilizer(e.actions, root, cap)  # type: ignore[arg-type]
        except OrbitTooLarge:
            continue
        seen.update(data.orbit)
        sub = orbit_sub_extension(e, root, data)
        chars = excessive_characters(sub)
        if chars:
            h1 = extension_h1(sub)
            return SearchHit(
                "orbit",
                sub.descriptor["index"],
                root.index(),
                sub.base_rank,
                str(h1),
                h1.free_rank,
                normalize(sub, chars[0]),
                sub,
                sub.descriptor,
            )
    return None


def low_index_search(e: ExtensionSpec, index_bound: int) -> SearchHit | None:
    p = semidirect_presentation(e)
    m = e.fiber_rank
    for t in low_index(p, index_bound):
        if e.fiber_mode == "free":
            sub = sub_extension(e, t)
            h1 = extension_h1(sub)
            if h1.free_rank >= sub.base_rank + 1:
                desc = dict(sub.descriptor or {})
                desc["table"] = t.to_dict()
                return SearchHit(
                    "lowindex",
                    t.degree,
                    sub.descriptor["fiber_index"],
                    sub.base_rank,
                    str(h1),
                    h1.free_rank,
                    normalize(sub, excessive_characters(sub)[0]),
                    sub,
                    desc,
                )
        else:
            data = schreier(p, t)
            h1 = abelianization(data.presentation)
            base = base_image(e, t)
            if h1.free_rank >= base.rank + 1:
                fiber = t.subgroup_graph(list(range(1, m + 1)))
                chars = [list(v) for v in left_annihilator(data.presentation.relator_matrix())]
                return SearchHit(
                    "lowindex",
                    t.degree,
                    t.degree // base.index() if base.index() != float("inf") else 0,
                    base.rank,
                    str(h1),
                    h1.free_rank,
                    chars,
                    None,
                    {
                        "kind": "coset-table",
                        "index": t.degree,
                        "table": t.to_dict(),
                        "base_basis": [list(w) for w in base.basis],
                        "fiber_cosets": fiber.n_vertices,
                    },
                )
    return None


def _virtual_certificate(e: ExtensionSpec, hit: SearchHit, bounds: Bounds, others: list[SearchHit]) -> Certificate:
    verdicts = ["VirtuallyExcessive", "AlgebraicallyFibers"]
    theorems = ["extension-h1", "virtual-fibering-criterion", "excessive-implies-fibering", "bns-openness"]
    established, assumptions, extra = nonfibering_assumptions(e)
    if e.fiber_mode != "free" and established and e.nonfibering == "user-asserted" and hit.fiber_index != 1:
        assumptions = assumptions + ["finite-index subgroups of the fiber do not algebraically fiber"]
    witness: dict = {"subgroup": hit.descriptor}
    chars: list[list[str]] = []
    if hit.extension is not None:
        plan = fibration_plan(hit.extension, hit.character)  # type: ignore[arg-type]
        witness["fibration"] = plan.describe()
        chars = [plan.gamma.to_json()]
    else:
        chars = [[str(x) for x in c] for c in hit.character]  # type: ignore[union-attr]
    if established and e.base_rank >= 2:
        verdicts.insert(1, "Incoherent")
        theorems += ["excessive-implies-incoherent", "fiber-amalgam", "neumann", "incoherence-passes-up"] + extra
        if hit.extension is not None and hit.extension.base_rank >= 2:
            witness["amalgam"] = amalgam_witness(hit.extension, hit.character)  # type: ignore[arg-type]
    return Certificate(
        verdicts=tuple(verdicts),
        route="virtual",
        theorems=tuple(theorems),
        characters=chars,
        witness=witness,
        assumptions=assumptions,
        bounds=bounds.to_dict(),
        scope="finite-index subgroup",
        data={
            "extension": extension_to_dict(e),
            "h1": str(extension_h1(e)),
            "hit": hit.summary(),
            "descriptor": hit.descriptor,
            "agreeing_hits": [h.summary() for h in others],
        },
    )


def run_strategies(e: ExtensionSpec, bounds: Bounds) -> list[SearchHit]:
    hits = []
    if bounds.strategy in ("orbit", "both") and e.fiber_mode == "free":
        h = preserved_subgroup_search(e, bounds.max_fiber_index, bounds.orbit_cap)
        if h:
            hits.append(h)
    if bounds.strategy in ("lowindex", "both") and e.fiber_mode != "abelian":
        h = low_index_search(e, bounds.max_index)
        if h:
            hits.append(h)
    return hits


def virtual_verdict(e: ExtensionSpec, bounds: Bounds | None = None) -> Certificate:
    """Look for virtually excessive homology within ``bounds``."""
    bounds = bounds or Bounds()
    if e.fiber_mode == "abelian" or (e.fiber_h1().free_rank == 1 and not excessive_characters(e)):
        if e.fiber_h1().free_rank == 1:
            sub = rank_one_descent(e)
            chars = excessive_characters(sub)
            if chars:
                hit = SearchHit(
                    "rank-one-descent",
                    2 if sub is not e else 1,
                    1,
                    sub.base_rank,
                    str(extension_h1(sub)),
                    extension_h1(sub).free_rank,
                    normalize(sub, chars[0]),
                    sub,
                    sub.descriptor or {"kind": "identity", "index": 1},
                )
                cert = _virtual_certificate(e, hit, bounds, [])
                cert.theorems = cert.theorems + ("rank-one-descent",)
                return cert
    if excessive_characters(e):
        chars = excessive_characters(e)
        hit = SearchHit("direct", 1, 1, e.base_rank, str(extension_h1(e)), extension_h1(e).free_rank,
                        normalize(e, chars[0]), e, {"kind": "identity", "index": 1})
        return _virtual_certificate(e, hit, bounds, [])
    if e.fiber_mode != "abelian":
        hits = run_strategies(e, bounds)
        if hits:
            return _virtual_certificate(e, hits[0], bounds, hits[1:])
    return Certificate(
        verdicts=("Inconclusive",),
        route="virtual",
        bounds=bounds.to_dict(),
        data={
            "extension": extension_to_dict(e),
            "h1": str(extension_h1(e)),
            "reason": "no excessive subgroup found within bounds",
        },
    )
