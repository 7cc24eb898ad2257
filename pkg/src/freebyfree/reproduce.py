"""End-to-end check of the index-3 stabilizer computation for F2 x| F2.

The fiber F2 = <a, b> carries the two automorphisms

    lam: a -> ab, b -> b        rho: a -> a, b -> ba

and H = <a, b^2, bab^-1> is one of the three index-2 subgroups of F2.
Everything below is recomputed from those two maps and compared against
the golden values embedded in GOLDEN.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Any

from . import stallings
from .criterion import base_action, incoherence_certificate
from .endos import abelianized, parse_automorphism, restrict
from .fpgroups import ExtensionSpec, abelianization, extension_h1, semidirect_presentation
from .search import orbit_stabilizer, orbit_sub_extension
from .words import format_word, parse_word
from .zmat import IntMatrix, cokernel, hermite_rows, left_annihilator, rank_q, stack_columns

LAMBDA = ["a -> a b", "b -> b"]
RHO = ["a -> a", "b -> b a"]

GOLDEN: dict[str, Any] = {
    "subgroup": ["a", "b b", "b a b-"],
    "orbit_size": 3,
    "stabilizer_index": 3,
    # base words over s = lam, t = rho
    "words": ["s s", "t", "s t t s-", "s t s t- s-"],
    "matrices": [
        [[1, 0, 0], [1, 1, 1], [0, 0, 1]],
        [[1, 1, 0], [0, 1, 0], [0, 1, 1]],
        [[0, 2, -1], [-1, 3, -1], [-1, 2, 0]],
        [[2, -1, 1], [2, -1, 2], [1, -1, 2]],
    ],
    "spans": [[0, 1, 0], [1, 0, 1], [1, 1, 1], [1, 2, 1]],
    "quotient": "Z",
    "x_free": True,
    "sub_h1": "Z^5",
    "verdicts": ["VirtuallyExcessive", "Incoherent", "AlgebraicallyFibers"],
}


def full_extension() -> ExtensionSpec:
    names = ("a", "b")
    lam = parse_automorphism(LAMBDA, names)
    rho = parse_automorphism(RHO, names)
    return ExtensionSpec.free(2, [lam, rho], fiber_names=names, base_names=("s", "t"))


@dataclass
class Step:
    name: str
    ok: bool
    got: Any
    want: Any


@dataclass
class Report:
    steps: list[Step] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.steps)

    def check(self, name: str, got: Any, want: Any) -> None:
        self.steps.append(Step(name, got == want, got, want))

    def lines(self) -> list[str]:
        out = []
        for s in self.steps:
            mark = "ok  " if s.ok else "FAIL"
            out.append(f"{mark} {s.name}: {s.got}" + ("" if s.ok else f" (expected {s.want})"))
        return out


def same_span(columns: list[tuple[int, ...]], generator: list[int]) -> bool:
    """The Z-span of ``columns`` equals the Z-span of ``generator``."""
    return hermite_rows(columns) == hermite_rows([generator])


def run(golden: dict[str, Any] | None = None) -> Report:
    g = golden or GOLDEN
    rep = Report()
    e = full_extension()
    fiber_names = ("a", "b")
    h = stallings.fold([parse_word(w, fiber_names) for w in g["subgroup"]], 2)
    rep.check("subgroup basis", [format_word(w, fiber_names) for w in h.basis],
              [format_word(parse_word(w, fiber_names), fiber_names) for w in g["subgroup"]])
    rep.check("subgroup index", h.index(), 2)

    data = orbit_stabilizer(e.actions, h)  # type: ignore[arg-type]
    rep.check("orbit size", len(data.orbit), g["orbit_size"])
    stab = stallings.fold(data.stabilizer_words, 2)
    rep.check("stabilizer index", stab.index(), g["stabilizer_index"])

    words = [parse_word(w, ("s", "t")) for w in g["words"]]
    sub = orbit_sub_extension(e, h, base_words=words)
    mats = [abelianized(restrict(base_action(e, w), h)) for w in words]
    for w, mat, want in zip(g["words"], mats, g["matrices"]):
        rep.check(f"{w} preserves H", stallings.image_graph(base_action(e, parse_word(w, ("s", "t"))).forward.images, h) == h, True)
        rep.check(f"{w} in stabilizer", stab.contains(parse_word(w, ("s", "t"))), True)
        rep.check(f"matrix {w}", mat.tolist(), want)

    ident = IntMatrix.identity(3)
    for w, mat, vec in zip(g["words"], mats, g["spans"]):
        cols = [c for c in (mat - ident).columns() if any(c)]
        rep.check(f"span {w}", same_span(cols, vec) and rank_q(mat - ident) == 1, True)

    stacked = stack_columns([m - ident for m in mats], 3)
    rep.check("quotient Z^3 / spans", str(cokernel(stacked)), g["quotient"])
    # x has infinite order iff some integer annihilator of all spans is nonzero on x
    rep.check("x of infinite order", any(row[0] != 0 for row in left_annihilator(stacked)), g["x_free"])

    rep.check("H1 of sub-extension", str(extension_h1(sub)), g["sub_h1"])
    rep.check("H1 via presentation", str(abelianization(semidirect_presentation(sub))), g["sub_h1"])
    cert = incoherence_certificate(e)
    rep.check("verdicts", list(cert.verdicts), g["verdicts"])
    return rep


def tampered() -> dict[str, Any]:
    """A copy of GOLDEN with one matrix entry changed (negative control)."""
    g = copy.deepcopy(GOLDEN)
    g["matrices"][2][0][1] += 1
    return g
