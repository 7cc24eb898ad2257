"""Certificates and the plain-data encoding of extensions.

A certificate serializes to fixed ``key: <json>`` lines, always in the same
order with sorted JSON keys, so equal certificates give identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .endos import Automorphism, Endomorphism
from .fpgroups import ExtensionSpec
from .words import Word
from .zmat import IntMatrix

VERDICTS = ("ExcessiveHomology", "Incoherent", "AlgebraicallyFibers", "VirtuallyExcessive", "Inconclusive")

# short descriptions of the results a certificate may cite
THEOREMS = {
    "extension-h1": "H1(H x| F_k) = Z^k + H1(H)/<(Phi_i - I)H1(H)>",
    "excessive-implies-incoherent": "H f.g. and not algebraically fibering, G = H x| F_k excessive => G incoherent",
    "fiber-amalgam": "K1 *_L K2 with L = ker(gamma|H) infinitely generated is f.g. but not finitely presented",
    "neumann": "an amalgam of f.g. groups over an infinitely generated subgroup is not finitely presented",
    "free-groups-do-not-fiber": "free groups of rank >= 2 do not algebraically fiber",
    "excessive-implies-fibering": "H f.g. and G = H x| F_k excessive => G algebraically fibers",
    "bns-openness": "the BNS invariant is open in the character sphere, so beta_i(r) fibers G_i for all large r",
    "virtual-fibering-criterion": "G virtually algebraically fibers iff G has virtually excessive homology",
    "outer-kernel-f2xf2": "a nontrivial kernel of F_k -> Out(H) gives a copy of F2 x F2 inside G",
    "f2xf2-incoherent": "F2 x F2 is incoherent",
    "rank-one-descent": "if H^1(H;R) = R an index-2 subgroup of the base acts trivially on it",
    "incoherence-passes-up": "a group containing an incoherent subgroup is incoherent",
}

FIELDS = ("verdict", "route", "theorem", "characters", "witness", "assumptions", "bounds", "scope", "data")


@dataclass
class Certificate:
    verdicts: tuple[str, ...]
    route: str
    theorems: tuple[str, ...] = ()
    characters: list[list[str]] = field(default_factory=list)
    witness: dict[str, Any] = field(default_factory=dict)
    assumptions: list[str] = field(default_factory=list)
    bounds: dict[str, Any] = field(default_factory=dict)
    scope: str = "group"
    data: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for v in self.verdicts:
            if v not in VERDICTS:
                raise ValueError(f"unknown verdict {v!r}")
        for t in self.theorems:
            if t not in THEOREMS:
                raise ValueError(f"unknown theorem id {t!r}")

    @property
    def conclusive(self) -> bool:
        return "Inconclusive" not in self.verdicts

    def dumps(self) -> str:
        values = {
            "verdict": list(self.verdicts),
            "route": self.route,
            "theorem": list(self.theorems),
            "characters": self.characters,
            "witness": self.witness,
            "assumptions": self.assumptions,
            "bounds": self.bounds,
            "scope": self.scope,
            "data": self.data,
        }
        return "".join(f"{k}: {json.dumps(values[k], sort_keys=True, separators=(',', ':'))}\n" for k in FIELDS)

    @classmethod
    def loads(cls, text: str) -> "Certificate":
        values: dict[str, Any] = {}
        for line in text.splitlines():
            if not line.strip():
                continue
            key, _, rest = line.partition(": ")
            if key not in FIELDS:
                raise ValueError(f"unknown certificate field {key!r}")
            values[key] = json.loads(rest)
        missing = [k for k in FIELDS if k not in values]
        if missing:
            raise ValueError(f"certificate is missing {', '.join(missing)}")
        return cls(
            verdicts=tuple(values["verdict"]),
            route=values["route"],
            theorems=tuple(values["theorem"]),
            characters=values["characters"],
            witness=values["witness"],
            assumptions=values["assumptions"],
            bounds=values["bounds"],
            scope=values["scope"],
            data=values["data"],
        )


def fractions_to_json(values) -> list[str]:
    return [str(Fraction(v)) for v in values]


def extension_to_dict(e: ExtensionSpec) -> dict[str, Any]:
    d: dict[str, Any] = {
        "fiber_mode": e.fiber_mode,
        "fiber_rank": e.fiber_rank,
        "base_rank": e.base_rank,
        "nonfibering": e.nonfibering,
        "names": e.all_names(),
    }
    if e.fiber_mode == "abelian":
        d["matrices"] = [m.tolist() for m in e.matrices]
        d["relations"] = e.relation_matrix.tolist() if e.relation_matrix is not None else None
    else:
        d["actions"] = [[list(w) for w in e.forward(i).images] for i in range(e.base_rank)]
        d["fiber_relators"] = [list(r) for r in e.fiber_relators]
    return d


def extension_from_dict(d: dict[str, Any]) -> ExtensionSpec:
    m = d["fiber_rank"]
    names = d.get("names") or None
    kw = {}
    if names:
        kw = {"fiber_names": tuple(names[:m]), "base_names": tuple(names[m:])}
    if d["fiber_mode"] == "abelian":
        rel = d.get("relations")
        return ExtensionSpec.abelian(
            [IntMatrix(x, m, m) for x in d["matrices"]],
            fiber_rank=m,
            relations=IntMatrix(rel, m, len(rel[0]) if rel and rel[0] else 0) if rel is not None else None,
            nonfibering=d["nonfibering"],
            **kw,
        )
    actions = [Endomorphism(m, [Word(w) for w in imgs]) for imgs in d["actions"]]
    if d["fiber_mode"] == "free":
        return ExtensionSpec.free(m, actions, nonfibering=d["nonfibering"], **kw)
    return ExtensionSpec.presented(m, [Word(r) for r in d["fiber_relators"]], actions, nonfibering=d["nonfibering"], **kw)


def automorphism_images(a: Automorphism | Endomorphism) -> list[list[int]]:
    e = a.forward if isinstance(a, Automorphism) else a
    return [list(w) for w in e.images]
