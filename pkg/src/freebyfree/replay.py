"""Recompute a certificate's verdict from the data it carries."""

from __future__ import annotations

from fractions import Fraction

from . import stallings
from .certificate import Certificate, extension_from_dict
from .criterion import (
    Bounds,
    Character,
    ProbeResult,
    base_action,
    check_probe,
    direct_certificate,
    excessive_characters,
    incoherence_certificate,
    nonfibering_assumptions,
    rank_one_descent,
)
from .endos import is_inner
from .fpgroups import (
    CosetTable,
    ExtensionSpec,
    abelianization,
    base_image,
    schreier,
    semidirect_presentation,
    sub_extension,
)
from .search import orbit_sub_extension, virtual_verdict
from .words import Word, concat, invert


class ReplayError(ValueError):
    pass


def _rebuild(e: ExtensionSpec, desc: dict) -> ExtensionSpec | None:
    kind = desc.get("kind")
    if kind == "identity":
        return e
    if kind == "orbit":
        root = stallings.fold([Word(w) for w in desc["fiber_basis"]], e.fiber_rank)
        return orbit_sub_extension(e, root, base_words=[Word(w) for w in desc["base_basis"]])
    if kind == "coset-table":
        if e.fiber_mode == "free":
            return sub_extension(e, CosetTable.from_dict(desc["table"]))
        return None
    if kind == "sign-kernel":
        sub = rank_one_descent(e)
        if [list(w) for w in (sub.descriptor or {}).get("base_basis", [])] != desc["base_basis"]:
            raise ReplayError("sign-kernel basis does not match")
        return sub
    raise ReplayError(f"unknown subgroup kind {kind!r}")


def _check_character(e: ExtensionSpec, values: list[str]) -> None:
    ch = Character([Fraction(v) for v in values], e.fiber_rank)
    if not ch.is_character_of(e) or not any(ch.fiber_part):
        raise ReplayError("recorded character is not an excessive character")


def replay(cert: Certificate) -> tuple[str, ...]:
    """Verdicts recomputed from ``cert``'s own data; raises ReplayError on mismatch."""
    e = extension_from_dict(cert.data["extension"])
    bounds = Bounds.from_dict(cert.bounds) if cert.bounds else Bounds()
    if "Inconclusive" in cert.verdicts:
        if cert.route == "R1":
            again = direct_certificate(e)
            return again.verdicts if again is not None else ("Inconclusive",)
        if cert.route == "virtual":
            return virtual_verdict(e, bounds).verdicts
        return incoherence_certificate(e, bounds).verdicts
    if cert.route == "R1":
        again = direct_certificate(e)
        if again is None:
            raise ReplayError("extension is not excessive")
        for c in cert.characters:
            _check_character(e, c)
        return again.verdicts
    if cert.route == "R2":
        w = Word(cert.witness["word"])
        w2 = Word(cert.witness["conjugate_word"])
        g = is_inner(base_action(e, w))
        g2 = is_inner(base_action(e, w2))
        if g is None or g2 is None or list(g) != cert.witness["conjugator"] or list(g2) != cert.witness["conjugate_conjugator"]:
            raise ReplayError("recorded base words do not act innerly")
        m = e.fiber_rank
        shift = lambda u: Word(x + m if x > 0 else x - m for x in u)  # noqa: E731
        res = ProbeResult(w, g, w2, g2, (Word([1]), Word([2]), concat(invert(g), shift(w)), concat(invert(g2), shift(w2))))
        if not check_probe(e, res):
            raise ReplayError("witness does not generate F2 x F2")
        return ("Incoherent",)
    if cert.route in ("virtual", "R3"):
        desc = cert.data["descriptor"]
        sub = _rebuild(e, desc)
        if sub is None:
            t = CosetTable.from_dict(desc["table"])
            p = semidirect_presentation(e)
            if not t.satisfies(p):
                raise ReplayError("coset table does not satisfy the relators")
            h1 = abelianization(schreier(p, t).presentation)
            if h1.free_rank < base_image(e, t).rank + 1:
                raise ReplayError("subgroup is not excessive")
        else:
            if not excessive_characters(sub):
                raise ReplayError("subgroup is not excessive")
            for c in cert.characters:
                _check_character(sub, c)
        established, _, _ = nonfibering_assumptions(e)
        verdicts = ["VirtuallyExcessive", "AlgebraicallyFibers"]
        if established and e.base_rank >= 2:
            verdicts.insert(1, "Incoherent")
        return tuple(verdicts)
    raise ReplayError(f"unknown route {cert.route!r}")
