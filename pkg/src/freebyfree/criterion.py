"""Excessive homology, fibering plans and incoherence certificates.

For G = H x| F_k a character is written on the generators of
:func:`~freebyfree.fpgroups.semidirect_presentation`, fiber values first.
G has excessive homology when some character is nonzero on H, i.e. when
the stacked matrix [relations | Phi_1 - I | ... | Phi_k - I] has a nonzero
left annihilator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import stallings
from .certificate import Certificate, extension_to_dict, fractions_to_json
from .endos import Automorphism, compose, compose_auts, is_inner
from .fpgroups import (
    ExtensionSpec,
    Presentation,
    conjugate_fiber,
    extension_h1,
    with_descriptor,
)
from .words import Word, concat, exponent_vector, format_word, invert, words_up_to
from .zmat import IntMatrix, left_annihilator, primitive


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class Character:
    """Homomorphism G -> Q given by its values on fiber then base generators."""

    values: tuple[Fraction, ...]
    fiber_rank: int

    def __init__(self, values: Sequence, fiber_rank: int):
        object.__setattr__(self, "values", tuple(Fraction(v) for v in values))
        object.__setattr__(self, "fiber_rank", fiber_rank)

    @property
    def fiber_part(self) -> tuple[Fraction, ...]:
        return self.values[: self.fiber_rank]

    @property
    def base_part(self) -> tuple[Fraction, ...]:
        return self.values[self.fiber_rank :]

    def __call__(self, u: Sequence[int]) -> Fraction:
        vec = exponent_vector(u, len(self.values))
        return sum((Fraction(c) * v for c, v in zip(vec, self.values)), Fraction(0))

    def kills(self, p: Presentation) -> bool:
        return all(self(r) == 0 for r in p.relators)

    def is_character_of(self, e: ExtensionSpec) -> bool:
        """Vanishes on the fiber relations and the (Phi_i - I) columns."""
        a = e.stacked()
        fib = self.fiber_part
        return all(sum(Fraction(x) * v for x, v in zip(col, fib)) == 0 for col in a.columns())

    def to_json(self) -> list[str]:
        return fractions_to_json(self.values)

    def __str__(self) -> str:
        return "(" + ", ".join(str(v) for v in self.values) + ")"


def excessive_characters(e: ExtensionSpec) -> list[Character]:
    """Basis of the characters vanishing on the base generators and nonzero on H."""
    k = e.base_rank
    return [Character(list(v) + [0] * k, e.fiber_rank) for v in left_annihilator(e.stacked())]


def is_excessive(e: ExtensionSpec) -> bool:
    return bool(excessive_characters(e))


def normalize(e: ExtensionSpec, gamma: Character) -> Character:
    """Zero on the base, fiber part a primitive integer vector (so gamma|H is onto Z)."""
    fib = gamma.fiber_part
    if not any(fib):
        raise PreconditionError("character vanishes on the fiber")
    return Character(list(primitive(fib)) + [0] * e.base_rank, e.fiber_rank)


@dataclass(frozen=True)
class FibrationPlan:
    """beta_i(r) = alpha_i + gamma / r on G_i = H x| <t_i>, for an unbound integer r > 0.

    Some finite r makes every ker(beta_i) finitely generated; no value of r
    is computed.  N, the subgroup generated by the kernels, is normal with
    G/N infinite cyclic.
    """

    extension: ExtensionSpec
    gamma: Character
    effective: bool = False
    justification: tuple[str, ...] = ("bns-openness", "excessive-implies-fibering")

    @property
    def k(self) -> int:
        return self.extension.base_rank

    def beta(self, i: int, r: int) -> Character:
        """beta_i at a concrete r (0-based i); pure arithmetic, no fibering claim."""
        if r <= 0:
            raise ValueError("r must be a positive integer")
        m = self.extension.fiber_rank
        vals = [v / r for v in self.gamma.fiber_part] + [Fraction(int(j == i)) for j in range(self.k)]
        return Character(vals, m)

    def kernel_elements(self, i: int, r: int) -> list[Word]:
        """Elements a_j^r t_i^-gamma(a_j) of ker(beta_i), one per fiber generator with gamma(a_j) != 0."""
        m = self.extension.fiber_rank
        t = m + i + 1
        out = []
        for j, g in enumerate(self.gamma.fiber_part, start=1):
            if g == 0:
                continue
            n = int(g)
            out.append(Word([j] * r + ([-t] * n if n > 0 else [t] * (-n))))
        return out

    def describe(self, names: Sequence[str] | None = None) -> dict:
        names = names or self.extension.all_names()
        m = self.extension.fiber_rank
        fib = " + ".join(f"{v}*{names[j]}" for j, v in enumerate(self.gamma.fiber_part) if v)
        return {
            "gamma": self.gamma.to_json(),
            "betas": [f"beta_{i + 1}(r) = {names[m + i]}-exponent + ({fib})/r on <H, {names[m + i]}>" for i in range(self.k)],
            "N": "subgroup generated by ker(beta_1), ..., ker(beta_k); normal with G/N = Z",
            "r": "symbolic: some positive integer r works",
            "effective": self.effective,
            "kernel_elements_r1": [[format_word(w, names) for w in self.kernel_elements(i, 1)] for i in range(self.k)],
        }


def fibration_plan(e: ExtensionSpec, gamma: Character) -> FibrationPlan:
    if not gamma.is_character_of(e):
        raise PreconditionError("gamma is not a character of G")
    if not any(gamma.fiber_part):
        raise PreconditionError("G is not shown excessive by gamma (zero on the fiber)")
    gamma = normalize(e, gamma)
    return FibrationPlan(e, gamma)


def amalgam_witness(e: ExtensionSpec, gamma: Character) -> dict:
    """The incoherence witness K_1 *_L K_2 built from two fibered pieces."""
    plan = fibration_plan(e, gamma)
    names = e.all_names()
    return {
        "shape": "K1 *_L K2",
        "K1": f"ker(beta_1) in <H, {names[e.fiber_rank]}>",
        "K2": f"ker(beta_2) in <H, {names[e.fiber_rank + 1]}>",
        "L": "ker(gamma|H), infinitely generated",
        "factors_at_r1": [[format_word(w, names) for w in plan.kernel_elements(i, 1)] for i in (0, 1)],
        "gamma": plan.gamma.to_json(),
    }


# -- outer-kernel probe ------------------------------------------------------


@dataclass(frozen=True)
class ProbeResult:
    word: Word  # base word w with phi_w inner
    conjugator: Word  # g with phi_w = conjugation by g
    conjugate_word: Word  # w' = x w x^-1, <w, w'> free of rank 2
    conjugate_conjugator: Word
    witness: tuple[Word, ...]  # a_1, a_2, g^-1 w, g'^-1 w' as words of G


def base_action(e: ExtensionSpec, w: Sequence[int]) -> Automorphism:
    """phi_w = phi_{y1} o ... o phi_{yn} for the base word w = y1...yn."""
    result = Automorphism.identity(e.fiber_rank)
    for y in w:
        a = e.actions[abs(y) - 1]
        if not isinstance(a, Automorphism):
            raise ValueError("base actions must be automorphisms")
        result = compose_auts(result, a if y > 0 else a.inverted())
    return result


def _shift(e: ExtensionSpec, w: Sequence[int]) -> Word:
    m = e.fiber_rank
    return Word(x + m if x > 0 else x - m for x in w)


def outer_kernel_probe(e: ExtensionSpec, max_length: int = 4) -> ProbeResult | None:
    """Search base words up to ``max_length`` acting on H by an inner automorphism."""
    if e.fiber_mode != "free" or e.fiber_rank < 2:
        raise PreconditionError("the probe needs a free fiber of rank >= 2")
    m, k = e.fiber_rank, e.base_rank
    ident = IntMatrix.identity(m)
    mats = e.phi_matrices()
    inv_mats = [x.inverse() for x in mats]
    for w in words_up_to(k, max_length):
        if not w:
            continue
        mat = ident
        for y in w:
            mat = mat @ (mats[y - 1] if y > 0 else inv_mats[-y - 1])
        if mat != ident:
            continue
        g = is_inner(base_action(e, w))
        if g is None:
            continue
        for x in [s * i for i in range(1, k + 1) for s in (1, -1)]:
            w2 = concat(concat(Word([x]), w), Word([-x]))
            if stallings.fold([w, w2], k).rank != 2:
                continue
            g2 = is_inner(base_action(e, w2))
            assert g2 is not None
            c1 = concat(invert(g), _shift(e, w))
            c2 = concat(invert(g2), _shift(e, w2))
            witness = (Word([1]), Word([2]), c1, c2)
            return ProbeResult(w, g, w2, g2, witness)
    return None


def check_probe(e: ExtensionSpec, res: ProbeResult) -> bool:
    """The two lifted elements centralize H and project to a rank-2 free subgroup."""
    m = e.fiber_rank
    for c in res.witness[2:]:
        for j in range(1, m + 1):
            if conjugate_fiber(e, c, Word([j])) != (j,):
                return False
    return stallings.fold([res.word, res.conjugate_word], e.base_rank).rank == 2


# -- strong fiber lift and rank-one descent -----------------------------------


def strong_fiber_lift(
    h1_q_rank: int,
    y_images: Sequence,
    fiber_character: Sequence,
    rank_hypothesis: bool = True,
) -> Character:
    """Move a fibration of H x| F_n to G: p|H = p_hat|H and p(y_i) = p_hat(t_i)."""
    if not rank_hypothesis:
        raise PreconditionError("requires rk H^1(Q; R) equal to the number of generators of Q")
    if len(y_images) != h1_q_rank:
        raise PreconditionError(f"expected {h1_q_rank} base values, got {len(y_images)}")
    return Character(list(fiber_character) + list(y_images), len(fiber_character))


def _sign_kernel_words(signs: Sequence[int]) -> list[Word]:
    k = len(signs)
    p = signs.index(-1) + 1
    first, second = [], []
    for i in range(1, k + 1):
        if signs[i - 1] == 1:
            first.append(Word([i]))
            second.append(Word([p, i, p]))
        else:
            first.append(Word([i, i]))
            if i != p:
                second.append(Word([p, i]))
    return first + second


def rank_one_signs(e: ExtensionSpec) -> list[int]:
    """The sign by which each action acts on the rank-one free part of H_1(H)."""
    if e.fiber_h1().free_rank != 1:
        raise PreconditionError("fiber does not have first Betti number one")
    (v,) = left_annihilator(e.fiber_relations())
    signs = []
    for mat in e.phi_matrices():
        vphi = tuple(sum(v[i] * mat[i, j] for i in range(len(v))) for j in range(len(v)))
        if vphi == v:
            signs.append(1)
        elif vphi == tuple(-x for x in v):
            signs.append(-1)
        else:
            raise PreconditionError("an action does not preserve the rank-one cohomology class")
    return signs


def rank_one_descent(e: ExtensionSpec) -> ExtensionSpec:
    """Pass to the index-2 base subgroup acting trivially on H^1(H; R) = R."""
    signs = rank_one_signs(e)
    if all(s == 1 for s in signs):
        return e
    words = _sign_kernel_words(signs)
    k = e.base_rank
    g = stallings.fold(words, k)
    assert g.index() == 2 and g.rank == len(words) == 2 * k - 1
    if e.fiber_mode == "abelian":
        mats = []
        for w in words:
            mat = IntMatrix.identity(e.fiber_rank)
            for y in w:
                mat = mat @ e.matrices[y - 1]
            mats.append(mat)
        sub = ExtensionSpec.abelian(mats, e.fiber_rank, e.relation_matrix, nonfibering=e.nonfibering,
                                    fiber_names=e.fiber_names)
    else:
        actions = []
        for w in words:
            if e.fiber_mode == "free":
                actions.append(base_action(e, w))
            else:
                f = e.forward(w[0] - 1)
                for y in w[1:]:
                    f = compose(f, e.forward(y - 1))
                actions.append(f)
        if e.fiber_mode == "free":
            sub = ExtensionSpec.free(e.fiber_rank, actions, nonfibering=e.nonfibering, fiber_names=e.fiber_names)
        else:
            sub = ExtensionSpec.presented(e.fiber_rank, e.fiber_relators, actions, nonfibering=e.nonfibering,
                                          fiber_names=e.fiber_names)
    return with_descriptor(
        sub,
        kind="sign-kernel",
        signs=signs,
        base_basis=[list(w) for w in words],
        index=2,
        fiber_index=1,
        base_index=2,
    )


# -- certificates --------------------------------------------------------------


@dataclass
class Bounds:
    probe_length: int = 4
    max_fiber_index: int = 4
    max_index: int = 6
    orbit_cap: int = 64
    strategy: str = "both"

    def to_dict(self) -> dict:
        return {
            "probe_length": self.probe_length,
            "max_fiber_index": self.max_fiber_index,
            "max_index": self.max_index,
            "orbit_cap": self.orbit_cap,
            "strategy": self.strategy,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Bounds":
        return cls(**d)


def nonfibering_assumptions(e: ExtensionSpec) -> tuple[bool, list[str], list[str]]:
    """(established, assumptions, theorem ids) for 'H does not algebraically fiber'."""
    if e.nonfibering == "free-rank>=2":
        return True, [], ["free-groups-do-not-fiber"]
    if e.nonfibering == "surface-genus>=2":
        return True, ["fiber is a closed surface group of genus >= 2 (user flag)"], []
    if e.nonfibering == "user-asserted":
        return True, ["fiber does not algebraically fiber (user assertion)"], []
    return False, [], []


def direct_certificate(e: ExtensionSpec) -> Certificate | None:
    """Route R1: excessive homology of G itself plus a non-fibering fiber."""
    chars = excessive_characters(e)
    if not chars:
        return None
    gamma = normalize(e, chars[0])
    plan = fibration_plan(e, gamma)
    established, assumptions, extra = nonfibering_assumptions(e)
    verdicts = ["ExcessiveHomology", "AlgebraicallyFibers"]
    theorems = ["extension-h1", "excessive-implies-fibering", "bns-openness"]
    witness: dict = {"fibration": plan.describe()}
    if established and e.base_rank >= 2:
        verdicts.insert(1, "Incoherent")
        theorems += ["excessive-implies-incoherent", "fiber-amalgam", "neumann"] + extra
        witness["amalgam"] = amalgam_witness(e, gamma)
    return Certificate(
        verdicts=tuple(verdicts),
        route="R1",
        theorems=tuple(theorems),
        characters=[normalize(e, c).to_json() for c in chars],
        witness=witness,
        assumptions=assumptions,
        data={"extension": extension_to_dict(e), "h1": str(extension_h1(e))},
    )


def incoherence_certificate(e: ExtensionSpec, bounds: Bounds | None = None) -> Certificate:
    """Try R1 (direct), R2 (outer-kernel probe), R3 (virtual search) in that order."""
    bounds = bounds or Bounds()
    if e.base_rank < 2:
        raise PreconditionError("the incoherence criterion needs a base free group of rank >= 2")
    established, _, _ = nonfibering_assumptions(e)
    direct = direct_certificate(e)
    if direct is not None and "Incoherent" in direct.verdicts:
        direct.bounds = bounds.to_dict()
        return direct
    if e.fiber_mode == "free" and e.fiber_rank >= 2:
        res = outer_kernel_probe(e, bounds.probe_length)
        if res is not None:
            names = e.all_names()
            return Certificate(
                verdicts=("Incoherent",),
                route="R2",
                theorems=("outer-kernel-f2xf2", "f2xf2-incoherent", "incoherence-passes-up"),
                witness={
                    "word": list(res.word),
                    "conjugator": list(res.conjugator),
                    "conjugate_word": list(res.conjugate_word),
                    "conjugate_conjugator": list(res.conjugate_conjugator),
                    "f2xf2_generators": [format_word(w, names) for w in res.witness],
                },
                bounds=bounds.to_dict(),
                data={"extension": extension_to_dict(e)},
            )
    from .search import virtual_verdict

    cert = virtual_verdict(e, bounds)
    if "Incoherent" in cert.verdicts:
        cert.route = "R3"
        return cert
    return Certificate(
        verdicts=("Inconclusive",),
        route="none",
        bounds=bounds.to_dict(),
        data={
            "extension": extension_to_dict(e),
            "h1": str(extension_h1(e)),
            "reason": "no certificate within bounds" if established or e.fiber_mode == "free"
            else "fiber not known to be non-fibering",
        },
    )
