from __future__ import annotations

import random
from fractions import Fraction

import pytest

from conftest import LAM, RHO, random_extension
from freebyfree.certificate import Certificate
from freebyfree.criterion import (
    Bounds,
    Character,
    PreconditionError,
    amalgam_witness,
    check_probe,
    direct_certificate,
    excessive_characters,
    fibration_plan,
    incoherence_certificate,
    is_excessive,
    outer_kernel_probe,
    rank_one_descent,
    rank_one_signs,
    strong_fiber_lift,
)
from freebyfree.endos import Automorphism, Endomorphism, compose_auts
from freebyfree.fpgroups import ExtensionSpec, extension_h1, semidirect_presentation
from freebyfree.zmat import IntMatrix

SURFACE = [1, 2, -1, -2, 3, 4, -3, -4]


def inner_extension() -> ExtensionSpec:
    c_a = Automorphism(Endomorphism.conjugation(2, [1]), Endomorphism.conjugation(2, [-1]))
    return ExtensionSpec.free(2, [c_a, compose_auts(LAM, LAM), RHO])


def test_excessive_iff_betti_exceeds_base_rank():
    rng = random.Random(77)
    for _ in range(40):
        e = random_extension(rng, rng.randint(1, 3), rng.randint(1, 3))
        assert is_excessive(e) == (extension_h1(e).free_rank >= e.base_rank + 1)
        p = semidirect_presentation(e)
        for ch in excessive_characters(e):
            assert ch.kills(p)
            assert any(ch.fiber_part) and not any(ch.base_part)


def test_f2xf2_characters(f2xf2, lam2_rho):
    chars = excessive_characters(f2xf2)
    assert [c.values for c in chars] == [(1, 0, 0, 0), (0, 1, 0, 0)]
    assert excessive_characters(lam2_rho) == []


def test_fibration_plan_betas_are_characters(f2xf2):
    rng = random.Random(3)
    cases = [f2xf2] + [random_extension(rng, 2, 2) for _ in range(20)]
    for e in cases:
        chars = excessive_characters(e)
        if not chars:
            continue
        plan = fibration_plan(e, chars[0])
        p = semidirect_presentation(e)
        for r in (1, 2, 7):
            for i in range(e.base_rank):
                beta = plan.beta(i, r)
                assert beta.kills(p)
                assert beta.values[e.fiber_rank + i] == 1
                for w in plan.kernel_elements(i, r):
                    assert beta(w) == 0
        assert plan.describe()["r"].startswith("symbolic")
        assert not plan.effective


def test_fibration_plan_preconditions(f2xf2):
    with pytest.raises(PreconditionError):
        fibration_plan(f2xf2, Character([0, 0, 1, 0], 2))
    with pytest.raises(PreconditionError):
        fibration_plan(ExtensionSpec.free(2, [LAM]), Character([0, 1, 0], 2))


def test_amalgam_shape(f2xf2):
    w = amalgam_witness(f2xf2, excessive_characters(f2xf2)[0])
    assert w["shape"] == "K1 *_L K2"
    assert "<H, s>" in w["K1"] and "<H, t>" in w["K2"]
    assert "infinitely generated" in w["L"]
    assert w["factors_at_r1"] == [["a s-"], ["a t-"]]


def test_direct_certificate(f2xf2, lam2_rho):
    cert = direct_certificate(f2xf2)
    assert cert.verdicts == ("ExcessiveHomology", "Incoherent", "AlgebraicallyFibers")
    assert cert.route == "R1"
    assert {"excessive-implies-incoherent", "free-groups-do-not-fiber"} <= set(cert.theorems)
    assert direct_certificate(lam2_rho) is None
    assert Certificate.loads(cert.dumps()).dumps() == cert.dumps()


def test_rank_one_fiber_fibers_but_is_not_certified_incoherent():
    e = ExtensionSpec.free(1, [Automorphism.identity(1), Automorphism.identity(1)])
    cert = direct_certificate(e)
    assert "AlgebraicallyFibers" in cert.verdicts and "Incoherent" not in cert.verdicts


def test_surface_fiber_flag():
    ident = Endomorphism.identity(4)
    plain = ExtensionSpec.presented(4, [SURFACE], [ident, ident])
    flagged = ExtensionSpec.presented(4, [SURFACE], [ident, ident], nonfibering="surface-genus>=2")
    assert "Incoherent" not in direct_certificate(plain).verdicts
    cert = direct_certificate(flagged)
    assert "Incoherent" in cert.verdicts and cert.assumptions


def test_incoherence_rejects_cyclic_base():
    rng = random.Random(8)
    for m in (2, 3):
        e = random_extension(rng, m, 1)
        with pytest.raises(PreconditionError):
            incoherence_certificate(e)


def test_outer_kernel_probe():
    e = inner_extension()
    assert not is_excessive(e)
    res = outer_kernel_probe(e, 2)
    assert res is not None and res.word == (1,) and res.conjugator == (1,)
    assert check_probe(e, res)
    cert = incoherence_certificate(e, Bounds(probe_length=2))
    assert cert.route == "R2" and cert.verdicts == ("Incoherent",)


def test_probe_finds_nothing_for_free_action(lam_rho):
    assert outer_kernel_probe(lam_rho, 4) is None


def test_strong_fiber_lift():
    ch = strong_fiber_lift(2, [Fraction(1, 2), 3], [1, 0])
    assert ch.values == (1, 0, Fraction(1, 2), 3)
    with pytest.raises(PreconditionError):
        strong_fiber_lift(2, [1], [1, 0])
    with pytest.raises(PreconditionError):
        strong_fiber_lift(2, [1, 1], [1, 0], rank_hypothesis=False)


def test_rank_one_descent_abelian():
    e = ExtensionSpec.abelian([IntMatrix([[-1]], 1, 1), IntMatrix([[1]], 1, 1)], nonfibering="user-asserted")
    assert rank_one_signs(e) == [-1, 1]
    assert not is_excessive(e)
    sub = rank_one_descent(e)
    assert sub.base_rank == 3 and sub.descriptor["index"] == 2
    assert str(extension_h1(sub)) == "Z^4"
    assert is_excessive(sub)


def test_rank_one_descent_free_fiber_and_identity():
    flip = Automorphism(Endomorphism(1, [[-1]]), Endomorphism(1, [[-1]]))
    e = ExtensionSpec.free(1, [flip, flip])
    sub = rank_one_descent(e)
    assert is_excessive(sub) and sub.base_rank == 3
    trivial = ExtensionSpec.free(1, [Automorphism.identity(1)])
    assert rank_one_descent(trivial) is trivial


def test_rank_one_signs_precondition(f2xf2):
    with pytest.raises(PreconditionError):
        rank_one_signs(f2xf2)
