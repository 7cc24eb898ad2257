from __future__ import annotations

import random

import pytest

from conftest import LAM, RHO, random_extension
from freebyfree import stallings
from freebyfree.criterion import Bounds, base_action, excessive_characters
from freebyfree.endos import Automorphism, Endomorphism
from freebyfree.fpgroups import ExtensionSpec, extension_h1
from freebyfree.replay import replay
from freebyfree.search import (
    OrbitTooLarge,
    low_index_search,
    orbit_stabilizer,
    orbit_sub_extension,
    preserved_subgroup_search,
    run_strategies,
    virtual_verdict,
)
from freebyfree.words import Word

H = stallings.fold([[1], [2, 2], [2, 1, -2]], 2)


def test_orbit_of_index_two_subgroup():
    data = orbit_stabilizer([LAM, RHO], H)
    assert len(data.orbit) == 3
    for g in data.orbit:
        assert g.index() == 2
        for a in (LAM, RHO):
            assert stallings.image_graph(a.forward.images, g) in data.orbit
    e = ExtensionSpec.free(2, [LAM, RHO])
    for u, g in zip(data.transversal, data.orbit):
        assert stallings.image_graph(base_action(e, u).forward.images, H) == g
    for w in data.stabilizer_words:
        assert stallings.image_graph(base_action(e, w).forward.images, H) == H
    assert stallings.fold(data.stabilizer_words, 2).index() == 3


def test_identity_action_orbit():
    ident = Automorphism.identity(2)
    data = orbit_stabilizer([ident, ident], H)
    assert len(data.orbit) == 1
    assert sorted(data.stabilizer_words) == [(1,), (2,)]


def test_orbit_cap():
    with pytest.raises(OrbitTooLarge):
        orbit_stabilizer([LAM, RHO], H, cap=2)


def test_orbit_invariants_random():
    rng = random.Random(17)
    for _ in range(10):
        e = random_extension(rng, 2, 2)
        for root in [H, stallings.fold([[1, 1], [2], [1, 2, -1]], 2)]:
            data = orbit_stabilizer(e.actions, root)
            for u, g in zip(data.transversal, data.orbit):
                assert stallings.image_graph(base_action(e, u).forward.images, root) == g
            for w in data.stabilizer_words:
                assert stallings.image_graph(base_action(e, w).forward.images, root) == root
            stab = stallings.fold(data.stabilizer_words, 2) if data.stabilizer_words else None
            if stab is not None:
                assert stab.index() == len(data.orbit)


def test_preserved_subgroup_search(lam2_rho, f2xf2):
    hit = preserved_subgroup_search(lam2_rho, 2)
    assert hit is not None and hit.fiber_index == 2 and hit.h1_free_rank == 3
    assert preserved_subgroup_search(f2xf2, 1).index == 1


def test_low_index_search(lam2_rho, f2xf2):
    assert low_index_search(lam2_rho, 1) is None
    hit = low_index_search(lam2_rho, 2)
    assert hit is not None and hit.fiber_index == 2 and hit.h1 == "Z^3"
    assert low_index_search(f2xf2, 1).index == 1


def test_low_index_search_presented_fiber():
    # <a | a^2> with trivial action: Z/2 x F_2, not excessive, no excessive subgroup either
    ident = Endomorphism.identity(1)
    e = ExtensionSpec.presented(1, [[1, 1]], [ident, ident])
    assert low_index_search(e, 3) is None
    surface = ExtensionSpec.presented(4, [[1, 2, -1, -2, 3, 4, -3, -4]], [Endomorphism.identity(4)] * 2)
    assert low_index_search(surface, 1).h1_free_rank == 6


def test_strategies_agree(lam2_rho):
    hits = run_strategies(lam2_rho, Bounds(max_fiber_index=2, max_index=2))
    assert [h.strategy for h in hits] == ["orbit", "lowindex"]
    assert hits[0].h1 == hits[1].h1
    assert hits[0].descriptor["fiber_basis"] == hits[1].descriptor["fiber_basis"]


def test_strategies_agree_random():
    rng = random.Random(2)
    for _ in range(8):
        e = random_extension(rng, 2, 2)
        hits = run_strategies(e, Bounds(max_fiber_index=2, max_index=2))
        for h in hits:
            assert h.h1_free_rank >= h.base_rank + 1
        if len(hits) == 2 and hits[0].index == hits[1].index and \
                hits[0].descriptor["fiber_basis"] == hits[1].descriptor["fiber_basis"]:
            assert hits[0].h1 == hits[1].h1


def test_virtual_verdict(lam2_rho, lam_rho, f2xf2):
    cert = virtual_verdict(lam2_rho)
    assert cert.verdicts == ("VirtuallyExcessive", "Incoherent", "AlgebraicallyFibers")
    assert replay(cert) == cert.verdicts
    cert = virtual_verdict(lam_rho)
    assert cert.data["hit"]["h1"] == "Z^5" and cert.data["hit"]["base_rank"] == 4
    assert replay(cert) == cert.verdicts
    cert = virtual_verdict(f2xf2)
    assert cert.data["hit"]["index"] == 1 and "Incoherent" in cert.verdicts


def test_virtual_verdict_inconclusive_records_bounds(lam2_rho):
    cert = virtual_verdict(lam2_rho, Bounds(max_fiber_index=1, max_index=1))
    assert cert.verdicts == ("Inconclusive",)
    assert cert.bounds["max_index"] == 1
    assert replay(cert) == cert.verdicts


def test_virtual_verdict_rank_one_sign():
    flip = Automorphism(Endomorphism(1, [[-1]]), Endomorphism(1, [[-1]]))
    e = ExtensionSpec.free(1, [flip, Automorphism.identity(1)])
    cert = virtual_verdict(e)
    assert "rank-one-descent" in cert.theorems
    assert cert.verdicts == ("VirtuallyExcessive", "AlgebraicallyFibers")
    assert replay(cert) == cert.verdicts


def test_recorded_subgroup_rebuilds_as_excessive(lam_rho):
    cert = virtual_verdict(lam_rho)
    desc = cert.data["descriptor"]
    root = stallings.fold(desc["fiber_basis"], 2)
    sub = orbit_sub_extension(lam_rho, root, base_words=[Word(w) for w in desc["base_basis"]])
    assert str(extension_h1(sub)) == "Z^5"
    assert excessive_characters(sub)
