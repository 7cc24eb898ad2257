from __future__ import annotations

import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from freebyfree.endos import Automorphism, Endomorphism, certify_automorphism, compose_auts
from freebyfree.fpgroups import ExtensionSpec
from freebyfree.words import Word

GROUPS = Path(__file__).resolve().parent.parent / "groups"

LAM = certify_automorphism(Endomorphism(2, [[1, 2], [2]]))  # a -> ab, b -> b
RHO = certify_automorphism(Endomorphism(2, [[1], [2, 1]]))  # a -> a, b -> ba


def nielsen_moves(m: int) -> list[Automorphism]:
    """Elementary automorphisms generating Aut(F_m)."""
    moves = []
    for i in range(1, m + 1):
        imgs = [[j] for j in range(1, m + 1)]
        imgs[i - 1] = [-i]
        moves.append(certify_automorphism(Endomorphism(m, imgs)))
        for j in range(1, m + 1):
            if i != j:
                imgs = [[x] for x in range(1, m + 1)]
                imgs[i - 1] = [i, j]
                moves.append(certify_automorphism(Endomorphism(m, imgs)))
    if m >= 2:
        imgs = [[x] for x in range(1, m + 1)]
        imgs[0], imgs[1] = [2], [1]
        moves.append(certify_automorphism(Endomorphism(m, imgs)))
    return moves


def random_automorphism(rng: random.Random, m: int, steps: int = 4) -> Automorphism:
    moves = nielsen_moves(m)
    a = Automorphism.identity(m)
    for _ in range(steps):
        a = compose_auts(a, rng.choice(moves))
    return a


def random_extension(rng: random.Random, m: int, k: int) -> ExtensionSpec:
    return ExtensionSpec.free(m, [random_automorphism(rng, m, rng.randint(0, 5)) for _ in range(k)])


def reduced_words(rank: int, max_size: int = 12):
    letters = st.sampled_from([s * i for i in range(1, rank + 1) for s in (1, -1)])
    return st.lists(letters, max_size=max_size).map(Word)


@pytest.fixture
def f2xf2() -> ExtensionSpec:
    ident = Automorphism.identity(2)
    return ExtensionSpec.free(2, [ident, ident])


@pytest.fixture
def lam2_rho() -> ExtensionSpec:
    return ExtensionSpec.free(2, [compose_auts(LAM, LAM), RHO])


@pytest.fixture
def lam_rho() -> ExtensionSpec:
    return ExtensionSpec.free(2, [LAM, RHO])


# -- acceptance summary ---------------------------------------------------------

ACCEPTANCE: dict[int, tuple[str, bool, float, float]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, elapsed, limit = ACCEPTANCE[n]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  {title}  ({elapsed:.2f} s, limit {limit:g} s)")
