from __future__ import annotations

import pytest

from conftest import GROUPS, LAM
from freebyfree.groupfile import GroupFileError, parse_group, parse_presentation

F2XF2 = """
name F2 x F2
fiber free a b
base s t
action s
  a -> a
  b -> b
action t   # trailing comment
  a -> a
  b -> b
"""


def test_parse_free():
    gf = parse_group(F2XF2)
    assert gf.name == "F2 x F2"
    e = gf.extension
    assert (e.fiber_mode, e.fiber_rank, e.base_rank) == ("free", 2, 2)
    assert e.nonfibering == "free-rank>=2"


def test_shipped_group_files_parse():
    files = sorted(GROUPS.glob("*.grp"))
    assert files
    for path in files:
        if path.name == "broken.grp":
            with pytest.raises(GroupFileError):
                parse_group(path.read_text())
        else:
            parse_group(path.read_text())


def test_lambda_file():
    e = parse_group((GROUPS / "lambda_rho.grp").read_text()).extension
    assert e.forward(0) == LAM.forward


def test_presented_and_abelian():
    e = parse_group("fiber presented a\nrel a a\nbase s\naction s\n a -> a\n").extension
    assert e.fiber_mode == "presented" and e.fiber_relators == ((1, 1),)
    e = parse_group("fiber abelian x y\nrelation 2 0\nbase s\nmatrix s\n 0 1\n 1 0\nflag assert-nonfibering\n").extension
    assert e.fiber_mode == "abelian" and e.nonfibering == "user-asserted"
    assert e.relation_matrix.tolist() == [[2], [0]]


@pytest.mark.parametrize(
    "text",
    [
        "base s\naction s\n a -> a\n",  # no fiber
        "fiber free a b\nbase s\n",  # missing action
        "fiber free a b\nbase s\naction s\n a -> a b\n",  # b unmapped
        "fiber free a b\nbase s\naction s\n a -> a a\n b -> b\n",  # not onto
        "fiber free a b\nbase s\naction t\n a -> a\n b -> b\n",  # unknown base generator
        "fiber free a b\nbase a\naction a\n a -> a\n b -> b\n",  # name clash
        "fiber abelian x\nbase s\nmatrix s\n 1 2\n",  # wrong size
        "fiber free a\nrel a a\nbase s\naction s\n a -> a\n",  # rel on free fiber
        "fiber free a\nbase s\naction s\n a -> a\nflag shiny\n",  # unknown flag
        "fiber cyclic a\nbase s\n",  # unknown mode
        "stray line\n",
    ],
)
def test_malformed(text):
    with pytest.raises(GroupFileError):
        parse_group(text)


def test_error_carries_line_number():
    with pytest.raises(GroupFileError) as info:
        parse_group("fiber free a b\nbase s\naction s\n a -> a c\n b -> b\n")
    assert info.value.line == 3


def test_presentation_file():
    p = parse_presentation("gens a b\nrel a a\nrel a b a- b-\n")
    assert p.n_generators == 2 and len(p.relators) == 2
    with pytest.raises(GroupFileError):
        parse_presentation("rel a a\n")
