import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import reduced_words
from freebyfree.words import (
    EMPTY,
    Generator,
    Word,
    apply_endo,
    concat,
    cyclic_reduce,
    exponent_vector,
    format_word,
    invert,
    parse_word,
    shortlex_key,
    words_up_to,
)


def is_reduced(u) -> bool:
    return all(u[i] != -u[i + 1] for i in range(len(u) - 1))


def test_reduction_on_construction():
    assert Word([1, 2, -2, -1, 3]) == (3,)
    assert Word([1, -1]) == EMPTY


def test_generator_parts():
    g = Generator(2, -1)
    assert g == -2 and g.index == 2 and g.sign == -1


@given(reduced_words(3), reduced_words(3))
def test_concat_is_reduced_and_matches_naive(u, v):
    w = concat(u, v)
    assert is_reduced(w)
    assert w == Word(tuple(u) + tuple(v))


@given(reduced_words(3), reduced_words(3), reduced_words(3))
def test_associativity(u, v, w):
    assert (u * v) * w == u * (v * w)


@given(reduced_words(3))
def test_inverse(u):
    assert concat(u, invert(u)) == EMPTY
    assert ~~u == u


@given(reduced_words(3))
def test_cyclic_reduce(u):
    core, c = cyclic_reduce(u)
    assert concat(concat(c, core), invert(c)) == u
    if len(core) > 1:
        assert core[0] != -core[-1]


@given(reduced_words(2), reduced_words(2))
def test_apply_endo_is_homomorphism(u, v):
    images = [Word([1, 2]), Word([2, 2, -1])]
    assert apply_endo(images, concat(u, v)) == concat(apply_endo(images, u), apply_endo(images, v))


def test_apply_endo_missing_image():
    with pytest.raises(KeyError):
        apply_endo({1: Word([1])}, [2])


@given(reduced_words(3), reduced_words(3))
def test_exponent_vector_additive(u, v):
    a, b, c = exponent_vector(u, 3), exponent_vector(v, 3), exponent_vector(concat(u, v), 3)
    assert c == [x + y for x, y in zip(a, b)]


def test_exponent_vector_rank_overflow():
    with pytest.raises(IndexError):
        exponent_vector([3], 2)


def test_words_up_to_counts_and_order():
    ws = list(words_up_to(2, 3))
    # 1 + 4 + 12 + 36 reduced words in F_2
    assert len(ws) == 53
    assert ws == sorted(ws, key=shortlex_key)
    assert ws[:5] == [(), (1,), (-1,), (2,), (-2,)]


@given(reduced_words(2))
def test_parse_format_round_trip(u):
    names = ["a", "b"]
    assert parse_word(format_word(u, names), names) == u


def test_parse_errors_and_identity():
    assert parse_word("1", ["a"]) == EMPTY
    assert format_word(EMPTY) == "1"
    with pytest.raises(ValueError):
        parse_word("a c", ["a", "b"])


@given(st.integers(-3, 3), reduced_words(2))
def test_power(n, u):
    p = u ** n
    if n >= 0:
        assert p == Word(tuple(u) * n)
    else:
        assert p == Word(tuple(invert(u)) * -n)
