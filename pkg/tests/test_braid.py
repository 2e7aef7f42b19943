import random

import pytest

from lagrangian_knots.braid import (
    BraidParseError,
    BraidWord,
    closure_components,
    cycles,
    parse_braid,
    underlying_permutation,
    writhe,
)


def test_parse_examples():
    assert parse_braid("1 1 1", 2).letters == (1, 1, 1)
    ident = parse_braid("", 3)
    assert ident.letters == () and ident.strands == 3
    assert parse_braid("1 1 1 2 1 1 1 2", 3).letters == (1, 1, 1, 2, 1, 1, 1, 2)
    assert parse_braid("s1 s-2 S1", 3).letters == (1, -2, 1)


@pytest.mark.parametrize("text,strands,token", [("1 0", 2, "0"), ("1 2", 2, "2"), ("1 x", 3, "x"), ("1 -3", 3, "-3")])
def test_parse_errors_name_the_token(text, strands, token):
    with pytest.raises(BraidParseError) as info:
        parse_braid(text, strands)
    assert repr(token) in str(info.value)


def test_writhe_examples():
    assert writhe(parse_braid("1 1 1", 2)) == 3
    assert writhe(parse_braid("", 2)) == 0
    assert writhe(parse_braid("1 1 1 2 1 1 1 2", 3)) == 8


def test_permutation_examples():
    assert closure_components(parse_braid("1 1 1", 2)) == 1
    assert underlying_permutation(parse_braid("", 2)) == (0, 1)
    assert closure_components(parse_braid("", 2)) == 2
    perm = underlying_permutation(parse_braid("1 -2", 3))
    assert len(cycles(perm)) == 1 and sorted(perm) == [0, 1, 2]


def _random_braid(rng, n):
    return BraidWord(n, tuple(rng.choice((1, -1)) * rng.randint(1, n - 1) for _ in range(rng.randint(0, 8))))


def _compose(p, r):
    return tuple(p[i] for i in r)


def test_homomorphism_properties():
    rng = random.Random(1)
    for _ in range(200):
        n = rng.randint(2, 5)
        a, b = _random_braid(rng, n), _random_braid(rng, n)
        assert writhe(a * b) == writhe(a) + writhe(b)
        pa, pb, pab = underlying_permutation(a), underlying_permutation(b), underlying_permutation(a * b)
        assert pab in (_compose(pa, pb), _compose(pb, pa))
        assert underlying_permutation(a * a.inverse()) == tuple(range(n))


def test_free_reduction():
    b = parse_braid("1 2 -2 -1 1 1", 3)
    assert b.free_reduction().letters == (1, 1)
    assert parse_braid("1 -1", 2).free_reduction().letters == ()
    assert b.free_reduction().writhe() == b.writhe()


def test_invalid_braid_word():
    with pytest.raises(ValueError):
        BraidWord(2, (2,))
