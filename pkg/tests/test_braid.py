from fractions import Fraction

import pytest

from src.braid import (
    BraidWord,
    eta_diagonal,
    framed_trace,
    knot_invariant,
    markov_counterexamples,
    parse_braid,
    represent,
    unknot_value,
    verify_partial_trace_twist,
)
from src.errors import BraidParseError
from src.liedata import LieType
from src.monodromy import build_monodromy, build_pairing
from src.ring import ONE, q

A1 = LieType.parse("A1")
TREFOIL = -q(4) + q(3) + q(1)
FIGURE_EIGHT = q(-2) - q(-1) + 1 - q(1) + q(2)


def test_parse_tokens_and_powers():
    beta = parse_braid("s1 s2^-1 s1^2")
    assert beta.strands == 3
    assert beta.letters == (1, -2, 1, 1)
    assert parse_braid("σ1^{-2} σ2").letters == (-1, -1, 2)
    assert parse_braid("").strands == 1
    assert parse_braid("s1", strands_hint=4).strands == 4
    assert str(parse_braid("s1 s2^-1")) == "s1 s2^-1"


@pytest.mark.parametrize("text", ["s0", "x1", "s1^", "s1 t2"])
def test_parse_rejects_malformed(text):
    with pytest.raises(BraidParseError):
        parse_braid(text)


def test_generator_must_fit_strands():
    with pytest.raises(BraidParseError):
        parse_braid("s3", strands_hint=3)
    with pytest.raises(BraidParseError):
        BraidWord(0)


def test_writhe_mirror_and_stabilization():
    beta = parse_braid("s1 s2^-1 s1")
    assert beta.writhe == 1
    assert beta.mirror().letters == (-1, 2, -1)
    assert beta.stabilized(-1) == BraidWord(4, (1, -2, 1, -3))
    assert beta.rotated(1).letters == (-2, 1, 1)


def test_eta_and_unknot_for_A1():
    assert eta_diagonal(build_pairing(A1)) == [-q(Fraction(1, 2)), -q(Fraction(-1, 2))]
    assert unknot_value(A1) == -(q(Fraction(1, 2)) + q(Fraction(-1, 2)))


@pytest.mark.parametrize(
    "word,expected",
    [
        ("s1 s1 s1", TREFOIL),
        ("s1^-1 s1^-1 s1^-1", TREFOIL.bar()),
        ("s1 s2^-1 s1 s2^-1", FIGURE_EIGHT),
        ("s1 s1", -q(Fraction(5, 2)) - q(Fraction(1, 2))),
        ("s1", ONE),
        ("s1^-1 s2", ONE),
    ],
)
def test_A1_invariants(word, expected):
    assert knot_invariant(A1, parse_braid(word)) == expected


def test_empty_braids():
    assert knot_invariant(A1, BraidWord(1)) == 1
    assert knot_invariant(A1, BraidWord(2)) == unknot_value(A1)
    assert framed_trace(A1, BraidWord(1)) == unknot_value(A1)


def test_A1_skein_relation():
    # q^{-1} P(L+) - q P(L-) = (q^{1/2} - q^{-1/2}) P(L0) on the trefoil crossing
    plus = knot_invariant(A1, parse_braid("s1 s1 s1"))
    minus = knot_invariant(A1, parse_braid("s1"))
    zero = knot_invariant(A1, parse_braid("s1 s1"))
    assert plus * q(-1) - minus * q(1) == zero * (q(Fraction(1, 2)) - q(Fraction(-1, 2)))


@pytest.mark.parametrize("text", ["A1", "B2"])
def test_braid_relations(text):
    R = build_monodromy(LieType.parse(text))
    assert represent(R, parse_braid("s1 s2 s1")) == represent(R, parse_braid("s2 s1 s2"))
    assert represent(R, parse_braid("s1 s1^-1 s2^-1 s2")).is_identity()


def test_far_generators_commute():
    R = build_monodromy(A1)
    assert represent(R, parse_braid("s1 s3^-1")) == represent(R, parse_braid("s3^-1 s1"))


@pytest.mark.parametrize("text", ["A1", "B2", "B3", "C2", "C3", "D3"])
def test_partial_trace_gives_twist(text):
    assert verify_partial_trace_twist(LieType.parse(text))


@pytest.mark.parametrize("text", ["A1", "B2", "C2", "D3"])
def test_markov_moves(text):
    assert markov_counterexamples(LieType.parse(text), samples=6, seed=7, max_strands=3, max_length=4) == []


def test_trefoil_is_chiral():
    trefoil = parse_braid("s1 s1 s1")
    for text in ("A1", "B2"):
        lie_type = LieType.parse(text)
        assert knot_invariant(lie_type, trefoil) != knot_invariant(lie_type, trefoil.mirror())


def test_mirror_is_bar_for_A1():
    beta = parse_braid("s1 s2^-1 s1 s1")
    assert knot_invariant(A1, beta.mirror()) == knot_invariant(A1, beta).num.bar()


@pytest.mark.parametrize("text", ["A1", "B2", "C2", "D3"])
@pytest.mark.parametrize("word", ["", "s1", "s1 s2^-1 s1", "s2 s2 s1^-1"])
@pytest.mark.parametrize("sign", [1, -1])
def test_stabilized_trace_reuses_columns(text, word, sign):
    lie_type = LieType.parse(text)
    beta = parse_braid(word, strands_hint=3 if word else 1)
    pairing = build_pairing(lie_type)
    T = represent(build_monodromy(lie_type), beta)
    shortcut = T.stabilized_trace(eta_diagonal(pairing), sign)
    assert shortcut == framed_trace(lie_type, beta.stabilized(sign))
