from fractions import Fraction

import pytest

from src.errors import InvalidLieTypeError
from src.liedata import (
    Family,
    LieType,
    WeightIndex,
    admissible_levels,
    chain_labels,
    dim_fundamental,
    inner_product_weights,
    max_level,
    order,
    pairing_labels,
    root_data,
    weight_table,
)


def test_parse_and_str():
    t = LieType.parse("b3")
    assert t.family == Family.B and t.rank == 3
    assert str(t) == "B3"
    assert LieType.of("D", 4) == LieType.parse("D_4")


@pytest.mark.parametrize("family,rank", [("A", 0), ("B", 0), ("C", 1), ("D", 2), ("E", 6)])
def test_rank_bounds(family, rank):
    with pytest.raises(InvalidLieTypeError):
        LieType.of(family, rank)


@pytest.mark.parametrize("text,expected", [("B2", 5), ("C3", 6), ("D4", 8), ("A1", 2), ("A3", 4)])
def test_dimensions(text, expected):
    lie_type = LieType.parse(text)
    assert dim_fundamental(lie_type) == expected
    assert weight_table(lie_type).dim == expected


def test_weight_index_parse():
    assert WeightIndex.parse("2p") == WeightIndex(2, primed=True)
    assert WeightIndex.parse("2'") == WeightIndex(2, primed=True)
    assert WeightIndex.parse(3) == WeightIndex(3)
    assert str(WeightIndex(2, primed=True)) == "2p"
    with pytest.raises(InvalidLieTypeError):
        WeightIndex.parse("x")


def test_order_map_for_D():
    d3 = LieType.parse("D3")
    assert [order(d3, i) for i in (0, 1, "2p", 2, 3, 4)] == [0, 1, 3, 2, 4, 5]
    assert order(d3, "2") == 2


def test_primed_index_outside_D_is_rejected():
    with pytest.raises(InvalidLieTypeError):
        order(LieType.parse("B3"), "2p")


def test_weight_inner_products():
    b2 = LieType.parse("B2")
    assert inner_product_weights(b2, 0, 0) == 1
    assert inner_product_weights(b2, 0, 4) == -1
    assert inner_product_weights(b2, 2, 2) == 0
    c2 = LieType.parse("C2")
    assert inner_product_weights(c2, 0, 0) == Fraction(1, 2)
    assert inner_product_weights(c2, 1, 2) == Fraction(-1, 2)
    a1 = LieType.parse("A1")
    assert inner_product_weights(a1, 0, 0) == Fraction(1, 2)
    assert inner_product_weights(a1, 0, 1) == Fraction(-1, 2)
    d3 = LieType.parse("D3")
    assert inner_product_weights(d3, 2, "2p") == -1


def test_weights_step_down_by_chain_roots():
    for text in ("A3", "B3", "C3", "D4"):
        lie_type = LieType.parse(text)
        table = weight_table(lie_type)
        for level in admissible_levels(lie_type):
            weight = table.omega1
            for label in chain_labels(lie_type, level):
                weight = tuple(w - r for w, r in zip(weight, table.root(label)))
            assert weight == table.weight(level), (text, level)


def test_rho_pairs_to_one_on_simple_roots_up_to_scale():
    for text, expected in [("A2", [1, 1]), ("B3", [1, 1, Fraction(1, 2)]), ("C3", [Fraction(1, 2), Fraction(1, 2), 1]), ("D4", [1, 1, 1, 1])]:
        _, rho_pairings, gram = root_data(LieType.parse(text))
        assert rho_pairings == expected
        assert all(rho_pairings[i] == gram[i][i] / 2 for i in range(len(gram)))


def test_root_gram_of_B2():
    _, _, gram = root_data(LieType.parse("B2"))
    assert gram == [[2, -1], [-1, 1]]


def test_chain_labels_and_levels():
    assert chain_labels(LieType.parse("B2"), 4) == [1, 2, 2, 1]
    assert chain_labels(LieType.parse("C3"), 5) == [1, 2, 3, 2, 1]
    assert chain_labels(LieType.parse("D4"), 6) == [1, 2, 3, 4, 2, 1]
    assert chain_labels(LieType.parse("D4"), "3p") == [1, 2, 4]
    assert max_level(LieType.parse("C3")) == 5
    d3 = admissible_levels(LieType.parse("D3"))
    assert d3 == [WeightIndex(1), WeightIndex(2), WeightIndex(2, True), WeightIndex(3), WeightIndex(4)]
    assert pairing_labels(LieType.parse("A3")) == [1]
    with pytest.raises(InvalidLieTypeError):
        chain_labels(LieType.parse("B2"), 5)


def expected_weight_inner(lie_type, s, t):
    """Closed-form (lambda^s, lambda^t) by order position."""
    n = lie_type.rank
    family = lie_type.family
    if family == Family.A:
        return (1 if s == t else 0) - Fraction(1, n + 1)
    if family == Family.B:
        if s + t == 2 * n:
            return 0 if s == t else -1
        return 1 if s == t else 0
    if family == Family.C:
        if s == t:
            return Fraction(1, 2)
        return Fraction(-1, 2) if s + t == 2 * n - 1 else 0
    if s + t == 2 * n - 1:
        return -1
    return 1 if s == t else 0


ALL_TYPES = (
    [LieType.of("A", n) for n in range(1, 7)]
    + [LieType.of("B", n) for n in range(1, 7)]
    + [LieType.of("C", n) for n in range(2, 7)]
    + [LieType.of("D", n) for n in range(3, 7)]
)


@pytest.mark.parametrize("lie_type", ALL_TYPES, ids=str)
def test_weight_gram_matches_closed_form(lie_type):
    table = weight_table(lie_type)
    for s, first in enumerate(table.indices):
        for t, second in enumerate(table.indices):
            assert table.weight_inner(first, second) == expected_weight_inner(lie_type, s, t), (s, t)


@pytest.mark.parametrize("lie_type", [t for t in ALL_TYPES if str(t) != "B1"], ids=str)
def test_omega1_is_the_first_fundamental_weight(lie_type):
    table = weight_table(lie_type)
    for i in range(1, lie_type.rank + 1):
        ratio = 2 * table.omega1_pairing(i) / table.root_inner(i, i)
        assert ratio == (1 if i == 1 else 0), i


def test_B1_vector_weight_is_twice_the_fundamental_weight():
    table = weight_table(LieType.of("B", 1))
    assert 2 * table.omega1_pairing(1) / table.root_inner(1, 1) == 2


@pytest.mark.parametrize("lie_type", ALL_TYPES, ids=str)
def test_levels_cover_every_weight_but_the_highest(lie_type):
    assert len(admissible_levels(lie_type)) + 1 == dim_fundamental(lie_type)
