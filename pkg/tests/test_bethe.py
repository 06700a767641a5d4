import cmath

import numpy as np
import pytest

from src.bethe import (
    CriticalConfig,
    closed_form_one_point,
    closed_form_two_point_c0,
    closed_form_two_point_first,
    continue_in_c,
    newton_refine,
    relative_residual,
    two_point_pairs,
    two_point_critical_points,
    two_point_product,
    verify_c_limit,
    verify_ordering,
    yy_gradient,
    yy_jacobian,
    yy_value,
)
from src.errors import InvalidConfigurationError, InvalidLieTypeError, SingularConfigurationError
from src.liedata import Family, LieType, admissible_levels, dim_fundamental, max_level


def lt(text):
    return LieType.parse(text)


def pair_sum_product(coords, i, j):
    return coords[i] + coords[j], coords[i] * coords[j]


@pytest.mark.parametrize(
    "text,level,expected",
    [
        ("A1", 1, [1.0]),
        ("A3", 2, [0.5, 1.5]),
        ("B2", 2, [2 / 3, 8 / 3]),
        ("B3", 2, [0.5, 1.5]),
        ("C2", 2, [1 / 3, 4 / 3]),
        ("D3", 3, [1 / 3, 4 / 3, 4 / 3]),
        ("D3", "2p", [0.5, 1.5]),
    ],
)
def test_one_point_real_chains(text, level, expected):
    sol = closed_form_one_point(lt(text), level, 1.0)
    np.testing.assert_allclose(sol.coords, expected, atol=1e-12)
    assert sol.residual < 1e-9


def test_one_point_B2_level_3_has_vertical_pair():
    sol = closed_form_one_point(lt("B2"), 3, 1.0)
    np.testing.assert_allclose(sol.coords, [0.5, 1.5 + 1j, 1.5 - 1j], atol=1e-12)


def test_one_point_B2_level_4_pairs():
    coords = closed_form_one_point(lt("B2"), 4, 1.0).coords
    total, product = pair_sum_product(coords, 0, 3)
    assert total == pytest.approx(13 / 6)
    assert product == pytest.approx(13 / 18)
    total, product = pair_sum_product(coords, 1, 2)
    assert total == pytest.approx(5 / 3)
    assert product == pytest.approx(29 / 36)
    assert coords[1].imag > 0


def test_one_point_C2_level_3():
    coords = closed_form_one_point(lt("C2"), 3, 1.0).coords
    assert coords[1] == pytest.approx(5 / 6)
    total, product = pair_sum_product(coords, 0, 2)
    assert total == pytest.approx(7 / 3)
    assert product == pytest.approx(7 / 12)


def test_one_point_D3_level_4():
    coords = closed_form_one_point(lt("D3"), 4, 1.0).coords
    assert coords[1] == pytest.approx(5 / 6) and coords[2] == pytest.approx(5 / 6)
    total, product = pair_sum_product(coords, 0, 3)
    assert total == pytest.approx(7 / 3)
    assert (total ** 2 - 4 * product) == pytest.approx(28 / 9)


def test_one_point_scales_with_c_and_shifts_with_z():
    base = closed_form_one_point(lt("C3"), 4, 1.0).coords
    moved = closed_form_one_point(lt("C3"), 4, 4.0, z=2 - 1j).coords
    np.testing.assert_allclose(moved, base / 4 + (2 - 1j), atol=1e-12)


def test_one_point_rejects_bad_input():
    with pytest.raises(InvalidLieTypeError):
        closed_form_one_point(lt("B2"), 5, 1.0)
    with pytest.raises(InvalidLieTypeError):
        closed_form_one_point(lt("B3"), "2p", 1.0)
    with pytest.raises(InvalidConfigurationError):
        closed_form_one_point(lt("B2"), 2, 0.0)
    with pytest.raises(InvalidConfigurationError):
        CriticalConfig(lt("B2"), (1,), (0j,), -1.0)


def test_ordering_detects_swapped_coordinates():
    sol = closed_form_one_point(lt("B3"), 3, 1.0)
    sol.coords = sol.coords[::-1].copy()
    assert not verify_ordering(sol)


def test_two_point_A1_is_the_midpoint():
    sol = closed_form_two_point_c0(lt("A1"), 0, 1)
    np.testing.assert_allclose(sol.coords, [0.5])


@pytest.mark.parametrize(
    "text,squares",
    [("B2", [1 / 5, -1 / 15]), ("C2", [1 / 3]), ("D3", [1 / 3])],
)
def test_two_point_pair_half_differences(text, squares):
    lie_type = lt(text)
    coords = closed_form_two_point_c0(lie_type, -1, 1).coords
    for (label, i, j), expected in zip(two_point_pairs(lie_type), squares):
        assert coords[i] + coords[j] == pytest.approx(0)
        assert ((coords[i] - coords[j]) / 2) ** 2 == pytest.approx(expected)


@pytest.mark.parametrize("text", ["B3", "C3", "D4"])
def test_two_point_residual_with_complex_sites(text):
    sol = closed_form_two_point_c0(lt(text), 0.3 + 0.2j, -1 + 0.5j)
    assert sol.residual < 1e-9


def test_two_point_middle_coordinates():
    c3 = closed_form_two_point_c0(lt("C3"), 0, 2).coords
    assert c3[2] == pytest.approx(1)
    d3 = closed_form_two_point_c0(lt("D3"), 0, 2).coords
    assert d3[1] == pytest.approx(1) and d3[2] == pytest.approx(1)


def test_gradient_rejects_coincidences():
    cfg = CriticalConfig(lt("A2"), (1, 2), (0j,), 1.0)
    with pytest.raises(SingularConfigurationError):
        yy_gradient(cfg, [0.0, 1.0])
    with pytest.raises(SingularConfigurationError):
        yy_gradient(cfg, [1.0, 1.0])
    with pytest.raises(SingularConfigurationError):
        CriticalConfig(lt("A1"), (1,), (1j, 1j), 0.0)


def test_gradient_matches_value_derivative():
    cfg = CriticalConfig(lt("B3"), (1, 2, 3), (0j,), 1.5)
    w = np.array([0.45, 1.1, 2.3], dtype=complex)
    step = 1e-6
    grad = yy_gradient(cfg, w)
    for j in range(len(w)):
        e = np.zeros(len(w), dtype=complex)
        e[j] = step
        numeric = (yy_value(cfg, w + e) - yy_value(cfg, w - e)) / (2 * step)
        assert numeric == pytest.approx(grad[j], abs=1e-6)


def test_jacobian_matches_finite_differences():
    cfg = CriticalConfig(lt("C2"), (1, 2, 1), (0j,), 1.0)
    w = np.array([0.3, 0.9 + 0.1j, 2.0], dtype=complex)
    jac = yy_jacobian(cfg, w)
    step = 1e-7
    for s in range(len(w)):
        e = np.zeros(len(w), dtype=complex)
        e[s] = step
        column = (yy_gradient(cfg, w + e) - yy_gradient(cfg, w - e)) / (2 * step)
        np.testing.assert_allclose(jac[:, s], column, atol=1e-5)


def test_newton_returns_to_the_closed_form():
    exact = closed_form_one_point(lt("B2"), 4, 1.0)
    start = exact.coords + np.array([0.01, -0.01j, 0.02j, -0.015])
    refined = newton_refine(exact.config, start)
    np.testing.assert_allclose(refined.coords, exact.coords, atol=1e-9)
    assert relative_residual(exact.config, refined.coords) < 1e-9


def test_continuation_follows_A1_branch():
    seed = closed_form_two_point_c0(lt("A1"), 0, 1)
    results = continue_in_c(seed.config, seed.coords, [1.0, 10.0])
    for sol in results:
        c = sol.config.c
        expected = ((c + 2) - np.sqrt(c * c + 4)) / (2 * c)
        assert sol.coords[0] == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("text", ["A1", "B2"])
def test_c_limit(text):
    assert verify_c_limit(lt(text), z=(0j, 1 + 0j))


def test_c_limit_level_must_match():
    with pytest.raises(InvalidLieTypeError):
        verify_c_limit(lt("B2"), l=2)


def test_value_is_finite_on_principal_branch():
    sol = closed_form_one_point(lt("A2"), 2, 1.0)
    value = yy_value(sol.config, sol.coords)
    assert cmath.isfinite(value)


SWEEP_TYPES = (
    [LieType.of("A", n) for n in range(1, 7)]
    + [LieType.of(family, n) for family in ("B", "C") for n in range(2, 7)]
    + [LieType.of("D", n) for n in range(3, 7)]
)


@pytest.mark.parametrize("lie_type", SWEEP_TYPES, ids=str)
@pytest.mark.parametrize("c", [1.0, 2.0, 5.0])
def test_closed_forms_through_rank_six(lie_type, c):
    for level in admissible_levels(lie_type):
        sol = closed_form_one_point(lie_type, level, c)
        assert sol.residual < 1e-9, level
        assert verify_ordering(sol), level


@pytest.mark.parametrize("rank", range(2, 7))
@pytest.mark.parametrize("c", [1.0, 2.0, 5.0])
def test_B_beyond_rank_agrees_with_newton(rank, c):
    lie_type = LieType.of("B", rank)
    rng = np.random.default_rng(rank)
    for l in range(rank + 1, 2 * rank + 1):
        exact = closed_form_one_point(lie_type, l, c)
        kick = 1e-4 / c * (rng.standard_normal(l) + 1j * rng.standard_normal(l))
        refined = newton_refine(exact.config, exact.coords + kick)
        np.testing.assert_allclose(refined.coords, exact.coords, atol=1e-8 / c)


@pytest.mark.parametrize("text", ["B2", "B3", "C2", "C3", "D3", "D4"])
@pytest.mark.parametrize("z1,z2", [(0, 1), (1j, -1j)])
def test_two_point_pairs_meet_product_formula(text, z1, z2):
    lie_type = lt(text)
    sol = closed_form_two_point_c0(lie_type, z1, z2)
    assert sol.residual < 1e-9
    for label, i, j in two_point_pairs(lie_type):
        assert sol.coords[i] + sol.coords[j] == pytest.approx(z1 + z2, abs=1e-12)
        assert sol.coords[i] * sol.coords[j] == pytest.approx(two_point_product(lie_type, label, z1, z2), abs=1e-12)


def test_two_point_product_at_imaginary_sites():
    # w^1 w^2 = z1 z2 + (z1 - z2)^2 k(2n - k)/(4n^2 - 1) for B_n
    assert two_point_product(lt("B2"), 1, 1j, -1j) == pytest.approx(1 - 4 * 3 / 15)
    assert two_point_product(lt("C2"), 1, 1j, -1j) == pytest.approx(1 - 4 * 4 / 24)
    assert two_point_product(lt("D3"), 1, 1j, -1j) == pytest.approx(1 - 4 * 4 / 24)


def test_first_summand_is_the_midpoint():
    sol = closed_form_two_point_first(lt("C3"), 1j, -1j)
    np.testing.assert_allclose(sol.coords, [0j])
    assert sol.config.roots == (1,)
    assert sol.residual < 1e-12


@pytest.mark.parametrize("lie_type", SWEEP_TYPES, ids=str)
def test_one_critical_point_per_tensor_square_summand(lie_type):
    points = two_point_critical_points(lie_type, 0, 1)
    expected = 2 if lie_type.family == Family.A else 3
    assert len(points) == expected
    assert [len(p.coords) for p in points][:2] == [0, 1]
    for point in points[1:]:
        assert point.residual < 1e-9
    if lie_type.family != Family.A:
        assert len(points[-1].coords) == max_level(lie_type)


@pytest.mark.parametrize("lie_type", SWEEP_TYPES, ids=str)
def test_one_point_critical_points_span_the_weights(lie_type):
    levels = admissible_levels(lie_type)
    assert len(levels) + 1 == dim_fundamental(lie_type)
    seen = set()
    for level in levels:
        sol = closed_form_one_point(lie_type, level, 1.0)
        seen.add((sol.config.roots, tuple(sol.coords.round(12))))
    assert len(seen) == len(levels)
