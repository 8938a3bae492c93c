"""Distances, geodesic expressions and words, and line geometry in H."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from snowflake_groups import (
    GroupParams,
    HPoint,
    closest_points_on_a_line,
    dist_a_power,
    dist_h,
    dist_power,
    dist_table,
    geodesic_expression,
    geodesic_word_a_power,
    geodesic_word_h,
    project_to_x_line,
    reduce_word,
    xy_line_intersection,
)


def test_params_examples():
    p = GroupParams(6)
    assert p.alpha == pytest.approx(math.log2(6))
    assert p.C == 26  # 2 + max(24, 3^1.5)
    p = GroupParams(10)
    assert p.alpha == pytest.approx(3.3219, abs=1e-4)
    assert p.C == 34  # 2 + max(32, 5^1.5)


@pytest.mark.parametrize("bad", [5, 4, 7, 0, -6, 9])
def test_params_rejects_bad_l(bad):
    with pytest.raises(ValueError):
        GroupParams(bad)


def test_dist_a_power_examples(p6, p10):
    assert dist_a_power(p10, 9) == 7  # 6 + L - 9
    assert dist_a_power(p10, 20) == 8  # 4 + 2|a^2|
    assert dist_a_power(p6, 0) == 0
    assert dist_a_power(p6, 11) == 9  # min(|a^6|+5, |a^12|+1)
    assert dist_a_power(p10, 36) == 16  # witness sequence instance


def test_dist_a_power_snowflake_lengths(p6, p10):
    # |a^(L^n)| = 5 * 2^n - 4
    for params in (p6, p10):
        for n in range(1, 8):
            assert dist_a_power(params, params.L**n) == 5 * 2**n - 4


def test_dist_power_examples(p6, p10):
    assert dist_power(p6, "x", 1) == 3
    assert dist_power(p6, "y", 1) == 3
    assert dist_power(p6, "y", 0) == 0
    assert dist_power(p10, "x", 20) == 10


def test_dist_h_examples(p6, p10):
    assert dist_h(p6, HPoint(6, 0)) == 6  # x y = a^6
    assert dist_h(p6, HPoint(0, 0)) == 0
    assert dist_h(p6, HPoint(0, 2)) == 4  # |x^2| = 2 + |a^2|
    assert dist_h(p10, HPoint(12, 0)) == 8


def test_dist_h_matches_dist_a_on_a_line(p6, p10):
    for params in (p6, p10):
        for m in range(-60, 61):
            assert dist_h(params, HPoint(m, 0)) == dist_a_power(params, m)


def test_hpoint_conversion_law(p6):
    # (l, m, n) -> (l + Ln, m - n)
    assert HPoint.from_xyz(p6, 1, 2, 3) == HPoint(19, -1)
    assert HPoint.from_xyz(p6, 0, 1, 1) == HPoint(6, 0)
    y = HPoint.generator(p6, "y", 1)
    x = HPoint.generator(p6, "x", 1)
    assert x * y == HPoint(6, 0)


def test_dist_table_matches_recursion(p6, p10):
    for params in (p6, p10):
        table = dist_table(params, 500)
        for m in range(501):
            assert table[m] == dist_a_power(params, m)


def test_oracle_equivalence_small_ball(p6, ball6_r6):
    seen = 0
    for h, d in ball6_r6.h_elements():
        assert dist_h(p6, h) == d
        seen += 1
    assert seen > 20


@settings(max_examples=150, deadline=None)
@given(m=st.integers(min_value=-(10**9), max_value=10**9))
def test_dist_symmetry(m):
    params = GroupParams(6)
    assert dist_a_power(params, m) == dist_a_power(params, -m)
    assert dist_power(params, "x", m) == dist_power(params, "y", m)


@settings(max_examples=100, deadline=None)
@given(ell=st.integers(min_value=-(10**6), max_value=10**6))
def test_dist_unit_steps(ell):
    params = GroupParams(8)
    assert abs(dist_a_power(params, ell) - dist_a_power(params, ell + 1)) == 1


@settings(max_examples=100, deadline=None)
@given(q=st.integers(min_value=1, max_value=10**6))
def test_dist_multiple_steps(q):
    params = GroupParams(10)
    d1 = dist_a_power(params, q * 10)
    d2 = dist_a_power(params, (q + 1) * 10)
    assert abs(d1 - d2) == 2


@settings(max_examples=120, deadline=None)
@given(
    u1=st.integers(-3000, 3000),
    v1=st.integers(-8, 8),
    u2=st.integers(-3000, 3000),
    v2=st.integers(-8, 8),
)
def test_dist_h_triangle_inequality(u1, v1, u2, v2):
    params = GroupParams(6)
    h1, h2 = HPoint(u1, v1), HPoint(u2, v2)
    assert dist_h(params, h1 * h2) <= dist_h(params, h1) + dist_h(params, h2)


def test_distortion_bounds_sampled(p6, p10):
    for params in (p6, p10):
        for m in list(range(1, 2000)) + [10**6, 10**9 + 7]:
            r = dist_a_power(params, m) / params.root(m)
            assert 1 <= r < params.C
            if m > 1:
                assert r > 1


# ---------------------------------------------------------------------------
# geodesic expressions


def test_expression_examples(p6, p10):
    e = geodesic_expression(p10, 36)
    assert e.digits == (-4, 4)
    assert e.path_length() == 16 == dist_a_power(p10, 36)
    e = geodesic_expression(p6, 5)
    assert e.digits == (5,) and e.path_length() == 5
    e = geodesic_expression(p10, 100)
    assert e.digits == (0, 0, 1)
    assert e.path_length() == 16 == dist_a_power(p10, 100)


def test_expression_rejects_zero(p6):
    with pytest.raises(ValueError):
        geodesic_expression(p6, 0)


def _check_digit_bounds(params, e, m):
    digits = e.digits if m > 0 else tuple(-d for d in e.digits)
    top = digits[-1]
    assert 0 < top <= params.L // 2 + 2
    assert all(abs(d) <= params.L // 2 for d in digits[:-1])


@pytest.mark.parametrize("L", [6, 8, 10, 12])
def test_expression_soundness_range(L):
    params = GroupParams(L)
    for m in list(range(1, 1500)) + [L**6 + 3, -(L**5) + 17, 10**7 + 1]:
        for mm in (m, -m):
            e = geodesic_expression(params, mm)
            assert e.value() == mm
            assert e.path_length() == dist_a_power(params, mm)
            _check_digit_bounds(params, e, mm)
            j = len(e.digits) - 1
            if j >= 1:
                assert abs(j - math.log(abs(mm)) / math.log(L)) < 1
                assert 5 * 2**j - 4 <= e.path_length() <= (L + 6) * 2**j - 4


def test_geodesic_word_a_power_examples(p6, p10):
    w = geodesic_word_a_power(p6, 6)
    assert str(w) == "s a s^-1 t a t^-1"
    assert w.length == 6
    assert str(geodesic_word_a_power(p6, 1)) == "a"
    w = geodesic_word_a_power(p10, 36)
    assert w.length == 16
    end = w.endpoint()
    assert end.in_vertex_group() and end.h_point() == HPoint(36, 0)
    assert geodesic_word_a_power(p6, 0).chars == ""


@pytest.mark.parametrize("L", [6, 10])
def test_geodesic_word_a_power_sound(L):
    params = GroupParams(L)
    for m in list(range(-300, 301)) + [L**4 + 7, -(L**3) - 11]:
        w = geodesic_word_a_power(params, m)
        assert w.length == dist_a_power(params, m)
        assert w.endpoint().h_point() == HPoint(m, 0)


def test_geodesic_word_h_examples(p6, p10):
    w = geodesic_word_h(p6, HPoint(0, 1))
    assert str(w) == "s a s^-1" and w.length == 3
    assert geodesic_word_h(p6, HPoint(0, 0)).chars == ""
    w = geodesic_word_h(p10, HPoint(12, 0))
    assert w.length == 8
    assert w.endpoint().h_point() == HPoint(12, 0)
    # passes through x y before the a-tail
    assert w.chars.startswith("s")


def test_geodesic_word_h_escape_shape(p6):
    # x-escape, then y-escape, then an a-path shorter than L
    # (exponent below L except the small-L corner cases)
    for u in range(-40, 41):
        for v in range(-4, 5):
            w = geodesic_word_h(p6, HPoint(u, v))
            assert w.length == dist_h(p6, HPoint(u, v))
            end = w.endpoint()
            assert end.in_vertex_group() and end.h_point() == HPoint(u, v)
            # the trailing a-run is short except the documented corner cases
            run = 0
            for ch in reversed(w.chars):
                if ch in ("a", "A"):
                    run += 1
                else:
                    break
            if abs(u) > 10 or v != 0:
                assert run < p6.L or w.chars[0] in "st"


def test_l6_corner_cases_prefer_escapes(p6):
    # |a^l| = l for l <= 10, but the emitted geodesic uses escapes once l >= 6
    for ell in range(6, 11):
        w = geodesic_word_h(p6, HPoint(ell, 0))
        assert w.length == ell == dist_a_power(p6, ell)
        assert w.chars.startswith("s")


# ---------------------------------------------------------------------------
# lines, intersections, projections


def test_closest_points_examples(p6):
    assert closest_points_on_a_line(p6, HPoint(0, 1)) == (HPoint(0, 0), HPoint(6, 0))
    assert closest_points_on_a_line(p6, HPoint(3, 1)) == (HPoint(3, 0), HPoint(9, 0))
    with pytest.raises(ValueError):
        closest_points_on_a_line(p6, HPoint(5, 0))


def test_closest_points_equidistant(p6):
    for u in range(-12, 13, 3):
        for v in (-2, -1, 1, 2):
            h = HPoint(u, v)
            pa, pb = closest_points_on_a_line(p6, h)
            da = dist_h(p6, h.inverse() * pa)
            db = dist_h(p6, h.inverse() * pb)
            assert da == db
            # and nothing on <a> is closer
            best = min(dist_h(p6, h.inverse() * HPoint(k, 0)) for k in range(u - 40, u + 41))
            assert best == da


def test_xy_line_intersection_examples(p6):
    assert xy_line_intersection(p6, HPoint(2, 0)) == (-2, HPoint(0, 0))
    assert xy_line_intersection(p6, HPoint(0, 0)) == (0, HPoint(0, 0))
    # tie |3| = |-3| broken toward positive ell
    assert xy_line_intersection(p6, HPoint(3, 0)) == (3, HPoint(0, 1))


def test_xy_line_intersection_is_intersection(p6, p10):
    for params in (p6, p10):
        for u in range(-15, 16):
            for v in range(-2, 3):
                h = HPoint(u, v)
                ell, pt = xy_line_intersection(params, h)
                assert abs(ell) <= params.L // 2
                # pt lies on <x>
                assert pt.u == 0
                # and on h a^ell <y>: (h a^ell)^-1 pt is a y-power
                diff = (h * HPoint(ell, 0)).inverse() * pt
                assert diff.as_power(params)[0] in ("y", "a")


def test_project_to_x_line(p6, p10):
    assert project_to_x_line(p6, 6) == HPoint(0, 1)
    assert project_to_x_line(p6, 0) == HPoint(0, 0)
    assert project_to_x_line(p10, -20) == HPoint(0, -2)
    with pytest.raises(ValueError):
        project_to_x_line(p6, 7)


def test_projection_is_closest(p6):
    for q in range(-5, 6):
        p = 6 * q
        proj = project_to_x_line(p6, p)
        dp = dist_h(p6, HPoint(-p, 0) * proj)
        for k in range(q - 8, q + 9):
            d = dist_h(p6, HPoint(-p, 0) * HPoint(0, k))
            assert d >= dp
            if k != proj.v:
                assert d > dp  # uniqueness


def test_plane_lower_bound(p6, p10):
    # |a^l x^m y^n| >= |m+q|^(1/alpha) + |n+q|^(1/alpha) - 5
    for params in (p6, p10):
        L = params.L
        for ell in range(-3 * L, 3 * L + 1, 3):
            for m in range(-6, 7, 2):
                for n in range(-6, 7, 3):
                    h = HPoint.from_xyz(params, ell, m, n)
                    d = dist_h(params, h)
                    for q in {ell // L, ell // L + 1}:
                        r = ell - q * L
                        if abs(r) < L:
                            bound = params.root(m + q) + params.root(n + q) - 5
                            assert d >= bound - 1e-9
