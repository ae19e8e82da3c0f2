import re
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from knottheta.laurent import T1, T2, LaurentPoly1, LaurentPoly2
from knottheta.pd import connected_sum
from knottheta.render import build_grid, color_of, render_theta, round_half_away
from knottheta.satellite import whitehead_double
from knottheta.table import lookup
from knottheta.theta import theta_of

GOLDEN = Path(__file__).parent / "golden"
FLOWER = 6 - T1 - T2 - T1 * T2 - T1 ** -1 - T2 ** -1 - (T1 * T2) ** -1
WHITE = (255, 255, 255)
RECT = re.compile(r'<rect x="(\d+)" y="(\d+)" width="(\d+)" height="(\d+)" fill="#([0-9a-f]{6})"/>')


def cell(img, e1, e2):
    return img.cells[img.e2_range[1] - e2][e1 - img.e1_range[0]]


@pytest.mark.parametrize("x, want", [(Fraction(5, 2), 3), (Fraction(-5, 2), -3), (Fraction(7, 3), 2), (0, 0)])
def test_round_half_away(x, want):
    assert round_half_away(x) == want


def test_color_ramps():
    assert color_of(0, 5) == WHITE
    assert color_of(5, 5) == (255, 0, 0)
    assert color_of(-5, 5) == (0, 0, 255)
    assert color_of(Fraction(-1, 2), 1) == (128, 128, 255)


def test_trefoil_double_is_a_flower(trefoil):
    res = theta_of(whitehead_double(trefoil, 1, 0))
    img = build_grid(res.theta, res.alexander)
    assert img.e1_range == (-1, 1) and img.e2_range == (-1, 1)
    assert cell(img, 0, 0) == (255, 0, 0)
    petals = [(1, 0), (0, 1), (1, 1), (-1, 0), (0, -1), (-1, -1)]
    # |-2| / 12 of full intensity
    assert {cell(img, *p) for p in petals} == {(213, 213, 255)}
    assert cell(img, 1, -1) == WHITE and cell(img, -1, 1) == WHITE


def test_figure_eight_flower_is_blue_centered():
    res = theta_of(whitehead_double(lookup("4_1").pd, 1, 0))
    img = build_grid(res.theta, res.alexander)
    assert cell(img, 0, 0) == (0, 0, 255)


def test_zero_is_white():
    img = build_grid(LaurentPoly2(), LaurentPoly1.const(1))
    assert img.cells == ((WHITE,),)
    assert img.barcode == ((255, 0, 0),)


@given(st.dictionaries(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), st.integers(-5, 5), min_size=1))
def test_negation_swaps_red_and_blue(coeffs):
    th = LaurentPoly2(coeffs)
    if th.is_zero():
        return
    a = build_grid(th, LaurentPoly1.const(1))
    b = build_grid(-th, LaurentPoly1.const(1))
    for ra, rb in zip(a.cells, b.cells):
        for (r, g, bl), other in zip(ra, rb):
            assert other == (bl, g, r)


@given(st.dictionaries(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), st.integers(-5, 5), min_size=1))
def test_center_cell_is_the_middle(coeffs):
    img = build_grid(LaurentPoly2(coeffs), LaurentPoly1.const(1))
    rows, cols = len(img.cells), len(img.cells[0])
    assert rows % 2 == 1 and cols % 2 == 1
    c0 = LaurentPoly2(coeffs)[(0, 0)]
    tmax = img.theta_max
    assert img.cells[rows // 2][cols // 2] == color_of(c0, tmax)


def test_svg_is_rects_only(trefoil):
    svg = render_theta(theta_of(trefoil), "svg").decode()
    body = [l for l in svg.splitlines()[3:-1]]
    assert all(RECT.fullmatch(l) for l in body)


def test_ppm_header_and_size(trefoil):
    res = theta_of(trefoil)
    data = render_theta(res, "ppm")
    img = build_grid(res.theta, res.alexander)
    header = f"P6\n{img.width} {img.height}\n255\n".encode()
    assert data.startswith(header)
    assert len(data) == len(header) + 3 * img.width * img.height


def test_rendering_is_deterministic(trefoil):
    res = theta_of(trefoil)
    for fmt in ("svg", "ppm"):
        assert render_theta(res, fmt) == render_theta(theta_of(trefoil), fmt)


def test_granny_golden():
    p = lookup("3_1").pd
    got = render_theta(theta_of(connected_sum(p, p)), "svg")
    assert got == (GOLDEN / "granny.svg").read_bytes()


def test_unknown_format(trefoil):
    with pytest.raises(ValueError):
        render_theta(theta_of(trefoil), "png")
