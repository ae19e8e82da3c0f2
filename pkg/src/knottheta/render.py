"""Coefficient-grid pictures of theta with an Alexander barcode.

The grid has one cell per monomial ``T1^a T2^b``: ``a`` grows to the right,
``b`` grows upward, and ``(0, 0)`` sits in the middle.  A cell with
coefficient ``c`` has intensity ``|c| / max|c|``; positive coefficients ramp
from white to red, negative ones from white to blue.  The barcode above the
grid shows the coefficients of the symmetric Alexander polynomial with the
same ramp, normalized by its own maximum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .laurent import LaurentPoly1, LaurentPoly2

__all__ = ["GridImage", "build_grid", "render_theta", "color_of", "round_half_away"]

RGB = tuple[int, int, int]
WHITE: RGB = (255, 255, 255)


def round_half_away(x: Fraction) -> int:
    """Nearest integer, ties away from zero."""
    x = Fraction(x)
    q = math.floor(abs(x) + Fraction(1, 2))
    return q if x >= 0 else -q


def color_of(c: Fraction, cmax: Fraction) -> RGB:
    if c == 0 or cmax == 0:
        return WHITE
    fade = round_half_away(255 * (1 - abs(Fraction(c)) / cmax))
    return (255, fade, fade) if c > 0 else (fade, fade, 255)


@dataclass(frozen=True)
class GridImage:
    """Cell colors in row-major order, top row first."""

    cells: tuple[tuple[RGB, ...], ...]
    barcode: tuple[RGB, ...]
    e1_range: tuple[int, int]
    e2_range: tuple[int, int]
    theta_max: Fraction
    alexander_max: Fraction
    cell: int = 16
    margin: int = 8

    @property
    def width(self) -> int:
        cols = max(len(self.cells[0]) if self.cells else 0, len(self.barcode))
        return 2 * self.margin + self.cell * cols

    @property
    def height(self) -> int:
        return 3 * self.margin + self.cell * (len(self.cells) + 1)


def build_grid(theta: LaurentPoly2, alexander: LaurentPoly1, cell: int = 16,
               margin: int = 8) -> GridImage:
    coeffs: Mapping[tuple[int, int], Fraction] = theta.to_dict()
    r1 = max([abs(a) for a, _ in coeffs] + [0])
    r2 = max([abs(b) for _, b in coeffs] + [0])
    tmax = max([abs(v) for v in coeffs.values()] + [Fraction(0)])
    rows = []
    for b in range(r2, -r2 - 1, -1):
        rows.append(tuple(color_of(coeffs.get((a, b), Fraction(0)), tmax)
                          for a in range(-r1, r1 + 1)))
    alex = alexander.to_dict()
    m = max([abs(e) for e in alex] + [0])
    amax = Fraction(max([abs(v) for v in alex.values()] + [0]))
    bar = tuple(color_of(Fraction(alex.get(e, 0)), amax) for e in range(-m, m + 1))
    return GridImage(tuple(rows), bar, (-r1, r1), (-r2, r2), tmax, amax, cell, margin)


def _layout(img: GridImage):
    """Yield ``(x, y, w, h, rgb)`` rectangles, background first."""
    W, H = img.width, img.height
    yield 0, 0, W, H, WHITE
    c, m = img.cell, img.margin
    bx = (W - c * len(img.barcode)) // 2
    for k, rgb in enumerate(img.barcode):
        yield bx + k * c, m, c, c, rgb
    cols = len(img.cells[0]) if img.cells else 0
    gx = (W - c * cols) // 2
    gy = 2 * m + c
    for r, row in enumerate(img.cells):
        for k, rgb in enumerate(row):
            yield gx + k * c, gy + r * c, c, c, rgb


def _svg(img: GridImage) -> bytes:
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>\n',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{img.width}" '
        f'height="{img.height}" viewBox="0 0 {img.width} {img.height}">\n',
        f"<!-- axes: T1 exponent {img.e1_range[0]}..{img.e1_range[1]} left to right; "
        f"T2 exponent {img.e2_range[0]}..{img.e2_range[1]} bottom to top; "
        f"theta max {img.theta_max}; alexander max {img.alexander_max} -->\n",
    ]
    for x, y, w, h, (r, g, b) in _layout(img):
        out.append(f'<rect x="{x}" y="{y}" width="{w}" height="{h}" '
                   f'fill="#{r:02x}{g:02x}{b:02x}"/>\n')
    out.append("</svg>\n")
    return "".join(out).encode("ascii")


def _ppm(img: GridImage) -> bytes:
    W, H = img.width, img.height
    buf = bytearray(W * H * 3)
    for x, y, w, h, rgb in _layout(img):
        px = bytes(rgb) * w
        for yy in range(y, y + h):
            start = (yy * W + x) * 3
            buf[start : start + 3 * w] = px
    return f"P6\n{W} {H}\n255\n".encode("ascii") + bytes(buf)


def render_theta(result, format: str = "svg", alexander: LaurentPoly1 | None = None,
                 cell: int = 16, margin: int = 8) -> bytes:
    """Deterministic image bytes (``svg`` or ``ppm``).

    ``result`` is a ``ThetaResult`` or a bare theta polynomial, in which case
    ``alexander`` supplies the barcode (default: the constant 1).
    """
    if isinstance(result, LaurentPoly2):
        theta = result
        alexander = alexander if alexander is not None else LaurentPoly1.const(1)
    else:
        theta, alexander = result.theta, result.alexander
    img = build_grid(theta, alexander, cell, margin)
    if format == "svg":
        return _svg(img)
    if format == "ppm":
        return _ppm(img)
    raise ValueError(f"unknown image format {format!r}")
