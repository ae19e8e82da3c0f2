"""Twisted Whitehead doubles of knot diagrams.

Every crossing of the companion becomes four crossings of a parallel pair of
strands.  A clasp of the chosen sign closes the pair, and ``|t - Wr|`` full
twists (two crossings each) next to the clasp set the framing so that the
result is the ``t``-twisted double.  With ``n`` companion crossings the double
has ``4n + 2 + 2|t - Wr|`` crossings and ``8n + 4 + 4|t - Wr|`` edges.
"""

from __future__ import annotations

from dataclasses import dataclass

from .pd import ClosedPD, crossing_sign, mirror, safe_mod, writhe

__all__ = ["WDParams", "whitehead_double", "wd_layout", "wd_mirror_pair"]


@dataclass(frozen=True)
class WDParams:
    clasp: int
    source: ClosedPD
    t: int = 0

    def __post_init__(self) -> None:
        if self.clasp not in (1, -1):
            raise ValueError("clasp sign must be +1 or -1")


def wd_layout(pd: ClosedPD, t: int = 0) -> dict:
    """Sizes of the double: crossings, edges, writhe and clasp center label."""
    n, wr = pd.n, writhe(pd)
    k = abs(wr - t)
    N = 8 * n + 4 + 4 * k
    return {
        "n": 4 * n + 2 + 2 * k,
        "N": N,
        "writhe": wr,
        "clasp_center": N - 1 - 2 * k,
    }


def whitehead_double(pd: ClosedPD | WDParams, clasp: int | None = None, t: int = 0) -> ClosedPD:
    """PD code of the ``t``-twisted Whitehead double with the given clasp sign."""
    if isinstance(pd, WDParams):
        pd, clasp, t = pd.source, pd.clasp, pd.t
    if clasp not in (1, -1):
        raise ValueError("clasp sign must be +1 or -1")
    n = pd.n
    wr = writhe(pd)
    k = abs(wr - t)
    N = 8 * n + 4 + 4 * k

    def sm(v: int) -> int:
        return safe_mod(v, N)

    out: list[tuple[int, int, int, int]] = []
    for cr in pd.crossings:
        a, b, _, _ = cr
        negative = crossing_sign(cr, n) == -1
        w, x = 2 * a, 2 * b
        y = 2 * a + (2 * n - a) * 4 + 2
        z = 2 * b + (2 * n - b) * 4 + 2
        if a == 2 * n:
            w, y = N, N - 2 - 4 * k
        if b == 2 * n and negative:
            x, z = N, N - 2 - 4 * k
        if negative:
            out.append((w, sm(x + 1), sm(w + 1), sm(x + 2)))
            out.append((y - 1, sm(x + 1), y, x))
            out.append((y - 2, z - 1, y - 1, z))
            out.append((sm(w + 1), z - 1, sm(w + 2), z - 2))
        else:
            out.append((w, z + 1, sm(w + 1), sm(z + 2)))
            out.append((y - 1, sm(z + 1), y, z))
            out.append((y - 2, x - 1, y - 1, x))
            out.append((sm(w + 1), x - 1, sm(w + 2), sm(x - 2)))

    if clasp == -1:
        out.append((4 * n, N - 1 - 2 * k, 4 * n + 1, N - 2 * k))
        out.append((N - 2 - 2 * k, 4 * n + 1, N - 1 - 2 * k, 4 * n + 2))
    else:
        out.append((N - 1 - 2 * k, 4 * n + 1, N - 2 * k, 4 * n))
        out.append((4 * n + 1, N - 1 - 2 * k, 4 * n + 2, N - 2 - 2 * k))

    cc = N - 1 - 2 * k
    for i in range(1, wr - t + 1):
        out.append((cc - 2 * i - 1, cc + 2 * i + 1, cc - 2 * i, cc + 2 * i))
        out.append((cc + 2 * i - 1, cc - 2 * i + 1, cc + 2 * i, cc - 2 * i))
    for i in range(1, t - wr + 1):
        out.append((cc - 2 * i, cc + 2 * i - 1, cc - 2 * i + 1, cc + 2 * i))
        out.append((cc + 2 * i, cc - 2 * i - 1, cc + 2 * i + 1, cc - 2 * i))

    return ClosedPD(tuple(tuple(sm(v) for v in c) for c in out))


def wd_mirror_pair(pd: ClosedPD, t: int = 0) -> tuple[ClosedPD, ClosedPD]:
    """``(mirror(WD(+, mirror(K), -t)), WD(-, K, t))``, two diagrams of one knot."""
    lhs = mirror(whitehead_double(mirror(pd), 1, -t))
    rhs = whitehead_double(pd, -1, t)
    return lhs, rhs
