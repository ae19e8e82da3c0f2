"""The two-variable invariant theta from three specialized traffic matrices.

With ``g_{nu a b}`` the traffic function in ``T_nu`` (``T3 = T1*T2``),

    theta = D1 D2 D3 * (sum_c F1(c) + sum_{c0,c1} F2(c0, c1) + sum_k F3(k))

where ``D_nu`` is the symmetric Alexander polynomial in ``T_nu``.  Two routes
compute it: ``theta_reference`` evaluates F1, F2 and F3 literally over
``RatFun``; ``theta`` (the default) multiplies through by ``D1 D2 D3`` so
that every term factors into univariate pieces, accumulates the products
with integer matrix multiplication, and divides out ``2 (T2 - 1)`` at the end.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .laurent import LaurentPoly1, LaurentPoly2, RatFun, T1, T2, T3
from .pd import ClosedPD
from .traffic import TrafficMatrix, solve_traffic, specialize
from .upright import UprightDiagram, to_upright

__all__ = [
    "ThetaResult",
    "DEFAULT_F2_DIAGONAL",
    "f1",
    "f2",
    "f3",
    "theta",
    "theta_of",
    "theta_reference",
    "n_factor",
    "DenominatorError",
]

DEFAULT_F2_DIAGONAL = True

_HALF = Fraction(1, 2)


class DenominatorError(ArithmeticError):
    """The assembled sum did not become a Laurent polynomial."""


@dataclass(frozen=True)
class ThetaResult:
    theta: LaurentPoly2
    alexander: LaurentPoly1
    n_factor: LaurentPoly2
    n_crossings: int = 0
    pd_hash: str = ""
    f2_diagonal: bool = DEFAULT_F2_DIAGONAL
    meta: dict = field(default_factory=dict, compare=False)


def n_factor(delta: LaurentPoly1) -> LaurentPoly2:
    """``D(T1) * D(T2) * D(T1 T2)``."""
    return delta.substitute("T1") * delta.substitute("T2") * delta.substitute("T3")


# -- literal formulas ---------------------------------------------------------


def _pow(x: LaurentPoly2, s: int) -> LaurentPoly2:
    return x if s == 1 else x ** -1


def f1(c, G1, G2, G3) -> RatFun:
    """F1 of crossing ``c = (s, i, j)``; ``G_nu[a][b]`` 1-based callables."""
    s, i, j = c
    t1, t2, t3 = _pow(T1, s), _pow(T2, s), _pow(T3, s)
    g1ii, g1ji = G1(i, i), G1(j, i)
    g2ji, g2jj, g2ii, g2ij = G2(j, i), G2(j, j), G2(i, i), G2(i, j)
    g3ii, g3jj, g3ji = G3(i, i), G3(j, j), G3(j, i)
    first = (
        RatFun(LaurentPoly2.const(_HALF))
        - g3ii
        + g1ii * g2ji * t2
        - g3jj * g2ji * t2
        - g3ii * g2ji * (t2 - 1)
        + g2ji * g3ji * (t3 - 1)
        - g1ii * g2jj
        + g3ii * g2jj * 2
        + g1ii * g3jj
        - g2ii * g3jj
    )
    second = (
        (g3jj * g1ji - g2jj * g1ji + g1ji * g2ji * t2) * ((t1 - 1) * t2)
        + (g3ji - g1ii * g3ji * t2 + g2ij * g3ji + g2jj * g3ji * (t2 - 2)) * (t3 - 1)
        - g1ji * g3ji * ((t1 - 1) * (t2 + 1) * (t3 - 1))
    )
    return first * s + second * RatFun(LaurentPoly2.const(s), [t2 - 1])


def f2(c0, c1, G1, G2, G3) -> RatFun:
    s0, i0, j0 = c0
    s1, i1, j1 = c1
    a = G1(j1, i0)
    if a.num.is_zero():
        return RatFun(0)
    b = G3(j0, i1)
    if b.num.is_zero():
        return RatFun(0)
    t1_0, t2_0 = _pow(T1, s0), _pow(T2, s0)
    t2_1, t3_1 = _pow(T2, s1), _pow(T3, s1)
    inner = G2(i1, i0) * t2_0 + G2(j1, j0) - G2(j1, i0) * t2_0 - G2(i1, j0)
    pref = RatFun((t1_0 - 1) * (t3_1 - 1) * s1, [t2_1 - 1])
    return pref * a * b * inner


def f3(k: int, phi: int, G3) -> RatFun:
    if phi == 0:
        return RatFun(0)
    return (G3(k, k) - RatFun(LaurentPoly2.const(_HALF))) * phi


def _accessor(G: TrafficMatrix, target: str) -> Callable[[int, int], RatFun]:
    rows, _ = specialize(G, target)
    return lambda a, b: rows[a - 1][b - 1]


def theta_reference(
    d: UprightDiagram, f2_diagonal: bool = DEFAULT_F2_DIAGONAL, G: TrafficMatrix | None = None
) -> LaurentPoly2:
    """Literal evaluation of the formula over rational functions (small diagrams)."""
    if d.n == 0:
        return LaurentPoly2()
    G = G or solve_traffic(d)
    G1, G2, G3 = (_accessor(G, t) for t in ("T1", "T2", "T3"))
    total = RatFun(0)
    for c in d.crossings:
        total = total + f1(c, G1, G2, G3)
    for a, c0 in enumerate(d.crossings):
        for b, c1 in enumerate(d.crossings):
            if a == b and not f2_diagonal:
                continue
            total = total + f2(c0, c1, G1, G2, G3)
    for k in range(1, d.n_edges + 1):
        total = total + f3(k, d.phi(k), G3)
    total = total * n_factor(G.delta)
    if not total.is_polynomial():
        raise DenominatorError(f"denominator did not clear: {total}")
    return total.num


# -- fast route --------------------------------------------------------------
#
# After multiplying by 2 (T2 - 1) D1 D2 D3 every term of F1, F2 and F3 is a
# product u1(T1) u2(T2) u3(T3) of integer Laurent polynomials, because each
# g_nu = P(T_nu) / D(T_nu) appears at most once per variable and
# 2 (T2 - 1) / (T2^s - 1) is 2 or -2 T2.  The products are accumulated as a
# three-axis coefficient tensor, collapsed with T3 = T1 T2, and finally
# divided by 2 (T2 - 1).

_MARGIN = 4


class _Window:
    """Dense coefficient vectors over a common exponent range ``lo..lo+L-1``."""

    def __init__(self, lo: int, hi: int):
        self.lo = lo - _MARGIN
        self.L = hi - lo + 1 + 2 * _MARGIN

    def vec(self, p: LaurentPoly1) -> list[int]:
        out = [0] * self.L
        for e, c in p.items():
            k = e - self.lo
            if not 0 <= k < self.L:
                raise OverflowError("term outside the coefficient window")
            out[k] = c
        return out


def _mono(k: int, c: int = 1) -> LaurentPoly1:
    return LaurentPoly1.monomial(k, c)


def _f1_triples(c, P, D):
    """Triples for ``2 (T2 - 1) D1 D2 D3 F1(c)``."""
    s, i, j = c
    Pii, Pjj, Pji, Pij = P[i - 1][i - 1], P[j - 1][j - 1], P[j - 1][i - 1], P[i - 1][j - 1]
    one = _mono(0)
    ts = _mono(s)
    tm = ts - one  # T^s - 1
    w = _mono(1, 2) - 2  # 2 (T - 1)
    r = _mono(0, 2) if s == 1 else _mono(1, -2)
    out = [
        (D, D * (_mono(1) - one), D),
        (D, -(w * D), Pii),
        (Pii, w * ts * Pji, D),
        (D, -(w * ts * Pji), Pjj),
        (D, -(w * tm * Pji), Pii),
        (D, w * Pji, tm * Pji),
        (Pii, -(w * Pjj), D),
        (D, w * Pjj * 2, Pii),
        (Pii, w * D, Pjj),
        (D, -(w * Pii), Pjj),
        (tm * Pji, r * ts * D, Pjj),
        (tm * Pji, -(r * ts * Pjj), D),
        (tm * Pji, r * ts * ts * Pji, D),
        (D, r * D, tm * Pji),
        (Pii, -(r * ts * D), tm * Pji),
        (D, r * Pij, tm * Pji),
        (D, r * (ts - 2) * Pjj, tm * Pji),
        (tm * Pji, -(r * (ts + 1) * D), tm * Pji),
    ]
    return [(a * s, b, cc) for a, b, cc in out]


def _f3_triples(k: int, phi: int, P, D):
    if phi == 0:
        return []
    tm = _mono(1) - 1
    return [(D, tm * D * (2 * phi), P[k - 1][k - 1]), (D, tm * D * (-phi), D)]


def _exact_dtype(bound: int):
    if bound < 2 ** 52:
        return np.float64
    if bound < 2 ** 62:
        return np.int64
    return object


def _contract(A: np.ndarray, B: np.ndarray, C: np.ndarray) -> np.ndarray:
    """``S[a, b, c] = sum_k A[k, a] B[k, b] C[k, c]`` exactly."""
    K, L = A.shape
    if K == 0:
        return np.zeros((L, L, L), dtype=object)
    ma = np.abs(A).max(axis=1).astype(object)
    mb = np.abs(B).max(axis=1).astype(object)
    mc = np.abs(C).max(axis=1).astype(object)
    bound = int((ma * mb * mc).sum()) * L + 1
    dt = _exact_dtype(bound)
    A, B, C = A.astype(dt), B.astype(dt), C.astype(dt)
    AC = (A[:, :, None] * C[:, None, :]).reshape(K, L * L)
    S = AC.T @ B  # (a, c) x b
    if dt is np.float64:
        S = np.rint(S).astype(np.int64)
    return S.reshape(L, L, L).transpose(0, 2, 1).astype(object)


def _shift(X: np.ndarray, k: np.ndarray) -> np.ndarray:
    """Multiply each coefficient vector (last axis) by ``T^k`` (k = +-1 per row)."""
    up = np.roll(X, 1, axis=-1)
    down = np.roll(X, -1, axis=-1)
    return np.where((k == 1)[..., None], up, down)


def _f2_arrays(d: UprightDiagram, PP: np.ndarray, diagonal: bool):
    s = np.array([c[0] for c in d.crossings])
    ii = np.array([c[1] - 1 for c in d.crossings])
    jj = np.array([c[2] - 1 for c in d.crossings])
    n = len(s)
    # axis 0 runs over c0, axis 1 over c1
    s0 = np.broadcast_to(s[:, None], (n, n))
    s1 = np.broadcast_to(s[None, :], (n, n))
    A = PP[jj[None, :], ii[:, None]]  # g[j1][i0]
    C = PP[jj[:, None], ii[None, :]]  # g[j0][i1]
    U1 = (_shift(A, s0) - A) * s1[..., None]
    U3 = _shift(C, s1) - C
    X = (
        _shift(PP[ii[None, :], ii[:, None]], s0)
        + PP[jj[None, :], jj[:, None]]
        - _shift(A, s0)
        - PP[ii[None, :], jj[:, None]]
    )
    U2 = np.where((s1 == 1)[..., None], 2 * X, -2 * np.roll(X, 1, axis=-1))
    keep = ~(np.all(A == 0, axis=-1) | np.all(C == 0, axis=-1))
    if not diagonal:
        keep &= ~np.eye(n, dtype=bool)
    L = PP.shape[-1]
    return U1[keep].reshape(-1, L), U2[keep].reshape(-1, L), U3[keep].reshape(-1, L)


def _collapse_and_divide(S: np.ndarray, lo: int) -> LaurentPoly2:
    """``sum S[a,b,c] T1^(a+c) T2^(b+c)`` (offset ``lo`` per axis) over ``2 (T2 - 1)``."""
    L = S.shape[0]
    Z = np.zeros((2 * L - 1, 2 * L - 1), dtype=object)
    for c in range(L):
        Z[c : c + L, c : c + L] += S[:, :, c]
    out: dict[tuple[int, int], Fraction] = {}
    for a in range(Z.shape[0]):
        col = [int(v) for v in Z[a]]
        acc = 0
        for b, z in enumerate(col):
            acc -= z
            if acc:
                out[(a + 2 * lo, b + 2 * lo)] = Fraction(acc, 2)
        if acc:
            raise DenominatorError(
                f"denominator did not clear: remainder {acc} at T1^{a + 2 * lo}"
            )
    return LaurentPoly2(out)


def theta(
    d: UprightDiagram,
    f2_diagonal: bool = DEFAULT_F2_DIAGONAL,
    G: TrafficMatrix | None = None,
) -> ThetaResult:
    """theta of an upright diagram, by the factored integer route."""
    if d.n == 0:
        one = LaurentPoly1.const(1)
        return ThetaResult(LaurentPoly2(), one, LaurentPoly2.const(1), 0,
                           d.source_digest, f2_diagonal)
    G = G or solve_traffic(d)
    P, D = G.P, G.delta
    exps = [e for row in P for p in row for e, _ in p.items()] + [e for e, _ in D.items()]
    win = _Window(min(exps), max(exps))
    L = win.L
    PP = np.zeros((d.n_edges, d.n_edges, L), dtype=np.int64)
    for a, row in enumerate(P):
        for b, p in enumerate(row):
            if not p.is_zero():
                PP[a, b] = win.vec(p)
    triples = []
    for c in d.crossings:
        triples += _f1_triples(c, P, D)
    for k in range(1, d.n_edges + 1):
        triples += _f3_triples(k, d.phi(k), P, D)
    A1 = np.array([win.vec(t[0]) for t in triples], dtype=object).reshape(-1, L)
    B1 = np.array([win.vec(t[1]) for t in triples], dtype=object).reshape(-1, L)
    C1 = np.array([win.vec(t[2]) for t in triples], dtype=object).reshape(-1, L)
    S = _contract(A1, B1, C1)
    U1, U2, U3 = _f2_arrays(d, PP, f2_diagonal)
    S = S + _contract(U1, U2, U3)
    th = _collapse_and_divide(S, win.lo)
    return ThetaResult(th, D, n_factor(D), d.n, d.source_digest, f2_diagonal)


def theta_of(pd: ClosedPD, f2_diagonal: bool = DEFAULT_F2_DIAGONAL, cut: int = 1) -> ThetaResult:
    return theta(to_upright(pd, cut), f2_diagonal)
