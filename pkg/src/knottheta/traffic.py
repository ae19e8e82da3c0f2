"""The traffic linear system of an upright diagram.

Edges of the long knot are ``1..2n+1``.  A car on the incoming under edge
``j`` of a crossing always continues to ``j+1``.  A car on the incoming over
edge ``i`` continues to ``i+1`` with weight ``T^s`` and falls onto the under
strand's outgoing edge ``j+1`` with weight ``1 - T^s``.  With ``B`` the
one-step transfer matrix, the traffic function is ``G = (I - B)^{-1}``.

``G`` is computed once over ``Z[T, 1/T]`` as ``P / D``, with ``D = det(I-B)``
normalized to the symmetric Alexander polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .laurent import LaurentPoly1, LaurentPoly2, RatFun
from .upright import UprightDiagram

__all__ = [
    "TransferMatrix",
    "TrafficMatrix",
    "build_transfer",
    "solve_traffic",
    "solve_dense",
    "alexander",
    "specialize",
    "bareiss_det",
]

Matrix = list[list[LaurentPoly1]]

_ZERO = LaurentPoly1()
_ONE = LaurentPoly1.const(1)


@dataclass(frozen=True)
class TransferMatrix:
    """One-step transfer weights; ``B[a][b]`` is indexed from 0 (edge ``a+1``)."""

    B: tuple[tuple[LaurentPoly1, ...], ...]
    diagram: UprightDiagram

    @property
    def size(self) -> int:
        return len(self.B)

    def identity_minus(self) -> Matrix:
        N = self.size
        return [
            [(_ONE if a == b else _ZERO) - self.B[a][b] for b in range(N)]
            for a in range(N)
        ]


@dataclass(frozen=True)
class TrafficMatrix:
    """``G = P / delta`` with ``delta`` the symmetric Alexander polynomial."""

    P: tuple[tuple[LaurentPoly1, ...], ...]
    delta: LaurentPoly1

    @property
    def size(self) -> int:
        return len(self.P)

    def entry(self, alpha: int, beta: int) -> RatFun:
        """``g_{alpha beta}`` with 1-based edge labels, as a RatFun in ``T1``."""
        return RatFun(self.P[alpha - 1][beta - 1].substitute("T1"), [self.delta.substitute("T1")])

    def dump(self) -> str:
        lines = [f"denominator: {self.delta}"]
        for a, row in enumerate(self.P, start=1):
            for b, p in enumerate(row, start=1):
                if not p.is_zero():
                    lines.append(f"g[{a},{b}] = {p}")
        return "\n".join(lines) + "\n"


def build_transfer(d: UprightDiagram) -> TransferMatrix:
    N = d.n_edges
    B = [[_ZERO] * N for _ in range(N)]
    for s, i, j in d.crossings:
        ts = LaurentPoly1.monomial(s)
        B[i - 1][i] = B[i - 1][i] + ts
        B[i - 1][j] = B[i - 1][j] + (_ONE - ts)
        B[j - 1][j] = B[j - 1][j] + _ONE
    return TransferMatrix(tuple(tuple(r) for r in B), d)


# -- exact elimination -------------------------------------------------------


def _bareiss(M: Matrix, rhs: Matrix | None = None) -> tuple[LaurentPoly1, Matrix | None]:
    """Fraction-free elimination of ``M`` (copied) with optional right-hand sides.

    Returns ``(det M, det(M) * M^{-1} rhs)``.  All divisions are exact.
    """
    m = len(M)
    if m == 0:
        return _ONE, [list(r) for r in rhs] if rhs is not None else None
    A = [list(r) + (list(rhs[k]) if rhs is not None else []) for k, r in enumerate(M)]
    width = len(A[0])
    sign = 1
    prev = _ONE
    for k in range(m):
        piv = next((r for r in range(k, m) if not A[r][k].is_zero()), None)
        if piv is None:
            return _ZERO, None
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        Ak = A[k]
        akk = Ak[k]
        for r in range(k + 1, m):
            Ar = A[r]
            ark = Ar[k]
            if ark.is_zero():
                if not prev == _ONE:
                    for col in range(k + 1, width):
                        if not Ar[col].is_zero():
                            Ar[col] = (Ar[col] * akk) // prev
                else:
                    for col in range(k + 1, width):
                        if not Ar[col].is_zero():
                            Ar[col] = Ar[col] * akk
            else:
                for col in range(k + 1, width):
                    v = Ar[col] * akk - Ak[col] * ark
                    Ar[col] = v // prev if not prev == _ONE else v
            Ar[k] = _ZERO
        prev = akk
    det = A[m - 1][m - 1] * sign
    if rhs is None:
        return det, None
    # back substitution: det * x for the triangular system U x = y
    # (U holds the Bareiss rows; U[m-1][m-1] equals the determinant up to sign)
    nr = width - m
    d_u = A[m - 1][m - 1]
    X: Matrix = [[_ZERO] * nr for _ in range(m)]
    for k in range(m - 1, -1, -1):
        Ak = A[k]
        for col in range(nr):
            acc = Ak[m + col] * d_u
            for t in range(k + 1, m):
                if not Ak[t].is_zero() and not X[t][col].is_zero():
                    acc = acc - Ak[t] * X[t][col]
            X[k][col] = acc // Ak[k] if not acc.is_zero() else _ZERO
    if sign < 0:
        X = [[-x for x in row] for row in X]
    return det, X


def bareiss_det(M: Matrix) -> LaurentPoly1:
    return _bareiss(M)[0]


def solve_dense(tm: TransferMatrix) -> tuple[LaurentPoly1, Matrix]:
    """Reference route: ``(D, D * (I-B)^{-1})`` by Bareiss on the full matrix."""
    N = tm.size
    ident = [[_ONE if a == b else _ZERO for b in range(N)] for a in range(N)]
    det, X = _bareiss(tm.identity_minus(), ident)
    if det.is_zero():
        raise ArithmeticError("I - B is singular; the diagram is malformed")
    return det, X


def _solve_structured(d: UprightDiagram) -> tuple[LaurentPoly1, Matrix]:
    """``(D, D * G)`` using the upper-triangular shape of the transfer rule.

    Rows are resolved from the last edge backwards.  A fall-off target
    ``j+1`` at or below the current row is not yet known; it becomes an
    unknown row, and the small system for the unknowns is solved by Bareiss.
    """
    N = d.n_edges
    role: dict[int, tuple[int, int, int]] = {}
    for s, i, j in d.crossings:
        role[i] = (1, s, j)
        role[j] = (0, s, i)
    unknown_of: dict[int, int] = {}
    for s, i, j in d.crossings:
        if j + 1 <= i and (j + 1) not in unknown_of:
            unknown_of[j + 1] = len(unknown_of)
    m = len(unknown_of)
    # g_alpha = v[alpha] + sum_u lam[alpha][u] * X_u, rows as sparse dicts
    v: list[dict[int, LaurentPoly1]] = [dict() for _ in range(N + 2)]
    lam: list[dict[int, LaurentPoly1]] = [dict() for _ in range(N + 2)]

    def add_into(dst: dict, src: dict, w: LaurentPoly1) -> None:
        for k, p in src.items():
            q = dst.get(k)
            q = p * w if q is None else q + p * w
            if q.is_zero():
                dst.pop(k, None)
            else:
                dst[k] = q

    v[N][N] = _ONE
    for alpha in range(N - 1, 0, -1):
        va: dict[int, LaurentPoly1] = {alpha: _ONE}
        la: dict[int, LaurentPoly1] = {}
        kind, s, other = role[alpha]
        if kind == 0:
            add_into(va, v[alpha + 1], _ONE)
            add_into(la, lam[alpha + 1], _ONE)
        else:
            ts = LaurentPoly1.monomial(s)
            add_into(va, v[alpha + 1], ts)
            add_into(la, lam[alpha + 1], ts)
            target = other + 1
            if target > alpha:
                add_into(va, v[target], _ONE - ts)
                add_into(la, lam[target], _ONE - ts)
            else:
                u = unknown_of[target]
                la[u] = la.get(u, _ZERO) + (_ONE - ts)
                if la[u].is_zero():
                    del la[u]
        v[alpha], lam[alpha] = va, la

    rows_u = sorted(unknown_of.items(), key=lambda kv: kv[1])
    M = [[_ZERO] * m for _ in range(m)]
    R = [[_ZERO] * N for _ in range(m)]
    for edge, u in rows_u:
        for k in range(m):
            M[u][k] = (_ONE if k == u else _ZERO) - lam[edge].get(k, _ZERO)
        for col, p in v[edge].items():
            R[u][col - 1] = p
    det, X = _bareiss(M, R) if m else (_ONE, [])
    if det.is_zero():
        raise ArithmeticError("I - B is singular; the diagram is malformed")
    out: Matrix = []
    for alpha in range(1, N + 1):
        row = [_ZERO] * N
        for col, p in v[alpha].items():
            row[col - 1] = p * det
        for u, w in lam[alpha].items():
            xu = X[u]
            for col in range(N):
                if not xu[col].is_zero():
                    row[col] = row[col] + w * xu[col]
        out.append(row)
    return det, out


def _unit_to_normal(det: LaurentPoly1) -> LaurentPoly1:
    """The unit ``u`` with ``u * det`` symmetric and ``+1`` at ``T = 1``."""
    normal = det.normalize_symmetric()
    u = normal.exact_div(det)
    assert u is not None
    return u


def solve_traffic(
    tm: TransferMatrix | UprightDiagram, method: str = "structured", check: bool = False
) -> TrafficMatrix:
    """Exact ``G = (I - B)^{-1}`` as numerators over the symmetric Alexander
    polynomial.

    ``method`` is ``"structured"`` (back substitution plus a small Bareiss
    system) or ``"dense"`` (Bareiss on the whole matrix).  With ``check`` the
    product ``(I - B) G`` is multiplied back and compared to the identity.
    """
    if isinstance(tm, UprightDiagram):
        tm = build_transfer(tm)
    if method == "structured":
        det, Q = _solve_structured(tm.diagram)
    elif method == "dense":
        det, Q = solve_dense(tm)
    else:
        raise ValueError(f"unknown method {method!r}")
    u = _unit_to_normal(det)
    delta = u * det
    P = tuple(tuple(q * u for q in row) for row in Q)
    res = TrafficMatrix(P, delta)
    if check:
        verify_inverse(tm, res)
    return res


def verify_inverse(tm: TransferMatrix, G: TrafficMatrix) -> None:
    """Raise ``ArithmeticError`` unless ``(I - B) P = delta * I``."""
    N = tm.size
    A = tm.identity_minus()
    for a in range(N):
        nz = [(k, A[a][k]) for k in range(N) if not A[a][k].is_zero()]
        for b in range(N):
            acc = _ZERO
            for k, w in nz:
                acc = acc + w * G.P[k][b]
            want = G.delta if a == b else _ZERO
            if acc != want:
                raise ArithmeticError(f"(I-B)G != I at ({a + 1},{b + 1})")


def alexander(d: UprightDiagram) -> LaurentPoly1:
    """Symmetric Alexander polynomial ``normalize_symmetric(det(I - B))``."""
    return _solve_structured(d)[0].normalize_symmetric()


def specialize(
    G: TrafficMatrix, target: str
) -> tuple[list[list[RatFun]], LaurentPoly2]:
    """Entrywise substitution ``T -> T1, T2`` or ``T1*T2``."""
    den = G.delta.substitute(target)
    rows = [
        [RatFun(p.substitute(target), [den]) for p in row] for row in G.P
    ]
    return rows, den


def matrix_from_rows(rows: Sequence[Sequence[LaurentPoly1]]) -> tuple[tuple[LaurentPoly1, ...], ...]:
    return tuple(tuple(r) for r in rows)
