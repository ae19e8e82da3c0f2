"""Long-knot upright diagrams with rotation numbers.

A closed PD is cut open on edge 1.  The piece of edge 1 that enters its head
crossing keeps label 1; the piece that leaves its tail crossing becomes the
last edge ``2n+1``.  All other labels are unchanged, so a crossing's outgoing
edges are ``i+1`` and ``j+1``.

Rotation numbers come from the planar map.  Each crossing is drawn with both
strands pointing up at 45 degrees, which fixes the heading of every edge at
both of its ends.  Every face of the map must have total boundary turning
``+360`` degrees (bounded faces) or ``0`` (the two faces that meet the cut
edge at infinity); solving these integer equations on a spanning tree of the
dual graph gives one consistent set of rotation numbers.  Solutions differ by
full turns of individual crossings, which do not change the invariants
computed downstream.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .pd import ClosedPD, PDValidationError, safe_mod

__all__ = ["UprightCrossing", "UprightDiagram", "to_upright", "add_kink", "kink_diagram"]

UprightCrossing = tuple[int, int, int]

# Slot directions in units of 45 degrees counterclockwise from east, for the
# slots (a, b, c, d).  Positive: under SE -> NW, over SW -> NE.  Negative:
# under SW -> NE, over SE -> NW.
_ANGLES = {1: (7, 1, 3, 5), -1: (5, 7, 1, 3)}
_UP = 2


@dataclass(frozen=True)
class UprightDiagram:
    """Signed crossings ``(s, i, j)`` plus rotation numbers ``phi[k-1]``.

    ``i`` is the incoming edge of the over strand and ``j`` the incoming edge
    of the under strand.
    """

    crossings: tuple[UprightCrossing, ...]
    rotations: tuple[int, ...]
    source_digest: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "crossings", tuple(tuple(int(x) for x in c) for c in self.crossings))
        object.__setattr__(self, "rotations", tuple(int(r) for r in self.rotations))
        n = len(self.crossings)
        if len(self.rotations) != 2 * n + 1:
            raise ValueError(
                f"expected {2 * n + 1} rotation numbers, got {len(self.rotations)}"
            )
        seen = []
        for s, i, j in self.crossings:
            if s not in (1, -1):
                raise ValueError(f"crossing sign {s} is not +-1")
            seen += [i, j]
        if sorted(seen) != list(range(1, 2 * n + 1)):
            raise ValueError("incoming edges must be exactly 1..2n, each once")

    @property
    def n(self) -> int:
        return len(self.crossings)

    @property
    def n_edges(self) -> int:
        return 2 * self.n + 1

    def phi(self, k: int) -> int:
        return self.rotations[k - 1]

    def with_rotations(self, rotations: Sequence[int]) -> "UprightDiagram":
        return UprightDiagram(self.crossings, tuple(rotations), self.source_digest)

    def dump(self) -> str:
        """One ``k: phi_k`` line per edge, then one ``(s,i,j)`` line per crossing."""
        lines = [f"{k}: {r}" for k, r in enumerate(self.rotations, start=1)]
        lines += [f"({s},{i},{j})" for s, i, j in self.crossings]
        return "\n".join(lines) + "\n"


def _ends(pd: ClosedPD):
    """Per label: ``(tail crossing, tail slot)`` and ``(head crossing, head slot)``."""
    tail: dict[int, tuple[int, int]] = {}
    head: dict[int, tuple[int, int]] = {}
    for ci, (c, over_in) in enumerate(zip(pd.crossings, pd.over_in_slots())):
        over_out = 4 - over_in  # 1 <-> 3
        head[c[0]] = (ci, 0)
        head[c[over_in]] = (ci, over_in)
        tail[c[2]] = (ci, 2)
        tail[c[over_out]] = (ci, over_out)
    return tail, head


def _rotation_numbers(pd: ClosedPD) -> list[int]:
    n, m = pd.n, pd.n_edges
    signs = pd.signs()
    tail, head = _ends(pd)

    def angle(ci: int, slot: int) -> int:
        return _ANGLES[signs[ci]][slot]

    delta = {}
    for e in range(1, m + 1):
        h_tail = angle(*tail[e])
        h_head = (angle(*head[e]) + 4) % 8
        delta[e] = h_head - h_tail

    # faces as orbits of darts (edge, +1 forward / -1 backward); the face is
    # on the left of the dart
    face_of: dict[tuple[int, int], int] = {}
    faces: list[list[tuple[int, int]]] = []
    for start in [(e, d) for e in range(1, m + 1) for d in (1, -1)]:
        if start in face_of:
            continue
        fid = len(faces)
        orbit = []
        dart = start
        while dart not in face_of:
            face_of[dart] = fid
            orbit.append(dart)
            e, d = dart
            ci, slot = head[e] if d == 1 else tail[e]
            q = (slot - 1) % 4
            e2 = pd.crossings[ci][q]
            dart = (e2, 1) if tail[e2] == (ci, q) else (e2, -1)
        if dart != start:
            raise PDValidationError("dart permutation is not a bijection")
        faces.append(orbit)

    if len(faces) != n + 2:
        raise PDValidationError(
            f"diagram is not planar: V - E + F = {n} - {m} + {len(faces)} != 2"
        )

    outer = {face_of[(1, 1)], face_of[(1, -1)]}
    rhs = [(0 if f in outer else 8) - 2 * len(orb) for f, orb in enumerate(faces)]

    left = {e: face_of[(e, 1)] for e in range(1, m + 1)}
    right = {e: face_of[(e, -1)] for e in range(1, m + 1)}
    incident: list[list[int]] = [[] for _ in faces]
    for e in range(1, m + 1):
        incident[left[e]].append(e)
        incident[right[e]].append(e)

    # BFS spanning tree of the dual graph, lowest edge label first
    root = face_of[(1, 1)]
    parent_edge: dict[int, int] = {root: 0}
    order = [root]
    queue = deque([root])
    while queue:
        f = queue.popleft()
        for e in sorted(incident[f]):
            g = right[e] if left[e] == f else left[e]
            if g not in parent_edge:
                parent_edge[g] = e
                order.append(g)
                queue.append(g)

    tree = set(parent_edge.values()) - {0}
    x = {e: delta[e] for e in range(1, m + 1) if e not in tree}
    for f in reversed(order[1:]):
        pe = parent_edge[f]
        acc = 0
        for e in incident[f]:
            if e == pe:
                continue
            if left[e] == f:
                acc += x[e]
            if right[e] == f:
                acc -= x[e]
        sign = 1 if left[pe] == f else -1
        x[pe] = sign * (rhs[f] - acc)

    phi = {}
    for e in range(1, m + 1):
        q, r = divmod(x[e] - delta[e], 8)
        if r:
            raise PDValidationError(f"edge {e}: turning {x[e]} is not realizable")
        phi[e] = q
    # edge 1 is split; its rotation is carried by the outgoing piece
    return [0] + [phi[e] for e in range(2, m + 1)] + [phi[1]]


def to_upright(pd: ClosedPD, cut: int = 1) -> UprightDiagram:
    """Cut ``pd`` open on edge ``cut`` and build its upright long-knot form."""
    if pd.n == 0:
        return UprightDiagram((), (0,), pd.digest())
    if cut != 1:
        from .pd import relabel

        pd = relabel(pd, cut)
    crossings = []
    for c, s in zip(pd.crossings, pd.signs()):
        a, b, _, d = c
        crossings.append((s, d if s == 1 else b, a))
    return UprightDiagram(tuple(crossings), tuple(_rotation_numbers(pd)), pd.digest())


def add_kink(pd: ClosedPD, sign: int, at_edge: int, over_first: bool = False) -> ClosedPD:
    """Insert a Reidemeister-1 loop of the given sign on edge ``at_edge``.

    With ``over_first`` the strand passes over at its first visit to the new
    crossing, otherwise under.
    """
    if sign not in (1, -1):
        raise ValueError("kink sign must be +-1")
    m = pd.n_edges
    if not 1 <= at_edge <= max(m, 1):
        raise ValueError(f"edge {at_edge} is outside 1..{max(m, 1)}")
    e = at_edge
    m2 = m + 2
    head_slots = [(0, s) for s in pd.over_in_slots()]
    rows = []
    for c, slots in zip(pd.crossings, head_slots):
        row = []
        for pos, x in enumerate(c):
            if x > e:
                row.append(x + 2)
            elif x == e and pos in slots:
                row.append(e + 2)
            else:
                row.append(x)
        rows.append(tuple(row))
    if not over_first:
        new = (e, e + 2, e + 1, e + 1) if sign == 1 else (e, e + 1, e + 1, e + 2)
    else:
        new = (e + 1, e + 1, e + 2, e) if sign == 1 else (e + 1, e, e + 2, e + 1)
    rows.append(tuple(safe_mod(x, m2) for x in new))
    return ClosedPD(tuple(rows))


def kink_diagram(sign: int) -> ClosedPD:
    """One-crossing unknot diagram of the given sign."""
    return add_kink(ClosedPD(()), sign, 1)
