"""Planar diagram (PD) codes of oriented knots.

A PD code is a list of crossings ``(a, b, c, d)``.  Each tuple starts at the
incoming lower (under) edge and continues counterclockwise around the
crossing, so ``a -> c`` is the under strand and ``c = a + 1`` modulo the edge
count.  The over strand runs ``d -> b`` for a positive crossing and
``b -> d`` for a negative one.

Edges are labelled ``1..2n`` along the orientation of the knot.  The empty
code is the crossingless unknot diagram.
"""

from __future__ import annotations

import hashlib
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

Crossing = tuple[int, int, int, int]

__all__ = [
    "ClosedPD",
    "PDSyntaxError",
    "PDValidationError",
    "parse_pd",
    "serialize_pd",
    "safe_mod",
    "crossing_sign",
    "writhe",
    "mirror",
    "connected_sum",
    "relabel",
    "reflect",
]


class PDSyntaxError(ValueError):
    """Raised for text that does not follow either PD grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class PDValidationError(ValueError):
    """Raised when a crossing list is not a consistent knot diagram."""


def safe_mod(a: int, n: int) -> int:
    """Reduce ``a`` into ``1..n`` (``0`` is read as ``n``)."""
    if n < 1:
        raise ValueError("modulus must be positive")
    return (a - 1) % n + 1


def _over_in_slot(crossing: Crossing, n_edges: int) -> int:
    """Slot index (1 = b, 3 = d) of the incoming over edge."""
    a, b, c, d = crossing
    if n_edges == 2:
        # With two edges b - d is +-1 at once; the loop edge that leaves
        # as the under strand is the one that returns as the over strand.
        return 3 if d == c else 1
    diff = (b - d) % n_edges
    if diff == 1:
        return 3
    if diff == n_edges - 1:
        return 1
    raise PDValidationError(
        f"crossing {list(crossing)}: b-d = {b - d} is not +-1 mod {n_edges}"
    )


def crossing_sign(crossing: Sequence[int], n: int) -> int:
    """Sign of a PD crossing in a diagram with ``n`` crossings.

    ``+1`` when ``b - d == 1 (mod 2n)``, ``-1`` when ``b - d == -1``.  For the
    one-crossing diagrams, where both congruences hold, the sign is read off
    which loop edge re-enters as the over strand.
    """
    t = tuple(crossing)
    if len(t) != 4:
        raise PDValidationError(f"crossing {list(t)} does not have 4 labels")
    return 1 if _over_in_slot(t, 2 * n) == 3 else -1  # type: ignore[arg-type]


@dataclass(frozen=True)
class ClosedPD:
    """A validated PD code of a closed knot diagram."""

    crossings: tuple[Crossing, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "crossings", tuple(tuple(int(x) for x in c) for c in self.crossings)
        )
        _validate(self.crossings)

    @property
    def n(self) -> int:
        return len(self.crossings)

    @property
    def n_edges(self) -> int:
        return 2 * len(self.crossings)

    def signs(self) -> tuple[int, ...]:
        return tuple(crossing_sign(c, self.n) for c in self.crossings)

    def over_in_slots(self) -> tuple[int, ...]:
        return tuple(_over_in_slot(c, self.n_edges) for c in self.crossings)

    def digest(self) -> str:
        """Content hash of the canonical bracket serialization."""
        return hashlib.sha256(serialize_pd(self).encode()).hexdigest()[:16]

    def __len__(self) -> int:
        return len(self.crossings)

    def __iter__(self):
        return iter(self.crossings)

    def __str__(self) -> str:
        return serialize_pd(self)


def _validate(crossings: tuple[Crossing, ...]) -> None:
    n = len(crossings)
    m = 2 * n
    for c in crossings:
        if len(c) != 4:
            raise PDValidationError(f"crossing {list(c)} does not have 4 labels")
    counts = Counter(x for c in crossings for x in c)
    out_of_range = sorted(x for x in counts if not 1 <= x <= m)
    if out_of_range:
        raise PDValidationError(
            f"label {out_of_range[0]} is outside 1..{m}"
        )
    wrong = [(x, counts.get(x, 0)) for x in range(1, m + 1) if counts.get(x, 0) != 2]
    if wrong:
        parts = [
            f"label {x} appears {k} time{'s' if k != 1 else ''}" if k != 1
            else f"label {x} appears once"
            for x, k in wrong
        ]
        raise PDValidationError(", ".join(parts))
    incoming: Counter[int] = Counter()
    for c in crossings:
        a, b, cc, d = c
        if (cc - a) % m != 1 % m:
            raise PDValidationError(
                f"crossing {list(c)}: under strand {a}->{cc} is not consecutive"
            )
        slot = _over_in_slot(c, m)
        incoming[a] += 1
        incoming[c[slot]] += 1
    twice = sorted(x for x, k in incoming.items() if k != 1)
    if twice:
        raise PDValidationError(
            f"label {twice[0]} enters two crossings; orientation is inconsistent"
        )


# -- text grammars -----------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(PD|X)|(\d+)|([\[\],]))")


def _tokens(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PDSyntaxError(f"unexpected character {text[start]!r}", start)
        kind = "word" if m.group(1) else "int" if m.group(2) else "punct"
        out.append((kind, m.group(m.lastindex), m.start(m.lastindex)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, value: str | None = None, kind: str | None = None):
        tok = self.toks[self.i]
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = value if value is not None else kind
            got = tok[1] or "end of input"
            raise PDSyntaxError(f"expected {want!r}, found {got!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> list[list[int]]:
        kind, value, _ = self.peek()
        if value == "PD":
            self.take("PD")
            self.take("[")
            items = self._list(functional=True)
        else:
            self.take("[")
            items = self._list(functional=False)
        self.take(kind="end")
        return items

    def _list(self, functional: bool) -> list[list[int]]:
        items: list[list[int]] = []
        if self.peek()[1] == "]":
            self.take("]")
            return items
        while True:
            if functional:
                self.take("X")
            self.take("[")
            nums = [int(self.take(kind="int")[1])]
            while self.peek()[1] == ",":
                self.take(",")
                nums.append(int(self.take(kind="int")[1]))
            self.take("]")
            if len(nums) != 4:
                raise PDSyntaxError(
                    f"crossing has {len(nums)} labels, expected 4", self.toks[self.i - 1][2]
                )
            items.append(nums)
            if self.peek()[1] == ",":
                self.take(",")
                continue
            self.take("]")
            return items


def parse_pd(text: str) -> ClosedPD:
    """Parse ``PD[X[a,b,c,d],...]`` or ``[[a,b,c,d],...]`` into a ClosedPD."""
    return ClosedPD(tuple(tuple(c) for c in _Parser(text).parse()))


def serialize_pd(pd: ClosedPD, format: str = "bracket") -> str:
    if format == "bracket":
        return "[" + ",".join("[" + ",".join(map(str, c)) + "]" for c in pd.crossings) + "]"
    if format == "functional":
        return "PD[" + ",".join("X[" + ",".join(map(str, c)) + "]" for c in pd.crossings) + "]"
    raise ValueError(f"unknown PD format {format!r}")


# -- transformations -----------------------------------------------------------


def writhe(pd: ClosedPD) -> int:
    return sum(pd.signs())


def mirror(pd: ClosedPD) -> ClosedPD:
    """Switch every crossing, keeping the projection and the orientation.

    The former over strand becomes the under strand, so each tuple is rotated
    to start at the old incoming over edge: ``[d,a,b,c]`` for a positive
    crossing and ``[b,c,d,a]`` for a negative one.
    """
    out = []
    for (a, b, c, d), slot in zip(pd.crossings, pd.over_in_slots()):
        out.append((d, a, b, c) if slot == 3 else (b, c, d, a))
    return ClosedPD(tuple(out))


def reflect(pd: ClosedPD) -> ClosedPD:
    """Reflect the projection plane; reading every tuple clockwise."""
    return ClosedPD(tuple((a, d, c, b) for a, b, c, d in pd.crossings))


def relabel(pd: ClosedPD, start: int) -> ClosedPD:
    """Renumber cyclically so that edge ``start`` becomes edge 1."""
    m = pd.n_edges
    if m == 0:
        return pd
    if not 1 <= start <= m:
        raise ValueError(f"edge {start} is outside 1..{m}")
    return ClosedPD(
        tuple(tuple(safe_mod(x - start + 1, m) for x in c) for c in pd.crossings)
    )


def _incoming_slots(pd: ClosedPD) -> list[tuple[int, int]]:
    """(a-slot, over-in slot) position pairs per crossing."""
    return [(0, s) for s in pd.over_in_slots()]


def _split_edge_one(pd: ClosedPD, head: int, tail: int, shift: int) -> list[list[int]]:
    """Relabel ``k -> k + shift``; edge 1's head end becomes ``head`` and its
    tail end ``tail``."""
    out = []
    for c, slots in zip(pd.crossings, _incoming_slots(pd)):
        row = []
        for pos, x in enumerate(c):
            if x == 1:
                row.append(head if pos in slots else tail)
            else:
                row.append(x + shift)
        out.append(row)
    return out


def connected_sum(pd1: ClosedPD, pd2: ClosedPD) -> ClosedPD:
    """Stack the long knot of ``pd2`` on top of the long knot of ``pd1``.

    Both diagrams are cut on edge 1.  The tail of ``pd1``'s edge 1 becomes the
    connecting edge ``2*n1 + 1``, which is the head of ``pd2``'s edge 1; every
    other label of ``pd2`` shifts by ``2*n1``.
    """
    if pd1.n == 0:
        return pd2
    if pd2.n == 0:
        return pd1
    ell = 2 * pd1.n + 1
    rows = _split_edge_one(pd1, head=1, tail=ell, shift=0)
    rows += _split_edge_one(pd2, head=ell, tail=1, shift=2 * pd1.n)
    return ClosedPD(tuple(tuple(r) for r in rows))


def from_crossings(crossings: Iterable[Iterable[int]]) -> ClosedPD:
    return ClosedPD(tuple(tuple(c) for c in crossings))
