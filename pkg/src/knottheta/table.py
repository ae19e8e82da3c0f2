"""Bundled prime knot tables.

Rows are ``name<TAB>bracket-PD<TAB>alexander``; the third column is optional
when reading.  ``knots_10.tsv`` holds the 249 prime knots with at most 10
crossings, ``knots_11_12.tsv`` the 11 and 12 crossing knots.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .laurent import LaurentPoly1, parse_poly
from .pd import ClosedPD, parse_pd

__all__ = ["KnotRecord", "load_table", "default_table", "lookup", "crossing_number"]


@dataclass(frozen=True)
class KnotRecord:
    name: str
    pd: ClosedPD
    alexander: LaurentPoly1 | None


_NAME = re.compile(r"^(\d+)")


def crossing_number(name: str) -> int:
    m = _NAME.match(name)
    if not m:
        raise ValueError(f"cannot read a crossing number from {name!r}")
    return int(m.group(1))


def _parse_lines(text: str, source: str) -> list[KnotRecord]:
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.rstrip("\n").split("\t")
        if len(parts) < 2:
            raise ValueError(f"{source}:{lineno}: expected name<TAB>PD")
        alex = parse_poly(parts[2], nvars=1) if len(parts) > 2 and parts[2] else None
        out.append(KnotRecord(parts[0], parse_pd(parts[1]), alex))
    return out


def load_table(path: str | Path) -> list[KnotRecord]:
    p = Path(path)
    return _parse_lines(p.read_text(encoding="utf-8"), str(p))


@lru_cache(maxsize=2)
def default_table(extended: bool = False) -> tuple[KnotRecord, ...]:
    """The bundled table; ``extended`` adds the 11 and 12 crossing knots."""
    files = ["knots_10.tsv"] + (["knots_11_12.tsv"] if extended else [])
    rows: list[KnotRecord] = []
    for f in files:
        text = resources.files("knottheta").joinpath("data").joinpath(f).read_text(encoding="utf-8")
        rows += _parse_lines(text, f)
    return tuple(rows)


def lookup(name: str) -> KnotRecord:
    """Resolve a knot name such as ``3_1`` or ``12n_242`` in the bundled tables."""
    if name in ("0_1", "unknot"):
        return KnotRecord("0_1", ClosedPD(()), LaurentPoly1.const(1))
    extended = crossing_number(name) > 10
    for rec in default_table(extended):
        if rec.name == name:
            return rec
    raise KeyError(f"knot {name!r} is not in the bundled table")
