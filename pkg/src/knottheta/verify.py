"""Batch verification of identities satisfied by theta and Delta.

Every check is an exact polynomial identity.  ``run_batch`` runs checks over
a knot table, optionally in worker processes, and keeps an append-only JSON
lines cache so that rerunning a finished batch recomputes nothing.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__
from .laurent import LaurentPoly1, LaurentPoly2
from .pd import ClosedPD, connected_sum, mirror, parse_pd, serialize_pd
from .satellite import whitehead_double
from .table import KnotRecord, lookup
from .theta import DEFAULT_F2_DIAGONAL, theta_of
from .traffic import alexander
from .upright import to_upright

__all__ = [
    "VerificationRecord",
    "FLOWER",
    "flower_constant",
    "check_flower",
    "check_additivity",
    "check_alexander_wd",
    "check_mirror_antisymmetry",
    "run_batch",
    "ResultCache",
    "CACHE_ENV",
    "CHECKS",
]

CACHE_ENV = "KNOTTHETA_CACHE"
CHECKS = ("flower", "additivity", "alexander-wd", "mirror")

# 6 - T1 - T2 - T1 T2 - 1/T1 - 1/T2 - 1/(T1 T2)
FLOWER = LaurentPoly2(
    {(0, 0): 6, (1, 0): -1, (0, 1): -1, (1, 1): -1, (-1, 0): -1, (0, -1): -1, (-1, -1): -1}
)


@dataclass
class VerificationRecord:
    name: str
    pd_hash: str
    check: str
    status: str  # "pass", "fail", "report" or "error"
    witness: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def summary_view(self) -> dict:
        """Content that must not depend on timing or scheduling."""
        return {"name": self.name, "pd_hash": self.pd_hash, "check": self.check,
                "status": self.status, "witness": self.witness}


def flower_constant(delta: LaurentPoly1) -> int:
    """``Delta''(1)``."""
    q = delta.derivative(2).evaluate(1)
    assert q.denominator == 1
    return int(q)


def check_flower(pd: ClosedPD, name: str = "", f2_diagonal: bool = DEFAULT_F2_DIAGONAL) -> VerificationRecord:
    t0 = time.perf_counter()
    q = flower_constant(alexander(to_upright(pd)))
    wd = whitehead_double(pd, 1, 0)
    th = theta_of(wd, f2_diagonal).theta
    residual = th - FLOWER * q
    status = "pass" if residual.is_zero() else "fail"
    witness = {"q": q, "wd_crossings": wd.n, "residual": str(residual)}
    return VerificationRecord(name, pd.digest(), "flower", status, witness,
                              time.perf_counter() - t0)


def check_additivity(pd1: ClosedPD, pd2: ClosedPD, name: str = "",
                     f2_diagonal: bool = DEFAULT_F2_DIAGONAL) -> VerificationRecord:
    t0 = time.perf_counter()
    r1, r2 = theta_of(pd1, f2_diagonal), theta_of(pd2, f2_diagonal)
    rs = theta_of(connected_sum(pd1, pd2), f2_diagonal)
    residual = rs.theta - (r2.n_factor * r1.theta + r1.n_factor * r2.theta)
    status = "pass" if residual.is_zero() else "fail"
    key = hashlib.sha256((pd1.digest() + pd2.digest()).encode()).hexdigest()[:16]
    witness = {"residual": str(residual), "integral": rs.theta.is_integral()}
    return VerificationRecord(name, key, "additivity", status, witness,
                              time.perf_counter() - t0)


def wd_alexander_closed_form(t: int) -> LaurentPoly1:
    """``-t T + (2t + 1) - t T^-1``."""
    return LaurentPoly1({1: -t, 0: 2 * t + 1, -1: -t})


def check_alexander_wd(pd: ClosedPD, t: int, name: str = "", clasp: int = 1) -> VerificationRecord:
    t0 = time.perf_counter()
    got = alexander(to_upright(whitehead_double(pd, clasp, t)))
    want = wd_alexander_closed_form(t)
    status = "pass" if got == want else "fail"
    witness = {"t": t, "alexander": str(got), "residual": str(got - want)}
    return VerificationRecord(name, pd.digest(), f"alexander-wd[t={t}]", status, witness,
                              time.perf_counter() - t0)


def check_mirror_antisymmetry(pd: ClosedPD, name: str = "",
                              f2_diagonal: bool = DEFAULT_F2_DIAGONAL) -> VerificationRecord:
    """Report whether ``theta(mirror K) = -theta(K)``; never fails."""
    t0 = time.perf_counter()
    a = theta_of(pd, f2_diagonal).theta
    b = theta_of(mirror(pd), f2_diagonal).theta
    s = a + b
    witness = {"antisymmetric": s.is_zero(), "sum": str(s)}
    return VerificationRecord(name, pd.digest(), "mirror", "report", witness,
                              time.perf_counter() - t0)


# -- cache ----------------------------------------------------------------------


class ResultCache:
    """Append-only JSON lines log of records, rewritten atomically on flush."""

    FILE = "records.jsonl"

    def __init__(self, directory: str | Path | None):
        self.dir = Path(directory) if directory else None
        self.entries: dict[str, dict] = {}
        self.pending: list[dict] = []
        if self.dir and (self.dir / self.FILE).exists():
            for line in (self.dir / self.FILE).read_text(encoding="utf-8").splitlines():
                if line.strip():
                    rec = json.loads(line)
                    self.entries[rec["key"]] = rec

    @staticmethod
    def key(pd_hash: str, check: str, f2_diagonal: bool) -> str:
        raw = f"{pd_hash}|{check}|f2_diagonal={int(f2_diagonal)}|{__version__}"
        return hashlib.sha256(raw.encode()).hexdigest()[:24]

    def get(self, key: str) -> VerificationRecord | None:
        rec = self.entries.get(key)
        if rec is None or rec["record"]["status"] == "fail" or rec["record"]["status"] == "error":
            return None
        return VerificationRecord(**rec["record"])

    def put(self, key: str, record: VerificationRecord) -> None:
        entry = {"key": key, "record": asdict(record)}
        self.entries[key] = entry
        self.pending.append(entry)

    def flush(self) -> None:
        if not self.dir or not self.pending:
            return
        self.dir.mkdir(parents=True, exist_ok=True)
        path = self.dir / self.FILE
        old = path.read_text(encoding="utf-8") if path.exists() else ""
        new = "".join(json.dumps(e, sort_keys=True) + "\n" for e in self.pending)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(old + new, encoding="utf-8")
        os.replace(tmp, path)
        self.pending.clear()


# -- batch --------------------------------------------------------------------------


def _task(args) -> dict:
    kind, name, pd_text, extra, f2_diagonal = args
    pd = parse_pd(pd_text)
    try:
        if kind == "flower":
            rec = check_flower(pd, name, f2_diagonal)
        elif kind == "additivity":
            rec = check_additivity(pd, parse_pd(extra), name, f2_diagonal)
        elif kind == "alexander-wd":
            rec = check_alexander_wd(pd, int(extra), name)
        elif kind == "mirror":
            rec = check_mirror_antisymmetry(pd, name, f2_diagonal)
        else:
            raise ValueError(f"unknown check {kind!r}")
    except Exception as exc:  # recorded, never aborts the batch
        rec = VerificationRecord(name, pd.digest(), kind, "error", {"error": repr(exc)})
    return asdict(rec)


def _cache_check_id(kind: str, extra: str) -> str:
    if kind == "alexander-wd":
        return f"alexander-wd[t={extra}]"
    if kind == "additivity":
        return f"additivity[{extra}]"
    return kind


def run_batch(
    table: Sequence[KnotRecord],
    checks: Iterable[str] = ("flower",),
    max_crossings: int = 10,
    jobs: int = 1,
    cache_dir: str | Path | None = None,
    f2_diagonal: bool = DEFAULT_F2_DIAGONAL,
    twists: Sequence[int] = (-2, -1, 0, 1, 2),
    partner: str = "3_1",
) -> dict:
    """Run ``checks`` over the knots of ``table`` with at most ``max_crossings``.

    Returns a summary whose content depends only on the inputs, plus the
    number of records computed and served from the cache.
    """
    checks = list(checks)
    for c in checks:
        if c not in CHECKS:
            raise ValueError(f"unknown check {c!r}; expected one of {', '.join(CHECKS)}")
    if cache_dir is None:
        cache_dir = os.environ.get(CACHE_ENV) or None
    cache = ResultCache(cache_dir)
    partner_pd = serialize_pd(lookup(partner).pd) if "additivity" in checks else ""

    tasks = []
    for rec in table:
        if rec.pd.n > max_crossings:
            continue
        text = serialize_pd(rec.pd)
        for kind in checks:
            extras = [str(t) for t in twists] if kind == "alexander-wd" else [
                partner_pd if kind == "additivity" else ""
            ]
            for extra in extras:
                tasks.append((kind, rec.name, text, extra, f2_diagonal))

    results: list[VerificationRecord | None] = [None] * len(tasks)
    todo = []
    keys = []
    for idx, (kind, name, text, extra, _) in enumerate(tasks):
        pd_hash = parse_pd(text).digest()
        if kind == "additivity":
            pd_hash = hashlib.sha256((pd_hash + parse_pd(extra).digest()).encode()).hexdigest()[:16]
        key = ResultCache.key(pd_hash, _cache_check_id(kind, extra if kind != "additivity" else partner), f2_diagonal)
        keys.append(key)
        hit = cache.get(key)
        if hit is not None:
            results[idx] = hit
        else:
            todo.append(idx)

    if todo:
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                outs = list(pool.map(_task, [tasks[i] for i in todo], chunksize=1))
        else:
            outs = [_task(tasks[i]) for i in todo]
        for idx, out in zip(todo, outs):
            rec = VerificationRecord(**out)
            results[idx] = rec
            cache.put(keys[idx], rec)
        cache.flush()

    records = [r for r in results if r is not None]
    counts: dict[str, dict[str, int]] = {}
    for r in records:
        base = r.check.split("[")[0]
        counts.setdefault(base, {}).setdefault(r.status, 0)
        counts[base][r.status] += 1
    summary = {
        "f2_diagonal": f2_diagonal,
        "max_crossings": max_crossings,
        "checks": checks,
        "counts": {k: dict(sorted(v.items())) for k, v in sorted(counts.items())},
        "records": [r.summary_view() for r in records],
    }
    return {
        "summary": summary,
        "computed": len(todo),
        "cached": len(tasks) - len(todo),
        "records": records,
    }


def summary_json(summary: dict) -> str:
    """Canonical bytes of a summary (sorted keys, fixed separators)."""
    return json.dumps(summary, sort_keys=True, separators=(",", ":")) + "\n"
