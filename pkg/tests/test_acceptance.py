"""Acceptance gate: one test per criterion, each with its time budget.

Every test appends a ``criterion N: PASS|FAIL ...`` line that is printed in
the terminal summary, so ``pytest tests/test_acceptance.py`` shows the gate
at a glance.
"""

import random
import time
from contextlib import contextmanager

from knottheta.laurent import T, LaurentPoly1
from knottheta.pd import ClosedPD, connected_sum, parse_pd, serialize_pd, writhe
from knottheta.render import render_theta
from knottheta.satellite import wd_mirror_pair, whitehead_double
from knottheta.table import default_table, lookup
from knottheta.theta import theta_of
from knottheta.traffic import alexander, build_transfer, solve_traffic
from knottheta.upright import add_kink, kink_diagram, to_upright
from knottheta.verify import check_flower, run_batch, summary_json

from conftest import ACCEPTANCE

TABLE = default_table()
ONE, ZERO = LaurentPoly1.const(1), LaurentPoly1()


@contextmanager
def criterion(number: int, title: str, budget: float | None):
    t0 = time.perf_counter()
    failure = None
    try:
        yield
    except AssertionError as exc:
        failure = exc
    elapsed = time.perf_counter() - t0
    if failure is None and budget is not None and elapsed > budget:
        failure = AssertionError(f"took {elapsed:.2f}s, budget {budget}s")
    status = "PASS" if failure is None else "FAIL"
    limit = f" (budget {budget:g}s)" if budget is not None else ""
    ACCEPTANCE.append(f"criterion {number}: {status} {title} [{elapsed:.2f}s{limit}]")
    print(ACCEPTANCE[-1])
    if failure is not None:
        raise failure


def test_criterion_1_kink_traffic_matrix():
    with criterion(1, "kink traffic matrix", 0.1):
        d = to_upright(parse_pd("[[1,2,2,1]]"))
        G = solve_traffic(build_transfer(d))
        assert G.delta == ONE
        assert G.P == ((ONE, T, ONE), (ZERO, T, ONE), (ZERO, ZERO, ONE))


def test_criterion_2_unknot_and_kinks():
    with criterion(2, "theta vanishes on unknot and kinks", 1.0):
        assert theta_of(ClosedPD(())).theta.is_zero()
        for s in (1, -1):
            assert theta_of(kink_diagram(s)).theta.is_zero()


def test_criterion_3_alexander_oracle():
    with criterion(3, "Alexander polynomial vs table, 249 knots", 300):
        assert len(TABLE) == 249
        bad = [r.name for r in TABLE if alexander(to_upright(r.pd)) != r.alexander]
        assert not bad, bad


def test_criterion_4_additivity():
    names = ["3_1", "4_1", "5_1", "5_2", "6_1"]
    with criterion(4, "additivity, 25 ordered pairs", 600):
        res = {n: theta_of(lookup(n).pd) for n in names}
        bad = []
        for a in names:
            for b in names:
                s = theta_of(connected_sum(lookup(a).pd, lookup(b).pd))
                want = res[b].n_factor * res[a].theta + res[a].n_factor * res[b].theta
                if s.theta != want:
                    bad.append(f"{a}#{b}")
        assert not bad, bad


def test_criterion_5_flower():
    with criterion(5, "flower identity for all 249 knots up to 10 crossings", 7200):
        bad = []
        for r in TABLE:
            rec = check_flower(r.pd, r.name)
            if rec.status != "pass":
                bad.append(r.name)
        assert not bad, bad


def test_criterion_6_twisted_double_alexander():
    with criterion(6, "twisted double Alexander polynomial", 600):
        for name in ("0_1", "3_1", "4_1", "6_2"):
            pd = lookup(name).pd
            for t in range(-2, 3):
                got = alexander(to_upright(whitehead_double(pd, 1, t)))
                assert got == LaurentPoly1({1: -t, 0: 2 * t + 1, -1: -t}), (name, t)


def test_criterion_7_mirror_relation():
    with criterion(7, "mirror relation of doubles", 600):
        for name in ("3_1", "4_1"):
            for t in (-1, 0, 1):
                lhs, rhs = wd_mirror_pair(lookup(name).pd, t)
                a, b = theta_of(lhs), theta_of(rhs)
                assert a.alexander == b.alexander, (name, t)
                assert a.theta == b.theta, (name, t)


def test_criterion_8_invariance():
    rng = random.Random(20240)
    with criterion(8, "invariance under kinks and cut point", 900):
        small = [r for r in TABLE if r.pd.n <= 7]
        assert small
        for r in small:
            want = theta_of(r.pd).theta
            for _ in range(3):
                pd = r.pd
                for _ in range(rng.randint(1, 3)):
                    pd = add_kink(pd, rng.choice((1, -1)), rng.randint(1, pd.n_edges),
                                  rng.random() < 0.5)
                assert theta_of(pd).theta == want, r.name
            for cut in rng.sample(range(2, r.pd.n_edges + 1), 2):
                assert theta_of(r.pd, cut=cut).theta == want, (r.name, cut)


def test_criterion_9_double_structure():
    with criterion(9, "structure of generated doubles", 120):
        for r in TABLE:
            n, wr = r.pd.n, writhe(r.pd)
            for t in range(-3, 4):
                for clasp in (1, -1):
                    wd = whitehead_double(r.pd, clasp, t)
                    again = parse_pd(serialize_pd(wd))
                    k = abs(t - wr)
                    assert again.n == 4 * n + 2 + 2 * k
                    assert again.n_edges == 8 * n + 4 + 4 * k


def test_criterion_10_determinism(tmp_path):
    with criterion(10, "byte-identical summaries and images", None):
        table = [r for r in TABLE if r.pd.n <= 7]
        checks = ["flower", "additivity", "mirror"]
        runs = [
            summary_json(run_batch(table, checks, jobs=j, cache_dir=tmp_path / f"c{i}")["summary"])
            for i, j in enumerate((1, 1, 8))
        ]
        assert runs[0] == runs[1] == runs[2]
        p = lookup("3_1").pd
        for fmt in ("svg", "ppm"):
            imgs = {render_theta(theta_of(connected_sum(p, p)), fmt) for _ in range(2)}
            assert len(imgs) == 1
