import pytest
from hypothesis import given, strategies as st

from knottheta.laurent import T, LaurentPoly1
from knottheta.pd import connected_sum, mirror, parse_pd
from knottheta.table import default_table, lookup
from knottheta.traffic import (
    alexander,
    bareiss_det,
    build_transfer,
    solve_traffic,
    specialize,
    verify_inverse,
)
from knottheta.upright import add_kink, to_upright

ONE, ZERO = LaurentPoly1.const(1), LaurentPoly1()
KINK = "[[1,2,2,1]]"
TABLE = default_table()
SMALL = [r for r in TABLE if r.pd.n <= 7]


def kink():
    return to_upright(parse_pd(KINK))


def test_kink_transfer_stencil():
    B = build_transfer(kink()).B
    assert B[0][1] == ONE
    assert B[1][1] == 1 - T ** -1
    assert B[1][2] == T ** -1
    nonzero = {(a, b) for a in range(3) for b in range(3) if not B[a][b].is_zero()}
    assert nonzero == {(0, 1), (1, 1), (1, 2)}


def test_kink_traffic_matrix():
    G = solve_traffic(kink())
    assert G.delta == ONE
    assert G.P == ((ONE, T, ONE), (ZERO, T, ONE), (ZERO, ZERO, ONE))


def test_unknot_traffic():
    d = to_upright(parse_pd("[]"))
    assert build_transfer(d).B == ((ZERO,),)
    G = solve_traffic(d)
    assert G.P == ((ONE,),) and G.delta == ONE


@pytest.mark.parametrize("rec", SMALL[:12], ids=lambda r: r.name)
def test_structured_matches_dense(rec):
    d = to_upright(rec.pd)
    a = solve_traffic(d, "structured")
    b = solve_traffic(d, "dense")
    assert a == b


@pytest.mark.parametrize("rec", SMALL, ids=lambda r: r.name)
def test_multiply_back(rec):
    d = to_upright(rec.pd)
    verify_inverse(build_transfer(d), solve_traffic(d))


def test_multiply_back_detects_corruption(trefoil):
    d = to_upright(trefoil)
    tm = build_transfer(d)
    G = solve_traffic(d)
    P = [list(r) for r in G.P]
    P[0][0] = P[0][0] + 1
    bad = type(G)(tuple(tuple(r) for r in P), G.delta)
    with pytest.raises(ArithmeticError):
        verify_inverse(tm, bad)


@pytest.mark.parametrize("rec", SMALL, ids=lambda r: r.name)
def test_traffic_reaches_the_end_at_t_equals_one(rec):
    # at T = 1 every unit of traffic leaves through the last edge
    G = solve_traffic(to_upright(rec.pd))
    N = G.size
    for a in range(N):
        assert G.P[a][N - 1].evaluate(1) == G.delta.evaluate(1)


@pytest.mark.parametrize("rec", TABLE[:60], ids=lambda r: r.name)
def test_alexander_matches_table(rec):
    assert alexander(to_upright(rec.pd)) == rec.alexander


@pytest.mark.parametrize("name, want", [("0_1", "1"), ("3_1", "T^-1 - 1 + T"), ("4_1", "-T^-1 + 3 - T")])
def test_alexander_examples(name, want):
    assert str(alexander(to_upright(lookup(name).pd))) == want


def test_kink_alexander_is_one():
    assert alexander(kink()) == ONE
    assert bareiss_det(build_transfer(kink()).identity_minus()) == T ** -1


def test_alexander_is_multiplicative():
    a, b = lookup("3_1").pd, lookup("4_1").pd
    got = alexander(to_upright(connected_sum(a, b)))
    assert got == (T - 1 + T ** -1) * (-T + 3 - T ** -1)


@given(st.sampled_from(SMALL), st.integers(1, 20), st.sampled_from([1, -1]), st.booleans())
def test_alexander_is_invariant(rec, edge, sign, over_first):
    pd = add_kink(rec.pd, sign, (edge - 1) % rec.pd.n_edges + 1, over_first)
    want = alexander(to_upright(rec.pd))
    assert alexander(to_upright(pd)) == want
    assert alexander(to_upright(mirror(rec.pd))) == want


def test_specialize_kink():
    G = solve_traffic(kink())
    rows, den = specialize(G, "T3")
    assert den == 1
    assert [[r.to_poly() for r in row] for row in rows] == [
        [p.substitute("T3") for p in row] for row in G.P
    ]
    assert rows[0][1].to_poly() == T.substitute("T3")


def test_specialize_trefoil_denominator(trefoil):
    G = solve_traffic(to_upright(trefoil))
    assert str(specialize(G, "T2")[1]) == "T2^-1 - 1 + T2"
    assert str(specialize(G, "T3")[1]) == "T1^-1*T2^-1 - 1 + T1*T2"


def test_dump_lists_nonzero_entries():
    text = solve_traffic(kink()).dump()
    assert text.splitlines()[0] == "denominator: 1"
    assert "g[1,2] = T" in text and "g[2,1]" not in text


def test_unknown_method():
    with pytest.raises(ValueError):
        solve_traffic(kink(), method="lu")
