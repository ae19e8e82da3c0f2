import pytest
from hypothesis import given, strategies as st

from knottheta.pd import (
    ClosedPD,
    PDSyntaxError,
    PDValidationError,
    connected_sum,
    crossing_sign,
    mirror,
    parse_pd,
    relabel,
    safe_mod,
    serialize_pd,
    writhe,
)
from knottheta.table import default_table

TABLE = default_table()
small_pds = st.sampled_from([r.pd for r in TABLE if r.pd.n <= 8])


def test_parse_left_trefoil(trefoil):
    assert trefoil.n == 3
    assert trefoil.signs() == (-1, -1, -1)
    assert trefoil.crossings[0] == (1, 4, 2, 5)


@pytest.mark.parametrize("text", ["PD[]", "[]", "  PD[ ]  "])
def test_parse_empty(text):
    assert parse_pd(text).n == 0


def test_functional_and_bracket_agree(trefoil):
    assert parse_pd("PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]") == trefoil


def test_label_multiset_violation_message():
    with pytest.raises(PDValidationError, match="label 1 appears 3 times, label 3 appears once"):
        parse_pd("[[1,4,2,5],[3,6,4,1],[5,2,6,1]]")


@pytest.mark.parametrize(
    "text, pos",
    [("[[1,4,2,5],[3,6,4,1]", 20), ("PD[X[1,2,3]]", 10), ("[[1,a,2,5]]", 4), ("X[1,1,2,2]", 0)],
)
def test_syntax_errors_report_position(text, pos):
    with pytest.raises(PDSyntaxError) as info:
        parse_pd(text)
    assert info.value.position == pos


def test_label_out_of_range():
    with pytest.raises(PDValidationError, match="outside"):
        parse_pd("[[1,4,2,7],[3,6,4,1],[5,2,6,3]]")


def test_bad_sign_difference():
    with pytest.raises(PDValidationError):
        crossing_sign((1, 3, 2, 6), 3)


@pytest.mark.parametrize("a, N, want", [(6, 6, 6), (7, 6, 1), (0, 6, 6), (-1, 6, 5), (13, 6, 1)])
def test_safe_mod(a, N, want):
    assert safe_mod(a, N) == want


def test_crossing_sign_examples():
    assert crossing_sign((1, 4, 2, 5), 3) == -1
    # b - d = 1 is positive for every edge count
    assert crossing_sign((2, 6, 3, 5), 3) == 1
    assert crossing_sign((2, 6, 3, 5), 4) == 1
    assert crossing_sign((2, 5, 3, 6), 3) == -1


def test_one_crossing_signs():
    assert parse_pd("[[1,1,2,2]]").signs() == (1,)
    assert parse_pd("[[1,2,2,1]]").signs() == (-1,)


def test_writhe(trefoil):
    assert writhe(trefoil) == -3
    assert writhe(ClosedPD(())) == 0
    assert writhe(mirror(trefoil)) == 3


def test_serialize(trefoil):
    assert serialize_pd(ClosedPD(())) == "[]"
    assert serialize_pd(trefoil, "functional") == "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]"


@pytest.mark.parametrize("fmt", ["bracket", "functional"])
def test_roundtrip_whole_table(fmt):
    for rec in TABLE:
        assert parse_pd(serialize_pd(rec.pd, fmt)) == rec.pd


def test_connected_sum_trefoils(trefoil):
    s = connected_sum(trefoil, trefoil)
    assert s.n == 6 and writhe(s) == -6
    assert connected_sum(trefoil, ClosedPD(())) == trefoil


@given(small_pds, small_pds)
def test_writhe_additive(p, q):
    assert writhe(connected_sum(p, q)) == writhe(p) + writhe(q)


@given(small_pds)
def test_mirror_flips_signs(p):
    m = mirror(p)
    assert m.n == p.n
    assert m.signs() == tuple(-s for s in p.signs())
    assert mirror(m) == p


@given(small_pds, st.data())
def test_relabel_preserves_signs(p, data):
    start = data.draw(st.integers(1, p.n_edges))
    assert relabel(p, start).signs() == p.signs()


@given(small_pds, st.data())
def test_broken_multiset_rejected(p, data):
    rows = [list(c) for c in p.crossings]
    r = data.draw(st.integers(0, len(rows) - 1))
    k = data.draw(st.integers(0, 3))
    old = rows[r][k]
    new = data.draw(st.integers(1, p.n_edges).filter(lambda v: v != old))
    rows[r][k] = new
    with pytest.raises(PDValidationError):
        ClosedPD(tuple(tuple(c) for c in rows))


def test_digest_is_stable(trefoil):
    assert trefoil.digest() == parse_pd(serialize_pd(trefoil, "functional")).digest()
    assert len(trefoil.digest()) == 16
