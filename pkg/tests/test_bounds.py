import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ia_dof.bounds import (
    INVALID,
    LOOSE,
    TIGHT,
    AntennaProfile,
    classification_grid,
    classify,
    pairwise_upper_bound,
    render_grid,
    two_user_muxg,
    uniform_upper_bound,
)
from ia_dof.topology import Topology, count_interfering_pairs, pair_count_formula

# reference classification grid, rows N = 1..7, columns K = 2..9;
# merged blank cells belong to the loose region below/right of them
EXPECTED_GRID = {
    1: "□□■■■■■■",
    2: "×□■■■■■■",
    3: "××□□■■■■",
    4: "×××□■■■■",
    5: "××××□□■■",
    6: "×××××□■■",
    7: "××××××□□",
}


@pytest.mark.parametrize("args,expected", [
    ((3, 3, 3, 3), 3),
    ((2, 2, 1, 1), 2),
    ((1, 1, 1, 1), 1),
    ((4, 1, 4, 1), 2),
    ((4, 1, 1, 4), 1),
])
def test_two_user_muxg(args, expected):
    assert two_user_muxg(*args) == expected


def test_two_user_muxg_rejects_zero():
    with pytest.raises(ValueError):
        two_user_muxg(0, 1, 1, 1)


@given(st.integers(1, 8), st.integers(1, 8), st.integers(1, 8), st.integers(1, 8))
def test_two_user_muxg_label_symmetry(M1, N1, M2, N2):
    assert two_user_muxg(M1, N1, M2, N2) == two_user_muxg(M2, N2, M1, N1)


@pytest.mark.parametrize("K,N,M,ub", [
    (3, 2, 1, Fraction(3, 2)),
    (4, 1, 1, Fraction(8, 3)),
    (5, 3, 2, Fraction(5)),
])
def test_pairwise_upper_bound_examples(K, N, M, ub):
    rep = pairwise_upper_bound(Topology(K, N, M))
    assert rep.ub == ub
    assert isinstance(rep.ub, Fraction)
    assert len(rep.pairs) == K * (K - 1) // 2


def test_upper_bound_pair_order_and_values():
    rep = pairwise_upper_bound(Topology(4, 1, 1))
    assert [(a, b) for a, b, _, _ in rep.pairs] == list(itertools.combinations(range(1, 5), 2))
    assert {(a, b): g for a, b, g, _ in rep.pairs} == {
        (1, 2): 1, (1, 3): 2, (1, 4): 1, (2, 3): 1, (2, 4): 2, (3, 4): 1}
    assert rep.T == 4


def test_nonuniform_profile_has_no_marker():
    rep = pairwise_upper_bound(Topology(3, 2), AntennaProfile((2, 1, 1), (2, 1, 1)))
    # pairs {1,2}, {1,3}: min{3,3,2,2} = 2; pair {2,3}: 1
    assert rep.ub == Fraction(5, 2)
    assert rep.marker is None and rep.lb is None


def test_profile_length_mismatch():
    with pytest.raises(ValueError):
        pairwise_upper_bound(Topology(3, 2), AntennaProfile.uniform(4, 1))


@pytest.mark.parametrize("K,N,marker,nrs", [
    (3, 2, TIGHT, "finite"),
    (7, 4, LOOSE, "infinite"),
    (9, 7, TIGHT, "infinite"),
])
def test_classify_examples(K, N, marker, nrs):
    rep = classify(Topology(K, N, 2))
    assert rep.marker == marker and rep.nrs_class == nrs
    assert rep.lb == Fraction(K * 2, 2)


def test_classify_rejects_invalid_N():
    with pytest.raises(ValueError):
        classify(Topology(3, 3))


@pytest.mark.parametrize("M", [1, 2, 3])
def test_grid_matches_reference_table(M):
    got = {}
    for K, N, rep in classification_grid(9, 7, M):
        got.setdefault(N, "")
        got[N] += INVALID if rep is None else rep.marker
    assert got == EXPECTED_GRID


def test_render_grid_contains_rows():
    art = render_grid(classification_grid(9, 7, 1))
    assert "□  □  ■" in art
    assert art.count("\n") == 10


@given(st.integers(2, 20), st.integers(1, 4), st.data())
def test_bound_invariants(K, M, data):
    N = data.draw(st.integers(1, K - 1))
    rep = classify(Topology(K, N, M))
    assert rep.ub >= rep.lb
    assert (rep.marker == TIGHT) == (rep.ub == rep.lb)
    assert rep.ub == uniform_upper_bound(K, N, M)
    assert rep.ub == uniform_upper_bound(K, N, M, pair_count_formula(K, N))
    assert rep.T == count_interfering_pairs(Topology(K, N))
    if N % 2:
        tight = N == K - 1 or (K % 2 == 1 and N == K - 2)
        assert (rep.ub == Fraction(K * M, 2)) == tight
        if not tight:
            assert rep.ub > Fraction(K * M, 2)
