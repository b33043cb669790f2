import json
from itertools import product

import pytest

from freeembed.calculus import moments_from_cumulants, marchenko_pastur
from freeembed.errors import DomainError, SizeLimitError, ValidationError
from freeembed.mp import (
    bijection_f,
    bijection_f_inverse,
    enumerate_A,
    enumerate_B,
    free_moment,
    kreweras_parity_counts,
    lemma2_moment,
    make_word,
    odd_first_count,
    theorem2_rhs,
    theorem2_rhs_by_parity,
    word_report,
    word_report_json,
    word_stats,
)
from freeembed.partitions import (
    PairPartition,
    SetPartition,
    enumerate_nc,
    enumerate_nc2,
    from_text,
    is_noncrossing,
    kreweras,
)
from freeembed.poly import ONE, Y, YPolynomial


def words(max_k, m):
    for k in range(1, max_k + 1):
        yield from product(range(1, m + 1), repeat=k)


def texts(parts):
    return [str(p) for p in parts]


def test_make_word():
    assert make_word("1,2,1,2") == (1, 2, 1, 2)
    for bad in ["", "0,1", "1,a"]:
        with pytest.raises(ValidationError):
            make_word(bad)
    with pytest.raises(ValidationError):
        make_word((1, 3), m=2)


def test_word_stats_examples():
    st = word_stats((1, 2, 1, 2))
    assert st.positions == {1: (1, 3), 2: (2, 4)}
    assert st.counts == {1: 2, 2: 2}
    assert st.interlaced == {1: (1, 2, 5, 6), 2: (3, 4, 7, 8)}
    assert word_stats((1, 1, 1)).positions == {1: (1, 2, 3)}
    st = word_stats((2, 1))
    assert st.positions == {1: (2,), 2: (1,)}


def test_word_stats_invariants():
    for w in words(5, 3):
        st = word_stats(w)
        assert sorted(j for f in st.families for j in st.positions[f]) == list(range(1, st.k + 1))
        assert sum(st.counts.values()) == st.k
        assert sorted(e for f in st.families for e in st.interlaced[f]) == list(range(1, 2 * st.k + 1))


# -- A and B classes -----------------------------------------------------------

def test_enumerate_A_examples():
    A = enumerate_A((1, 2, 1, 2))
    assert texts(A[(1, 1)]) == ["{{1},{2},{3},{4}}"]
    assert texts(A[(0, 1)]) == ["{{1,3},{2},{4}}"]
    assert texts(A[(1, 0)]) == ["{{1},{2,4},{3}}"]
    assert A[(0, 0)] == []
    A = enumerate_A((1, 1))
    assert {t: len(v) for t, v in A.items()} == {(0,): 1, (1,): 1}
    A = enumerate_A((1, 2))
    assert {t: len(v) for t, v in A.items()} == {(0, 0): 1}


def test_enumerate_A_is_filter_of_nc():
    for w in words(5, 3):
        A = enumerate_A(w)
        union = [p for parts in A.values() for p in parts]
        expected = [p for p in enumerate_nc(len(w)) if all(len({w[e - 1] for e in b}) == 1 for b in p)]
        assert sorted(union, key=lambda p: p.blocks) == expected


def test_enumerate_B_examples():
    B = enumerate_B((1, 1))
    assert texts(B[(1,)]) == ["{{1,2},{3,4}}"]
    assert texts(B[(0,)]) == ["{{1,4},{2,3}}"]
    B = enumerate_B((1, 2))
    assert texts(B[(0, 0)]) == ["{{1,2},{3,4}}"]
    assert texts(enumerate_B((1,))[(0,)]) == ["{{1,2}}"]


def test_odd_first_count():
    assert odd_first_count(from_text("{{1,2},{3,4}}")) == 2
    assert odd_first_count(from_text("{{1,4},{2,3}}")) == 1


def test_caps():
    with pytest.raises(SizeLimitError):
        enumerate_A((1,) * 9)


# -- bijection -------------------------------------------------------------------

def test_bijection_examples():
    assert bijection_f(from_text("{{1,2},{3,4}}")) == from_text("{{1},{2}}")
    assert bijection_f(from_text("{{1,4},{2,3}}")) == from_text("{{1,2}}")
    assert bijection_f(from_text("{{1,2}}")) == from_text("{{1}}")


@pytest.mark.parametrize("k", range(1, 8))
def test_bijection_is_bijective_and_counts_odd_firsts(k):
    images = []
    for p in enumerate_nc2(2 * k):
        s = bijection_f(p)
        assert is_noncrossing(s)
        assert len(s) == odd_first_count(p)
        images.append(s)
    assert sorted(images, key=lambda s: s.blocks) == enumerate_nc(k)


def test_bijection_on_family_ground_sets():
    # f on NC_2 of a doubled set {1,2,5,6} lands in NC({1,3})
    p = PairPartition((1, 2, 5, 6), ((1, 6), (2, 5)))
    assert bijection_f(p) == SetPartition.from_blocks([[1, 3]])


def test_bijection_rejects_bad_input():
    with pytest.raises(DomainError):
        bijection_f(from_text("{{1,3},{2,4}}"))
    with pytest.raises(DomainError):
        bijection_f(from_text("{{2,3}}"))


def test_bijection_inverse():
    for s in enumerate_nc(4):
        assert bijection_f(bijection_f_inverse(s)) == s


def test_bijection_preserves_families_and_profiles():
    for w in words(5, 3):
        st = word_stats(w)
        A, B = enumerate_A(w), enumerate_B(w)
        for t in st.profiles():
            images = [bijection_f(p) for p in B[t]]
            assert len(set(images)) == len(images)
            assert set(images) == set(A[t]), (w, t)
            for p in B[t]:
                fp = bijection_f(p)
                for f in st.families:
                    part = p.restrict(st.interlaced[f])
                    img = bijection_f(part)
                    assert img == fp.restrict(st.positions[f])
                    assert odd_first_count(part) == len(img)


# -- Kreweras parity ---------------------------------------------------------------

def test_parity_count_examples():
    assert kreweras_parity_counts(from_text("{{1,2}}")) == (1, 1)
    assert kreweras_parity_counts(from_text("{{1,2},{3,4}}")) == (2, 1)
    assert kreweras_parity_counts(from_text("{{1,4},{2,3}}")) == (1, 2)


def test_parity_counts_follow_the_profile():
    for w in words(5, 3):
        k = len(w)
        for t, parts in enumerate_B(w).items():
            for p in parts:
                even, odd = kreweras_parity_counts(p)
                assert even == sum(ti + 1 for ti in t)
                assert odd == k + 1 - even


def test_plain_kreweras_has_swapped_parity():
    # barred point after its partner: the odd blocks carry the profile count
    for p in enumerate_nc2(8):
        K = kreweras(p)
        even = sum(1 for b in K if b[0] % 2 == 0)
        assert (even, len(K) - even) == kreweras_parity_counts(p)[::-1]


# -- three routes --------------------------------------------------------------------

@pytest.mark.parametrize(
    "w, expected",
    [((1, 1), ONE + Y), ((1, 2), ONE), ((1, 2, 1, 2), ONE + 2 * Y), ((1,), ONE)],
)
def test_three_routes_examples(w, expected):
    assert lemma2_moment(w) == expected
    assert free_moment(w) == expected
    assert theorem2_rhs(w) == expected
    assert theorem2_rhs_by_parity(w) == expected


def test_three_routes_agree_k4():
    for w in words(4, 3):
        a = lemma2_moment(w)
        assert a == free_moment(w) == theorem2_rhs(w) == theorem2_rhs_by_parity(w), w


def test_display_exponent_disagrees():
    assert lemma2_moment((1, 1), exponent="display") != lemma2_moment((1, 1))
    assert lemma2_moment((1, 1), exponent="display") == Y**2 + Y**3
    with pytest.raises(ValueError):
        lemma2_moment((1, 1), exponent="other")


@pytest.mark.parametrize("k", range(1, 7))
def test_constant_word_is_mp_moment(k):
    assert lemma2_moment((1,) * k) == moments_from_cumulants(marchenko_pastur(), k)


def test_relabelling_families_does_not_change_moment():
    assert lemma2_moment((2, 3, 2, 3)) == lemma2_moment((1, 2, 1, 2))
    assert theorem2_rhs((3, 1)) == ONE


# -- report --------------------------------------------------------------------

def test_word_report_shape():
    rep = word_report((1, 2, 1, 2))
    assert rep["word"] == [1, 2, 1, 2]
    assert rep["lemma2"] == rep["free_mixed"] == rep["theorem2_rhs"] == {"coeffs": {"0": 1, "1": 2}}
    assert rep["profile_counts"] == {
        "0,0": {"A": 0, "B": 0},
        "0,1": {"A": 1, "B": 1},
        "1,0": {"A": 1, "B": 1},
        "1,1": {"A": 1, "B": 1},
    }
    assert json.loads(word_report_json((1, 2, 1, 2))) == rep
