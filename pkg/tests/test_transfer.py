from fractions import Fraction

import pytest

from mhsalg.transfer import (
    NotStarWord,
    check_transfer_candidate,
    fact_sides,
    is_star_word,
    lambda_factorization_sides,
    neg_binom,
    shft_star,
    solve_transfer_equation,
    star_projection,
)
from mhsalg.words import E0, NCSeries, all_words, parse_word

W = parse_word


def test_neg_binom():
    assert neg_binom(1, 1) == -1
    assert neg_binom(1, 2) == 1
    assert neg_binom(2, 3) == -4
    assert neg_binom(3, -1) == 0


def test_star_examples():
    f = NCSeries.word(W("e0 e1"), 4)
    assert star_projection(f) == f
    assert star_projection(NCSeries.word(W("e1 e0"), 4)) == NCSeries.parse("-1 e0 e1", 4)
    assert star_projection(NCSeries.word(W("e1 e0 e0"), 4)) == NCSeries.parse("e0 e0 e1", 4)


def test_star_projection_idempotent_and_onto_star_words():
    for w in all_words(2, 4):
        p = star_projection(NCSeries.word(w, 4, 2))
        assert all(is_star_word(v) for v, _ in p.items())
        assert star_projection(p) == p


def test_shft_examples():
    assert shft_star(W("e1"), 3) == NCSeries.parse("e1 - e0 e1 + e0 e0 e1", 3)
    assert shft_star((), 3) == NCSeries.one(3)
    with pytest.raises(NotStarWord):
        shft_star(W("e1 e0"), 3)


def test_fact_a5_weight3_cap4():
    for w in all_words(1, 3):
        lhs, mid, rhs = fact_sides(w, 4)
        assert lhs == mid
        if rhs is not None:
            assert rhs == lhs


def test_fact_a5_level2():
    for w in all_words(2, 2):
        lhs, mid, rhs = fact_sides(w, 4, 2)
        assert lhs == mid and (rhs is None or rhs == lhs)


def test_solve_cap3():
    r = solve_transfer_equation(3).as_dict()
    assert r["x0"] == [0, 1]
    assert r["zero_branch_kernel_dims"] == {"0": 0, "1": 0, "2": 0, "3": 0}
    assert r["unit_branch_kernel_dims"] == {"1": 2, "2": 0, "3": 0}
    assert r["free_parameters"] == 2
    assert r["powers_solve"] and r["sufficiency"] and r["verified"]


def test_solve_level2():
    r = solve_transfer_equation(2, 2)
    assert r.verified and r.as_dict()["free_parameters"] == 3


def test_candidates():
    geo = NCSeries({(E0,) * k: Fraction(1) for k in range(4)}, 3)
    assert check_transfer_candidate(geo) == (True, None)
    lhs = NCSeries.parse("e1 + e0 e1 + e1 e0 + e0 e0 e1 + e0 e1 e0 + e1 e0 e0", 3)
    from mhsalg.hopf import shuffle_series

    assert shuffle_series(geo, NCSeries.word(W("e1"), 3)) == lhs
    assert geo * NCSeries.word(W("e1"), 3) * geo == lhs
    ok, witness = check_transfer_candidate(NCSeries.parse("1 + e0 e1", 3))
    assert not ok and witness == W("e1")


def test_lambda_factorization():
    for level, cap in [(1, 4), (2, 3)]:
        a, b = lambda_factorization_sides(cap, level)
        assert a == b
