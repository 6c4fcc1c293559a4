from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mhsalg.coeff import CycNum
from mhsalg.harmonic import sigma
from mhsalg.hopf import shuffle_words
from mhsalg.localization import (
    RAW,
    LogRequired,
    ZSeries,
    apply_letter,
    cyclotomic_laurent_word,
    derivative,
    expected_first_display,
    laurent_word,
    li_loc,
    taylor_coefficient_sigma,
    taylor_cumulative_sigma,
    taylor_eval_sigma,
)
from mhsalg.words import E0, HarIndex, Letter, all_words, parse_word, word_to_index

W = parse_word
coeff_list = st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=5), min_size=9, max_size=9)


def test_apply_letter_examples():
    log_series = apply_letter(Letter(1), ZSeries.one(6))
    assert log_series == ZSeries([0] + [Fraction(1, n) for n in range(1, 7)])
    geometric = apply_letter(Letter(0, True), log_series)
    assert geometric == ZSeries([0] + [1] * 6)
    with pytest.raises(LogRequired):
        apply_letter(E0, ZSeries.one(3))


def test_li_loc_examples():
    assert li_loc(W("e0 e1"), 5)[3] == CycNum.rational(Fraction(1, 9), 1)
    assert li_loc(W("e0^-1 e1"), 4) == ZSeries([0, 1, 1, 1, 1])
    with pytest.raises(LogRequired):
        li_loc(W("e0"), 3)


def test_first_display_sampled():
    for l in (1, 2, 3):
        for s in (1, 2, 3):
            f = li_loc(laurent_word(l, HarIndex.of(s)), 8)
            for n in range(1, 9):
                assert f[n] == sigma(n, HarIndex.of(s)) / Fraction(n) ** l


def test_taylor_eval_examples():
    one = HarIndex.of(1)
    assert taylor_eval_sigma(2, 1, one) == CycNum.rational(Fraction(1, 2), 1)
    assert taylor_eval_sigma(1, 1, one) == CycNum.zero(1)
    assert taylor_eval_sigma(3, 2, one) == CycNum.rational(Fraction(1, 6), 1)


def test_taylor_routes_agree():
    for idx in [HarIndex.of(2, 1), HarIndex.of(-1, 2), HarIndex.of(1, 1, 1)]:
        for n in range(1, 8):
            for l in (0, 1, 2):
                assert taylor_eval_sigma(n, l, idx) == taylor_coefficient_sigma(n, l, idx) == expected_first_display(n, l, idx)


def test_cyclotomic_taylor():
    idx = HarIndex((1, 2), (1, 0), 1, 2)
    for n in range(1, 8):
        assert taylor_eval_sigma(n, 1, idx) == expected_first_display(n, 1, idx)
    assert cyclotomic_laurent_word(1, idx)[0].index in (1, 2)


def test_cumulative_boundary_flag():
    idx = HarIndex.of(1)
    for n in range(1, 8):
        assert taylor_cumulative_sigma(n, idx) == sigma(n + 1, idx)
        assert taylor_cumulative_sigma(n, idx, "strict_n") == sigma(n, idx)
    with pytest.raises(ValueError):
        taylor_cumulative_sigma(3, idx, "other")


def test_second_display_words():
    for w in all_words(1, 4, 1):
        if w[-1].index == 0:
            continue
        idx = word_to_index(w)
        f = li_loc(w, 8)
        inc = [sigma(m, idx, inclusive=True) for m in range(1, 9)]
        for m in range(1, 9):
            prev = inc[m - 2] if m >= 2 else CycNum.zero(1)
            assert f[m] == inc[m - 1] - prev


@given(coeff_list, coeff_list, st.sampled_from([Letter(0, True), Letter(1, True)]))
def test_derivation_rule(a, b, letter):
    f, g = ZSeries(a), ZSeries(b)
    lhs = apply_letter(letter, f * g)
    rhs = apply_letter(letter, f) * g + f * apply_letter(letter, g)
    assert lhs == rhs


@given(coeff_list)
def test_raw_inverse_difference_is_derivative(a):
    f = ZSeries(a)
    d = apply_letter(Letter(0, True), f, RAW) - apply_letter(Letter(1, True), f, RAW)
    assert d == derivative(f)


@given(coeff_list)
def test_one_sided_inverses(a):
    f = ZSeries([0] + a[1:])
    for i in (0, 1):
        back = apply_letter(Letter(i, True), apply_letter(Letter(i), f))
        assert back == f.truncate(back.cap)
        fwd = apply_letter(Letter(i), apply_letter(Letter(i, True), f))
        assert fwd == f.truncate(fwd.cap)


def test_localized_shuffle():
    words = [w for w in all_words(1, 3, 1) if w[-1].index != 0]
    for u in words:
        for v in words:
            if len(u) + len(v) > 4:
                continue
            rhs = ZSeries.zero(8)
            for w, c in shuffle_words(u, v):
                rhs = rhs + li_loc(w, 8).scale(c)
            assert li_loc(u, 8) * li_loc(v, 8) == rhs


def test_cyclotomic_kernel_level3():
    # e_{z_1} applied to 1 at N=3: sum_n z^n xi^{-n}/n
    f = apply_letter(Letter(1), ZSeries.one(5, 3))
    for n in range(1, 6):
        assert f[n] == CycNum.root(-n, 3) / n
