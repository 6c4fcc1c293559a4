
import pytest
import sympy

from mhsalg.coeff import mod_reduce
from mhsalg.finite import (
    WindowTooSmall,
    finite_mzv,
    kz_dims,
    primes_in,
    rank_table,
    residue_matrix,
    reversal_check,
    weight_rank,
)
from mhsalg.harmonic import sigma
from mhsalg.words import HarIndex, compositions


def test_primes_in_matches_sympy():
    assert primes_in(7, 500) == list(sympy.primerange(7, 501))
    assert primes_in(0, 1) == []


def test_finite_examples():
    assert finite_mzv(HarIndex.of(2), [5, 7]).as_list() == [0, 0]
    assert finite_mzv(HarIndex.of(), [5, 7, 11]).as_list() == [1, 1, 1]
    assert finite_mzv(HarIndex.of(1), [5]).as_list() == [0]


def test_residues_match_exact_reduction():
    window = primes_in(5, 40)
    for s in (2, 3, 4):
        idxs, rows = residue_matrix(s, window)
        for idx, row in zip(idxs, rows):
            assert row == [mod_reduce(sigma(p, idx).to_rational(), p).residue for p in window]


def test_workers_do_not_change_rows():
    window = primes_in(5, 60)
    assert residue_matrix(4, window, 1) == residue_matrix(4, window, 2)


def test_kz_examples():
    assert kz_dims(5) == [1, 0, 0, 1, 0, 1]
    assert kz_dims(6)[6] == 1
    assert kz_dims(8)[8] == 2


def test_kz_against_series_expansion():
    L = sympy.Symbol("L")
    series = sympy.series((1 - L**2) / (1 - L**2 - L**3), L, 0, 13).removeO()
    assert kz_dims(12) == [int(series.coeff(L, k)) for k in range(13)]


def test_vanishing_of_single_zeta():
    for s in range(1, 7):
        assert finite_mzv(HarIndex.of(s), primes_in(s + 2, 500)).is_zero()


def test_weight_rank_examples():
    window = primes_in(5, 199)
    assert weight_rank(2, window).rank == 0
    row = weight_rank(3, window)
    assert row.rank == 1 and row.c_s == 1 and row.matches
    assert weight_rank(4, window).rank == 0


def test_weight3_relation_is_the_reversal():
    """The residues of (1,2) are minus those of (2,1) (odd weight reversal)."""
    window = primes_in(5, 199)
    a = finite_mzv(HarIndex.of(1, 2), window).as_list()
    b = finite_mzv(HarIndex.of(2, 1), window).as_list()
    assert all((x + y) % p == 0 for x, y, p in zip(a, b, window))


def test_window_too_small():
    with pytest.raises(WindowTooSmall):
        weight_rank(5, [7, 11, 13])


def test_rank_table_labels():
    rows = rank_table([2, 3], primes_in(7, 120), primes_in(7, 90))
    for r in rows:
        d = r.as_dict()
        assert d["label"] == "HEURISTIC"
        assert d["stable"] is True
        assert set(d) >= {"weight", "rank", "c_s"}


def test_reversal_examples():
    window = primes_in(5, 100)
    assert reversal_check(HarIndex.of(2, 1), window)
    assert reversal_check(HarIndex.of(1, 1), window)
    assert finite_mzv(HarIndex.of(1, 1), window).is_zero()
    assert reversal_check(HarIndex.of(1), window)


def test_reversal_all_weight5():
    window = primes_in(7, 80)
    for c in compositions(5):
        assert reversal_check(HarIndex.of(*c), window)
