"""Finite multiple zeta values: residues of sigma_p over a window of primes,
the Kaneko-Zagier dimension sequence and heuristic rank tables."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import log10, prod
from typing import Sequence

from .coeff import exact_rank
from .harmonic import sigma_mod
from .words import HarIndex, compositions

__all__ = [
    "WindowTooSmall",
    "FiniteMZV",
    "RankRow",
    "primes_in",
    "default_window",
    "finite_mzv",
    "kz_dims",
    "weight_rank",
    "rank_table",
    "reversal_check",
    "residue_matrix",
]

HEURISTIC = "HEURISTIC"


class WindowTooSmall(ValueError):
    pass


def primes_in(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi (sieve of Eratosthenes)."""
    if hi < 2:
        return []
    sieve = bytearray([1]) * (hi + 1)
    sieve[0] = sieve[1] = 0
    for q in range(2, int(hi**0.5) + 1):
        if sieve[q]:
            sieve[q * q :: q] = bytearray(len(range(q * q, hi + 1, q)))
    return [p for p in range(max(lo, 2), hi + 1) if sieve[p]]


def default_window(s: int, hi: int = 500) -> list[int]:
    return primes_in(max(5, s + 2), hi)


@dataclass(frozen=True)
class FiniteMZV:
    index: HarIndex
    window: tuple[int, ...]
    residues: dict = field(hash=False, compare=True)  # p -> ModInt

    def is_zero(self) -> bool:
        return all(r.residue == 0 for r in self.residues.values())

    def as_list(self) -> list[int]:
        return [self.residues[p].residue for p in self.window]


def _residue_row(args) -> list[int]:
    idx, window = args
    return [sigma_mod(p, idx).residue for p in window]


def finite_mzv(idx: HarIndex, window: Sequence[int]) -> FiniteMZV:
    """(sigma_p(idx) mod p)_p; the empty index gives 1 at every prime."""
    if idx.level != 1:
        raise ValueError("finite MZVs need level 1")
    window = tuple(sorted(window))
    return FiniteMZV(idx, window, {p: sigma_mod(p, idx) for p in window})


def kz_dims(s_max: int) -> list[int]:
    """Coefficients of (1 - L^2)/(1 - L^2 - L^3) up to L^{s_max}."""
    d = []
    for s in range(s_max + 1):
        d.append(1 if s == 0 else (d[s - 2] if s >= 2 else 0) + (d[s - 3] if s >= 3 else 0))
    return [d[s] - (d[s - 2] if s >= 2 else 0) for s in range(s_max + 1)]


def residue_matrix(s: int, window: Sequence[int], workers: int = 1) -> tuple[list[HarIndex], list[list[int]]]:
    """Rows: all compositions of s (display order); columns: primes; entries in [0, p)."""
    idxs = [HarIndex.of(*c) for c in compositions(s)]
    window = sorted(window)
    jobs = [(i, window) for i in idxs]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_residue_row, jobs))
    else:
        rows = [_residue_row(j) for j in jobs]
    return idxs, rows


def _crt(residues: Sequence[int], primes: Sequence[int], modulus: int) -> int:
    x = 0
    for r, p in zip(residues, primes):
        m = modulus // p
        x = (x + r * m * pow(m, -1, p)) % modulus
    return x


def _lattice_relations(rows: list[list[int]], window: list[int]) -> list[list[int]]:
    """Short integer vectors a with sum a_i r_{i,p} = 0 mod p for every p.

    The relation lattice is {a : sum a_i R_i = 0 mod P} with R_i the CRT lift
    and P the product of the window. After LLL reduction genuine relations
    (small coefficients) are separated from the rest by a large norm gap."""
    from sympy import ZZ
    from sympy.polys.matrices import DomainMatrix

    m = len(rows)
    modulus = prod(window)
    lifts = [_crt(r, window, modulus) for r in rows]
    basis = [[1 if j == i else 0 for j in range(m)] + [lifts[i]] for i in range(m)]
    basis.append([0] * m + [modulus])
    reduced = DomainMatrix(basis, (m + 1, m + 1), ZZ).lll().to_Matrix()
    vecs = [[int(x) for x in reduced.row(i)] for i in range(m + 1)]
    vecs = [v for v in vecs if v[-1] == 0 and any(v[:-1])]
    vecs.sort(key=lambda v: max(abs(x) for x in v))
    # relations sit far below the generic size P^(1/m) of reduced vectors
    logs = [log10(max(abs(x) for x in v[:-1])) for v in vecs]
    cut = 0
    bound = log10(modulus) / (2 * m)
    for k, lg in enumerate(logs):
        if lg <= bound:
            cut = k + 1
    return [v[:-1] for v in vecs[:cut]]


@dataclass
class RankRow:
    weight: int
    indices: list[str]
    rank: int
    c_s: int
    lift_rank: int
    window: tuple[int, int, int]  # (first prime, last prime, count)
    relations: list[list[int]] = field(default_factory=list)
    stable: bool | None = None
    label: str = HEURISTIC

    @property
    def matches(self) -> bool:
        return self.rank == self.c_s

    def as_dict(self) -> dict:
        return {
            "weight": self.weight,
            "rank": self.rank,
            "c_s": self.c_s,
            "matches": self.matches,
            "lift_rank": self.lift_rank,
            "n_indices": len(self.indices),
            "window": list(self.window),
            "stable": self.stable,
            "label": self.label,
        }


def weight_rank(s: int, window: Sequence[int] | None = None, workers: int = 1) -> RankRow:
    """Heuristic dimension of the Q-span of the finite MZVs of weight s.

    rank = (number of indices) - (number of independent small integer relations
    among the residue families), relations found by lattice reduction. The
    exact Q-rank of the raw residue lifts in [0, p) is reported as lift_rank."""
    window = sorted(default_window(s) if window is None else window)
    n_idx = 2 ** (s - 1) if s >= 1 else 1
    if len(window) < n_idx:
        raise WindowTooSmall(f"weight {s} has {n_idx} indices but the window has {len(window)} primes")
    idxs, rows = residue_matrix(s, window, workers)
    if any(any(r) for r in rows):
        relations = _lattice_relations(rows, window)
        rank = len(rows) - exact_rank(relations)
    else:
        relations, rank = [], 0
    return RankRow(
        weight=s,
        indices=[i.format() for i in idxs],
        rank=rank,
        c_s=kz_dims(s)[s],
        lift_rank=exact_rank(rows),
        window=(window[0], window[-1], len(window)),
        relations=relations,
    )


def rank_table(weights: Sequence[int], window: Sequence[int], check_window: Sequence[int] | None = None, workers: int = 1) -> list[RankRow]:
    """Rank rows over ``window``; with ``check_window`` each rank is recomputed
    there and ``stable`` records whether the two agree."""
    out = []
    for s in weights:
        row = weight_rank(s, window, workers)
        if check_window is not None:
            row.stable = weight_rank(s, check_window, workers).rank == row.rank
        out.append(row)
    return out


def reversal_check(idx: HarIndex, window: Sequence[int]) -> bool:
    """sigma_p(idx) = (-1)^weight sigma_p(reversed idx) mod p on the window."""
    rev = idx.reversed()
    sign = -1 if idx.weight % 2 else 1
    for p in window:
        a = sigma_mod(p, idx)
        b = sigma_mod(p, rev)
        if a.residue != (sign * b.residue) % p:
            return False
    return True
