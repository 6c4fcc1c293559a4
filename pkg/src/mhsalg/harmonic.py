"""Multiple harmonic sums over N-th roots of unity, their reductions mod p and
the monotonicity / degree scans."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .coeff import CycNum, ModInt
from .words import HarIndex

__all__ = [
    "HarIndex",
    "GeneralizedIndex",
    "MonotonicityViolation",
    "sigma",
    "sigma_sequence",
    "har",
    "sigma_mod",
    "MonotonicityReport",
    "monotonicity_scan",
    "poly_degrees",
    "poly_degree_check",
]


class GeneralizedIndex(ValueError):
    """har is only defined for exponents >= 1."""


class MonotonicityViolation(AssertionError):
    def __init__(self, n: int, message: str = ""):
        super().__init__(message or f"har_n fails to increase at n={n}")
        self.n = n


def _inv_power(m: int, s: int) -> Fraction:
    return Fraction(1, m**s) if s >= 0 else Fraction(m ** (-s))


def sigma_sequence(idx: HarIndex, n_max: int, inclusive: bool = False) -> list:
    """[sigma_1(idx), ..., sigma_{n_max}(idx)] in one sweep.

    Strict upper bound n_d < n unless ``inclusive`` (then n_d <= n)."""
    d, level = idx.depth, idx.level
    rational = level == 1 or (not any(idx.ratios) and idx.top == 0)
    zero = Fraction(0) if rational else CycNum.zero(level)
    one = Fraction(1) if rational else CycNum.one(level)
    # partial[j]: sum over chains n_1 < ... < n_j <= m of the first j factors
    partial = [one] + [zero] * d
    out = []

    def advance(m: int):
        for j in range(d, 0, -1):
            prev = partial[j - 1]
            if not prev:
                continue
            term = prev * _inv_power(m, idx.exps[j - 1])
            if not rational and idx.ratios[j - 1]:
                term = term * CycNum.root(idx.ratios[j - 1] * m, level)
            partial[j] = partial[j] + term

    for n in range(1, n_max + 1):
        if inclusive:
            advance(n)
        value = partial[d]
        if not rational and idx.top:
            value = value * CycNum.root(-idx.top * n, level)
        out.append(value)
        if not inclusive:
            advance(n)
    return out


def _as_cyc(x, level: int) -> CycNum:
    return x if isinstance(x, CycNum) else CycNum.rational(x, level)


def sigma(n: int, idx: HarIndex, inclusive: bool = False) -> CycNum:
    """Unweighted sum over 0 < n_1 < ... < n_d < n; empty index gives 1."""
    if n < 1:
        raise ValueError("n must be positive")
    return _as_cyc(sigma_sequence(idx, n, inclusive)[-1], idx.level)


def har(n: int, idx: HarIndex) -> CycNum:
    """n^weight * sigma_n."""
    if not idx.is_classical():
        raise GeneralizedIndex(f"exponents must be >= 1, got {idx.display_exps()}")
    return sigma(n, idx) * Fraction(n**idx.weight)


def sigma_mod(p: int, idx: HarIndex) -> ModInt:
    """sigma_p(idx) mod p by a prefix-sum sweep in Z/pZ."""
    if idx.level != 1:
        raise ValueError("sigma_mod needs level 1")
    d = idx.depth
    partial = [1] + [0] * d
    for m in range(1, p):
        inv_m = pow(m, -1, p)
        for j in range(d, 0, -1):
            if partial[j - 1]:
                partial[j] = (partial[j] + partial[j - 1] * pow(inv_m, idx.exps[j - 1], p)) % p
    return ModInt(partial[d] % p, p)


@dataclass
class MonotonicityReport:
    index: str
    n_max: int
    distinct: int
    plateau_end: int  # last n with har_n = 0 (0 if none)
    degenerate: bool = False
    values: list = field(default_factory=list, repr=False)


def _positive_real(idx: HarIndex) -> bool:
    return idx.level == 1 or (not any(idx.ratios) and idx.top == 0)


def monotonicity_scan(idx: HarIndex, n_max: int, keep_values: bool = False) -> MonotonicityReport:
    """Check har_n < har_{n+1} past the initial zero plateau, for 1 <= n < n_max."""
    if not _positive_real(idx):
        raise ValueError("monotonicity needs positive real root labels")
    seq = sigma_sequence(HarIndex(idx.exps), n_max)
    values = [Fraction(n**idx.weight) * s for n, s in enumerate(seq, start=1)]
    if idx.depth == 0:
        return MonotonicityReport(idx.format(), n_max, len(set(values)), 0, True, values if keep_values else [])
    plateau = 0
    while plateau < n_max and values[plateau] == 0:
        plateau += 1
    for n in range(max(plateau, 1), n_max):
        if not values[n - 1] < values[n]:
            raise MonotonicityViolation(n)
    return MonotonicityReport(idx.format(), n_max, len(set(values)), plateau, False, values if keep_values else [])


def poly_degrees(s: HarIndex, n_range) -> dict[int, int | None]:
    """Degree in T_{d+1} of P_{s,n} = sum_{0<n_1<..<n_d<n} prod T_j^{n_j}/n_j^{s_j} * T_{d+1}^n.

    Every term carries T_{d+1}^n, so the degree is n exactly when the
    summation range is nonempty (n > d); otherwise P is zero (None)."""
    return {n: (n if n > s.depth else None) for n in n_range}


def poly_degree_check(s: HarIndex, n_range) -> bool:
    """True iff the nonzero P_{s,n} over the range have pairwise distinct degrees."""
    degs = [d for d in poly_degrees(s, n_range).values() if d is not None]
    return len(degs) == len(set(degs))
