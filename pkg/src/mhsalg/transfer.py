"""The star projection onto words not ending in e0, the shift map shft_*,
and the solution space of  x sh w = w(x e0, x e1, ...) x."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .coeff import Poly, exact_rank
from .hopf import shuffle_series
from .words import E0, Letter, NCSeries, Word, all_words, format_word, weight
from .ihara import substitute

__all__ = [
    "NotStarWord",
    "neg_binom",
    "is_star_word",
    "star_projection",
    "shft_star",
    "fact_sides",
    "substitution_side",
    "check_transfer_candidate",
    "TransferReport",
    "solve_transfer_equation",
    "lambda_factorization_sides",
]


class NotStarWord(ValueError):
    """The word ends with e0."""


def neg_binom(s: int, l: int) -> int:
    """binom(-s, l) = (-1)^l binom(s+l-1, l)."""
    if l < 0:
        return 0
    return (-1) ** l * comb(s + l - 1, l)


def is_star_word(w: Word) -> bool:
    return not w or w[-1].index != 0


def _blocks(w: Word) -> tuple[list[int], list[Letter], int]:
    """e0^{s_d-1} e_{z_d} ... e0^{s_1-1} e_{z_1} e0^l -> ([s_1..s_d], [z_1..z_d], l)."""
    trail = 0
    while trail < len(w) and w[len(w) - 1 - trail].index == 0:
        trail += 1
    body = w[: len(w) - trail]
    exps, letters, run = [], [], 0
    for a in body:
        if a.index == 0:
            run += 1
        else:
            exps.append(run + 1)
            letters.append(a)
            run = 0
    return exps[::-1], letters[::-1], trail


def _distribute(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _distribute(total - first, parts - 1):
            yield (first,) + rest


def _star_word(w: Word) -> dict[Word, int]:
    exps, letters, l = _blocks(w)
    if l == 0:
        return {tuple(w): 1}
    out: dict[Word, int] = {}
    for ls in _distribute(l, len(exps)):
        c = 1
        for s, li in zip(exps, ls):
            c *= neg_binom(s, li)
        if not c:
            continue
        word: list[Letter] = []
        for j in reversed(range(len(exps))):
            word += [E0] * (exps[j] + ls[j] - 1) + [letters[j]]
        key = tuple(word)
        out[key] = out.get(key, 0) + c
    return out


def star_projection(f: NCSeries) -> NCSeries:
    """Linear map onto the span of words not ending in e0; fixes those words."""
    out: dict[Word, object] = {}
    for w, c in f.items():
        for v, k in _star_word(w).items():
            if weight(v) <= f.cap:
                out[v] = out[v] + k * c if v in out else k * c
    return NCSeries(out, f.cap, f.level)


def _geometric(cap: int, level: int, sign: int) -> NCSeries:
    """1/(1 - sign*e0) truncated."""
    return NCSeries({(E0,) * k: Fraction(sign) ** k for k in range(cap + 1)}, cap, level)


def shft_star(w: Word, cap: int, level: int = 1) -> NCSeries:
    """(1/(1+e0) sh w)(1+e0), star-projected."""
    w = tuple(w)
    if not is_star_word(w):
        raise NotStarWord(f"{format_word(w)} ends with e0")
    level = max([level] + [a.index for a in w])
    inner = shuffle_series(_geometric(cap, level, -1), NCSeries.word(w, cap, level))
    return star_projection(inner * (NCSeries.one(cap, level) + NCSeries.word((E0,), cap, level)))


def substitution_side(w: Word, x: NCSeries) -> NCSeries:
    """w(x e0, x e1, ..., x eN) x."""
    images = {i: x * NCSeries.word((Letter(i),), x.cap, x.level) for i in range(x.level + 1)}
    return substitute(NCSeries.word(tuple(w), x.cap, x.level), images) * x


def fact_sides(w: Word, cap: int, level: int = 1) -> tuple[NCSeries, NCSeries, NCSeries | None]:
    """(1/(1+e0) sh w,  w(e_z -> e_z/(1+e0)) / (1+e0),  shft_*(w) / (1+e0)).

    The third entry is None when w ends in e0."""
    w = tuple(w)
    x = _geometric(cap, level, -1)
    lhs = shuffle_series(x, NCSeries.word(w, cap, level))
    mid = substitution_side(w, x)
    rhs = shft_star(w, cap, level) * x if is_star_word(w) else None
    return lhs, mid, rhs


def _equation_defect(x: NCSeries, w: Word) -> NCSeries:
    return shuffle_series(x, NCSeries.word(tuple(w), x.cap, x.level)) - substitution_side(w, x)


def _check_words(level: int, max_weight: int):
    """Single nonzero letters first (the ones the uniqueness argument uses), then
    e0, then longer words."""
    singles = [(Letter(i),) for i in range(1, level + 1)] + [(E0,)]
    rest = [w for w in all_words(level, max_weight, min_weight=2)]
    return singles + rest if max_weight >= 1 else []


def check_transfer_candidate(x: NCSeries, max_word_weight: int | None = None):
    """(True, None) if x sh w = w(x e) x holds up to the cap of x for all words w
    of weight <= max_word_weight (default cap-1), else (False, first failing w)."""
    top = x.cap - 1 if max_word_weight is None else max_word_weight
    for w in _check_words(x.level, top):
        if not _equation_defect(x, w).is_zero():
            return False, w
    return True, None


# ---------------------------------------------------------------- solution space


@dataclass
class TransferReport:
    cap: int
    level: int
    constant_roots: tuple  # admissible x_0
    zero_branch_kernel_dims: dict = field(default_factory=dict)  # x_0 = 0: weight -> kernel dim
    unit_branch_kernel_dims: dict = field(default_factory=dict)  # x_0 = 1: weight -> kernel dim
    powers_solve: bool = False  # x_k = x_1^k satisfies every constraint
    sufficiency: bool = False  # full equation re-check on all words of weight <= cap-1
    verified: bool = False

    def as_dict(self) -> dict:
        return {
            "cap": self.cap,
            "level": self.level,
            "x0": list(self.constant_roots),
            "zero_branch_kernel_dims": {str(k): v for k, v in sorted(self.zero_branch_kernel_dims.items())},
            "unit_branch_kernel_dims": {str(k): v for k, v in sorted(self.unit_branch_kernel_dims.items())},
            "free_parameters": self.unit_branch_kernel_dims.get(1, 0),
            "powers_solve": self.powers_solve,
            "sufficiency": self.sufficiency,
            "verified": self.verified,
        }


def _kernel_dim(k: int, level: int, x0: int) -> int:
    """dim of {y of weight k : y sh e_i - x0 (y e_i + e_i y) = 0 for all letters e_i}."""
    basis = list(all_words(level, k, min_weight=k))
    target = list(all_words(level, k + 1, min_weight=k + 1))
    pos = {w: j for j, w in enumerate(target)}
    columns = []
    for y in basis:
        col = []
        for i in range(level + 1):
            e = NCSeries.word((Letter(i),), k + 1, level)
            ys = NCSeries.word(y, k + 1, level)
            image = shuffle_series(ys, e)
            if x0:
                image = image - ys * e - e * ys
            vec = [Fraction(0)] * len(target)
            for w, c in image.items():
                vec[pos[w]] += c
            col.extend(vec)
        columns.append(col)
    rows = [list(r) for r in zip(*columns)] if columns else []
    return len(basis) - exact_rank(rows)


def _symbolic_x1(level: int, cap: int) -> NCSeries:
    names = tuple(f"a{i}" for i in range(level + 1))
    terms = {(Letter(i),): Poly.var(i, names) for i in range(level + 1)}
    x1 = NCSeries(terms, cap, level)
    one = NCSeries.one(cap, level, Poly.const(Fraction(1), names))
    out, power = one, one
    for _ in range(cap):
        power = power * x1
        out = out + power
    return out


def solve_transfer_equation(cap: int, level: int = 1) -> TransferReport:
    """Solution space of the equation truncated so that x_0..x_cap are constrained.

    Weight 1 gives x_0 e = x_0^2 e, so x_0 in {0, 1}. In each branch the weight
    k+1 part is linear in x_k given the lower parts; its homogeneous kernel is
    computed exactly. Branch 0 must have trivial kernels everywhere (x = 0);
    branch 1 must have kernel of dimension N+1 at weight 1 (x_1 free) and 0
    above, with x_k = x_1^k a particular solution."""
    if cap < 2:
        raise ValueError("cap must be >= 2")
    report = TransferReport(cap, level, (0, 1))
    for k in range(0, cap + 1):
        report.zero_branch_kernel_dims[k] = _kernel_dim(k, level, 0)
        if k >= 1:
            report.unit_branch_kernel_dims[k] = _kernel_dim(k, level, 1)
    x = _symbolic_x1(level, cap + 1)
    report.powers_solve = all(_equation_defect(x, (Letter(i),)).is_zero() for i in range(level + 1))
    report.sufficiency = check_transfer_candidate(x, cap - 1)[0]
    zero_ok = all(d == 0 for d in report.zero_branch_kernel_dims.values())
    unit_ok = report.unit_branch_kernel_dims[1] == level + 1 and all(
        d == 0 for k, d in report.unit_branch_kernel_dims.items() if k >= 2
    )
    report.verified = zero_ok and unit_ok and report.powers_solve and report.sufficiency
    return report


def lambda_factorization_sides(cap: int, level: int = 1) -> tuple[NCSeries, NCSeries]:
    """(1 - sum L_z e_z)^{-1}  and
    (1 - L_0 e_0)^{-1} + (1 - L_0 e_0)^{-1} (sum_{z != 0} L_z e_z) (1 - sum L_z e_z)^{-1}
    with formal commuting variables L_0..L_N."""
    names = tuple(f"L{i}" for i in range(level + 1))
    one = NCSeries.one(cap, level, Poly.const(Fraction(1), names))

    def lin(indices) -> NCSeries:
        return NCSeries({(Letter(i),): Poly.var(i, names) for i in indices}, cap, level)

    full = (one - lin(range(level + 1))).inverse()
    zero_part = (one - lin([0])).inverse()
    rhs = zero_part + zero_part * lin(range(1, level + 1)) * full
    return full, rhs
