"""Shuffle and quasi-shuffle products, deconcatenation, grouplike test and the
shuffle exponential."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterator, Mapping

from .coeff import MixedLevels, Poly, format_coeff
from .words import (
    E0,
    HarIndex,
    Letter,
    LocalizedLetter,
    NCSeries,
    Word,
    all_words,
    weight,
)

__all__ = [
    "IndexSum",
    "NonzeroConstantTerm",
    "shuffle",
    "shuffle_words",
    "shuffle_series",
    "quasi_shuffle",
    "deconcat",
    "is_grouplike",
    "grouplike_witness",
    "exp_sh",
    "lemma_exp_shuffle_sides",
]


class NonzeroConstantTerm(ValueError):
    """exp_sh needs a series without constant term."""


def _reject_inverted(*words: Word):
    for w in words:
        if any(a.inverted for a in w):
            raise LocalizedLetter("shuffle is not defined on inverted letters")


@lru_cache(maxsize=200_000)
def shuffle_words(u: Word, v: Word) -> tuple[tuple[Word, int], ...]:
    """u sh v as a tuple of (word, multiplicity)."""
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    acc: dict[Word, int] = {}
    for w, c in shuffle_words(u[:-1], v):
        key = w + u[-1:]
        acc[key] = acc.get(key, 0) + c
    for w, c in shuffle_words(u, v[:-1]):
        key = w + v[-1:]
        acc[key] = acc.get(key, 0) + c
    return tuple(sorted(acc.items()))


def shuffle(u: Word, v: Word, cap: int | None = None, level: int | None = None) -> NCSeries:
    _reject_inverted(u, v)
    if cap is None:
        cap = len(u) + len(v)
    if level is None:
        level = max([a.index for a in u + v] + [1])
    return NCSeries({w: Fraction(c) for w, c in shuffle_words(tuple(u), tuple(v))}, cap, level)


def shuffle_series(f: NCSeries, g: NCSeries) -> NCSeries:
    """Bilinear shuffle of two series, truncated at the common cap."""
    f._check(g)
    if f.localized or g.localized:
        for w in list(f.support()) + list(g.support()):
            _reject_inverted(w)
    cap = f.cap
    out: dict[Word, object] = {}
    for u, a in f.items():
        for v, b in g.items():
            if weight(u) + weight(v) > cap:
                continue
            ab = a * b
            for w, c in shuffle_words(u, v):
                s = out.get(w)
                out[w] = ab * c if s is None else s + ab * c
    return NCSeries(out, cap, f.level)


# ---------------------------------------------------------------- quasi-shuffle


class IndexSum:
    """Formal linear combination of HarIndex values."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[HarIndex, object] | None = None):
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    def __eq__(self, other):
        return isinstance(other, IndexSum) and self.terms == other.terms

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __getitem__(self, idx: HarIndex):
        return self.terms.get(idx, 0)

    def format(self) -> str:
        key = lambda i: (i.depth, i.display_exps(), i.ratios, i.top)
        return " + ".join(f"{format_coeff(self.terms[k])}*{k.format()}" for k in sorted(self.terms, key=key)) or "0"

    def __repr__(self):
        return f"IndexSum({self.format()})"


def _stuffle(a: tuple, b: tuple, level: int) -> dict[tuple, int]:
    # entries are (exponent, ratio); recursion peels the largest summation variable
    return dict(_stuffle_cached(a, b, level))


@lru_cache(maxsize=100_000)
def _stuffle_cached(a: tuple, b: tuple, level: int) -> tuple:
    if not a:
        return ((b, 1),)
    if not b:
        return ((a, 1),)
    acc: dict[tuple, int] = {}

    def add(items, tail):
        for w, c in items:
            key = w + (tail,)
            acc[key] = acc.get(key, 0) + c

    x, y = a[-1], b[-1]
    add(_stuffle_cached(a[:-1], b, level), x)
    add(_stuffle_cached(a, b[:-1], level), y)
    add(_stuffle_cached(a[:-1], b[:-1], level), (x[0] + y[0], (x[1] + y[1]) % level))
    return tuple(sorted(acc.items()))


def quasi_shuffle(a: HarIndex, b: HarIndex) -> IndexSum:
    """Stuffle product. Merged entries add exponents and multiply ratio labels."""
    if a.level != b.level:
        raise MixedLevels(f"levels {a.level} and {b.level}")
    n = a.level
    ea = tuple(zip(a.exps, a.ratios))
    eb = tuple(zip(b.exps, b.ratios))
    top = (a.top + b.top) % n
    out: dict[HarIndex, int] = {}
    for entries, c in _stuffle(ea, eb, n).items():
        idx = HarIndex(tuple(s for s, _ in entries), tuple(r for _, r in entries), top, n)
        out[idx] = out.get(idx, 0) + c
    return IndexSum(out)


# ---------------------------------------------------------------- coproduct


def deconcat(w: Word) -> list[tuple[Word, Word]]:
    w = tuple(w)
    return [(w[:k], w[k:]) for k in range(len(w) + 1)]


def grouplike_witness(f: NCSeries):
    """None if f is grouplike up to its cap, else a failing (u, v) pair."""
    if f.constant() != 1:
        return ((), ())
    if f.localized:
        raise LocalizedLetter("grouplike test needs plain letters")
    words = list(all_words(f.level, f.cap - 1, min_weight=1))
    for i, u in enumerate(words):
        for v in words[i:]:
            if len(u) + len(v) > f.cap:
                continue
            lhs = f[u] * f[v]
            rhs = Fraction(0)
            for w, c in shuffle_words(u, v):
                fw = f.terms.get(w)
                if fw is not None:
                    rhs = rhs + c * fw
            if lhs != rhs:
                return (u, v)
    return None


def is_grouplike(f: NCSeries) -> bool:
    return grouplike_witness(f) is None


def exp_sh(x: NCSeries) -> NCSeries:
    """Shuffle exponential sum_n x^{sh n}/n!, truncated at the cap."""
    if x.constant():
        raise NonzeroConstantTerm("exp_sh needs x[empty word] = 0")
    out = NCSeries.one(x.cap, x.level)
    power = NCSeries.one(x.cap, x.level)
    for n in range(1, x.cap + 1):
        power = shuffle_series(power, x)
        if power.is_zero():
            break
        out = out + power.scale(Fraction(1, factorial(n)))
    return out


def lemma_exp_shuffle_sides(f: NCSeries, i: int, w: Word):
    """Both sides of  sum_l lam^l f[e0^l e_i w] = f[e_i (exp_sh(-lam e0) sh w)]
    as polynomials in lam, truncated at the cap of f."""
    lam = Poly.var(0, ("lam",))
    w = tuple(w)
    top = f.cap - 1 - weight(w)
    lhs = Poly({}, ("lam",))
    for l in range(top + 1):
        lhs = lhs + lam ** l * f[(E0,) * l + (Letter(i),) + w]
    neg_lam_e0 = NCSeries({(E0,): -lam}, f.cap, f.level)
    inner = shuffle_series(exp_sh(neg_lam_e0), NCSeries({w: Fraction(1)}, f.cap, f.level))
    rhs = Poly({}, ("lam",))
    for v, c in inner.items():
        key = (Letter(i),) + v
        if weight(key) <= f.cap:
            rhs = rhs + c * f[key]
    return lhs, rhs


def iter_pairs(level: int, total: int) -> Iterator[tuple[Word, Word]]:
    words = list(all_words(level, total))
    for u in words:
        for v in words:
            if len(u) + len(v) <= total:
                yield u, v
