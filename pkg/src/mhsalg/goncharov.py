"""Goncharov's coproduct on iterated-integral symbols, the path-composition
formula and the compatibility of the coproduct with the 1/(1-e0) reindexation
under the loop vanishing rule."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator

from .coeff import Poly
from .words import Letter, NCSeries, Word, all_words, format_word

__all__ = [
    "IWord",
    "CoproductTerm",
    "gon_coproduct",
    "coproduct_counts",
    "coassociativity_sides",
    "compose_functionals",
    "composition_sides",
    "vanishing_rule",
    "coaction_identity_sides",
    "verify_coaction_identity",
    "loop_exponential_linear_term",
]


@dataclass(frozen=True, order=True)
class IWord:
    """I(upper; a_n, ..., a_1; lower). Labels: 0 is the point 0, k >= 1 is z_k;
    other hashable labels (symbols, tangential markers) are allowed.
    ``interior`` is stored bottom-up: (a_1, ..., a_n)."""

    lower: object
    interior: tuple
    upper: object

    @classmethod
    def from_word(cls, w: Word, lower=0, upper=0) -> "IWord":
        """The word e_{a_n} ... e_{a_1} between the given endpoints."""
        return cls(lower, tuple(a.index for a in reversed(w)), upper)

    def to_word(self) -> Word:
        return tuple(Letter(a) for a in reversed(self.interior))

    @property
    def length(self) -> int:
        return len(self.interior)

    def format(self) -> str:
        inner = ",".join(str(a) for a in self.interior)
        return f"I({self.upper};{inner};{self.lower})"

    def __str__(self):
        return self.format()


@dataclass(frozen=True, order=True)
class CoproductTerm:
    left: IWord
    right: tuple  # sorted tuple of IWord gap factors with nonempty interior

    def format(self) -> str:
        right = "*".join(g.format() for g in self.right) or "1"
        return f"{self.left.format()} ⊗ {right}"


def _term(left: IWord, gaps: Iterable[IWord]) -> CoproductTerm:
    return CoproductTerm(left, tuple(sorted((g for g in gaps if g.interior), key=_gkey)))


def _gkey(g: IWord):
    return (str(g.lower), tuple(str(a) for a in g.interior), str(g.upper))


def _split(w: IWord, chosen: tuple[int, ...]) -> tuple[IWord, list[IWord]]:
    """Left factor and gap factors for the chosen interior positions (0-based, ascending)."""
    pts = [w.lower] + list(w.interior) + [w.upper]
    marks = [0] + [i + 1 for i in chosen] + [len(w.interior) + 1]
    left = IWord(w.lower, tuple(w.interior[i] for i in chosen), w.upper)
    gaps = [IWord(pts[lo], tuple(pts[lo + 1 : hi]), pts[hi]) for lo, hi in zip(marks, marks[1:])]
    return left, gaps


def gon_coproduct(w: IWord, keep_empty: bool = False) -> list[tuple[IWord, tuple[IWord, ...]]]:
    """One term per subset of interior positions: (left, gap factors).

    Empty gap factors equal 1; they are dropped unless ``keep_empty``."""
    out = []
    n = w.length
    for k in range(n + 1):
        for chosen in itertools.combinations(range(n), k):
            left, gaps = _split(w, chosen)
            if not keep_empty:
                gaps = [g for g in gaps if g.interior]
            out.append((left, tuple(gaps)))
    return out


def _as_counter(terms: Iterable[tuple[IWord, Iterable[IWord]]]) -> dict[CoproductTerm, int]:
    acc: dict[CoproductTerm, int] = {}
    for left, gaps in terms:
        t = _term(left, gaps)
        acc[t] = acc.get(t, 0) + 1
    return acc


def coproduct_counts(w: IWord) -> dict[CoproductTerm, int]:
    return _as_counter(gon_coproduct(w))


def coassociativity_sides(w: IWord) -> tuple[dict, dict]:
    """(Delta x id) Delta and (id x Delta) Delta as multisets of
    (left, middle factors, right factors)."""
    lhs: dict = {}
    for left, gaps in gon_coproduct(w):
        for l2, g2 in gon_coproduct(left):
            key = (l2, _msort(g2), _msort(gaps))
            lhs[key] = lhs.get(key, 0) + 1
    rhs: dict = {}
    for left, gaps in gon_coproduct(w):
        expansions = [gon_coproduct(g) for g in gaps]
        for combo in itertools.product(*expansions):
            middle = [c[0] for c in combo if c[0].interior]
            right = [r for c in combo for r in c[1]]
            key = (left, _msort(middle), _msort(right))
            rhs[key] = rhs.get(key, 0) + 1
    return lhs, rhs


def _msort(gs) -> tuple:
    return tuple(sorted((g for g in gs if g.interior), key=_gkey))


# ---------------------------------------------------------------- composition


def compose_functionals(F: Callable[[IWord], object], G: Callable[[IWord], object], w: IWord, mid) -> object:
    """I_{γ2∘γ1}(c; a_n..a_1; a) = sum_k F(c; a_n..a_{k+1}; b) G(b; a_k..a_1; a),
    with F on the upper path (b to c) and G on the lower path (a to b)."""
    total = Fraction(0)
    for k in range(w.length + 1):
        top = IWord(mid, w.interior[k:], w.upper)
        bottom = IWord(w.lower, w.interior[:k], mid)
        total = total + F(top) * G(bottom)
    return total


def composition_sides(w: IWord, mid) -> tuple[dict, dict]:
    """Coproduct versus composition of paths through ``mid``.

    Side A: split w at every position k, take the coproduct of each piece and
    multiply (left factors become a pair, gap factors are pooled).
    Side B: take the coproduct of w, split its left factor through ``mid`` and
    expand the one gap factor straddling the split through ``mid`` as well."""
    side_a: dict = {}
    for k in range(w.length + 1):
        top = IWord(mid, w.interior[k:], w.upper)
        bottom = IWord(w.lower, w.interior[:k], mid)
        for lt, gt in gon_coproduct(top):
            for lb, gb in gon_coproduct(bottom):
                key = (lt, lb, _msort(list(gt) + list(gb)))
                side_a[key] = side_a.get(key, 0) + 1
    side_b: dict = {}
    n = w.length
    for size in range(n + 1):
        for chosen in itertools.combinations(range(n), size):
            left, gaps = _split(w, chosen)
            for j in range(size + 1):
                lt = IWord(mid, left.interior[j:], w.upper)
                lb = IWord(w.lower, left.interior[:j], mid)
                gap = gaps[j]  # the gap between the j-th and (j+1)-th chosen point
                others = gaps[:j] + gaps[j + 1 :]
                for kk in range(gap.length + 1):
                    up = IWord(mid, gap.interior[kk:], gap.upper)
                    down = IWord(gap.lower, gap.interior[:kk], mid)
                    key = (lt, lb, _msort(others + [up, down]))
                    side_b[key] = side_b.get(key, 0) + 1
    return side_a, side_b


# ---------------------------------------------------------------- vanishing


def vanishing_rule(w: IWord, path_kind: str) -> bool:
    """True iff the symbol is forced to vanish on the given kind of path.

    loop_conjugate: nonempty all-zero interior.
    straight: nonempty constant interior."""
    if not w.interior:
        return False
    if path_kind == "loop_conjugate":
        return all(a == 0 for a in w.interior)
    if path_kind == "straight":
        return len(set(w.interior)) == 1
    raise ValueError(f"unknown path kind {path_kind!r}")


def _alive(left: IWord, gaps: Iterable[IWord], vanishing: bool) -> bool:
    if not vanishing:
        return True
    if vanishing_rule(left, "loop_conjugate"):
        return False
    return not any(vanishing_rule(g, "loop_conjugate") for g in gaps)


def _reindex(w: IWord, zeros: int) -> IWord:
    """1/(1-e0) reindexation term: prepend e0^zeros to the word, i.e. append
    zeros at the top of the interior."""
    return IWord(w.lower, w.interior + (0,) * zeros, w.upper)


def coaction_identity_sides(word: Word, cap: int, vanishing: bool = True) -> tuple[dict, dict]:
    """Both sides of  Delta(Sigma_inv(w)) = sh(Sigma_inv^{⊗}(Delta(w)))  on the
    loop based at 0, truncated at total weight ``cap``.

    LHS: sum_l Delta(0; 0^l w; 0).
    RHS: for each term of Delta(0; w; 0), reindex the first slot (the left
    factor) by 1/(1-e0); the zeros it absorbs are shared with the top gap
    factor, which is the other factor ending at the base point. Gap factors are
    pooled as one commutative (shuffle) product. Terms containing a factor
    killed by the loop vanishing rule are discarded on both sides."""
    base = IWord.from_word(word)
    n = base.length
    lhs: dict = {}
    for l in range(cap - n + 1):
        for left, gaps in gon_coproduct(_reindex(base, l), keep_empty=True):
            if _alive(left, gaps, vanishing):
                t = _term(left, gaps)
                lhs[t] = lhs.get(t, 0) + 1
    rhs: dict = {}
    for left, gaps in gon_coproduct(base, keep_empty=True):
        top = gaps[-1]
        for m in range(cap - n + 1):
            for j in range(cap - n - m + 1):
                new_left = _reindex(left, m)
                new_top = IWord(top.lower, top.interior + (0,) * j, top.upper)
                new_gaps = list(gaps[:-1]) + [new_top]
                if _alive(new_left, new_gaps, vanishing):
                    t = _term(new_left, new_gaps)
                    rhs[t] = rhs.get(t, 0) + 1
    return lhs, rhs


def _coaction_words(cap: int, level: int) -> Iterator[Word]:
    for w in all_words(level, cap):
        if w and w[0].index == 0:
            continue
        yield w


def verify_coaction_identity(cap: int, level: int = 1, vanishing: bool = True):
    """(True, None) if the identity holds for every word of weight <= cap not
    starting with e0; otherwise (False, witness) with the first failing word
    and one differing term."""
    for w in _coaction_words(cap, level):
        lhs, rhs = coaction_identity_sides(w, cap, vanishing)
        if lhs != rhs:
            diff = sorted(set(lhs.items()) ^ set(rhs.items()))
            term, _ = diff[0]
            return False, {
                "word": format_word(w),
                "term": term.format(),
                "lhs": lhs.get(term, 0),
                "rhs": rhs.get(term, 0),
            }
    return True, None


# ---------------------------------------------------------------- 2iπ mod its square


def loop_exponential_linear_term(phi: NCSeries, z: int) -> tuple[NCSeries, NCSeries]:
    """With T a formal central variable and coefficients taken mod T^2:
    returns (phi^{-1} exp(T e_z) phi - 1, T * phi^{-1} e_z phi); these agree."""
    T = Poly.var(0, ("T",))
    lift = phi.map_coeffs(lambda c: Poly.const(c, ("T",)))
    ez = NCSeries.word((Letter(z),), phi.cap, phi.level)
    Tez = ez.map_coeffs(lambda c: T * c)
    expo = NCSeries.one(phi.cap, phi.level, Poly.const(Fraction(1), ("T",)))
    power = NCSeries.one(phi.cap, phi.level, Poly.const(Fraction(1), ("T",)))
    fact = 1
    for k in range(1, phi.cap + 1):
        power = power * Tez
        fact *= k
        expo = expo + power.scale(Fraction(1, fact))
    inv = lift.inverse()
    lhs = (inv * expo * lift - NCSeries.one(phi.cap, phi.level, Poly.const(Fraction(1), ("T",))))
    rhs = (inv * ez.map_coeffs(lambda c: Poly.const(c, ("T",))) * lift).map_coeffs(lambda c: T * c)
    trunc = lambda f: f.map_coeffs(lambda c: c.truncate(1))
    return trunc(lhs), trunc(rhs)
