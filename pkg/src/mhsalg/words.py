"""Words over the alphabet e_0, e_{z_1}, ..., e_{z_N} and weight-truncated
noncommutative series with exact coefficients."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple

from .coeff import MixedLevels, format_coeff

__all__ = [
    "Letter",
    "Word",
    "E0",
    "e",
    "inv",
    "NCSeries",
    "HarIndex",
    "CapMismatch",
    "BadIndex",
    "LocalizedLetter",
    "weight",
    "signed_weight",
    "depth",
    "concat_mul",
    "parse_word",
    "format_word",
    "index_to_word",
    "word_to_index",
    "parse_index",
    "all_words",
    "compositions",
    "indices_up_to",
]


class CapMismatch(ValueError):
    """Operands carry different weight caps."""


class BadIndex(ValueError):
    """An index entry is not an admissible exponent for the requested use."""


class LocalizedLetter(ValueError):
    """An inverted letter reached an operation that does not accept it."""


class Letter(NamedTuple):
    index: int
    inverted: bool = False

    def __str__(self):
        return f"e{self.index}" + ("^-1" if self.inverted else "")


Word = tuple  # tuple[Letter, ...]

E0 = Letter(0)


def e(i: int) -> Letter:
    return Letter(i)


def inv(i: int) -> Letter:
    return Letter(i, True)


def weight(w: Word) -> int:
    """Number of non-inverted letters."""
    return sum(1 for a in w if not a.inverted)


def signed_weight(w: Word) -> int:
    """Letters count +1, inverted letters count -1."""
    return sum(-1 if a.inverted else 1 for a in w)


def depth(w: Word) -> int:
    return sum(1 for a in w if a.index != 0 and not a.inverted)


_TOKEN = re.compile(r"^e(\d+)(?:\^(-?\d+))?$")


def parse_word(text: str) -> Word:
    """Parse "e0 e1 e1", "e0^-1 e1", "e0^2 e1"; "1" or "∅" or "" is the empty word."""
    text = text.strip()
    if text in ("", "1", "∅"):
        return ()
    out: list[Letter] = []
    for tok in text.replace("·", " ").split():
        m = _TOKEN.match(tok.replace("−", "-"))
        if not m:
            raise ValueError(f"bad letter {tok!r}")
        idx = int(m.group(1))
        power = int(m.group(2)) if m.group(2) is not None else 1
        letter = Letter(idx, power < 0)
        out.extend([letter] * abs(power))
    return tuple(out)


def format_word(w: Word) -> str:
    if not w:
        return "1"
    return " ".join(str(a) for a in w)


def all_words(level: int, max_weight: int, min_weight: int = 0) -> Iterator[Word]:
    """All plain words over e_0..e_N with weight in [min_weight, max_weight]."""
    alphabet = [Letter(i) for i in range(level + 1)]
    for k in range(min_weight, max_weight + 1):
        yield from itertools.product(alphabet, repeat=k)


# ---------------------------------------------------------------- indices


@dataclass(frozen=True)
class HarIndex:
    """A multiple harmonic sum index.

    ``exps`` holds (s_1, ..., s_d) in ascending summation order; ``ratios`` holds
    residues r_j mod N with xi^{r_j} the ratio attached to the j-th summation
    variable; ``top`` is the residue t with the extra factor xi^{-t n}. Display
    order is (s_d, ..., s_1)."""

    exps: tuple[int, ...] = ()
    ratios: tuple[int, ...] | None = None
    top: int = 0
    level: int = 1

    def __post_init__(self):
        exps = tuple(int(s) for s in self.exps)
        ratios = tuple(0 for _ in exps) if self.ratios is None else tuple(r % self.level for r in self.ratios)
        if len(ratios) != len(exps):
            raise BadIndex("ratios and exponents differ in length")
        object.__setattr__(self, "exps", exps)
        object.__setattr__(self, "ratios", ratios)
        object.__setattr__(self, "top", self.top % self.level)

    @classmethod
    def of(cls, *display_exps: int, level: int = 1) -> "HarIndex":
        """Build from exponents in display order (s_d, ..., s_1), trivial roots."""
        return cls(tuple(reversed(display_exps)), level=level)

    @classmethod
    def from_roots(cls, display_exps, display_roots, level: int) -> "HarIndex":
        """Display exps (s_d..s_1) and root exponents (i_{d+1}..i_1), z = xi^i."""
        exps = tuple(reversed(display_exps))
        roots = tuple(reversed(display_roots))  # i_1 .. i_{d+1}
        if len(roots) != len(exps) + 1:
            raise BadIndex("need one more root than exponents")
        ratios = tuple(roots[j + 1] - roots[j] for j in range(len(exps)))
        return cls(exps, ratios, roots[-1], level)

    def roots(self) -> tuple[int, ...]:
        """Root exponents (i_1, ..., i_{d+1}) with i_1 normalised so that ratios
        and top are reproduced; i_{d+1} = top."""
        out = [self.top]
        for r in reversed(self.ratios):
            out.append((out[-1] - r) % self.level)
        return tuple(reversed(out))

    @property
    def depth(self) -> int:
        return len(self.exps)

    @property
    def weight(self) -> int:
        return sum(self.exps)

    def is_classical(self) -> bool:
        return all(s >= 1 for s in self.exps)

    def display_exps(self) -> tuple[int, ...]:
        return tuple(reversed(self.exps))

    def reversed(self) -> "HarIndex":
        return HarIndex(tuple(reversed(self.exps)), tuple(reversed(self.ratios)), self.top, self.level)

    def format(self) -> str:
        if self.level == 1:
            return "(" + ",".join(str(s) for s in self.display_exps()) + ")"
        roots = self.roots()
        parts = [f"ξ^{roots[j + 1]}:{self.exps[j]}" for j in reversed(range(self.depth))]
        body = ", ".join(parts)
        return f"({body}; ξ^{roots[0]})" if body else f"(; ξ^{roots[0]})"

    def __str__(self):
        return self.format()


_ROOT_ENTRY = re.compile(r"^(?:ξ|xi|x)\^(-?\d+)\s*:\s*(-?\d+)$")
_ROOT_ONLY = re.compile(r"^(?:ξ|xi|x)\^(-?\d+)$")


def parse_index(text: str, level: int = 1) -> HarIndex:
    """Parse "(2,1)" (display order s_d..s_1) or "(ξ^1:2, ξ^0:1; ξ^0)".

    In the cyclotomic form each entry "ξ^a:s" pairs s_j with the root z_{i_{j+1}}
    written to its left in the word; the optional part after ";" is z_{i_1}
    (default ξ^0)."""
    t = text.strip().replace("−", "-")
    if not (t.startswith("(") and t.endswith(")")):
        raise ValueError(f"index literal must be parenthesised: {text!r}")
    body = t[1:-1].strip()
    if "ξ" not in body and "x" not in body:
        if not body:
            return HarIndex((), level=level)
        return HarIndex.of(*(int(p) for p in body.split(",")), level=level)
    head, _, tail = body.partition(";")
    last = 0
    if tail.strip():
        m = _ROOT_ONLY.match(tail.strip())
        if not m:
            raise ValueError(f"bad trailing root in {text!r}")
        last = int(m.group(1))
    exps, roots = [], []
    for part in (p.strip() for p in head.split(",") if p.strip()):
        m = _ROOT_ENTRY.match(part)
        if not m:
            raise ValueError(f"bad cyclotomic entry {part!r}")
        roots.append(int(m.group(1)))
        exps.append(int(m.group(2)))
    return HarIndex.from_roots(tuple(exps), tuple(roots) + (last,), level)


def _root_letter(k: int, level: int) -> Letter:
    k %= level
    return Letter(k if k else level)


def index_to_word(idx: HarIndex, convention: str = "N1") -> Word:
    """Word attached to an index.

    "N1": e_0^{s_d-1} e_1 ... e_0^{s_1-1} e_1 (level 1 only).
    "cyclotomic": e_{z_{i_{d+1}}} e_0^{s_d-1} e_{z_{i_d}} ... e_0^{s_1-1} e_{z_{i_1}}."""
    if not idx.is_classical():
        raise BadIndex(f"exponents must be >= 1: {idx.display_exps()}")
    if convention == "N1":
        if idx.level != 1:
            raise BadIndex("the N1 convention needs level 1")
        out: list[Letter] = []
        for s in idx.display_exps():
            out.extend([E0] * (s - 1))
            out.append(Letter(1))
        return tuple(out)
    if convention == "cyclotomic":
        roots = idx.roots()
        out = [_root_letter(roots[-1], idx.level)]
        for j in reversed(range(idx.depth)):
            out.extend([E0] * (idx.exps[j] - 1))
            out.append(_root_letter(roots[j], idx.level))
        return tuple(out)
    raise ValueError(f"unknown convention {convention!r}")


def word_to_index(w: Word, level: int = 1, convention: str = "N1") -> HarIndex:
    if any(a.inverted for a in w):
        raise BadIndex("inverted letters have no index")
    if convention == "N1":
        if level != 1:
            raise BadIndex("the N1 convention needs level 1")
        if w and w[-1].index == 0:
            raise BadIndex("word ends with e0")
        exps, run = [], 0
        for a in w:
            if a.index == 0:
                run += 1
            else:
                exps.append(run + 1)
                run = 0
        return HarIndex.of(*exps)
    if convention == "cyclotomic":
        if not w or w[0].index == 0 or w[-1].index == 0:
            raise BadIndex("cyclotomic words start and end with a root letter")
        roots = [w[0].index % level]
        exps, run = [], 0
        for a in w[1:]:
            if a.index == 0:
                run += 1
            else:
                exps.append(run + 1)
                roots.append(a.index % level)
                run = 0
        return HarIndex.from_roots(tuple(exps), tuple(roots), level)
    raise ValueError(f"unknown convention {convention!r}")


def compositions(total: int) -> Iterator[tuple[int, ...]]:
    """All compositions of ``total`` into positive parts (the empty one for 0)."""
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in compositions(total - first):
            yield (first,) + rest


def indices_up_to(max_weight: int, min_weight: int = 0, max_depth: int | None = None) -> Iterator[HarIndex]:
    """All level-1 classical indices by weight, then lexicographically."""
    for w in range(min_weight, max_weight + 1):
        for comp in compositions(w):
            if max_depth is None or len(comp) <= max_depth:
                yield HarIndex.of(*comp)


# ---------------------------------------------------------------- series


def _is_zero(c) -> bool:
    return not c


class NCSeries:
    """Weight-truncated noncommutative series. Immutable; coefficients may be
    Fractions, CycNums or any ring element supporting +, *, bool."""

    __slots__ = ("cap", "level", "terms", "localized")

    def __init__(self, terms: Mapping[Word, object] | None = None, cap: int = 4, level: int = 1, localized: bool = False):
        clean: dict[Word, object] = {}
        for w, c in (terms or {}).items():
            w = tuple(w)
            if weight(w) > cap or _is_zero(c):
                continue
            if not localized and any(a.inverted for a in w):
                raise LocalizedLetter(f"inverted letter in {format_word(w)} of a non-localized series")
            if any(a.index > level for a in w):
                raise ValueError(f"letter index above level {level} in {format_word(w)}")
            clean[w] = c
        object.__setattr__(self, "cap", cap)
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "localized", localized)

    def __setattr__(self, name, value):
        raise AttributeError("NCSeries is immutable")

    @classmethod
    def _wrap(cls, terms: dict, cap: int, level: int, localized: bool) -> "NCSeries":
        obj = object.__new__(cls)
        object.__setattr__(obj, "cap", cap)
        object.__setattr__(obj, "level", level)
        object.__setattr__(obj, "terms", terms)
        object.__setattr__(obj, "localized", localized)
        return obj

    # -- constructors
    @classmethod
    def zero(cls, cap: int, level: int = 1) -> "NCSeries":
        return cls({}, cap, level)

    @classmethod
    def one(cls, cap: int, level: int = 1, unit=Fraction(1)) -> "NCSeries":
        return cls({(): unit}, cap, level)

    @classmethod
    def word(cls, w: Word | str, cap: int, level: int = 1, coeff=Fraction(1)) -> "NCSeries":
        if isinstance(w, str):
            w = parse_word(w)
        return cls({tuple(w): coeff}, cap, level, localized=any(a.inverted for a in w))

    @classmethod
    def parse(cls, text: str, cap: int, level: int = 1) -> "NCSeries":
        """Parse "1 + e0 + 1/2 e1 e1 - 3 e0 e1" (rational coefficients)."""
        from .coeff import parse_rat

        terms: dict[Word, Fraction] = {}
        text = text.replace("−", "-").replace("-", "+-")
        for chunk in (c.strip() for c in text.split("+")):
            if not chunk:
                continue
            sign = Fraction(1)
            if chunk.startswith("-"):
                sign, chunk = Fraction(-1), chunk[1:].strip()
            toks = chunk.split()
            coef = Fraction(1)
            if toks and not toks[0].startswith("e"):
                coef = parse_rat(toks[0])
                toks = toks[1:]
            w = parse_word(" ".join(toks))
            terms[w] = terms.get(w, 0) + sign * coef
        loc = any(a.inverted for w in terms for a in w)
        return cls(terms, cap, level, localized=loc)

    # -- access
    def __getitem__(self, w):
        if isinstance(w, str):
            w = parse_word(w)
        return self.terms.get(tuple(w), Fraction(0))

    def items(self):
        return self.terms.items()

    def support(self):
        return self.terms.keys()

    def constant(self):
        return self.terms.get((), Fraction(0))

    def homogeneous(self, k: int) -> "NCSeries":
        return NCSeries._wrap({w: c for w, c in self.terms.items() if weight(w) == k}, self.cap, self.level, self.localized)

    def is_zero(self) -> bool:
        return not self.terms

    # -- structure
    def _check(self, other: "NCSeries"):
        if self.level != other.level:
            raise MixedLevels(f"levels {self.level} and {other.level}")
        if self.cap != other.cap:
            raise CapMismatch(f"caps {self.cap} and {other.cap}")

    def with_cap(self, cap: int) -> "NCSeries":
        """Truncate (or relabel with a larger cap; no new terms appear)."""
        return NCSeries._wrap({w: c for w, c in self.terms.items() if weight(w) <= cap}, cap, self.level, self.localized)

    def with_level(self, level: int) -> "NCSeries":
        return NCSeries(self.terms, self.cap, level, self.localized)

    def map_coeffs(self, fn: Callable) -> "NCSeries":
        return NCSeries({w: fn(c) for w, c in self.terms.items()}, self.cap, self.level, self.localized)

    def map_terms(self, fn: Callable[[Word, object], object]) -> "NCSeries":
        return NCSeries({w: fn(w, c) for w, c in self.terms.items()}, self.cap, self.level, self.localized)

    def __add__(self, other: "NCSeries") -> "NCSeries":
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w)
            s = c if s is None else s + c
            if _is_zero(s):
                out.pop(w, None)
            else:
                out[w] = s
        return NCSeries._wrap(out, self.cap, self.level, self.localized or other.localized)

    def __neg__(self) -> "NCSeries":
        return NCSeries._wrap({w: -c for w, c in self.terms.items()}, self.cap, self.level, self.localized)

    def __sub__(self, other: "NCSeries") -> "NCSeries":
        return self + (-other)

    def scale(self, k) -> "NCSeries":
        return NCSeries({w: k * c for w, c in self.terms.items()}, self.cap, self.level, self.localized)

    def __mul__(self, other):
        if isinstance(other, NCSeries):
            return concat_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int) -> "NCSeries":
        out = NCSeries.one(self.cap, self.level)
        for _ in range(k):
            out = out * self
        return out

    def inverse(self) -> "NCSeries":
        """Concatenation inverse; needs constant term 1."""
        if self.constant() != 1:
            raise ValueError("inverse needs constant term 1")
        one = NCSeries.one(self.cap, self.level)
        x = one - self
        out, power = one, one
        for _ in range(self.cap):
            power = power * x
            if power.is_zero():
                break
            out = out + power
        return out

    def __eq__(self, other):
        if not isinstance(other, NCSeries):
            return NotImplemented
        return self.level == other.level and self.cap == other.cap and self.terms == other.terms

    def __hash__(self):
        return hash((self.cap, self.level, frozenset(self.terms.items())))

    def format(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            c = self.terms[w]
            parts.append(f"{format_coeff(c)}*{format_word(w)}" if w else format_coeff(c))
        return " + ".join(parts)

    def __repr__(self):
        return f"NCSeries(cap={self.cap}, level={self.level}: {self.format()})"


def concat_mul(f: NCSeries, g: NCSeries) -> NCSeries:
    """Concatenation product, dropping every term of weight above the cap."""
    f._check(g)
    cap = f.cap
    gw = [(w, c, weight(w)) for w, c in g.terms.items()]
    out: dict[Word, object] = {}
    for u, a in f.terms.items():
        wu = weight(u)
        for v, b, wv in gw:
            if wu + wv > cap:
                continue
            key = u + v
            s = out.get(key)
            out[key] = a * b if s is None else s + a * b
    out = {w: c for w, c in out.items() if not _is_zero(c)}
    return NCSeries._wrap(out, cap, f.level, f.localized or g.localized)


def series_from_words(words: Iterable[tuple[Word, object]], cap: int, level: int = 1) -> NCSeries:
    acc: dict[Word, object] = {}
    for w, c in words:
        s = acc.get(w)
        acc[w] = c if s is None else s + c
    return NCSeries(acc, cap, level, localized=any(a.inverted for w in acc for a in w))
