"""Multiplicity-tagged increasing sequences in integer intervals: composition,
overlay products, {<,=} classes, summation coupling, restriction to a subset M
and the fiberwise evaluation of harmonic sums over multiples of m."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .coeff import CycNum
from .words import BadIndex, HarIndex

__all__ = [
    "ProPath",
    "PathSum",
    "EndpointMismatch",
    "EndpointsNotInM",
    "ArityMismatch",
    "Multiples",
    "compose_paths",
    "pre_quasi_shuffle",
    "class_of",
    "class_depth",
    "class_paths",
    "class_pre_quasi_shuffle",
    "labeled_class_product",
    "coupling",
    "delta_M",
    "split_sum",
    "split_sum_parts",
    "prime_factor_compose",
    "factorize",
    "SeqFunction",
    "transition_map",
    "class_to_word",
    "word_to_class",
]


class EndpointMismatch(ValueError):
    pass


class EndpointsNotInM(ValueError):
    pass


class ArityMismatch(ValueError):
    pass


@dataclass(frozen=True)
class ProPath:
    start: int
    end: int
    steps: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        steps = tuple((int(v), int(k)) for v, k in self.steps)
        object.__setattr__(self, "steps", steps)
        if self.start >= self.end:
            raise ValueError("a path needs start < end")
        prev = self.start
        for v, k in steps:
            if not prev < v < self.end or k < 1:
                raise ValueError(f"bad step ({v}, {k}) in ]{self.start},{self.end}[")
            prev = v

    @classmethod
    def of(cls, start: int, end: int, *values: int) -> "ProPath":
        """Build from a nondecreasing letter list; repeats become multiplicity."""
        steps: list[list[int]] = []
        for v in values:
            if steps and steps[-1][0] == v:
                steps[-1][1] += 1
            else:
                steps.append([v, 1])
        return cls(start, end, tuple(map(tuple, steps)))

    @classmethod
    def parse(cls, text: str) -> "ProPath":
        """Parse "(0<2=2<5)"."""
        body = text.strip().strip("()").replace(" ", "")
        parts = body.replace("=", "<").split("<")
        nums = [int(p) for p in parts]
        return cls.of(nums[0], nums[-1], *nums[1:-1])

    @property
    def depth(self) -> int:
        return len(self.steps)

    @property
    def letters(self) -> int:
        return sum(k for _, k in self.steps)

    def values(self) -> list[int]:
        return [v for v, k in self.steps for _ in range(k)]

    def format(self) -> str:
        s = str(self.start)
        for v, k in self.steps:
            s += f"<{v}" + f"={v}" * (k - 1)
        return f"({s}<{self.end})"

    def __str__(self):
        return self.format()


class PathSum:
    """Formal Z-linear combination of paths with common endpoints."""

    def __init__(self, terms: dict[ProPath, int] | None = None):
        self.terms = {p: c for p, c in (terms or {}).items() if c}

    def __add__(self, other: "PathSum") -> "PathSum":
        out = dict(self.terms)
        for p, c in other.terms.items():
            out[p] = out.get(p, 0) + c
        return PathSum(out)

    def __eq__(self, other):
        return isinstance(other, PathSum) and self.terms == other.terms

    def format(self) -> str:
        return " + ".join(f"{c}*{p.format()}" for p, c in sorted(self.terms.items(), key=lambda t: t[0].steps)) or "0"

    def __repr__(self):
        return f"PathSum({self.format()})"


def compose_paths(g1: ProPath, g2: ProPath) -> ProPath:
    """(n<..<m)(m<..<l) = (n<..<m<..<l): the junction m becomes a step."""
    if g1.end != g2.start:
        raise EndpointMismatch(f"{g1.format()} ends at {g1.end}, {g2.format()} starts at {g2.start}")
    return ProPath(g1.start, g2.end, g1.steps + ((g1.end, 1),) + g2.steps)


def pre_quasi_shuffle(g1: ProPath, g2: ProPath) -> PathSum:
    """Overlay of two concrete paths. Equal values collide (multiplicities add);
    distinct values interleave in the only order their values allow."""
    if (g1.start, g1.end) != (g2.start, g2.end):
        raise EndpointMismatch("pre-quasi-shuffle needs common endpoints")
    merged: dict[int, int] = {}
    for v, k in g1.steps + g2.steps:
        merged[v] = merged.get(v, 0) + k
    path = ProPath(g1.start, g1.end, tuple(sorted(merged.items())))
    if path.depth > g1.end - g1.start - 1:
        return PathSum()
    return PathSum({path: 1})


# ---------------------------------------------------------------- classes


def _check_class(cls: str):
    if any(c not in "<=" for c in cls):
        raise ValueError(f"class words use only '<' and '=': {cls!r}")
    if cls and cls[0] != "<":
        raise ValueError("a class word starts with '<'")


def class_of(path: ProPath) -> str:
    return "".join("<" + "=" * (k - 1) for _, k in path.steps)


def class_depth(cls: str) -> int:
    _check_class(cls)
    return cls.count("<")


def _class_mults(cls: str) -> list[int]:
    _check_class(cls)
    mults: list[int] = []
    for c in cls:
        if c == "<":
            mults.append(1)
        else:
            mults[-1] += 1
    return mults


def class_paths(cls: str, n: int, m: int) -> list[ProPath]:
    """All paths in ]n,m[ with the given {<,=} pattern, in lexicographic order."""
    mults = _class_mults(cls)
    return [ProPath(n, m, tuple(zip(vals, mults))) for vals in itertools.combinations(range(n + 1, m), len(mults))]


def _blocks(cls: str) -> list[str]:
    return ["<" + "=" * (k - 1) for k in _class_mults(cls)]


def class_pre_quasi_shuffle(a: str, b: str, n: int | None = None, m: int | None = None) -> dict[str, int]:
    """Class-level overlay: all interleavings and collisions of the step blocks.
    With an interval given, classes deeper than m-n-1 are dropped."""
    out: dict[str, int] = {}
    for blocks, c in _overlay(tuple(_blocks(a)), tuple(_blocks(b))):
        word = "".join(blocks)
        if n is not None and m is not None and class_depth(word) > m - n - 1:
            continue
        out[word] = out.get(word, 0) + c
    return out


@lru_cache(maxsize=None)
def _overlay(a: tuple, b: tuple) -> tuple:
    if not a:
        return ((b, 1),)
    if not b:
        return ((a, 1),)
    acc: dict[tuple, int] = {}
    for rest, c in _overlay(a[:-1], b):
        acc[rest + (a[-1],)] = acc.get(rest + (a[-1],), 0) + c
    for rest, c in _overlay(a, b[:-1]):
        acc[rest + (b[-1],)] = acc.get(rest + (b[-1],), 0) + c
    merged = a[-1] + "=" * len(b[-1])
    for rest, c in _overlay(a[:-1], b[:-1]):
        acc[rest + (merged,)] = acc.get(rest + (merged,), 0) + c
    return tuple(acc.items())


def labeled_class_product(a: str, fa: Sequence[Callable], b: str, fb: Sequence[Callable]) -> list[tuple[str, tuple]]:
    """Overlay with one function per letter carried along. A collision puts the
    letters of the first factor before those of the second."""
    if len(fa) != len(a) or len(fb) != len(b):
        raise ArityMismatch("labeled product needs one function per letter")
    ba, bb = _blocks(a), _blocks(b)
    la, lb = [], []
    pos = 0
    for blk in ba:
        la.append((blk, tuple(fa[pos : pos + len(blk)])))
        pos += len(blk)
    pos = 0
    for blk in bb:
        lb.append((blk, tuple(fb[pos : pos + len(blk)])))
        pos += len(blk)
    out: list[tuple[str, tuple]] = []

    def rec(i: int, j: int, acc: list):
        if i == len(la) and j == len(lb):
            out.append(("".join(x for x, _ in acc), tuple(f for _, fs in acc for f in fs)))
            return
        if i < len(la):
            rec(i + 1, j, acc + [la[i]])
        if j < len(lb):
            rec(i, j + 1, acc + [lb[j]])
        if i < len(la) and j < len(lb):
            blk = la[i][0] + "=" * len(lb[j][0])
            rec(i + 1, j + 1, acc + [(blk, la[i][1] + lb[j][1])])

    rec(0, 0, [])
    return out


def coupling(cls: str, fs: Sequence[Callable], n: int, m: int):
    """Sum over the class of prod_i f_{step(i)}(n_i).

    ``fs`` has one function per step (applied once per letter of the step), or
    one function per letter."""
    mults = _class_mults(cls)
    if len(fs) == len(mults):
        per_letter = [f for f, k in zip(fs, mults) for _ in range(k)]
    elif len(fs) == len(cls):
        per_letter = list(fs)
    else:
        raise ArityMismatch(f"class {cls!r} has depth {len(mults)}, got {len(fs)} functions")
    total = Fraction(0)
    for path in class_paths(cls, n, m):
        term = Fraction(1)
        for f, v in zip(per_letter, path.values()):
            term = term * f(v)
        total = total + term
    return total


def class_to_word(cls: str):
    """'<' is e_1 and '=' is e_0, read right to left so that a step of
    multiplicity s becomes e_0^{s-1} e_1."""
    from .words import E0, Letter

    return tuple(Letter(1) if c == "<" else E0 for c in reversed(cls))


def word_to_class(w) -> str:
    return "".join("<" if a.index else "=" for a in reversed(w))


# ---------------------------------------------------------------- restriction


@dataclass(frozen=True)
class Multiples:
    m: int

    def __contains__(self, x: int) -> bool:
        return x % self.m == 0


def delta_M(path: ProPath, M) -> tuple[ProPath, list[ProPath]]:
    """Restriction to M and the gap subpaths between consecutive M-points."""
    if path.start not in M or path.end not in M:
        raise EndpointsNotInM(f"endpoints {path.start}, {path.end} not in M")
    kept = tuple((v, k) for v, k in path.steps if v in M)
    marks = [path.start] + [v for v, _ in kept] + [path.end]
    gaps = []
    for lo, hi in zip(marks, marks[1:]):
        gaps.append(ProPath(lo, hi, tuple((v, k) for v, k in path.steps if lo < v < hi)))
    return ProPath(path.start, path.end, kept), gaps


# ---------------------------------------------------------------- RT splitting
#
# A chain sum is  sum_{lo < x_1 < ... < x_k < hi} prod_j node_j(x_j) * prod_g edge_g(x_g, x_{g+1})
# with x_0 = lo, x_{k+1} = hi.  Splitting over multiples of m keeps a subset S
# of the nodes on mZ; the others fill the gaps between consecutive kept nodes.


class _Chain:
    def __init__(self, nodes: list[Callable], edges: list[Callable], zero, one):
        self.nodes = nodes
        self.edges = edges
        self.zero = zero
        self.one = one

    def direct(self, lo: int, hi: int, allowed: Callable[[int], bool] = lambda x: True):
        k = len(self.nodes)
        if k == 0:
            return self.edges[0](lo, hi)
        vals = [x for x in range(lo + 1, hi) if allowed(x)]
        layer = {x: self.edges[0](lo, x) * self.nodes[0](x) for x in vals}
        for j in range(1, k):
            nxt = {}
            for y in vals:
                acc = self.zero
                for x, v in layer.items():
                    if x < y and v:
                        acc = acc + v * self.edges[j](x, y)
                if acc:
                    nxt[y] = acc * self.nodes[j](y)
            layer = nxt
        total = self.zero
        for x, v in layer.items():
            total = total + v * self.edges[k](x, hi)
        return total

    def sub(self, a: int, b: int) -> "_Chain":
        """Nodes a..b-1 with edges a..b (node indices 0-based)."""
        return _Chain(self.nodes[a:b], self.edges[a : b + 1], self.zero, self.one)

    def split(self, lo: int, hi: int, m: int, rest: Sequence[int]) -> dict:
        """Per-subset contributions; the outer chain is split again by ``rest``."""
        if lo % m or hi % m:
            raise ValueError("split endpoints must be multiples of m")
        k = len(self.nodes)
        parts = {}
        not_mult = lambda x: x % m != 0
        for size in range(k + 1):
            for S in itertools.combinations(range(k), size):
                marks = (-1,) + S + (k,)
                outer_nodes = [(lambda j: (lambda q: self.nodes[j](m * q)))(j) for j in S]
                outer_edges = []
                for a, b in zip(marks, marks[1:]):
                    gap = self.sub(a + 1, b)
                    cache: dict = {}

                    def edge(q1, q2, gap=gap, cache=cache):
                        key = (q1, q2)
                        if key not in cache:
                            cache[key] = gap.direct(m * q1, m * q2, not_mult)
                        return cache[key]

                    outer_edges.append(edge)
                outer = _Chain(outer_nodes, outer_edges, self.zero, self.one)
                if rest:
                    parts[S] = sum(outer.split(lo // m, hi // m, rest[0], rest[1:]).values(), self.zero)
                else:
                    parts[S] = outer.direct(lo // m, hi // m)
        return parts


def _index_chain(idx: HarIndex) -> tuple[_Chain, Callable]:
    if not idx.is_classical():
        raise BadIndex("split evaluation needs exponents >= 1")
    level = idx.level
    rational = level == 1 or (not any(idx.ratios) and idx.top == 0)
    one = Fraction(1) if rational else CycNum.one(level)
    zero = Fraction(0) if rational else CycNum.zero(level)

    def node(j):
        s, r = idx.exps[j], idx.ratios[j]
        if rational or not r:
            return lambda x: one * Fraction(1, x**s)
        return lambda x: CycNum.root(r * x, level) * Fraction(1, x**s)

    nodes = [node(j) for j in range(idx.depth)]
    edges = [lambda x, y: one] * (idx.depth + 1)

    def finish(value, n: int):
        if not rational and idx.top:
            value = value * CycNum.root(-idx.top * n, level)
        return value if isinstance(value, CycNum) else CycNum.rational(value, level)

    return _Chain(nodes, edges, zero, one), finish


def split_sum_parts(m: int, n: int, idx: HarIndex) -> dict[tuple[int, ...], CycNum]:
    """Contribution of each fiber of sigma_{mn}(idx): the key lists the (0-based,
    ascending) summation variables that are multiples of m."""
    chain, finish = _index_chain(idx)
    raw = chain.split(0, m * n, m, ())
    top_free = {S: finish(v, m * n) for S, v in raw.items()}
    return top_free


def split_sum(m: int, n: int, idx: HarIndex) -> CycNum:
    """sigma_{mn}(idx) assembled from the fibers over multiples of m."""
    if m < 2 or n < 1:
        raise ValueError("need m >= 2 and n >= 1")
    parts = split_sum_parts(m, n, idx)
    total = CycNum.zero(idx.level)
    for v in parts.values():
        total = total + v
    return total


def factorize(n: int) -> list[tuple[int, int]]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            a = 0
            while n % p == 0:
                n //= p
                a += 1
            out.append((p, a))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def prime_factor_compose(n: int, idx: HarIndex, order: Sequence[int] | None = None) -> CycNum:
    """sigma_n(idx) by nested splitting along the prime-power factors of n.

    ``order`` optionally lists the prime-power factors in the order they are
    peeled (default: ascending primes)."""
    if n < 2:
        raise ValueError("need n >= 2")
    factors = [p**a for p, a in factorize(n)]
    if order is not None:
        if sorted(order) != sorted(factors):
            raise ValueError(f"order {order} is not the prime-power factorization of {n}")
        factors = list(order)
    chain, finish = _index_chain(idx)
    raw = chain.split(0, n, factors[0], factors[1:])
    total = chain.zero
    for v in raw.values():
        total = total + v
    return finish(total, n)


# ---------------------------------------------------------------- gluing


@dataclass(frozen=True)
class SeqFunction:
    """A function on N ∪ {-1}: a * 1_{n=-1} + sum_k c_k xi^{k n} 1_{n>=0} + finite
    corrections, attached to a base point (0 or a root label)."""

    level: int = 1
    base: int = 0
    at_minus_one: object = Fraction(0)
    geometric: tuple[tuple[int, object], ...] = ()
    finite: tuple[tuple[int, object], ...] = ()

    def __call__(self, n: int):
        total = CycNum.zero(self.level)
        if n == -1:
            total = total + self.at_minus_one
        elif n >= 0:
            for k, c in self.geometric:
                total = total + CycNum.root(k * n, self.level) * c
        for x, c in self.finite:
            if x == n:
                total = total + c
        return total

    def __add__(self, other: "SeqFunction") -> "SeqFunction":
        if (self.level, self.base) != (other.level, other.base):
            raise ValueError("functions live at different base points")
        return SeqFunction(self.level, self.base, self.at_minus_one + other.at_minus_one,
                           _merge(self.geometric + other.geometric), _merge(self.finite + other.finite))

    def scale(self, a) -> "SeqFunction":
        return SeqFunction(self.level, self.base, self.at_minus_one * a,
                           tuple((k, c * a) for k, c in self.geometric),
                           tuple((x, c * a) for x, c in self.finite))


def _merge(pairs) -> tuple:
    acc: dict = {}
    for k, c in pairs:
        acc[k] = acc[k] + c if k in acc else c
    return tuple(sorted((k, c) for k, c in acc.items() if c))


def transition_map(i: int, f: SeqFunction) -> SeqFunction:
    """Move f from the chart at z_i = xi^i to 0: 1_{n=-1} becomes n -> -z_i^{-n} 1_{n>=0}."""
    a = f.at_minus_one
    geometric = f.geometric
    if a:
        geometric = _merge(geometric + ((-i % f.level, -a),))
    return SeqFunction(f.level, 0, Fraction(0), geometric, f.finite)
