"""Exact coefficient arithmetic: rationals, cyclotomic numbers, residues mod p,
p-adic valuations and filtration membership."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from functools import lru_cache
from math import factorial
from typing import Callable, Sequence, Union

Rat = Fraction

__all__ = [
    "Rat",
    "CycNum",
    "ModInt",
    "Filtration",
    "INF",
    "MixedLevels",
    "DenominatorDivisible",
    "cyclotomic_poly",
    "euler_phi",
    "cyc_arith",
    "padic_valuation",
    "mod_reduce",
    "fil_member",
    "format_rat",
    "parse_rat",
    "format_coeff",
    "parse_cyc",
    "is_prime",
    "Poly",
    "exact_rank",
]


class MixedLevels(ValueError):
    """Two cyclotomic operands live at different levels."""


class DenominatorDivisible(ArithmeticError):
    """The denominator is divisible by the modulus."""


class _Infinity:
    """+infinity for valuations. Compares above every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    __str__ = __repr__

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("mhsalg-inf")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__


INF = _Infinity()


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------- cyclotomic


def _poly_divmod_int(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # coefficient lists are low degree first; den is monic
    num = list(num)
    dq = len(num) - len(den)
    if dq < 0:
        return [0], num
    quot = [0] * (dq + 1)
    for shift in range(dq, -1, -1):
        c = num[shift + len(den) - 1]
        quot[shift] = c
        if c:
            for j, dc in enumerate(den):
                num[shift + j] -= c * dc
    return quot, num[: len(den) - 1]


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, constant term first."""
    if n < 1:
        raise ValueError("level must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod_int(poly, list(cyclotomic_poly(d)))
            assert not any(rem)
    return tuple(poly)


def euler_phi(n: int) -> int:
    return len(cyclotomic_poly(n)) - 1


def _reduce(coeffs: Sequence[Fraction], level: int) -> tuple[Fraction, ...]:
    phi = cyclotomic_poly(level)
    deg = len(phi) - 1
    c = [Fraction(x) for x in coeffs]
    for top in range(len(c) - 1, deg - 1, -1):
        lead = c[top]
        if lead:
            base = top - deg
            for j in range(deg):
                c[base + j] -= lead * phi[j]
        c[top] = Fraction(0)
    c += [Fraction(0)] * (deg - len(c))
    return tuple(c[:deg])


@lru_cache(maxsize=None)
def _root_powers(level: int) -> tuple[tuple[Fraction, ...], ...]:
    """Reduced coefficient vectors of xi^k for k = 0..level-1."""
    out = []
    for k in range(level):
        mono = [Fraction(0)] * k + [Fraction(1)]
        out.append(_reduce(mono, level))
    return tuple(out)


Scalar = Union[int, Fraction]


class CycNum:
    """An element of Q(xi_N), stored as its reduction mod the N-th cyclotomic
    polynomial. Immutable."""

    __slots__ = ("level", "coeffs", "_hash")

    def __init__(self, level: int, coeffs: Sequence[Scalar]):
        if level < 1:
            raise ValueError("level must be positive")
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "coeffs", _reduce(coeffs, level))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("CycNum is immutable")

    @classmethod
    def _raw(cls, level: int, coeffs: tuple[Fraction, ...]) -> "CycNum":
        obj = object.__new__(cls)
        object.__setattr__(obj, "level", level)
        object.__setattr__(obj, "coeffs", coeffs)
        object.__setattr__(obj, "_hash", None)
        return obj

    @classmethod
    def rational(cls, q: Scalar, level: int) -> "CycNum":
        deg = euler_phi(level)
        return cls._raw(level, (Fraction(q),) + (Fraction(0),) * (deg - 1))

    @classmethod
    def root(cls, k: int, level: int) -> "CycNum":
        """xi^k."""
        return cls._raw(level, _root_powers(level)[k % level])

    @classmethod
    def zero(cls, level: int) -> "CycNum":
        return cls.rational(0, level)

    @classmethod
    def one(cls, level: int) -> "CycNum":
        return cls.rational(1, level)

    # -- predicates
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # -- arithmetic
    def _coerce(self, other) -> "CycNum":
        if isinstance(other, CycNum):
            if other.level != self.level:
                raise MixedLevels(f"levels {self.level} and {other.level}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycNum.rational(other, self.level)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycNum._raw(self.level, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycNum._raw(self.level, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycNum._raw(self.level, tuple(a * other for a in self.coeffs))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if len(self.coeffs) == 1:
            return CycNum._raw(self.level, (self.coeffs[0] * o.coeffs[0],))
        prod = [Fraction(0)] * (2 * len(self.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        return CycNum._raw(self.level, _reduce(prod, self.level))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers of a general CycNum are not supported")
        out = CycNum.one(self.level)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, CycNum):
            return self.level == other.level and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self.coeffs[0]) if self.is_rational() else hash((self.level, self.coeffs))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return f"CycNum({format_coeff(self)})"

    __str__ = __repr__


def cyc_arith(a: CycNum, b: CycNum, op: str) -> CycNum:
    """Add or multiply two cyclotomic numbers of the same level."""
    if a.level != b.level:
        raise MixedLevels(f"levels {a.level} and {b.level}")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


# ---------------------------------------------------------------- p-adic / mod p


def _int_val(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_valuation(q: Scalar, p: int):
    """v_p(q) as an int, or INF when q == 0."""
    q = Fraction(q)
    if q == 0:
        return INF
    return _int_val(abs(q.numerator), p) - _int_val(q.denominator, p)


@dataclass(frozen=True)
class ModInt:
    residue: int
    p: int

    def __post_init__(self):
        if not 0 <= self.residue < self.p:
            object.__setattr__(self, "residue", self.residue % self.p)

    def _other(self, other) -> int:
        if isinstance(other, ModInt):
            if other.p != self.p:
                raise ValueError("moduli differ")
            return other.residue
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else ModInt((self.residue + o) % self.p, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else ModInt((self.residue - o) % self.p, self.p)

    def __neg__(self):
        return ModInt(-self.residue % self.p, self.p)

    def __mul__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else ModInt(self.residue * o % self.p, self.p)

    __rmul__ = __mul__

    def __int__(self):
        return self.residue

    def __str__(self):
        return str(self.residue)


def mod_reduce(q: Scalar, p: int) -> ModInt:
    """Image of q in Z/pZ."""
    q = Fraction(q)
    if q.denominator % p == 0:
        raise DenominatorDivisible(f"{q} has negative {p}-adic valuation")
    return ModInt(q.numerator * pow(q.denominator, -1, p) % p, p)


# ---------------------------------------------------------------- filtrations


@dataclass(frozen=True)
class Filtration:
    """Decreasing-denominator filtration Fil_s = (1/D_s) Z.

    kind is "trivial" (D_s = 1), "factorial" (D_s = s!) or "custom", in which
    case ``denominators`` gives D_0, D_1, ... (D_0 must be 1)."""

    kind: str = "trivial"
    denominators: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("trivial", "factorial", "custom"):
            raise ValueError(f"unknown filtration kind {self.kind!r}")
        if self.kind == "custom":
            if not self.denominators or self.denominators[0] != 1:
                raise ValueError("custom filtration needs D_0 = 1")

    def denominator(self, s: int) -> int:
        if self.kind == "trivial":
            return 1
        if self.kind == "factorial":
            return factorial(s)
        d = self.denominators
        return d[s] if s < len(d) else d[-1]


def fil_member(q: Scalar, s: int, fil: Filtration) -> bool:
    if s < 0:
        raise ValueError("filtration index must be nonnegative")
    return (Fraction(q) * fil.denominator(s)).denominator == 1


# ---------------------------------------------------------------- text forms


def format_rat(q: Scalar) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rat(text: str) -> Fraction:
    m = _RAT_RE.match(text.replace("−", "-"))
    if not m:
        raise ValueError(f"not a rational: {text!r}")
    return Fraction(int(m.group(1)), int(m.group(2) or 1))


def format_coeff(c) -> str:
    """Exact text form: "45/4" for rationals, "[a, b, ...]@N=5" otherwise."""
    if isinstance(c, CycNum):
        if c.is_rational() and euler_phi(c.level) == 1:
            return format_rat(c.coeffs[0])
        return "[" + ", ".join(format_rat(x) for x in c.coeffs) + f"]@N={c.level}"
    if isinstance(c, (int, Fraction)):
        return format_rat(c)
    fmt = getattr(c, "format", None)
    if fmt is not None:
        return fmt()
    return str(c)


def parse_cyc(text: str, level: int | None = None) -> CycNum:
    text = text.strip()
    if text.startswith("["):
        body, _, tail = text.partition("]")
        m = re.match(r"^@N=(\d+)$", tail.strip())
        if not m:
            raise ValueError(f"bad cyclotomic literal {text!r}")
        n = int(m.group(1))
        parts = [p for p in body[1:].split(",") if p.strip()]
        return CycNum(n, [parse_rat(p) for p in parts])
    return CycNum.rational(parse_rat(text), level or 1)


def scalar_map(c, fn: Callable[[Fraction], Fraction]):
    if isinstance(c, CycNum):
        return CycNum._raw(c.level, tuple(fn(x) for x in c.coeffs))
    return fn(Fraction(c))


# ---------------------------------------------------------------- polynomials


class Poly:
    """Multivariate polynomial with exact coefficients, stored as a map from
    exponent tuples to nonzero coefficients. Used for formal weight variables."""

    __slots__ = ("names", "terms")

    def __init__(self, terms=None, names: Sequence[str] = ("L",)):
        clean = {}
        for k, c in (terms or {}).items():
            if c:
                clean[tuple(k)] = c
        object.__setattr__(self, "names", tuple(names))
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def var(cls, i: int = 0, names: Sequence[str] = ("L",)) -> "Poly":
        k = [0] * len(names)
        k[i] = 1
        return cls({tuple(k): Fraction(1)}, names)

    @classmethod
    def const(cls, c, names: Sequence[str] = ("L",)) -> "Poly":
        return cls({(0,) * len(names): c}, names)

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.names != self.names:
                raise ValueError("polynomial variables differ")
            return other
        return Poly.const(other, self.names)

    def __add__(self, other):
        o = self._lift(other)
        out = dict(self.terms)
        for k, c in o.terms.items():
            out[k] = out[k] + c if k in out else c
        return Poly(out, self.names)

    __radd__ = __add__

    def __neg__(self):
        return Poly({k: -c for k, c in self.terms.items()}, self.names)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly({k: c * other for k, c in self.terms.items()}, self.names)
        o = self._lift(other)
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in o.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out[k] + c1 * c2 if k in out else c1 * c2
        return Poly(out, self.names)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Poly.const(Fraction(1), self.names)
        for _ in range(n):
            out = out * self
        return out

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.names == other.names and self.terms == other.terms
        if isinstance(other, (int, Fraction, CycNum)):
            if not other:
                return not self.terms
            return self.terms == {(0,) * len(self.names): other}
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def truncate(self, max_degree: int) -> "Poly":
        return Poly({k: c for k, c in self.terms.items() if sum(k) <= max_degree}, self.names)

    def evaluate(self, values: Sequence):
        total = Fraction(0)
        for k, c in self.terms.items():
            term = c
            for v, e in zip(values, k):
                term = term * (Fraction(v) ** e if isinstance(v, (int, Fraction)) else v ** e)
            total = total + term
        return total

    def coefficient(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), Fraction(0))

    def format(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms):
            mono = "*".join(f"{n}^{e}" if e > 1 else n for n, e in zip(self.names, k) if e)
            c = format_coeff(self.terms[k])
            if mono and c in ("1", "-1"):
                parts.append(mono if c == "1" else f"-{mono}")
            else:
                parts.append(f"{c}*{mono}" if mono else c)
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly({self.format()})"


def exact_rank(rows: Sequence[Sequence]) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination.

    Rational entries are first scaled row by row to integers."""
    mat = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        den = 1
        for x in fr:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in fr]
        if any(ints):
            mat.append(ints)
    if not mat:
        return 0
    ncols = len(mat[0])
    rank, prev = 0, 1
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        piv = mat[rank][col]
        for r in range(rank + 1, len(mat)):
            a = mat[r][col]
            mat[r] = [(piv * mat[r][c] - a * mat[rank][c]) // prev for c in range(ncols)]
        prev = piv
        rank += 1
        if rank == len(mat):
            break
    return rank
