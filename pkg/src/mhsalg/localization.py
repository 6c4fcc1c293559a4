"""Letters acting on truncated power series at 0: e0 and e_{z_i} integrate,
their inverses differentiate. Words over these operators give localized
hyperlogarithms, whose Taylor data are multiple harmonic sums."""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Sequence

from .coeff import CycNum
from .harmonic import sigma
from .words import E0, HarIndex, Letter, Word, _root_letter, format_word, parse_word

__all__ = [
    "LogRequired",
    "ZSeries",
    "apply_letter",
    "li_loc",
    "laurent_word",
    "cyclotomic_laurent_word",
    "derivative",
    "taylor_eval_sigma",
    "taylor_coefficient_sigma",
    "taylor_cumulative_sigma",
    "expected_first_display",
    "NORMALIZED",
    "RAW",
]

NORMALIZED = "normalized"  # e_{z_i} <-> dz/(z_i - z); for N=1 this is dz/(1-z)
RAW = "raw"  # e_{z_i} <-> dz/(z - z_i)


class LogRequired(ArithmeticError):
    """Integrating a nonzero constant against dz/z would produce log z."""


class ZSeries:
    """sum_{n=0}^{cap} c_n z^n with CycNum coefficients (c_0 is the constant term)."""

    __slots__ = ("cap", "level", "coeffs")

    def __init__(self, coeffs: Sequence, cap: int | None = None, level: int = 1):
        cap = len(coeffs) - 1 if cap is None else cap
        if cap < 0:
            raise ValueError("cap must be >= 0")
        cs = [_cyc(c, level) for c in list(coeffs)[: cap + 1]]
        cs += [CycNum.zero(level)] * (cap + 1 - len(cs))
        object.__setattr__(self, "cap", cap)
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("ZSeries is immutable")

    @classmethod
    def one(cls, cap: int, level: int = 1) -> "ZSeries":
        return cls([1], cap, level)

    @classmethod
    def zero(cls, cap: int, level: int = 1) -> "ZSeries":
        return cls([], cap, level)

    def __getitem__(self, n: int) -> CycNum:
        return self.coeffs[n] if 0 <= n <= self.cap else CycNum.zero(self.level)

    def constant(self) -> CycNum:
        return self.coeffs[0]

    def truncate(self, cap: int) -> "ZSeries":
        return ZSeries(self.coeffs, min(cap, self.cap), self.level)

    def _align(self, other: "ZSeries") -> tuple["ZSeries", "ZSeries"]:
        if self.level != other.level:
            from .coeff import MixedLevels

            raise MixedLevels(f"levels {self.level} and {other.level}")
        cap = min(self.cap, other.cap)
        return self.truncate(cap), other.truncate(cap)

    def __add__(self, other: "ZSeries") -> "ZSeries":
        a, b = self._align(other)
        return ZSeries([x + y for x, y in zip(a.coeffs, b.coeffs)], a.cap, a.level)

    def __neg__(self) -> "ZSeries":
        return ZSeries([-c for c in self.coeffs], self.cap, self.level)

    def __sub__(self, other: "ZSeries") -> "ZSeries":
        return self + (-other)

    def scale(self, k) -> "ZSeries":
        return ZSeries([c * k for c in self.coeffs], self.cap, self.level)

    def __mul__(self, other):
        if not isinstance(other, ZSeries):
            return self.scale(other)
        a, b = self._align(other)
        out = [CycNum.zero(a.level)] * (a.cap + 1)
        for i, x in enumerate(a.coeffs):
            if not x:
                continue
            for j in range(a.cap + 1 - i):
                y = b.coeffs[j]
                if y:
                    out[i + j] = out[i + j] + x * y
        return ZSeries(out, a.cap, a.level)

    def __eq__(self, other):
        if not isinstance(other, ZSeries):
            return NotImplemented
        return self.cap == other.cap and self.level == other.level and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.cap, self.level, self.coeffs))

    def format(self) -> str:
        from .coeff import format_coeff

        parts = []
        for n, c in enumerate(self.coeffs):
            if c:
                s = format_coeff(c)
                parts.append(s if n == 0 else f"{s}*z^{n}")
        return " + ".join(parts) or "0"

    def __repr__(self):
        return f"ZSeries({self.format()}; cap {self.cap})"


def _cyc(c, level: int) -> CycNum:
    if isinstance(c, CycNum):
        return c
    return CycNum.rational(Fraction(c), level)


def _point(i: int, level: int) -> CycNum:
    return CycNum.root(i, level)


def derivative(f: ZSeries) -> ZSeries:
    """d/dz; the result knows one coefficient less."""
    if f.cap == 0:
        raise ValueError("cannot differentiate a series of cap 0 and keep a coefficient")
    return ZSeries([f.coeffs[n + 1] * (n + 1) for n in range(f.cap)], f.cap - 1, f.level)


def _integrate(g: ZSeries) -> ZSeries:
    """z -> int_0^z g, exact through z^{cap}; keeps the cap of g."""
    out = [CycNum.zero(g.level)] + [g.coeffs[n] / (n + 1) for n in range(g.cap)]
    return ZSeries(out, g.cap, g.level)


def _kernel(i: int, cap: int, level: int, kernel: str) -> ZSeries:
    """Expansion at 0 of 1/(z_i - z) (normalized) or 1/(z - z_i) (raw)."""
    # 1/(z_i - z) = sum_k z^k z_i^{-k-1}
    cs = [CycNum.root(-(k + 1) * i, level) for k in range(cap + 1)]
    series = ZSeries(cs, cap, level)
    if kernel == NORMALIZED:
        return series
    if kernel == RAW:
        return -series
    raise ValueError(f"unknown kernel {kernel!r}")


def apply_letter(letter: Letter, f: ZSeries, kernel: str = NORMALIZED) -> ZSeries:
    """Apply the operator of one (possibly inverted) letter.

    e0: c_n z^n -> c_n/n z^n (LogRequired on a nonzero constant).
    e_{z_i}: multiply by the kernel expansion and integrate from 0.
    e0^{-1}: z f'.  e_{z_i}^{-1}: (z_i - z) f' (normalized) or (z - z_i) f' (raw);
    these lose the top coefficient."""
    level = f.level
    i = letter.index
    if i > level:
        raise ValueError(f"letter e{i} outside level {level}")
    if i == 0:
        if not letter.inverted:
            if f.constant():
                raise LogRequired("constant term integrated against dz/z")
            return ZSeries([CycNum.zero(level)] + [f.coeffs[n] / n for n in range(1, f.cap + 1)], f.cap, level)
        return ZSeries([f.coeffs[n] * n for n in range(f.cap + 1)], f.cap, level)
    if not letter.inverted:
        return _integrate(f * _kernel(i, f.cap, level, kernel))
    df = derivative(f)
    zi = _point(i, level)
    # (z_i - z) f'
    out = [df.coeffs[n] * zi - (df.coeffs[n - 1] if n else 0) for n in range(df.cap + 1)]
    g = ZSeries(out, df.cap, level)
    return g if kernel == NORMALIZED else -g


def li_loc(w: Word | str, cap: int, level: int = 1, kernel: str = NORMALIZED) -> ZSeries:
    """Fold the letters of w, right to left, over the constant series 1."""
    if isinstance(w, str):
        w = parse_word(w)
    f = ZSeries.one(cap, level)
    for a in reversed(tuple(w)):
        try:
            f = apply_letter(a, f, kernel)
        except LogRequired as exc:
            raise LogRequired(f"{format_word(w)}: {exc}") from None
    return f


def _e0_power(k: int) -> list[Letter]:
    return [E0] * k if k >= 0 else [Letter(0, True)] * (-k)


def laurent_word(l: int | None, idx: HarIndex) -> Word:
    """e0^{l-1} e1 e0^{t_d-1} e1 ... e0^{t_1-1} e1 with negative powers of e0
    written as inverted letters; l=None drops the leading block (second
    display). Level 1 only."""
    if idx.level != 1:
        raise ValueError("laurent_word is the level-1 form; use cyclotomic_laurent_word")
    out: list[Letter] = []
    if l is not None:
        out += _e0_power(l - 1) + [Letter(1)]
    for t in idx.display_exps():
        out += _e0_power(t - 1) + [Letter(1)]
    return tuple(out)


def cyclotomic_laurent_word(l: int, idx: HarIndex) -> Word:
    """e0^{l-1} e_{z_{i_{d+1}}} e0^{t_d-1} e_{z_{i_d}} ... e0^{t_1-1} e_{z_{i_1}}."""
    roots = idx.roots()
    out = _e0_power(l - 1) + [_root_letter(roots[-1], idx.level)]
    for j in reversed(range(idx.depth)):
        out += _e0_power(idx.exps[j] - 1) + [_root_letter(roots[j], idx.level)]
    return tuple(out)


def _d_step(f: ZSeries) -> ZSeries:
    """(e0^{-1} - e1^{-1}) with raw kernels, which is d/dz."""
    return apply_letter(Letter(0, True), f, RAW) - apply_letter(Letter(f.level, True), f, RAW)


def taylor_eval_sigma(n: int, l: int, idx: HarIndex) -> CycNum:
    """Li^loc[(e0^{-1} - e1^{-1})^n / n! . word(l, idx)] at z = 0.

    The word uses the normalized kernel, the derivation operator uses the raw
    one, so that e0^{-1} - e1^{-1} is exactly d/dz. Expected value
    sigma_n(idx)/n^l."""
    if n < 1:
        raise ValueError("n must be positive")
    word = laurent_word(l, idx) if idx.level == 1 else cyclotomic_laurent_word(l, idx)
    f = li_loc(word, n, idx.level)
    for _ in range(n):
        f = _d_step(f)
    return f.constant() / factorial(n)


def taylor_coefficient_sigma(n: int, l: int, idx: HarIndex) -> CycNum:
    """The z^n coefficient of li_loc(word(l, idx)) (direct extraction)."""
    word = laurent_word(l, idx) if idx.level == 1 else cyclotomic_laurent_word(l, idx)
    return li_loc(word, n, idx.level)[n]


def taylor_cumulative_sigma(n: int, idx: HarIndex, boundary: str = "as_written") -> CycNum:
    """Li^loc[sum_{m=1}^n (e0^{-1} - e1^{-1})^m/m! . word(idx)](0).

    With strict summation bounds this equals sigma_{n+1}(idx), i.e. the
    inclusive sum n_d <= n, not sigma_n. boundary="as_written" returns the
    operator value; boundary="strict_n" returns the operator value for n-1,
    which is sigma_n (and 0 for n=1)."""
    if boundary not in ("as_written", "strict_n"):
        raise ValueError(f"unknown boundary {boundary!r}")
    if boundary == "strict_n":
        n -= 1
    level = idx.level
    total = CycNum.zero(level)
    if n < 1:
        return total
    word = laurent_word(None, idx)
    base = li_loc(word, n, level)
    f = base
    for m in range(1, n + 1):
        f = _d_step(f)
        total = total + f.constant() / factorial(m)
    return total


def expected_first_display(n: int, l: int, idx: HarIndex) -> CycNum:
    return sigma(n, idx) / Fraction(n) ** l if l >= 0 else sigma(n, idx) * Fraction(n) ** (-l)
