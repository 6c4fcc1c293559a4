"""Weight scaling, root rotations, the Ihara substitution products, the
1/(1-e0) reindexation, adjoint coefficients and the stabilised harmonic action
on e0-constant series."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .coeff import CycNum, MixedLevels, Poly
from .hopf import is_grouplike
from .words import (
    E0,
    CapMismatch,
    HarIndex,
    Letter,
    NCSeries,
    Word,
    index_to_word,
    weight,
)

__all__ = [
    "CapTooSmall",
    "NotStabilized",
    "ConstSeries",
    "tau_scale",
    "specialize",
    "rotation_pushforward",
    "substitute",
    "ihara_action",
    "sigma_inv_dr",
    "adjoint_coeff",
    "har_mot",
    "harmonic_action_dr_rt",
    "random_lie",
    "random_grouplike",
    "concat_exp",
]


class CapTooSmall(ValueError):
    pass


class NotStabilized(ArithmeticError):
    def __init__(self, n: int, word: Word, values: list):
        from .words import format_word

        super().__init__(f"n={n}: coefficients of e0^l {format_word(word)} vary over the window: {values}")
        self.n = n
        self.word = word
        self.values = values


def tau_scale(lam, f: NCSeries) -> NCSeries:
    """Multiply the coefficient of each word by lam^weight. ``lam`` may be a
    number or a Poly (formal weight variable)."""
    return f.map_terms(lambda w, c: (lam ** weight(w)) * c if weight(w) else c)


def specialize(f: NCSeries, value) -> NCSeries:
    """Evaluate Poly coefficients at a value of their (single) variable."""
    return f.map_coeffs(lambda c: c.evaluate([value]) if isinstance(c, Poly) else c)


def _rotate_letter(a: Letter, i: int, level: int) -> Letter:
    if a.index == 0:
        return a
    k = (a.index + i) % level
    return Letter(k if k else level, a.inverted)


def rotation_pushforward(i: int, g: NCSeries) -> NCSeries:
    """Relabel e_{z_j} -> e_{z_i z_j}; e0 is fixed."""
    if g.level == 1 or i % g.level == 0:
        return g
    return NCSeries({tuple(_rotate_letter(a, i, g.level) for a in w): c for w, c in g.items()}, g.cap, g.level, g.localized)


def substitute(f: NCSeries, images: Mapping[int, NCSeries]) -> NCSeries:
    """f(X_0, X_1, ..., X_N): each letter e_i is replaced by images[i]."""
    cap, level = f.cap, f.level
    one = NCSeries.one(cap, level)
    cache: dict[Word, NCSeries] = {(): one}

    def prod(w: Word) -> NCSeries:
        got = cache.get(w)
        if got is None:
            got = prod(w[:-1]) * images[w[-1].index]
            cache[w] = got
        return got

    out = NCSeries.zero(cap, level)
    for w, c in sorted(f.items(), key=lambda t: len(t[0])):
        out = out + prod(w).scale(c)
    return out


def _point_family(g, level: int) -> list[NCSeries]:
    """g_{z_1}, ..., g_{z_N} from a single point g = g_{z_N} or an explicit tuple."""
    if isinstance(g, NCSeries):
        return [rotation_pushforward(i, g) for i in range(1, level + 1)]
    gs = list(g)
    if len(gs) != level:
        raise ValueError(f"need {level} points, got {len(gs)}")
    return gs


def _adjoint_images(gs: Sequence[NCSeries], cap: int, level: int) -> dict[int, NCSeries]:
    images = {0: NCSeries.word((E0,), cap, level)}
    for i, gi in enumerate(gs, start=1):
        ez = NCSeries.word((Letter(i),), cap, level)
        images[i] = gi.inverse() * ez * gi
    return images


def ihara_action(g, f: NCSeries, variant: str = "on_z0") -> NCSeries:
    """on_00: f(e0, g_{z_1}^{-1} e_{z_1} g_{z_1}, ...); on_z0: g times that."""
    gs = _point_family(g, f.level)
    for gi in gs:
        if gi.level != f.level:
            raise MixedLevels("levels differ")
        if gi.cap != f.cap:
            raise CapMismatch(f"caps {gi.cap} and {f.cap}")
    sub = substitute(f, _adjoint_images(gs, f.cap, f.level))
    if variant == "on_00":
        return sub
    if variant == "on_z0":
        return gs[-1] * sub
    raise ValueError(f"unknown variant {variant!r}")


def sigma_inv_dr(w: Word, lam, cap: int, level: int = 1) -> NCSeries:
    """sum_{l=0}^{cap - weight(w)} lam^l e0^l w."""
    w = tuple(w)
    if weight(w) > cap:
        raise CapTooSmall("word heavier than the cap")
    if level == 1:
        level = max([a.index for a in w] + [1])
    return NCSeries({(E0,) * l + w: lam**l for l in range(cap - weight(w) + 1)}, cap, level)


def adjoint_coeff(phi: NCSeries, z: int, w: Word):
    """<phi_z^{-1} e_z phi_z, sum_l e0^l w> with phi_z the rotation of phi by z."""
    w = tuple(w)
    if weight(w) + 1 > phi.cap:
        raise CapTooSmall(f"cap {phi.cap} too small for a word of weight {weight(w)}")
    pz = rotation_pushforward(z, phi)
    ez = NCSeries.word((Letter(z if z else phi.level),), phi.cap, phi.level)
    ad = pz.inverse() * ez * pz
    total = Fraction(0)
    for l in range(phi.cap - weight(w) + 1):
        total = total + ad[(E0,) * l + w]
    return total


def har_mot(phi: NCSeries, idx: HarIndex):
    """(-1)^d sum_{z in mu_N} z^{-1} adjoint_coeff(phi, z, w) for the cyclotomic
    word w of idx."""
    level = phi.level
    w = index_to_word(idx, "cyclotomic")
    total = CycNum.zero(level)
    for k in range(1, level + 1):
        total = total + CycNum.root(-k, level) * adjoint_coeff(phi, k, w)
    return total * (-1) ** idx.depth


# ---------------------------------------------------------------- const series


@dataclass(frozen=True)
class ConstSeries:
    """f with f[e0^l w] = coeffs[w] for every l, w empty or not starting with e0."""

    cap: int
    level: int = 1
    coeffs: Mapping[Word, object] = field(default_factory=dict)

    def __post_init__(self):
        for w in self.coeffs:
            if w and w[0].index == 0:
                raise ValueError("const series are keyed by words not starting with e0")

    def to_series(self) -> NCSeries:
        terms = {}
        for w, c in self.coeffs.items():
            for l in range(self.cap - weight(w) + 1):
                terms[(E0,) * l + tuple(w)] = c
        return NCSeries(terms, self.cap, self.level)

    def restrict(self, cap: int) -> "ConstSeries":
        return ConstSeries(cap, self.level, {w: c for w, c in self.coeffs.items() if weight(w) <= cap})

    def __eq__(self, other):
        if not isinstance(other, ConstSeries):
            return NotImplemented
        a = {w: c for w, c in self.coeffs.items() if c}
        b = {w: c for w, c in other.coeffs.items() if c}
        return self.cap == other.cap and self.level == other.level and a == b


def _stable_part(h: NCSeries, window: int, n: int) -> ConstSeries:
    out_cap = h.cap - window + 1
    if out_cap < 0:
        raise CapTooSmall("window longer than the cap")
    from .words import all_words

    coeffs = {}
    for w in all_words(h.level, out_cap):
        if w and w[0].index == 0:
            continue
        vals = [h[(E0,) * l + w] for l in range(window)]
        if any(v != vals[0] for v in vals[1:]):
            raise NotStabilized(n, w, vals)
        if vals[0]:
            coeffs[w] = vals[0]
    return ConstSeries(out_cap, h.level, coeffs)


def harmonic_action_dr_rt(g, F, n_max: int, window: int = 2, variant: str = "on_00") -> dict[int, ConstSeries]:
    """n -> stable part of tau(n)(g) acting on F(n).

    The action is the adjoint substitution (variant "on_00") by default. A
    coefficient f[e0^l w] is accepted once it is constant for l = 0..window-1;
    the output is a const series of cap  cap - window + 1."""
    out = {}
    for n in range(1, n_max + 1):
        fn: ConstSeries = F(n) if callable(F) else F[n]
        base = fn.to_series()
        gs = _point_family(g, base.level)
        scaled = [tau_scale(Fraction(n), gi) for gi in gs]
        h = ihara_action(scaled, base, variant)
        out[n] = _stable_part(h, window, n)
    return out


# ---------------------------------------------------------------- sampling


def _bracket_word(w: Word, cap: int, level: int) -> NCSeries:
    """Left-normed bracket [..[a1, a2], .., ak] as a series."""
    out = NCSeries.word(w[:1], cap, level)
    for a in w[1:]:
        x = NCSeries.word((a,), cap, level)
        out = out * x - x * out
    return out


def random_lie(cap: int, level: int, rng: random.Random, no_e0: bool = False, density: float = 0.6) -> NCSeries:
    """Random Lie polynomial with small rational coefficients, no constant term."""
    from .words import all_words

    out = NCSeries.zero(cap, level)
    for w in all_words(level, cap, min_weight=1):
        if len(w) == 1 and no_e0 and w[0].index == 0:
            continue
        if rng.random() > density:
            continue
        c = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
        if c:
            out = out + _bracket_word(w, cap, level).scale(c)
    return out


def concat_exp(x: NCSeries) -> NCSeries:
    if x.constant():
        raise ValueError("concat_exp needs zero constant term")
    out = NCSeries.one(x.cap, x.level)
    power = NCSeries.one(x.cap, x.level)
    fact = 1
    for k in range(1, x.cap + 1):
        power = power * x
        fact *= k
        out = out + power.scale(Fraction(1, fact))
    return out


def random_grouplike(cap: int, level: int, rng: random.Random, no_e0: bool = False) -> NCSeries:
    """exp of a random Lie polynomial: grouplike for the shuffle coproduct.
    With ``no_e0`` the result has zero e0 coefficient."""
    return concat_exp(random_lie(cap, level, rng, no_e0))


def check_grouplike(f: NCSeries) -> bool:
    return is_grouplike(f)
