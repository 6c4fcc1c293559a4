"""Shared hypothesis strategies."""

from fractions import Fraction

from hypothesis import strategies as st

from mhsalg.words import NCSeries, all_words

small_rats = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def series(cap: int, level: int = 1, constant=None):
    words = list(all_words(level, cap))

    @st.composite
    def build(draw):
        picked = draw(st.lists(st.sampled_from(words), max_size=8, unique=True))
        terms = {w: draw(small_rats) for w in picked}
        if constant is not None:
            terms[()] = Fraction(constant)
        return NCSeries(terms, cap, level)

    return build()
