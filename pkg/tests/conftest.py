import random
import sys

import pytest
from hypothesis import settings, strategies as st

from foxalg.freepoly import FreePolynomial
from foxalg.scalars import GF, QQ
from foxalg.words import reduced_words

settings.register_profile("repro", deadline=None, derandomize=True)
settings.load_profile("repro")

F5 = GF(5)
FIELDS = [QQ, F5]
WORDS = {L: list(reduced_words(2, L)) for L in range(4)}


def random_poly(rng, field=F5, max_len=3, max_terms=4, rank=2, nonzero=True):
    words = list(reduced_words(rank, max_len)) if rank != 2 else WORDS[max_len]
    while True:
        k = rng.randint(1, max_terms)
        ws = rng.sample(words, k)
        if field is QQ:
            cs = [rng.randint(-3, 3) for _ in ws]
        else:
            cs = [rng.randrange(field.p) for _ in ws]
        g = FreePolynomial(dict(zip(ws, cs)), rank, field)
        if g or not nonzero:
            return g


def random_comonic(rng, field=F5, max_len=2, max_terms=3):
    while True:
        g = random_poly(rng, field, max_len, max_terms)
        if g.augmentation() != 0:
            return g.normalized()


@pytest.fixture
def rng():
    return random.Random(12345)


def polys(field=F5, max_len=3, max_terms=4, rank=2):
    """Hypothesis strategy for free polynomials."""
    words = list(reduced_words(rank, max_len))
    if field is QQ:
        coeff = st.fractions(min_value=-4, max_value=4, max_denominator=3)
    else:
        coeff = st.integers(0, field.p - 1)
    return st.dictionaries(st.sampled_from(words), coeff, max_size=max_terms).map(
        lambda d: FreePolynomial(d, rank, field)
    )


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    lines = getattr(acceptance, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
