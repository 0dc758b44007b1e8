import random

import pytest
from hypothesis import strategies as st

from snakelemma.generate import GenConfig, _Gen

FIXTURES = __import__("pathlib").Path(__file__).parent / "fixtures"


def gen_for(seed, **kw):
    return _Gen(GenConfig(seed=seed, **kw))


seeds = st.integers(0, 2 ** 32)


@st.composite
def group_and_hom(draw, finite=False):
    gen = gen_for(draw(seeds), finite=finite)
    a, b = gen.group(), gen.group()
    return gen.hom(a, b)


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
