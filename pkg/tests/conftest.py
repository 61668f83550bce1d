import random

import pytest

from peerhol.engine import Engine


class TickClock:
    """Deterministic millisecond clock for reproducible stores."""

    def __init__(self, start=1_000_000):
        self.now = start

    def __call__(self):
        self.now += 1
        return self.now


@pytest.fixture
def clock():
    return TickClock()


@pytest.fixture
def engine(clock):
    eng = Engine(rng=random.Random(0xC0FFEE), clock=clock)
    yield eng
    eng.close()
