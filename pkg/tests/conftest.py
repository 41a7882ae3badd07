import json
from pathlib import Path

import pytest

from paneldep.panel import AlignedPair

DATA = Path(__file__).parent / "data"


def make_pair(x, y, start_year: int = 2000) -> AlignedPair:
    """Aligned pair over consecutive years starting at start_year."""
    x = tuple(float(v) for v in x)
    y = tuple(float(v) for v in y)
    return AlignedPair(x, y, tuple(range(start_year, start_year + len(x))))


@pytest.fixture(scope="session")
def pearson_golden():
    with open(DATA / "pearson_fixture_golden.json") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def tail_golden():
    with open(DATA / "tail_probability_golden.json") as fh:
        return json.load(fh)
