import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from faultloc.fpi import FPI

RUNNING_EXAMPLE = """\
# Chain of implications: ar -> w -> au -> e & p, with the fact ar and the
# unwanted conclusion e.
o: ar -> w
o: w -> au
o: au -> e & p
b: ar
n: e
"""


@pytest.fixture
def running_example() -> FPI:
    return FPI.parse(RUNNING_EXAMPLE)
