import json
import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

HERE = os.path.dirname(os.path.abspath(__file__))


@pytest.fixture(scope="session")
def frozen():
    with open(os.path.join(HERE, "oracles", "frozen.json")) as fh:
        return json.load(fh)


def matrices(max_rows=6, max_cols=6, lo=-5.0, hi=5.0):
    """Hypothesis strategy for small finite matrices."""
    shapes = st.tuples(st.integers(1, max_rows), st.integers(1, max_cols))
    elems = st.floats(lo, hi, allow_nan=False, allow_infinity=False, width=64)
    return shapes.flatmap(lambda s: arrays(np.float64, s, elements=elems))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("tests.test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[number])
