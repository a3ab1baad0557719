import random
import sys

import pytest
from hypothesis import HealthCheck, settings

from khtoolkit.corpus import load_corpus
from khtoolkit.diagram import parse_pd

settings.register_profile("kh", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("kh")

RIGHT_TREFOIL = "X[4,2,5,1];X[6,4,1,3];X[2,6,3,5]"
LEFT_TREFOIL = "X[1,4,2,5];X[3,6,4,1];X[5,2,6,3]"
HOPF = "X[1,2,3,4];X[2,1,4,3]"


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture(scope="session")
def trefoil():
    return parse_pd(RIGHT_TREFOIL)


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
