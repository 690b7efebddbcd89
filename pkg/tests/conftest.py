import cmath
import math

import numpy as np
import pytest
from hypothesis import settings

from hgft.specfun import ParamTriple

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

EX_A = 0.625 + 1.25j
EX_B = 3.75 - 1.25j
EX_LAMBDA = math.pi / 4


@pytest.fixture
def example_triple():
    return ParamTriple(EX_A, EX_B, EX_A + EX_B + 1)


def rng(seed=0):
    return np.random.default_rng(seed)


def random_complex(gen, radius):
    r = radius * math.sqrt(gen.uniform())
    return r * cmath.exp(2j * math.pi * gen.uniform())


def random_triple(gen, radius=3.0, min_pole_dist=0.1):
    while True:
        a, b, c = (random_complex(gen, radius) for _ in range(3))
        if abs(c - round(c.real)) < min_pole_dist and round(c.real) <= 0:
            continue
        return ParamTriple(a, b, c)


ACCEPTANCE_LINES = {}


class _Recorder:
    def __init__(self, number, name):
        self.number, self.name = number, name
        self.done = False

    def report(self, ok, detail):
        line = f"criterion {self.number:2d} {'PASS' if ok else 'FAIL'}  {self.name}: {detail}"
        ACCEPTANCE_LINES[self.number] = line
        print(line)
        self.done = True
        assert ok, line


@pytest.fixture
def criterion(request):
    marker = request.node.get_closest_marker("criterion")
    rec = _Recorder(*marker.args)
    yield rec
    if not rec.done:
        ACCEPTANCE_LINES[rec.number] = f"criterion {rec.number:2d} FAIL  {rec.name}: raised before reporting"


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, name): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
