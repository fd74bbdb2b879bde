import functools

import pytest

from commvar.charmod import characteristic_family
from commvar.liealg import build_algebra

BUILTINS = ("A1", "A2", "B2", "C2", "A1+A1+z1")


@functools.lru_cache(maxsize=None)
def algebra(spec):
    return build_algebra(spec)


@functools.lru_cache(maxsize=None)
def family(spec):
    return characteristic_family(algebra(spec))


@pytest.fixture
def sl2():
    return algebra("A1")


@pytest.fixture
def sl3():
    return algebra("A2")


def vec(g, **coords):
    """Vector from basis labels, e.g. vec(g, h1=1, e1=2)."""
    out = [0] * g.dim
    for label, c in coords.items():
        out[g.basis_labels.index(label)] = c
    return out


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
