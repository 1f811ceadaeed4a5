import cmath
import os
import sys

import pytest
from hypothesis import settings

from frobmoon.characters import get_table
from frobmoon.groups import BUNDLED

settings.register_profile("ci", max_examples=60, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))


def matmul(a, b):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def matpow(a, n):
    out = ((1, 0), (0, 1))
    for _ in range(n):
        out = matmul(out, a)
    return out


def d4_matrices():
    """label -> integer 2x2 matrix, the symmetries of a square (independent of the Cayley table)."""
    r = ((0, -1), (1, 0))
    s = ((1, 0), (0, -1))
    out = {}
    for a in range(4):
        for x in range(2):
            label = ("r" + (str(a) if a > 1 else "") if a else "") + ("s" if x else "")
            out[label or "1"] = matmul(matpow(r, a), matpow(s, x))
    return out


def q8_matrices():
    """label -> complex 2x2 matrix, the unit quaternions in SU(2)."""
    one = ((1, 0), (0, 1))
    i = ((1j, 0), (0, -1j))
    j = ((0, 1), (-1, 0))
    k = matmul(i, j)
    neg = lambda m: tuple(tuple(-x for x in row) for row in m)
    return {"1": one, "-1": neg(one), "i": i, "-i": neg(i), "j": j, "-j": neg(j), "k": k, "-k": neg(k)}


def trace(m):
    return m[0][0] + m[1][1]


def approx(z):
    return complex(z)


@pytest.fixture(scope="session")
def D4():
    return get_table("D4")


@pytest.fixture(scope="session")
def Q8():
    return get_table("Q8")


@pytest.fixture(scope="session")
def all_tables():
    return {name: get_table(name) for name in BUNDLED}


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])
