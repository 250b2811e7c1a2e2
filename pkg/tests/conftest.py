import itertools
from fractions import Fraction

import pytest

from igusa.scenarios import build_scenario


def brute_count(f, p, m):
    """Flat enumeration of (Z/p^m)^n, independent of the residue-tree kernel."""
    mod = p**m
    return sum(1 for x in itertools.product(range(mod), repeat=f.nvars) if f(x) % mod == 0)


def brute_cell_shells(f, p, base, level, K):
    """mu(val f = k) on base + p^level R^n for k < K by enumeration mod p^(level + K + 1)."""
    depth = level + K + 1
    mod = p**depth
    n = f.nvars
    out = [Fraction(0)] * K
    step = p**level
    for y in itertools.product(range(p ** (depth - level)), repeat=n):
        x = [b + step * yi for b, yi in zip(base, y)]
        v = f(x)
        k = 0
        while k < K and v % p ** (k + 1) == 0:
            k += 1
        if k < K:
            out[k] += Fraction(1, mod**n)
    return out


@pytest.fixture(scope="session")
def tate():
    return build_scenario("tate", p=2)


@pytest.fixture(scope="session")
def pairing1():
    return build_scenario("pairing_space", n=1, p=2)


@pytest.fixture(scope="session")
def pairing2():
    return build_scenario("pairing_space", n=2, p=2, chi="(u:1,u:0,u:-1)")


@pytest.fixture(scope="session")
def det2():
    return build_scenario("matrix_det", n=2, p=2, twist=-1)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
