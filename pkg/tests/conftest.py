"""Slow, obviously-correct reference counters shared by the tests."""

from itertools import product

import pytest


def brute_energy(A, B, p, op):
    f = (lambda a, b: (a + b) % p) if op == "add" else (lambda a, b: a * b % p)
    return sum(1 for a1, b1, a2, b2 in product(A, B, A, B) if f(a1, b1) == f(a2, b2))


def brute_T(A, B, C, D, p):
    return sum(
        1
        for c in C
        for d in D
        for x1, y1, x2, y2 in product(A, B, A, B)
        if (x1 - c) * (y1 - d) % p == (x2 - c) * (y2 - d) % p
    )


def brute_subgroup(p, d):
    return sorted({pow(x, (p - 1) // d, p) for x in range(1, p)})


@pytest.fixture
def oracles():
    class O:
        energy = staticmethod(brute_energy)
        T = staticmethod(brute_T)
        subgroup = staticmethod(brute_subgroup)
    return O


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
